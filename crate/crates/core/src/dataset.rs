//! In-memory domain model of a photo-sharing corpus.
//!
//! A [`Dataset`] is built once from raw [`Records`] and is immutable afterwards.
//! Building validates referential integrity, normalizes tag labels and stores
//! every collection in canonical order (ascending primary ids), so two datasets
//! holding the same facts compare equal and serialize to the same bytes.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }

        impl From<u64> for $name {
            fn from(v: u64) -> Self {
                Self(v)
            }
        }
    };
}

id_type!(UserId);
id_type!(
    /// Photo identifier. Ids are allocated in upload order.
    PhotoId
);
id_type!(GroupId);
id_type!(CommentId);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct User {
    pub id: UserId,
    pub is_pro: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Photo {
    pub id: PhotoId,
    pub owner: UserId,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagAssignment {
    pub photo: PhotoId,
    pub tag: String,
}

/// Directed contact link: `from` marked `to` as a contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactEdge {
    pub from: UserId,
    pub to: UserId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comment {
    pub id: CommentId,
    pub author: UserId,
    pub photo: PhotoId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Favorite {
    pub user: UserId,
    pub photo: PhotoId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub id: GroupId,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Membership {
    pub user: UserId,
    pub group: GroupId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoolEntry {
    pub photo: PhotoId,
    pub group: GroupId,
}

/// The nine entity tables, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Users,
    Photos,
    PhotoTags,
    Contacts,
    Comments,
    Favorites,
    Groups,
    Memberships,
    Pool,
}

impl Table {
    pub const ALL: [Table; 9] = [
        Table::Users,
        Table::Photos,
        Table::PhotoTags,
        Table::Contacts,
        Table::Comments,
        Table::Favorites,
        Table::Groups,
        Table::Memberships,
        Table::Pool,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            Table::Users => "users.tsv",
            Table::Photos => "photos.tsv",
            Table::PhotoTags => "phototags.tsv",
            Table::Contacts => "contacts.tsv",
            Table::Comments => "comments.tsv",
            Table::Favorites => "favorites.tsv",
            Table::Groups => "groups.tsv",
            Table::Memberships => "memberships.tsv",
            Table::Pool => "pool.tsv",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

/// Raw, unvalidated collections of every entity type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Records {
    pub users: Vec<User>,
    pub photos: Vec<Photo>,
    pub tags: Vec<TagAssignment>,
    pub contacts: Vec<ContactEdge>,
    pub comments: Vec<Comment>,
    pub favorites: Vec<Favorite>,
    pub groups: Vec<Group>,
    pub memberships: Vec<Membership>,
    pub pool: Vec<PoolEntry>,
}

impl Records {
    pub fn len(&self, table: Table) -> usize {
        match table {
            Table::Users => self.users.len(),
            Table::Photos => self.photos.len(),
            Table::PhotoTags => self.tags.len(),
            Table::Contacts => self.contacts.len(),
            Table::Comments => self.comments.len(),
            Table::Favorites => self.favorites.len(),
            Table::Groups => self.groups.len(),
            Table::Memberships => self.memberships.len(),
            Table::Pool => self.pool.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        Table::ALL.iter().all(|&t| self.len(t) == 0)
    }

    /// Appends every collection of `other`.
    pub fn extend(&mut self, other: Records) {
        self.users.extend(other.users);
        self.photos.extend(other.photos);
        self.tags.extend(other.tags);
        self.contacts.extend(other.contacts);
        self.comments.extend(other.comments);
        self.favorites.extend(other.favorites);
        self.groups.extend(other.groups);
        self.memberships.extend(other.memberships);
        self.pool.extend(other.pool);
    }

    /// Sorts every collection by its primary id(s).
    pub fn sort_canonical(&mut self) {
        self.users.sort_by_key(|u| u.id);
        self.photos.sort_by_key(|p| p.id);
        self.tags
            .sort_by(|a, b| (a.photo, &a.tag).cmp(&(b.photo, &b.tag)));
        self.contacts.sort();
        self.comments.sort_by_key(|c| c.id);
        self.favorites.sort();
        self.groups.sort_by_key(|g| g.id);
        self.memberships.sort();
        self.pool.sort();
    }
}

/// Normalized form of a tag label: trimmed and lower-cased.
pub fn normalize_tag(raw: &str) -> String {
    raw.trim().to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    /// Any integrity violation fails the build.
    Strict,
    /// Offending records are dropped and reported.
    Lenient,
}

/// A record rejected during build. `index` is its position in the input collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub table: Table,
    pub index: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} record {}: {}", self.table, self.index, self.message)
    }
}

/// Outcome of a lenient build.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Records removed from the dataset.
    pub dropped: Vec<Violation>,
    /// Records kept despite an anomaly (pool entries whose owner is not a member).
    pub warnings: Vec<Violation>,
}

impl BuildReport {
    pub fn dropped_in(&self, table: Table) -> usize {
        self.dropped.iter().filter(|v| v.table == table).count()
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{} integrity violation(s), first: {}", .0.len(), .0[0])]
    Integrity(Vec<Violation>),
    #[error("unknown user {0}")]
    UnknownUser(UserId),
    #[error("unknown group {0}")]
    UnknownGroup(GroupId),
}

/// Per-user functionality counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ActivityVector {
    pub photos: u64,
    pub groups: u64,
    pub contacts_out: u64,
    pub contacts_in: u64,
    pub favorites_given: u64,
    pub favorites_received: u64,
    pub comments_posted: u64,
    pub comments_received: u64,
}

impl ActivityVector {
    pub const NAMES: [&'static str; 8] = [
        "photos",
        "groups",
        "contacts_out",
        "contacts_in",
        "favorites_given",
        "favorites_received",
        "comments_posted",
        "comments_received",
    ];

    pub fn to_array(&self) -> [u64; 8] {
        [
            self.photos,
            self.groups,
            self.contacts_out,
            self.contacts_in,
            self.favorites_given,
            self.favorites_received,
            self.comments_posted,
            self.comments_received,
        ]
    }

    /// True if the user performed at least one outgoing communication act.
    pub fn communicates(&self) -> bool {
        self.contacts_out + self.comments_posted + self.favorites_given + self.groups > 0
    }
}

type Adjacency = Vec<Vec<u32>>;

#[derive(Debug, Clone, Default)]
struct Index {
    user_pos: HashMap<UserId, u32>,
    photo_pos: HashMap<PhotoId, u32>,
    group_pos: HashMap<GroupId, u32>,
    // user position -> photo positions
    photos_of_user: Adjacency,
    // photo position -> tag record positions
    tags_of_photo: Adjacency,
    // user position -> user positions
    contacts_out: Adjacency,
    contacts_in: Adjacency,
    // user position -> comment positions
    comments_by_user: Adjacency,
    // photo position -> comment positions
    comments_on_photo: Adjacency,
    // user position -> favorite positions
    favorites_by_user: Adjacency,
    // photo position -> favorite positions
    favorites_on_photo: Adjacency,
    // user position -> group positions
    groups_of_user: Adjacency,
    // group position -> user positions
    members_of_group: Adjacency,
    // group position -> photo positions
    pool_of_group: Adjacency,
}

fn adjacency(n: usize) -> Adjacency {
    vec![Vec::new(); n]
}

impl Index {
    fn build(r: &Records) -> Self {
        let pos = |i: usize| i as u32;
        let user_pos: HashMap<_, _> = r.users.iter().enumerate().map(|(i, u)| (u.id, pos(i))).collect();
        let photo_pos: HashMap<_, _> = r.photos.iter().enumerate().map(|(i, p)| (p.id, pos(i))).collect();
        let group_pos: HashMap<_, _> = r.groups.iter().enumerate().map(|(i, g)| (g.id, pos(i))).collect();
        let (nu, np, ng) = (r.users.len(), r.photos.len(), r.groups.len());

        let mut ix = Index {
            photos_of_user: adjacency(nu),
            tags_of_photo: adjacency(np),
            contacts_out: adjacency(nu),
            contacts_in: adjacency(nu),
            comments_by_user: adjacency(nu),
            comments_on_photo: adjacency(np),
            favorites_by_user: adjacency(nu),
            favorites_on_photo: adjacency(np),
            groups_of_user: adjacency(nu),
            members_of_group: adjacency(ng),
            pool_of_group: adjacency(ng),
            ..Default::default()
        };
        for (i, p) in r.photos.iter().enumerate() {
            ix.photos_of_user[user_pos[&p.owner] as usize].push(pos(i));
        }
        for (i, t) in r.tags.iter().enumerate() {
            ix.tags_of_photo[photo_pos[&t.photo] as usize].push(pos(i));
        }
        for c in &r.contacts {
            let (f, t) = (user_pos[&c.from], user_pos[&c.to]);
            ix.contacts_out[f as usize].push(t);
            ix.contacts_in[t as usize].push(f);
        }
        for (i, c) in r.comments.iter().enumerate() {
            ix.comments_by_user[user_pos[&c.author] as usize].push(pos(i));
            ix.comments_on_photo[photo_pos[&c.photo] as usize].push(pos(i));
        }
        for (i, f) in r.favorites.iter().enumerate() {
            ix.favorites_by_user[user_pos[&f.user] as usize].push(pos(i));
            ix.favorites_on_photo[photo_pos[&f.photo] as usize].push(pos(i));
        }
        for m in &r.memberships {
            let (u, g) = (user_pos[&m.user], group_pos[&m.group]);
            ix.groups_of_user[u as usize].push(g);
            ix.members_of_group[g as usize].push(u);
        }
        for e in &r.pool {
            ix.pool_of_group[group_pos[&e.group] as usize].push(photo_pos[&e.photo]);
        }
        ix.user_pos = user_pos;
        ix.photo_pos = photo_pos;
        ix.group_pos = group_pos;
        ix
    }
}

/// Immutable, validated corpus with lookup indices.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    records: Records,
    index: Index,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl Eq for Dataset {}

struct Validator {
    mode: BuildMode,
    dropped: Vec<Violation>,
    warnings: Vec<Violation>,
}

impl Validator {
    fn reject(&mut self, table: Table, index: usize, message: String) {
        self.dropped.push(Violation { table, index, message });
    }
}

impl Dataset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates `records` and builds the indexed dataset.
    ///
    /// Tags are trimmed and lower-cased; duplicate `(photo, tag)` pairs collapse
    /// silently. Every other duplicate, dangling reference, self-contact or empty
    /// tag is a violation: fatal in [`BuildMode::Strict`], dropped and reported in
    /// [`BuildMode::Lenient`]. A pool entry whose photo owner is not a member of the
    /// group is a violation in strict mode and a warning in lenient mode.
    pub fn build(records: Records, mode: BuildMode) -> Result<(Dataset, BuildReport), DatasetError> {
        let mut v = Validator { mode, dropped: Vec::new(), warnings: Vec::new() };
        let mut out = Records::default();

        let mut users = HashSet::new();
        for (i, u) in records.users.into_iter().enumerate() {
            if users.insert(u.id) {
                out.users.push(u);
            } else {
                v.reject(Table::Users, i, format!("duplicate user id {}", u.id));
            }
        }

        let mut groups = HashSet::new();
        for (i, g) in records.groups.into_iter().enumerate() {
            if groups.insert(g.id) {
                out.groups.push(g);
            } else {
                v.reject(Table::Groups, i, format!("duplicate group id {}", g.id));
            }
        }

        let mut owner_of = HashMap::new();
        for (i, p) in records.photos.into_iter().enumerate() {
            if owner_of.contains_key(&p.id) {
                v.reject(Table::Photos, i, format!("duplicate photo id {}", p.id));
            } else if !users.contains(&p.owner) {
                v.reject(Table::Photos, i, format!("photo {} owned by unknown user {}", p.id, p.owner));
            } else {
                owner_of.insert(p.id, p.owner);
                out.photos.push(p);
            }
        }

        let mut seen_tags = HashSet::new();
        for (i, t) in records.tags.into_iter().enumerate() {
            let tag = normalize_tag(&t.tag);
            if tag.is_empty() {
                v.reject(Table::PhotoTags, i, format!("empty tag on photo {}", t.photo));
            } else if !owner_of.contains_key(&t.photo) {
                v.reject(Table::PhotoTags, i, format!("tag on unknown photo {}", t.photo));
            } else if seen_tags.insert((t.photo, tag.clone())) {
                out.tags.push(TagAssignment { photo: t.photo, tag });
            }
        }

        let mut seen = HashSet::new();
        for (i, c) in records.contacts.into_iter().enumerate() {
            if c.from == c.to {
                v.reject(Table::Contacts, i, format!("self-contact of user {}", c.from));
            } else if !users.contains(&c.from) || !users.contains(&c.to) {
                v.reject(Table::Contacts, i, format!("contact {} -> {} references an unknown user", c.from, c.to));
            } else if !seen.insert(c) {
                v.reject(Table::Contacts, i, format!("duplicate contact {} -> {}", c.from, c.to));
            } else {
                out.contacts.push(c);
            }
        }

        let mut comment_ids = HashSet::new();
        for (i, c) in records.comments.into_iter().enumerate() {
            if !users.contains(&c.author) {
                v.reject(Table::Comments, i, format!("comment {} by unknown user {}", c.id, c.author));
            } else if !owner_of.contains_key(&c.photo) {
                v.reject(Table::Comments, i, format!("comment {} on unknown photo {}", c.id, c.photo));
            } else if !comment_ids.insert(c.id) {
                v.reject(Table::Comments, i, format!("duplicate comment id {}", c.id));
            } else {
                out.comments.push(c);
            }
        }

        let mut seen = HashSet::new();
        for (i, f) in records.favorites.into_iter().enumerate() {
            if !users.contains(&f.user) || !owner_of.contains_key(&f.photo) {
                v.reject(Table::Favorites, i, format!("favorite ({}, {}) references an unknown entity", f.user, f.photo));
            } else if !seen.insert(f) {
                v.reject(Table::Favorites, i, format!("duplicate favorite ({}, {})", f.user, f.photo));
            } else {
                out.favorites.push(f);
            }
        }

        let mut members = HashSet::new();
        for (i, m) in records.memberships.into_iter().enumerate() {
            if !users.contains(&m.user) || !groups.contains(&m.group) {
                v.reject(Table::Memberships, i, format!("membership ({}, {}) references an unknown entity", m.user, m.group));
            } else if !members.insert(m) {
                v.reject(Table::Memberships, i, format!("duplicate membership ({}, {})", m.user, m.group));
            } else {
                out.memberships.push(m);
            }
        }

        let mut seen = HashSet::new();
        for (i, e) in records.pool.into_iter().enumerate() {
            let Some(&owner) = owner_of.get(&e.photo) else {
                v.reject(Table::Pool, i, format!("pool entry for unknown photo {}", e.photo));
                continue;
            };
            if !groups.contains(&e.group) {
                v.reject(Table::Pool, i, format!("pool entry for unknown group {}", e.group));
            } else if !seen.insert(e) {
                v.reject(Table::Pool, i, format!("duplicate pool entry ({}, {})", e.photo, e.group));
            } else if !members.contains(&Membership { user: owner, group: e.group }) {
                let message = format!("photo {} posted to group {} by non-member {}", e.photo, e.group, owner);
                match v.mode {
                    BuildMode::Strict => v.reject(Table::Pool, i, message),
                    BuildMode::Lenient => {
                        v.warnings.push(Violation { table: Table::Pool, index: i, message });
                        out.pool.push(e);
                    }
                }
            } else {
                out.pool.push(e);
            }
        }

        if mode == BuildMode::Strict && !v.dropped.is_empty() {
            return Err(DatasetError::Integrity(v.dropped));
        }
        out.sort_canonical();
        let index = Index::build(&out);
        let report = BuildReport { dropped: v.dropped, warnings: v.warnings };
        Ok((Dataset { records: out, index }, report))
    }

    /// Strict build, discarding the (necessarily empty) report.
    pub fn from_records(records: Records) -> Result<Dataset, DatasetError> {
        Self::build(records, BuildMode::Strict).map(|(d, _)| d)
    }

    pub fn records(&self) -> &Records {
        &self.records
    }

    pub fn into_records(self) -> Records {
        self.records
    }

    pub fn users(&self) -> &[User] {
        &self.records.users
    }

    pub fn photos(&self) -> &[Photo] {
        &self.records.photos
    }

    pub fn tags(&self) -> &[TagAssignment] {
        &self.records.tags
    }

    pub fn contacts(&self) -> &[ContactEdge] {
        &self.records.contacts
    }

    pub fn comments(&self) -> &[Comment] {
        &self.records.comments
    }

    pub fn favorites(&self) -> &[Favorite] {
        &self.records.favorites
    }

    pub fn groups(&self) -> &[Group] {
        &self.records.groups
    }

    pub fn memberships(&self) -> &[Membership] {
        &self.records.memberships
    }

    pub fn pool(&self) -> &[PoolEntry] {
        &self.records.pool
    }

    fn user_pos(&self, u: UserId) -> Option<usize> {
        self.index.user_pos.get(&u).map(|&p| p as usize)
    }

    fn photo_pos(&self, p: PhotoId) -> Option<usize> {
        self.index.photo_pos.get(&p).map(|&p| p as usize)
    }

    fn group_pos(&self, g: GroupId) -> Option<usize> {
        self.index.group_pos.get(&g).map(|&p| p as usize)
    }

    pub fn user(&self, u: UserId) -> Option<&User> {
        self.user_pos(u).map(|i| &self.records.users[i])
    }

    pub fn photo(&self, p: PhotoId) -> Option<&Photo> {
        self.photo_pos(p).map(|i| &self.records.photos[i])
    }

    pub fn group(&self, g: GroupId) -> Option<&Group> {
        self.group_pos(g).map(|i| &self.records.groups[i])
    }

    /// Photos owned by `u`, ascending by id.
    pub fn photos_of(&self, u: UserId) -> impl Iterator<Item = &Photo> + '_ {
        let list = self.user_pos(u).map(|i| self.index.photos_of_user[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&p| &self.records.photos[p as usize])
    }

    /// Normalized tags of photo `p`, ascending.
    pub fn tags_of(&self, p: PhotoId) -> impl Iterator<Item = &str> + '_ {
        let list = self.photo_pos(p).map(|i| self.index.tags_of_photo[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&t| self.records.tags[t as usize].tag.as_str())
    }

    /// Users that `u` marked as contacts, ascending.
    pub fn contacts_of(&self, u: UserId) -> impl Iterator<Item = UserId> + '_ {
        let list = self.user_pos(u).map(|i| self.index.contacts_out[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&v| self.records.users[v as usize].id)
    }

    /// Users that marked `u` as a contact.
    pub fn contacts_to(&self, u: UserId) -> impl Iterator<Item = UserId> + '_ {
        let list = self.user_pos(u).map(|i| self.index.contacts_in[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&v| self.records.users[v as usize].id)
    }

    pub fn comments_on(&self, p: PhotoId) -> impl Iterator<Item = &Comment> + '_ {
        let list = self.photo_pos(p).map(|i| self.index.comments_on_photo[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&c| &self.records.comments[c as usize])
    }

    pub fn favorites_on(&self, p: PhotoId) -> impl Iterator<Item = &Favorite> + '_ {
        let list = self.photo_pos(p).map(|i| self.index.favorites_on_photo[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&f| &self.records.favorites[f as usize])
    }

    /// Groups `u` belongs to, ascending.
    pub fn groups_of(&self, u: UserId) -> impl Iterator<Item = GroupId> + '_ {
        let list = self.user_pos(u).map(|i| self.index.groups_of_user[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&g| self.records.groups[g as usize].id)
    }

    /// Members of `g`, ascending.
    pub fn members_of(&self, g: GroupId) -> impl Iterator<Item = UserId> + '_ {
        let list = self.group_pos(g).map(|i| self.index.members_of_group[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&u| self.records.users[u as usize].id)
    }

    pub fn member_count(&self, g: GroupId) -> usize {
        self.group_pos(g).map_or(0, |i| self.index.members_of_group[i].len())
    }

    /// Photos posted to the pool of `g`, ascending.
    pub fn pool_of(&self, g: GroupId) -> impl Iterator<Item = PhotoId> + '_ {
        let list = self.group_pos(g).map(|i| self.index.pool_of_group[i].as_slice()).unwrap_or(&[]);
        list.iter().map(move |&p| self.records.photos[p as usize].id)
    }

    pub fn activity_vector(&self, u: UserId) -> Result<ActivityVector, DatasetError> {
        let i = self.user_pos(u).ok_or(DatasetError::UnknownUser(u))?;
        Ok(self.activity_at(i))
    }

    fn activity_at(&self, i: usize) -> ActivityVector {
        let ix = &self.index;
        let len = |v: &Vec<u32>| v.len() as u64;
        let photos = &ix.photos_of_user[i];
        ActivityVector {
            photos: len(photos),
            groups: len(&ix.groups_of_user[i]),
            contacts_out: len(&ix.contacts_out[i]),
            contacts_in: len(&ix.contacts_in[i]),
            favorites_given: len(&ix.favorites_by_user[i]),
            favorites_received: photos.iter().map(|&p| len(&ix.favorites_on_photo[p as usize])).sum(),
            comments_posted: len(&ix.comments_by_user[i]),
            comments_received: photos.iter().map(|&p| len(&ix.comments_on_photo[p as usize])).sum(),
        }
    }

    /// Activity vectors of every user, in ascending user id order.
    pub fn activity_vectors(&self) -> Vec<(UserId, ActivityVector)> {
        self.records
            .users
            .iter()
            .enumerate()
            .map(|(i, u)| (u.id, self.activity_at(i)))
            .collect()
    }
}
