//! Resumable crawl of a paged data source.
//!
//! The crawl lists every user and, in ascending id order, fetches each user's
//! contacts, groups and photos, then the comments, tags and favorites of every
//! photo. A second pass over the listed groups fetches members and pool photos.
//! Progress is persisted after every completed user and every completed group:
//!
//! ```text
//! <work>/checkpoint.tsv    phase, cursor and data location
//! <work>/listing/          users.tsv and groups.tsv as listed by the source
//! <work>/users/            records gathered per user (append-only)
//! <work>/groups/           records gathered per group (append-only)
//! ```
//!
//! Records appended for an entity past the cursor (an interrupted entity) are
//! discarded when resuming, so an entity is never emitted twice.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::dataset::*;
use crate::ingest::{self, IngestError};

pub const DEFAULT_PAGE_SIZE: usize = 500;

/// One page of results.
#[derive(Debug, Clone, PartialEq)]
pub struct Page<T> {
    pub items: Vec<T>,
    pub has_next: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SourceError {
    /// The entity no longer exists; the crawl skips it with a warning.
    #[error("not found: {0}")]
    NotFound(String),
    #[error("source failure: {0}")]
    Failed(String),
}

/// Paged read access to a photo-sharing service. Pages are numbered from 0 and
/// must be stable, disjoint and exhaustive for the duration of a crawl.
pub trait PagedSource {
    fn list_users(&mut self, page: usize) -> Result<Page<User>, SourceError>;
    fn list_groups(&mut self, page: usize) -> Result<Page<Group>, SourceError>;
    fn contacts_of(&mut self, user: UserId, page: usize) -> Result<Page<UserId>, SourceError>;
    fn groups_of(&mut self, user: UserId, page: usize) -> Result<Page<GroupId>, SourceError>;
    fn photos_of(&mut self, user: UserId, page: usize) -> Result<Page<Photo>, SourceError>;
    fn comments_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<Comment>, SourceError>;
    fn tags_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<String>, SourceError>;
    fn favorites_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<UserId>, SourceError>;
    fn pool_of(&mut self, group: GroupId, page: usize) -> Result<Page<PhotoId>, SourceError>;
    fn members_of(&mut self, group: GroupId, page: usize) -> Result<Page<UserId>, SourceError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Users,
    Groups,
    Done,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Users => "users",
            Phase::Groups => "groups",
            Phase::Done => "done",
        })
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "users" => Ok(Phase::Users),
            "groups" => Ok(Phase::Groups),
            "done" => Ok(Phase::Done),
            other => Err(format!("unknown phase {other:?}")),
        }
    }
}

/// Crawl position: `cursor` is the id of the last completed user (users phase)
/// or group (groups phase).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub phase: Phase,
    pub cursor: Option<u64>,
    pub data_dir: PathBuf,
}

pub const CHECKPOINT_FILE: &str = "checkpoint.tsv";

impl Checkpoint {
    fn fresh(work_dir: &Path) -> Self {
        Self { phase: Phase::Users, cursor: None, data_dir: work_dir.to_path_buf() }
    }

    pub fn to_text(&self) -> String {
        let cursor = self.cursor.map_or_else(|| "-".to_string(), |c| c.to_string());
        format!("phase\t{}\ncursor\t{}\ndata\t{}\n", self.phase, cursor, self.data_dir.display())
    }

    pub fn parse(text: &str) -> Result<Self, HarvestError> {
        let bad = |m: String| HarvestError::CorruptCheckpoint(m);
        let mut fields = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let (k, v) = line.split_once('\t').ok_or_else(|| bad(format!("line {}: expected key<TAB>value", i + 1)))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(format!("missing field {k}")));
        let phase = get("phase")?.parse().map_err(bad)?;
        let cursor = match get("cursor")? {
            "-" => None,
            c => Some(c.parse().map_err(|_| bad(format!("bad cursor {c:?}")))?),
        };
        Ok(Self { phase, cursor, data_dir: PathBuf::from(get("data")?) })
    }

    pub fn load(work_dir: &Path) -> Result<Self, HarvestError> {
        let path = work_dir.join(CHECKPOINT_FILE);
        let text = fs::read_to_string(&path).map_err(|source| HarvestError::Io { path, source })?;
        Self::parse(&text)
    }

    fn save(&self) -> Result<(), HarvestError> {
        let path = self.data_dir.join(CHECKPOINT_FILE);
        let tmp = self.data_dir.join("checkpoint.tsv.tmp");
        fs::write(&tmp, self.to_text()).map_err(|source| HarvestError::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(|source| HarvestError::Io { path, source })
    }
}

#[derive(Debug, Error)]
pub enum HarvestError {
    /// The source failed; `checkpoint` is valid for resuming.
    #[error("{error} (resumable from {} cursor {:?})", checkpoint.phase, checkpoint.cursor)]
    Source { error: SourceError, checkpoint: Checkpoint },
    #[error(transparent)]
    Storage(#[from] IngestError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
}

#[derive(Debug)]
pub struct HarvestOutcome {
    pub dataset: Dataset,
    pub checkpoint: Checkpoint,
    /// Vanished entities and records dropped by the lenient build.
    pub warnings: Vec<String>,
}

fn fetch_all<T>(mut fetch: impl FnMut(usize) -> Result<Page<T>, SourceError>) -> Result<Vec<T>, SourceError> {
    let mut out = Vec::new();
    for page in 0.. {
        let p = fetch(page)?;
        out.extend(p.items);
        if !p.has_next {
            break;
        }
    }
    Ok(out)
}

/// `Ok(None)` when the entity vanished.
fn fetch_or_vanish<T>(
    warnings: &mut Vec<String>,
    what: impl fmt::Display,
    fetch: impl FnMut(usize) -> Result<Page<T>, SourceError>,
) -> Result<Option<Vec<T>>, SourceError> {
    match fetch_all(fetch) {
        Ok(items) => Ok(Some(items)),
        Err(SourceError::NotFound(m)) => {
            warnings.push(format!("{what} vanished during crawl: {m}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn crawl_user<S: PagedSource>(src: &mut S, u: UserId, warnings: &mut Vec<String>) -> Result<Records, SourceError> {
    let mut r = Records::default();
    let what = format!("user {u}");
    let Some(contacts) = fetch_or_vanish(warnings, &what, |p| src.contacts_of(u, p))? else {
        return Ok(r);
    };
    let Some(groups) = fetch_or_vanish(warnings, &what, |p| src.groups_of(u, p))? else {
        return Ok(r);
    };
    let Some(photos) = fetch_or_vanish(warnings, &what, |p| src.photos_of(u, p))? else {
        return Ok(r);
    };
    r.contacts = contacts.into_iter().map(|to| ContactEdge { from: u, to }).collect();
    r.memberships = groups.into_iter().map(|group| Membership { user: u, group }).collect();
    for photo in photos {
        let id = photo.id;
        let what = format!("photo {id}");
        let Some(comments) = fetch_or_vanish(warnings, &what, |p| src.comments_of(id, p))? else { continue };
        let Some(tags) = fetch_or_vanish(warnings, &what, |p| src.tags_of(id, p))? else { continue };
        let Some(favs) = fetch_or_vanish(warnings, &what, |p| src.favorites_of(id, p))? else { continue };
        r.photos.push(Photo { owner: u, ..photo });
        r.comments.extend(comments);
        r.tags.extend(tags.into_iter().map(|tag| TagAssignment { photo: id, tag }));
        r.favorites.extend(favs.into_iter().map(|user| Favorite { user, photo: id }));
    }
    Ok(r)
}

fn crawl_group<S: PagedSource>(src: &mut S, g: GroupId, warnings: &mut Vec<String>) -> Result<Records, SourceError> {
    let mut r = Records::default();
    let what = format!("group {g}");
    let Some(members) = fetch_or_vanish(warnings, &what, |p| src.members_of(g, p))? else {
        return Ok(r);
    };
    let Some(pool) = fetch_or_vanish(warnings, &what, |p| src.pool_of(g, p))? else {
        return Ok(r);
    };
    r.memberships = members.into_iter().map(|user| Membership { user, group: g }).collect();
    r.pool = pool.into_iter().map(|photo| PoolEntry { photo, group: g }).collect();
    Ok(r)
}

/// Keeps user-phase records of users up to `cursor` inclusive.
fn retain_users_through(r: &mut Records, cursor: Option<u64>) {
    let done = |u: UserId| cursor.is_some_and(|c| u.0 <= c);
    r.photos.retain(|p| done(p.owner));
    let kept: HashSet<PhotoId> = r.photos.iter().map(|p| p.id).collect();
    r.tags.retain(|t| kept.contains(&t.photo));
    r.comments.retain(|c| kept.contains(&c.photo));
    r.favorites.retain(|f| kept.contains(&f.photo));
    r.contacts.retain(|c| done(c.from));
    r.memberships.retain(|m| done(m.user));
}

/// Keeps group-phase records of groups up to `cursor` inclusive.
fn retain_groups_through(r: &mut Records, cursor: Option<u64>) {
    let done = |g: GroupId| cursor.is_some_and(|c| g.0 <= c);
    r.memberships.retain(|m| done(m.group));
    r.pool.retain(|p| done(p.group));
}

fn read_dir_records(dir: &Path) -> Result<Records, HarvestError> {
    if !dir.exists() {
        return Ok(Records::default());
    }
    let parsed = ingest::read_tables(dir)?;
    if let Some(e) = parsed.report.errors.first() {
        return Err(HarvestError::CorruptCheckpoint(format!("partial data {}: {e}", dir.display())));
    }
    Ok(parsed.records)
}

fn reset_dir(dir: &Path) -> Result<(), HarvestError> {
    if dir.exists() {
        fs::remove_dir_all(dir).map_err(|source| HarvestError::Io { path: dir.to_path_buf(), source })?;
    }
    Ok(())
}

/// Rewrites `dir` keeping only records accepted by `retain`.
fn truncate_partial(dir: &Path, retain: impl FnOnce(&mut Records)) -> Result<(), HarvestError> {
    let mut r = read_dir_records(dir)?;
    retain(&mut r);
    reset_dir(dir)?;
    ingest::write_records(&r, dir)?;
    Ok(())
}

struct Crawl<'s, S> {
    src: &'s mut S,
    cp: Checkpoint,
    warnings: Vec<String>,
}

impl<S: PagedSource> Crawl<'_, S> {
    fn dir(&self, name: &str) -> PathBuf {
        self.cp.data_dir.join(name)
    }

    fn fail(&self, error: SourceError) -> HarvestError {
        HarvestError::Source { error, checkpoint: self.cp.clone() }
    }

    fn listing(&mut self) -> Result<Records, HarvestError> {
        read_dir_records(&self.dir("listing"))
    }

    fn users_phase(&mut self) -> Result<(), HarvestError> {
        let listing_dir = self.dir("listing");
        let users_dir = self.dir("users");
        let users = if self.cp.cursor.is_none() {
            let users = fetch_all(|p| self.src.list_users(p)).map_err(|e| self.fail(e))?;
            reset_dir(&listing_dir)?;
            reset_dir(&users_dir)?;
            ingest::write_records(&Records { users: users.clone(), ..Default::default() }, &listing_dir)?;
            ingest::write_records(&Records::default(), &users_dir)?;
            users
        } else {
            let cursor = self.cp.cursor;
            truncate_partial(&users_dir, |r| retain_users_through(r, cursor))?;
            self.listing()?.users
        };
        let ids: BTreeSet<UserId> = users.iter().map(|u| u.id).collect();
        for u in ids {
            if self.cp.cursor.is_some_and(|c| u.0 <= c) {
                continue;
            }
            let mut warnings = Vec::new();
            let records = crawl_user(self.src, u, &mut warnings).map_err(|e| self.fail(e))?;
            ingest::append_records(&records, &users_dir)?;
            self.warnings.extend(warnings);
            self.cp.cursor = Some(u.0);
            self.cp.save()?;
        }
        self.cp = Checkpoint { phase: Phase::Groups, cursor: None, data_dir: self.cp.data_dir.clone() };
        self.cp.save()
    }

    fn groups_phase(&mut self) -> Result<(), HarvestError> {
        let listing_dir = self.dir("listing");
        let groups_dir = self.dir("groups");
        let groups = if self.cp.cursor.is_none() {
            let groups = fetch_all(|p| self.src.list_groups(p)).map_err(|e| self.fail(e))?;
            let mut listing = self.listing()?;
            listing.groups = groups.clone();
            ingest::write_records(&listing, &listing_dir)?;
            reset_dir(&groups_dir)?;
            ingest::write_records(&Records::default(), &groups_dir)?;
            groups
        } else {
            let cursor = self.cp.cursor;
            truncate_partial(&groups_dir, |r| retain_groups_through(r, cursor))?;
            self.listing()?.groups
        };
        let ids: BTreeSet<GroupId> = groups.iter().map(|g| g.id).collect();
        for g in ids {
            if self.cp.cursor.is_some_and(|c| g.0 <= c) {
                continue;
            }
            let mut warnings = Vec::new();
            let records = crawl_group(self.src, g, &mut warnings).map_err(|e| self.fail(e))?;
            ingest::append_records(&records, &groups_dir)?;
            self.warnings.extend(warnings);
            self.cp.cursor = Some(g.0);
            self.cp.save()?;
        }
        self.cp = Checkpoint { phase: Phase::Done, cursor: None, data_dir: self.cp.data_dir.clone() };
        self.cp.save()
    }

    fn assemble(&mut self) -> Result<Dataset, HarvestError> {
        let mut all = self.listing()?;
        all.extend(read_dir_records(&self.dir("users"))?);
        all.extend(read_dir_records(&self.dir("groups"))?);
        // memberships arrive from both the user and the group pass
        let mut seen = HashSet::new();
        all.memberships.retain(|m| seen.insert(*m));
        let (dataset, report) = Dataset::build(all, BuildMode::Lenient).expect("lenient build does not fail");
        self.warnings.extend(report.dropped.iter().chain(&report.warnings).map(|v| v.to_string()));
        Ok(dataset)
    }
}

/// Crawls `src`, persisting progress under `work_dir`.
///
/// With `from = None` any previous state in `work_dir` is discarded. With a
/// checkpoint, the crawl resumes after its cursor; a `Done` checkpoint only
/// reassembles the stored records.
pub fn harvest<S: PagedSource>(src: &mut S, work_dir: &Path, from: Option<Checkpoint>) -> Result<HarvestOutcome, HarvestError> {
    fs::create_dir_all(work_dir).map_err(|source| HarvestError::Io { path: work_dir.to_path_buf(), source })?;
    let cp = match from {
        Some(cp) => Checkpoint { data_dir: work_dir.to_path_buf(), ..cp },
        None => {
            for d in ["listing", "users", "groups"] {
                reset_dir(&work_dir.join(d))?;
            }
            let cp = Checkpoint::fresh(work_dir);
            cp.save()?;
            cp
        }
    };
    let mut crawl = Crawl { src, cp, warnings: Vec::new() };
    if crawl.cp.phase == Phase::Users {
        crawl.users_phase()?;
    }
    if crawl.cp.phase == Phase::Groups {
        crawl.groups_phase()?;
    }
    let dataset = crawl.assemble()?;
    Ok(HarvestOutcome { dataset, checkpoint: crawl.cp, warnings: crawl.warnings })
}

/// Which source method a call went to, with its key and page.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceCall {
    pub method: &'static str,
    pub key: u64,
    pub page: usize,
}

/// In-memory [`PagedSource`] serving the content of a dataset.
#[derive(Debug)]
pub struct DatasetSource<'a> {
    d: &'a Dataset,
    page_size: usize,
    photos_by_id: HashMap<PhotoId, &'a Photo>,
    pub calls: Vec<SourceCall>,
}

impl<'a> DatasetSource<'a> {
    pub fn new(d: &'a Dataset, page_size: usize) -> Self {
        assert!(page_size > 0, "page size must be positive");
        Self { d, page_size, photos_by_id: d.photos().iter().map(|p| (p.id, p)).collect(), calls: Vec::new() }
    }

    fn page<T: Clone>(&mut self, method: &'static str, key: u64, page: usize, items: Vec<T>) -> Page<T> {
        self.calls.push(SourceCall { method, key, page });
        let start = (page * self.page_size).min(items.len());
        let end = (start + self.page_size).min(items.len());
        Page { items: items[start..end].to_vec(), has_next: end < items.len() }
    }

    fn check_user(&self, u: UserId) -> Result<(), SourceError> {
        self.d.user(u).map(|_| ()).ok_or_else(|| SourceError::NotFound(format!("user {u}")))
    }

    fn check_photo(&self, p: PhotoId) -> Result<(), SourceError> {
        self.photos_by_id.get(&p).map(|_| ()).ok_or_else(|| SourceError::NotFound(format!("photo {p}")))
    }

    fn check_group(&self, g: GroupId) -> Result<(), SourceError> {
        self.d.group(g).map(|_| ()).ok_or_else(|| SourceError::NotFound(format!("group {g}")))
    }

    /// Calls that fetched the same page of the same listing more than once.
    pub fn repeated_calls(&self) -> usize {
        let mut seen = HashSet::new();
        self.calls.iter().filter(|c| !seen.insert(*c)).count()
    }
}

impl PagedSource for DatasetSource<'_> {
    fn list_users(&mut self, page: usize) -> Result<Page<User>, SourceError> {
        let items = self.d.users().to_vec();
        Ok(self.page("list_users", 0, page, items))
    }

    fn list_groups(&mut self, page: usize) -> Result<Page<Group>, SourceError> {
        let items = self.d.groups().to_vec();
        Ok(self.page("list_groups", 0, page, items))
    }

    fn contacts_of(&mut self, user: UserId, page: usize) -> Result<Page<UserId>, SourceError> {
        self.check_user(user)?;
        let items = self.d.contacts_of(user).collect();
        Ok(self.page("contacts_of", user.0, page, items))
    }

    fn groups_of(&mut self, user: UserId, page: usize) -> Result<Page<GroupId>, SourceError> {
        self.check_user(user)?;
        let items = self.d.groups_of(user).collect();
        Ok(self.page("groups_of", user.0, page, items))
    }

    fn photos_of(&mut self, user: UserId, page: usize) -> Result<Page<Photo>, SourceError> {
        self.check_user(user)?;
        let items = self.d.photos_of(user).cloned().collect();
        Ok(self.page("photos_of", user.0, page, items))
    }

    fn comments_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<Comment>, SourceError> {
        self.check_photo(photo)?;
        let items = self.d.comments_on(photo).copied().collect();
        Ok(self.page("comments_of", photo.0, page, items))
    }

    fn tags_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<String>, SourceError> {
        self.check_photo(photo)?;
        let items = self.d.tags_of(photo).map(str::to_string).collect();
        Ok(self.page("tags_of", photo.0, page, items))
    }

    fn favorites_of(&mut self, photo: PhotoId, page: usize) -> Result<Page<UserId>, SourceError> {
        self.check_photo(photo)?;
        let items = self.d.favorites_on(photo).map(|f| f.user).collect();
        Ok(self.page("favorites_of", photo.0, page, items))
    }

    fn pool_of(&mut self, group: GroupId, page: usize) -> Result<Page<PhotoId>, SourceError> {
        self.check_group(group)?;
        let items = self.d.pool_of(group).collect();
        Ok(self.page("pool_of", group.0, page, items))
    }

    fn members_of(&mut self, group: GroupId, page: usize) -> Result<Page<UserId>, SourceError> {
        self.check_group(group)?;
        let items = self.d.members_of(group).collect();
        Ok(self.page("members_of", group.0, page, items))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn checkpoint_text_roundtrip() {
        let cp = Checkpoint { phase: Phase::Groups, cursor: Some(17), data_dir: PathBuf::from("/tmp/x") };
        assert_eq!(cp.to_text(), "phase\tgroups\ncursor\t17\ndata\t/tmp/x\n");
        assert_eq!(Checkpoint::parse(&cp.to_text()).unwrap(), cp);
        let fresh = Checkpoint::fresh(Path::new("w"));
        assert_eq!(Checkpoint::parse(&fresh.to_text()).unwrap(), fresh);
        assert!(Checkpoint::parse("phase\tlater\ncursor\t-\ndata\tw\n").is_err());
        assert!(Checkpoint::parse("phase users\n").is_err());
    }

    #[test]
    fn empty_source_gives_empty_dataset() {
        let d = Dataset::empty();
        let mut src = DatasetSource::new(&d, 10);
        let work = tempdir().unwrap();
        let out = harvest(&mut src, work.path(), None).unwrap();
        assert_eq!(out.dataset, d);
        assert_eq!(out.checkpoint.phase, Phase::Done);
        assert_eq!(Checkpoint::load(work.path()).unwrap().phase, Phase::Done);
    }

    #[test]
    fn pages_split_and_terminate() {
        let r = Records {
            users: (1..=5).map(|u| User { id: UserId(u), is_pro: false }).collect(),
            ..Default::default()
        };
        let d = Dataset::from_records(r).unwrap();
        let mut src = DatasetSource::new(&d, 2);
        let all = fetch_all(|p| src.list_users(p)).unwrap();
        assert_eq!(all.len(), 5);
        assert_eq!(src.calls.len(), 3);
        assert!(matches!(src.contacts_of(UserId(9), 0), Err(SourceError::NotFound(_))));
    }
}
