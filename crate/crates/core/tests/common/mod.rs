#![allow(dead_code)]

use std::fs;
use std::path::Path;

use photosocial::dataset::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub users: usize,
    pub photos_per_user: usize,
    pub vocabulary: usize,
    pub groups: usize,
}

impl Shape {
    pub const HAND: Shape = Shape { users: 20, photos_per_user: 4, vocabulary: 8, groups: 3 };
    pub const MEDIUM: Shape = Shape { users: 60, photos_per_user: 6, vocabulary: 30, groups: 6 };
}

const TITLES: [&str; 5] = ["", "sunset", "Été à Paris", "a \"quoted\" title", "commas, and; more"];

/// A random valid record set with sparse, non-contiguous ids.
pub fn random_records(seed: u64, shape: Shape) -> Records {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Records::default();
    let n_users = rng.random_range(1..=shape.users);
    let mut uid = 0;
    for _ in 0..n_users {
        uid += rng.random_range(1..5u64);
        r.users.push(User { id: UserId(uid), is_pro: rng.random_bool(0.2) });
    }
    let users: Vec<UserId> = r.users.iter().map(|u| u.id).collect();
    let vocab: Vec<String> = (0..shape.vocabulary).map(|i| format!("t{i}")).collect();

    let mut pid = 1000;
    let mut owner_of = Vec::new();
    for &u in &users {
        for _ in 0..rng.random_range(0..=shape.photos_per_user) {
            pid += rng.random_range(1..4u64);
            let title = TITLES.choose(&mut rng).unwrap().to_string();
            r.photos.push(Photo { id: PhotoId(pid), owner: u, title });
            owner_of.push((PhotoId(pid), u));
            let n_tags = rng.random_range(0..=3.min(shape.vocabulary));
            for t in vocab.choose_multiple(&mut rng, n_tags) {
                r.tags.push(TagAssignment { photo: PhotoId(pid), tag: t.clone() });
            }
        }
    }
    for &a in &users {
        for &b in &users {
            if a != b && rng.random_bool(0.15) {
                r.contacts.push(ContactEdge { from: a, to: b });
            }
        }
    }
    let mut cid = 0;
    for &(p, _) in &owner_of {
        for _ in 0..rng.random_range(0..3) {
            cid += 1;
            let author = *users.choose(&mut rng).unwrap();
            r.comments.push(Comment { id: CommentId(cid), author, photo: p });
        }
        for &u in &users {
            if rng.random_bool(0.05) {
                r.favorites.push(Favorite { user: u, photo: p });
            }
        }
    }
    let mut gid = 500;
    for i in 0..rng.random_range(0..=shape.groups) {
        gid += rng.random_range(1..3u64);
        r.groups.push(Group { id: GroupId(gid), name: format!("group {i}") });
        let mut members = users.clone();
        members.shuffle(&mut rng);
        members.truncate(rng.random_range(0..=users.len()));
        for &u in &members {
            r.memberships.push(Membership { user: u, group: GroupId(gid) });
        }
        for &(p, owner) in &owner_of {
            if members.contains(&owner) && rng.random_bool(0.3) {
                r.pool.push(PoolEntry { photo: p, group: GroupId(gid) });
            }
        }
    }
    r.users.shuffle(&mut rng);
    r.photos.shuffle(&mut rng);
    r.tags.shuffle(&mut rng);
    r
}

pub fn random_dataset(seed: u64, shape: Shape) -> Dataset {
    Dataset::from_records(random_records(seed, shape)).expect("generated records are valid")
}

/// Every file of a directory, by name.
pub fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}
