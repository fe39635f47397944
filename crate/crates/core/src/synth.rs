//! Seeded generator of heavy-tailed synthetic corpora.
//!
//! Every per-user activity count follows a [`CountLaw`]: zero with some
//! probability, otherwise a Zipf draw truncated at a cap. Targets of contacts,
//! comments, favorites and memberships are drawn by Zipf rank over a fixed
//! random "attractiveness" ordering, which makes the incoming counts heavy-tailed
//! as well. Photo ids are allocated from a global counter in (shuffled) upload
//! order, skipping each candidate id with probability `id_skip_prob`, so the
//! fraction of missing ids in the covered range is known in advance.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use thiserror::Error;

use crate::dataset::*;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    InvalidConfig(String),
}

/// Zero-inflated truncated Zipf law over counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountLaw {
    /// Probability of drawing 0.
    pub zero_prob: f64,
    /// Zipf exponent of the nonzero part.
    pub exponent: f64,
    /// Largest count that can be drawn.
    pub cap: u64,
}

impl CountLaw {
    pub const fn new(zero_prob: f64, exponent: f64, cap: u64) -> Self {
        Self { zero_prob, exponent, cap }
    }

    fn validate(&self, name: &str) -> Result<(), SynthError> {
        check_prob(name, self.zero_prob)?;
        if !(self.exponent.is_finite() && self.exponent >= 0.0) {
            return Err(SynthError::InvalidConfig(format!("{name}: exponent must be finite and >= 0")));
        }
        if self.cap == 0 {
            return Err(SynthError::InvalidConfig(format!("{name}: cap must be >= 1")));
        }
        Ok(())
    }

    fn sampler(&self) -> CountSampler {
        CountSampler {
            zero_prob: self.zero_prob,
            zipf: Zipf::new(self.cap as f64, self.exponent).expect("validated law"),
        }
    }
}

struct CountSampler {
    zero_prob: f64,
    zipf: Zipf<f64>,
}

impl CountSampler {
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        if rng.random::<f64>() < self.zero_prob {
            0
        } else {
            self.zipf.sample(rng) as u64
        }
    }
}

/// Draws 0-based indices in `0..n` with Zipf-distributed rank over a fixed permutation.
struct RankPicker {
    order: Vec<usize>,
    zipf: Option<Zipf<f64>>,
}

impl RankPicker {
    fn new<R: Rng>(n: usize, exponent: f64, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let zipf = (n > 0).then(|| Zipf::new(n as f64, exponent).expect("validated exponent"));
        Self { order, zipf }
    }

    fn identity(n: usize, exponent: f64) -> Self {
        let zipf = (n > 0).then(|| Zipf::new(n as f64, exponent).expect("validated exponent"));
        Self { order: (0..n).collect(), zipf }
    }

    fn pick<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        let zipf = self.zipf.as_ref()?;
        let rank = (zipf.sample(rng) as usize).clamp(1, self.order.len());
        Some(self.order[rank - 1])
    }
}

fn check_prob(name: &str, p: f64) -> Result<(), SynthError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SynthError::InvalidConfig(format!("{name}: probability {p} outside [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_users: usize,
    /// Exact share of pro accounts (rounded to the nearest user).
    pub pro_fraction: f64,
    pub photos_nonpro: CountLaw,
    pub photos_pro: CountLaw,
    pub tag_vocabulary: usize,
    pub tag_popularity_exponent: f64,
    pub tags_per_photo: CountLaw,
    pub contacts_nonpro: CountLaw,
    pub contacts_pro: CountLaw,
    /// Probability that a new contact is immediately returned.
    pub mutual_prob: f64,
    pub user_popularity_exponent: f64,
    pub comments: CountLaw,
    pub favorites: CountLaw,
    pub photo_popularity_exponent: f64,
    pub n_groups: usize,
    pub group_popularity_exponent: f64,
    pub memberships: CountLaw,
    /// Photos posted per membership (bounded by the member's photo count).
    pub pool_posts: CountLaw,
    pub first_photo_id: u64,
    /// Probability that a candidate photo id is skipped (never allocated).
    pub id_skip_prob: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_users: 10_000,
            pro_fraction: 0.037,
            photos_nonpro: CountLaw::new(0.65, 1.6, 2_000),
            photos_pro: CountLaw::new(0.06, 1.2, 10_000),
            tag_vocabulary: 5_000,
            tag_popularity_exponent: 1.0,
            tags_per_photo: CountLaw::new(0.5, 1.8, 12),
            contacts_nonpro: CountLaw::new(0.67, 1.7, 1_000),
            contacts_pro: CountLaw::new(0.2, 1.3, 2_000),
            mutual_prob: 0.6,
            user_popularity_exponent: 0.9,
            comments: CountLaw::new(0.87, 1.5, 2_000),
            favorites: CountLaw::new(0.93, 1.5, 2_000),
            photo_popularity_exponent: 0.9,
            n_groups: 200,
            group_popularity_exponent: 0.8,
            memberships: CountLaw::new(0.85, 1.6, 200),
            pool_posts: CountLaw::new(0.3, 1.8, 50),
            first_photo_id: 74,
            id_skip_prob: 0.33,
            seed: 42,
        }
    }
}

impl SynthConfig {
    /// Default laws scaled to `n_users`, one group per 50 users.
    pub fn with_users(n_users: usize, seed: u64) -> Self {
        Self { n_users, seed, n_groups: (n_users / 50).max(1), ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        check_prob("pro_fraction", self.pro_fraction)?;
        check_prob("mutual_prob", self.mutual_prob)?;
        check_prob("id_skip_prob", self.id_skip_prob)?;
        if self.id_skip_prob >= 1.0 {
            return Err(SynthError::InvalidConfig("id_skip_prob must be < 1".into()));
        }
        for (name, law) in [
            ("photos_nonpro", &self.photos_nonpro),
            ("photos_pro", &self.photos_pro),
            ("tags_per_photo", &self.tags_per_photo),
            ("contacts_nonpro", &self.contacts_nonpro),
            ("contacts_pro", &self.contacts_pro),
            ("comments", &self.comments),
            ("favorites", &self.favorites),
            ("memberships", &self.memberships),
            ("pool_posts", &self.pool_posts),
        ] {
            law.validate(name)?;
        }
        for (name, e) in [
            ("tag_popularity_exponent", self.tag_popularity_exponent),
            ("user_popularity_exponent", self.user_popularity_exponent),
            ("photo_popularity_exponent", self.photo_popularity_exponent),
            ("group_popularity_exponent", self.group_popularity_exponent),
        ] {
            if !(e.is_finite() && e >= 0.0) {
                return Err(SynthError::InvalidConfig(format!("{name} must be finite and >= 0")));
            }
        }
        if self.tag_vocabulary == 0 && self.tags_per_photo.zero_prob < 1.0 {
            return Err(SynthError::InvalidConfig("tag_vocabulary is 0 but photos may carry tags".into()));
        }
        Ok(())
    }
}

/// Generates a dataset that passes strict validation. Deterministic in `cfg`.
pub fn generate(cfg: &SynthConfig) -> Result<Dataset, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_users;
    let mut r = Records::default();

    let n_pro = ((cfg.pro_fraction * n as f64).round() as usize).min(n);
    let mut is_pro = vec![false; n];
    for i in index::sample(&mut rng, n, n_pro) {
        is_pro[i] = true;
    }
    let uid = |i: usize| UserId(i as u64 + 1);
    r.users = (0..n).map(|i| User { id: uid(i), is_pro: is_pro[i] }).collect();

    // photos, allocated in shuffled upload order
    let (photos_pro, photos_nonpro) = (cfg.photos_pro.sampler(), cfg.photos_nonpro.sampler());
    let mut uploads = Vec::new();
    for (i, &pro) in is_pro.iter().enumerate() {
        let k = if pro { photos_pro.sample(&mut rng) } else { photos_nonpro.sample(&mut rng) };
        uploads.extend(std::iter::repeat_n(i, k as usize));
    }
    uploads.shuffle(&mut rng);
    let mut photos_of: Vec<Vec<PhotoId>> = vec![Vec::new(); n];
    let mut owner_of = Vec::with_capacity(uploads.len());
    let mut next_id = cfg.first_photo_id;
    for &owner in &uploads {
        while rng.random::<f64>() < cfg.id_skip_prob {
            next_id += 1;
        }
        let id = PhotoId(next_id);
        next_id += 1;
        photos_of[owner].push(id);
        owner_of.push(owner);
        r.photos.push(Photo { id, owner: uid(owner), title: format!("img{}", id.0 % 10_000) });
    }

    // tags
    let tags_per_photo = cfg.tags_per_photo.sampler();
    let tag_pick = RankPicker::identity(cfg.tag_vocabulary, cfg.tag_popularity_exponent);
    for p in &r.photos {
        let k = tags_per_photo.sample(&mut rng);
        let mut chosen = HashSet::new();
        for _ in 0..k {
            if let Some(t) = tag_pick.pick(&mut rng) {
                if chosen.insert(t) {
                    r.tags.push(TagAssignment { photo: p.id, tag: format!("tag{t}") });
                }
            }
        }
    }

    // contacts
    let user_pick = RankPicker::new(n, cfg.user_popularity_exponent, &mut rng);
    let (contacts_pro, contacts_nonpro) = (cfg.contacts_pro.sampler(), cfg.contacts_nonpro.sampler());
    let mut contact_set = HashSet::new();
    for (u, &pro) in is_pro.iter().enumerate() {
        let k = if pro { contacts_pro.sample(&mut rng) } else { contacts_nonpro.sample(&mut rng) };
        for _ in 0..k {
            let Some(v) = user_pick.pick(&mut rng) else { break };
            if v == u || !contact_set.insert((u, v)) {
                continue;
            }
            r.contacts.push(ContactEdge { from: uid(u), to: uid(v) });
            if rng.random::<f64>() < cfg.mutual_prob && contact_set.insert((v, u)) {
                r.contacts.push(ContactEdge { from: uid(v), to: uid(u) });
            }
        }
    }

    // comments and favorites
    let photo_pick = RankPicker::new(r.photos.len(), cfg.photo_popularity_exponent, &mut rng);
    let comments = cfg.comments.sampler();
    let favorites = cfg.favorites.sampler();
    let mut fav_set = HashSet::new();
    for u in 0..n {
        for _ in 0..comments.sample(&mut rng) {
            let Some(p) = photo_pick.pick(&mut rng) else { break };
            let id = CommentId(r.comments.len() as u64 + 1);
            r.comments.push(Comment { id, author: uid(u), photo: r.photos[p].id });
        }
        for _ in 0..favorites.sample(&mut rng) {
            let Some(p) = photo_pick.pick(&mut rng) else { break };
            if owner_of[p] != u && fav_set.insert((u, p)) {
                r.favorites.push(Favorite { user: uid(u), photo: r.photos[p].id });
            }
        }
    }

    // groups, memberships, pools
    r.groups = (1..=cfg.n_groups as u64)
        .map(|g| Group { id: GroupId(g), name: format!("group {g}") })
        .collect();
    let group_pick = RankPicker::identity(cfg.n_groups, cfg.group_popularity_exponent);
    let memberships = cfg.memberships.sampler();
    let pool_posts = cfg.pool_posts.sampler();
    for u in 0..n {
        let mut joined = HashSet::new();
        for _ in 0..memberships.sample(&mut rng) {
            let Some(g) = group_pick.pick(&mut rng) else { break };
            if !joined.insert(g) {
                continue;
            }
            let group = GroupId(g as u64 + 1);
            r.memberships.push(Membership { user: uid(u), group });
            let own = &photos_of[u];
            let k = (pool_posts.sample(&mut rng) as usize).min(own.len());
            for i in index::sample(&mut rng, own.len(), k) {
                r.pool.push(PoolEntry { photo: own[i], group });
            }
        }
    }

    Ok(Dataset::from_records(r).expect("generator emits consistent records"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig::with_users(300, seed)
    }

    #[test]
    fn zero_users_is_empty() {
        let cfg = SynthConfig { n_users: 0, n_groups: 0, ..Default::default() };
        let d = generate(&cfg).unwrap();
        assert!(d.records().is_empty());
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(generate(&small(7)).unwrap(), generate(&small(7)).unwrap());
        assert_ne!(generate(&small(7)).unwrap(), generate(&small(8)).unwrap());
    }

    #[test]
    fn invalid_probability_rejected() {
        let cfg = SynthConfig { mutual_prob: 1.5, ..small(1) };
        assert!(matches!(generate(&cfg), Err(SynthError::InvalidConfig(_))));
        let cfg = SynthConfig { comments: CountLaw::new(0.5, 1.0, 0), ..small(1) };
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn pro_fraction_is_exact() {
        let d = generate(&SynthConfig { n_users: 1000, ..small(3) }).unwrap();
        assert_eq!(d.users().iter().filter(|u| u.is_pro).count(), 37);
    }

    #[test]
    fn photo_ids_strictly_increase_from_first_id() {
        let d = generate(&small(5)).unwrap();
        let ids: Vec<u64> = d.photos().iter().map(|p| p.id.0).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        assert!(ids[0] >= 74);
    }
}
