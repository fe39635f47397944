//! Thematic and social graphs of groups, and the two indicators used to map
//! groups: social density and tag dispersion.
//!
//! With `n_t` the number of photos bearing tag `t`, `n_t(u)` the number of
//! photos of user `u` bearing it and `n_max` the largest `n_t`:
//!
//! ```text
//! rarity      rho_t   = log(1 + n_max / n_t)
//! tag weight  w(u, t) = 0 if n_t(u) = 0, else 1 + log n_t(u)
//! edge weight w(u, v) = sum_t rho_t * min(w(u, t), w(v, t))
//! ```
//!
//! Logs are base 2 unless configured otherwise, which makes the most used tag
//! have rarity exactly 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::{Dataset, GroupId, UserId};
use crate::metrics::{gini, Distribution};
use crate::scalar::Scalar;

/// Member-count bounds of the default group sample.
pub const DEFAULT_MIN_MEMBERS: usize = 433;
pub const DEFAULT_MAX_MEMBERS: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupGraphError {
    #[error("dataset has no tag assignments")]
    NoTags,
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("edge weight needs two distinct users, got {0} twice")]
    SameUser(UserId),
    #[error("unknown group {0}")]
    UnknownGroup(GroupId),
    #[error("graph has {0} vertices, need at least 2")]
    TooFewVertices(usize),
    #[error("thematic graph has no edges")]
    NoEdges,
    #[error("log base must be positive and different from 1")]
    InvalidLogBase,
    #[error("min_members {min} exceeds max_members {max}")]
    InvalidRange { min: usize, max: usize },
}

/// Corpus-wide tag counts.
#[derive(Debug, Clone)]
pub struct TagCorpusStats<T> {
    tags: Vec<String>,
    tag_index: HashMap<String, usize>,
    counts: Vec<u64>,
    n_max: u64,
    rarity: Vec<T>,
    // sorted by tag index
    user_tags: HashMap<UserId, Vec<(usize, u64)>>,
    log_base: T,
}

impl<T: Scalar> TagCorpusStats<T> {
    /// Counts every tagged photo of the dataset, using base-2 logs.
    pub fn new(d: &Dataset) -> Result<Self, GroupGraphError> {
        let mut per_tag: BTreeMap<&str, u64> = BTreeMap::new();
        let mut per_user: HashMap<UserId, BTreeMap<&str, u64>> = HashMap::new();
        for p in d.photos() {
            for tag in d.tags_of(p.id) {
                *per_tag.entry(tag).or_default() += 1;
                *per_user.entry(p.owner).or_default().entry(tag).or_default() += 1;
            }
        }
        if per_tag.is_empty() {
            return Err(GroupGraphError::NoTags);
        }
        let tags: Vec<String> = per_tag.keys().map(|t| t.to_string()).collect();
        let tag_index: HashMap<String, usize> = tags.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let counts: Vec<u64> = per_tag.values().copied().collect();
        let n_max = counts.iter().copied().max().unwrap_or(0);
        let user_tags = per_user
            .into_iter()
            .map(|(u, m)| (u, m.into_iter().map(|(t, c)| (tag_index[t], c)).collect()))
            .collect();
        let mut stats = Self {
            tags,
            tag_index,
            counts,
            n_max,
            rarity: Vec::new(),
            user_tags,
            log_base: T::lit(2.0),
        };
        stats.refresh_rarity();
        Ok(stats)
    }

    pub fn with_log_base(mut self, base: T) -> Result<Self, GroupGraphError> {
        if !(base > T::zero() && base != T::one() && base.is_finite()) {
            return Err(GroupGraphError::InvalidLogBase);
        }
        self.log_base = base;
        self.refresh_rarity();
        Ok(self)
    }

    fn refresh_rarity(&mut self) {
        let n_max = T::from_u64_lossy(self.n_max);
        self.rarity = self
            .counts
            .iter()
            .map(|&n| self.log(T::one() + n_max / T::from_u64_lossy(n)))
            .collect();
    }

    fn log(&self, x: T) -> T {
        if self.log_base == T::lit(2.0) {
            x.log2()
        } else {
            x.ln() / self.log_base.ln()
        }
    }

    pub fn log_base(&self) -> T {
        self.log_base
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Distinct tags, ascending.
    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    fn index_of(&self, tag: &str) -> Result<usize, GroupGraphError> {
        self.tag_index.get(tag).copied().ok_or_else(|| GroupGraphError::UnknownTag(tag.to_string()))
    }

    /// `n_t`.
    pub fn tag_count(&self, tag: &str) -> Result<u64, GroupGraphError> {
        Ok(self.counts[self.index_of(tag)?])
    }

    /// `n_t(u)`; 0 for users without tagged photos.
    pub fn user_tag_count(&self, u: UserId, tag: &str) -> Result<u64, GroupGraphError> {
        let t = self.index_of(tag)?;
        Ok(self.user_tag_list(u).iter().find(|(i, _)| *i == t).map_or(0, |&(_, c)| c))
    }

    /// `(tag, n_t(u))` for every tag the user's photos carry.
    pub fn user_tags(&self, u: UserId) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.user_tag_list(u).iter().map(|&(t, c)| (self.tags[t].as_str(), c))
    }

    fn user_tag_list(&self, u: UserId) -> &[(usize, u64)] {
        self.user_tags.get(&u).map_or(&[], Vec::as_slice)
    }

    /// True if the user owns at least one tagged photo.
    pub fn has_tagged_photos(&self, u: UserId) -> bool {
        !self.user_tag_list(u).is_empty()
    }

    pub fn rarity(&self, tag: &str) -> Result<T, GroupGraphError> {
        Ok(self.rarity[self.index_of(tag)?])
    }

    fn weight_of_count(&self, n: u64) -> T {
        if n == 0 {
            T::zero()
        } else {
            T::one() + self.log(T::from_u64_lossy(n))
        }
    }

    pub fn tag_weight(&self, u: UserId, tag: &str) -> Result<T, GroupGraphError> {
        Ok(self.weight_of_count(self.user_tag_count(u, tag)?))
    }

    /// Rarity-weighted overlap of the two users' tag usage; 0 iff no shared tag.
    pub fn edge_weight(&self, u: UserId, v: UserId) -> Result<T, GroupGraphError> {
        if u == v {
            return Err(GroupGraphError::SameUser(u));
        }
        let (a, b) = (self.user_tag_list(u), self.user_tag_list(v));
        let (mut i, mut j) = (0, 0);
        let mut sum = T::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let t = a[i].0;
                    sum += self.rarity[t] * self.weight_of_count(a[i].1.min(b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(sum)
    }
}

/// Undirected weighted edge between vertex positions `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge<T> {
    pub a: usize,
    pub b: usize,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThematicGraph<T> {
    pub group: GroupId,
    /// Members owning at least one tagged photo, ascending.
    pub vertices: Vec<UserId>,
    /// Sorted by `(a, b)`; every weight is positive.
    pub edges: Vec<WeightedEdge<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    pub group: GroupId,
    pub vertices: Vec<UserId>,
    /// Vertex position pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

fn graph_vertices<T: Scalar>(d: &Dataset, stats: &TagCorpusStats<T>, g: GroupId) -> Result<Vec<UserId>, GroupGraphError> {
    if d.group(g).is_none() {
        return Err(GroupGraphError::UnknownGroup(g));
    }
    Ok(d.members_of(g).filter(|&u| stats.has_tagged_photos(u)).collect())
}

pub fn thematic_graph<T: Scalar>(
    d: &Dataset,
    stats: &TagCorpusStats<T>,
    g: GroupId,
) -> Result<ThematicGraph<T>, GroupGraphError> {
    let vertices = graph_vertices(d, stats, g)?;
    // tag -> (vertex, tag weight), tags ascending so each edge sums in tag order
    let mut by_tag: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
    for (i, &u) in vertices.iter().enumerate() {
        for &(t, c) in stats.user_tag_list(u) {
            by_tag.entry(t).or_default().push((i, stats.weight_of_count(c)));
        }
    }
    let mut acc: HashMap<(usize, usize), T> = HashMap::new();
    for (t, users) in &by_tag {
        let rho = stats.rarity[*t];
        for (x, &(a, wa)) in users.iter().enumerate() {
            for &(b, wb) in &users[x + 1..] {
                *acc.entry((a, b)).or_insert_with(T::zero) += rho * wa.min(wb);
            }
        }
    }
    let mut edges: Vec<WeightedEdge<T>> = acc
        .into_iter()
        .filter(|(_, w)| *w > T::zero())
        .map(|((a, b), weight)| WeightedEdge { a, b, weight })
        .collect();
    edges.sort_by_key(|e| (e.a, e.b));
    Ok(ThematicGraph { group: g, vertices, edges })
}

/// Same vertices as the thematic graph; an edge when either user has the other as contact.
pub fn social_graph<T: Scalar>(d: &Dataset, stats: &TagCorpusStats<T>, g: GroupId) -> Result<SocialGraph, GroupGraphError> {
    let vertices = graph_vertices(d, stats, g)?;
    let pos: HashMap<UserId, usize> = vertices.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, &u) in vertices.iter().enumerate() {
        for v in d.contacts_of(u) {
            if let Some(&j) = pos.get(&v) {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok(SocialGraph { group: g, vertices, edges: edges.into_iter().collect() })
}

/// Existing edges over possible pairs.
pub fn social_density<T: Scalar>(sg: &SocialGraph) -> Result<T, GroupGraphError> {
    let n = sg.vertices.len();
    if n < 2 {
        return Err(GroupGraphError::TooFewVertices(n));
    }
    Ok(T::from_count(sg.edges.len()) / T::from_count(n * (n - 1) / 2))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndicatorOptions {
    /// Count non-adjacent vertex pairs as zero-weight entries in tag dispersion.
    pub include_nonedges: bool,
}

/// Gini coefficient of the thematic edge weights.
pub fn tag_dispersion<T: Scalar>(tg: &ThematicGraph<T>, opts: IndicatorOptions) -> Result<T, GroupGraphError> {
    if tg.edges.is_empty() {
        return Err(GroupGraphError::NoEdges);
    }
    let mut values: Vec<T> = tg.edges.iter().map(|e| e.weight).collect();
    if opts.include_nonedges {
        let n = tg.vertices.len();
        values.resize(n * (n - 1) / 2, T::zero());
    }
    let dist = Distribution::new(values).expect("edge weights are positive and finite");
    Ok(gini(&dist).expect("non-empty"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupIndicators<T> {
    pub group: GroupId,
    pub member_count: usize,
    pub vertex_count: usize,
    pub social_edges: usize,
    pub thematic_edges: usize,
    /// `None` with fewer than 2 vertices.
    pub social_density: Option<T>,
    /// `None` with fewer than 2 vertices or no thematic edge.
    pub tag_dispersion: Option<T>,
}

pub fn group_indicators<T: Scalar>(
    d: &Dataset,
    stats: &TagCorpusStats<T>,
    g: GroupId,
    opts: IndicatorOptions,
) -> Result<GroupIndicators<T>, GroupGraphError> {
    let tg = thematic_graph(d, stats, g)?;
    let sg = social_graph(d, stats, g)?;
    let enough = tg.vertices.len() >= 2;
    Ok(GroupIndicators {
        group: g,
        member_count: d.member_count(g),
        vertex_count: tg.vertices.len(),
        social_edges: sg.edges.len(),
        thematic_edges: tg.edges.len(),
        social_density: if enough { social_density(&sg).ok() } else { None },
        tag_dispersion: if enough { tag_dispersion(&tg, opts).ok() } else { None },
    })
}

/// Indicators of every group whose member count lies in `[min_members, max_members]`,
/// sorted by tag dispersion ascending (undefined last), then group id.
pub fn map_groups<T: Scalar>(
    d: &Dataset,
    stats: &TagCorpusStats<T>,
    min_members: usize,
    max_members: usize,
    opts: IndicatorOptions,
) -> Result<Vec<GroupIndicators<T>>, GroupGraphError> {
    if min_members > max_members {
        return Err(GroupGraphError::InvalidRange { min: min_members, max: max_members });
    }
    let selected: Vec<GroupId> = d
        .groups()
        .iter()
        .map(|g| g.id)
        .filter(|&g| (min_members..=max_members).contains(&d.member_count(g)))
        .collect();
    let mut out = selected
        .par_iter()
        .map(|&g| group_indicators(d, stats, g, opts))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|x, y| match (x.tag_dispersion, y.tag_dispersion) {
        (Some(a), Some(b)) => a.partial_cmp(&b).expect("finite").then(x.group.cmp(&y.group)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => x.group.cmp(&y.group),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::*;
    use approx::assert_abs_diff_eq;

    /// Builds a dataset where `photos[i] = (owner, tags)`; every listed user is a
    /// member of group 1.
    fn corpus(users: &[u64], photos: &[(u64, &[&str])], contacts: &[(u64, u64)]) -> Dataset {
        let mut r = Records {
            users: users.iter().map(|&u| User { id: UserId(u), is_pro: false }).collect(),
            groups: vec![Group { id: GroupId(1), name: "g".into() }],
            memberships: users.iter().map(|&u| Membership { user: UserId(u), group: GroupId(1) }).collect(),
            contacts: contacts.iter().map(|&(a, b)| ContactEdge { from: UserId(a), to: UserId(b) }).collect(),
            ..Default::default()
        };
        for (i, (owner, tags)) in photos.iter().enumerate() {
            let id = PhotoId(i as u64 + 1);
            r.photos.push(Photo { id, owner: UserId(*owner), title: String::new() });
            r.tags.extend(tags.iter().map(|t| TagAssignment { photo: id, tag: t.to_string() }));
        }
        Dataset::from_records(r).unwrap()
    }

    #[test]
    fn corpus_counts() {
        let d = corpus(&[1, 2], &[(1, &["a"]), (1, &["a"]), (2, &["a"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        assert_eq!(s.tag_count("a").unwrap(), 3);
        assert_eq!(s.user_tag_count(UserId(1), "a").unwrap(), 2);
        assert_eq!(s.user_tag_count(UserId(2), "a").unwrap(), 1);
        assert_eq!(s.n_max(), 3);
        assert!(matches!(TagCorpusStats::<f64>::new(&Dataset::empty()), Err(GroupGraphError::NoTags)));
    }

    #[test]
    fn rarity_and_tag_weight_values() {
        // n_a = 4 = n_max, n_b = 2, n_c = 1
        let d = corpus(
            &[1, 2],
            &[(1, &["a", "b"]), (1, &["a", "b"]), (1, &["a"]), (2, &["a", "c"])],
            &[],
        );
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        assert_eq!(s.rarity("a").unwrap(), 1.0);
        assert_abs_diff_eq!(s.rarity("b").unwrap(), 3f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.rarity("c").unwrap(), 5f64.log2(), epsilon = 1e-15);
        assert_eq!(s.tag_weight(UserId(2), "b").unwrap(), 0.0);
        assert_eq!(s.tag_weight(UserId(2), "a").unwrap(), 1.0);
        assert_eq!(s.rarity("zzz"), Err(GroupGraphError::UnknownTag("zzz".into())));
    }

    #[test]
    fn tag_weight_of_eight_photos() {
        let photos: Vec<(u64, &[&str])> = (0..8).map(|_| (1u64, &["x"][..])).collect();
        let d = corpus(&[1], &photos, &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        assert_eq!(s.tag_weight(UserId(1), "x").unwrap(), 4.0);
    }

    #[test]
    fn worked_edge_weight() {
        // n_a = 4 (n_max), n_b = 2; u: n_a(u) = 2, n_b(u) = 1; v: n_a(v) = 1
        let d = corpus(
            &[1, 2, 3],
            &[(1, &["a", "b"]), (1, &["a"]), (2, &["a"]), (3, &["a", "b"])],
            &[],
        );
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        assert_eq!(s.edge_weight(UserId(1), UserId(2)).unwrap(), 1.0);
        assert_eq!(s.edge_weight(UserId(2), UserId(1)).unwrap(), 1.0);
        assert_eq!(s.edge_weight(UserId(1), UserId(1)), Err(GroupGraphError::SameUser(UserId(1))));
    }

    #[test]
    fn log_base_is_configurable() {
        let d = corpus(&[1], &[(1, &["a"]), (1, &["a", "b"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap().with_log_base(std::f64::consts::E).unwrap();
        assert_abs_diff_eq!(s.rarity("a").unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.rarity("b").unwrap(), 3f64.ln(), epsilon = 1e-15);
        assert!(TagCorpusStats::<f64>::new(&d).unwrap().with_log_base(1.0).is_err());
    }

    #[test]
    fn no_shared_tags_gives_isolated_vertices() {
        let d = corpus(&[1, 2, 3], &[(1, &["a"]), (2, &["b"]), (3, &["c"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        let tg = thematic_graph(&d, &s, GroupId(1)).unwrap();
        assert_eq!(tg.vertices.len(), 3);
        assert!(tg.edges.is_empty());
        assert_eq!(tag_dispersion(&tg, IndicatorOptions::default()), Err(GroupGraphError::NoEdges));
    }

    #[test]
    fn shared_tag_triangle() {
        let d = corpus(&[1, 2, 3, 4], &[(1, &["x"]), (2, &["x"]), (3, &["x"]), (4, &[])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        let tg = thematic_graph(&d, &s, GroupId(1)).unwrap();
        // user 4 has a photo without tags
        assert_eq!(tg.vertices, vec![UserId(1), UserId(2), UserId(3)]);
        assert_eq!(tg.edges.len(), 3);
        assert!(tg.edges.iter().all(|e| e.weight == 1.0));
        assert_eq!(tag_dispersion(&tg, IndicatorOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn social_edges_collapse_direction() {
        let d = corpus(&[1, 2, 3], &[(1, &["x"]), (2, &["x"]), (3, &["y"])], &[(1, 2), (2, 1), (3, 1)]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        let sg = social_graph(&d, &s, GroupId(1)).unwrap();
        assert_eq!(sg.edges, vec![(0, 1), (0, 2)]);
        assert_abs_diff_eq!(social_density::<f64>(&sg).unwrap(), 2.0 / 3.0);
        assert_eq!(social_graph(&d, &s, GroupId(9)), Err(GroupGraphError::UnknownGroup(GroupId(9))));
    }

    #[test]
    fn density_examples() {
        let sg = |n: usize, edges: Vec<(usize, usize)>| SocialGraph {
            group: GroupId(1),
            vertices: (0..n as u64).map(UserId).collect(),
            edges,
        };
        assert_eq!(social_density::<f64>(&sg(3, vec![(0, 1), (0, 2), (1, 2)])).unwrap(), 1.0);
        assert_eq!(social_density::<f64>(&sg(3, vec![])).unwrap(), 0.0);
        assert_eq!(social_density::<f64>(&sg(4, vec![(0, 1), (1, 2), (2, 3)])).unwrap(), 0.5);
        assert_eq!(social_density::<f64>(&sg(1, vec![])), Err(GroupGraphError::TooFewVertices(1)));
    }

    #[test]
    fn dispersion_of_weights_and_nonedges() {
        let tg = |n: u64, w: &[f64]| ThematicGraph {
            group: GroupId(1),
            vertices: (0..n).map(UserId).collect(),
            edges: w.iter().enumerate().map(|(i, &weight)| WeightedEdge { a: 0, b: i + 1, weight }).collect(),
        };
        let plain = IndicatorOptions::default();
        let with_zeros = IndicatorOptions { include_nonedges: true };
        assert_abs_diff_eq!(tag_dispersion(&tg(4, &[1.0, 2.0, 3.0]), plain).unwrap(), 8.0 / 36.0, epsilon = 1e-15);
        let triangle = tg(3, &[2.0, 2.0, 2.0]);
        assert_eq!(tag_dispersion(&triangle, with_zeros).unwrap(), 0.0);
        let plus_isolated = tg(4, &[2.0, 2.0, 2.0]);
        assert!(tag_dispersion(&plus_isolated, with_zeros).unwrap() > 0.0);
    }

    #[test]
    fn single_vertex_group_is_undefined() {
        let d = corpus(&[1, 2], &[(1, &["x"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        let ind = group_indicators(&d, &s, GroupId(1), IndicatorOptions::default()).unwrap();
        assert_eq!(ind.member_count, 2);
        assert_eq!(ind.vertex_count, 1);
        assert_eq!((ind.social_density, ind.tag_dispersion), (None, None));
    }

    #[test]
    fn no_contacts_means_zero_density() {
        let d = corpus(&[1, 2, 3], &[(1, &["x"]), (2, &["x", "y"]), (3, &["y"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        let ind = group_indicators(&d, &s, GroupId(1), IndicatorOptions::default()).unwrap();
        assert_eq!(ind.social_density, Some(0.0));
        assert!(ind.tag_dispersion.is_some());
    }

    #[test]
    fn map_range_validation() {
        let d = corpus(&[1, 2], &[(1, &["x"])], &[]);
        let s = TagCorpusStats::<f64>::new(&d).unwrap();
        assert!(map_groups(&d, &s, 5, 10, IndicatorOptions::default()).unwrap().is_empty());
        assert_eq!(
            map_groups(&d, &s, 10, 5, IndicatorOptions::default()),
            Err(GroupGraphError::InvalidRange { min: 10, max: 5 })
        );
    }
}
