//! Distribution and activity statistics: Lorenz curves, Gini coefficients,
//! per-functionality summary table, user segmentation, photo id coverage,
//! intensity-ranked top sample and reciprocity of directed relations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dataset::{ActivityVector, Dataset, PhotoId, UserId};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("value at index {0} is negative or not finite")]
    InvalidValue(usize),
    #[error("dataset has no users")]
    EmptyDataset,
    #[error("need at least 2 distinct photo ids, got {0}")]
    TooFewIds(usize),
    #[error("relation is empty")]
    EmptyRelation,
    #[error("unknown relation kind {0:?} (expected contacts, commented or favorited)")]
    InvalidKind(String),
}

/// Nonnegative value per entity.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    values: Vec<T>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(values: Vec<T>) -> Result<Self, MetricsError> {
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(MetricsError::InvalidValue(i));
        }
        Ok(Self { values, labels: None })
    }

    pub fn from_counts<I: IntoIterator<Item = u64>>(counts: I) -> Self {
        Self { values: counts.into_iter().map(T::from_u64_lossy).collect(), labels: None }
    }

    /// Attaches one label per value. Panics on a length mismatch.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.values.len(), "one label per value");
        self.labels = Some(labels);
        self
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn sorted(&self) -> Vec<T> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        v
    }
}

/// Points `(population share, cumulative value share)` from `(0, 0)` to `(1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve<T> {
    pub points: Vec<(T, T)>,
}

impl<T: Scalar> LorenzCurve<T> {
    /// Area under the curve by trapezoid integration.
    pub fn area(&self) -> T {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / T::lit(2.0))
            .sum()
    }

    /// Twice the area between the diagonal and the curve.
    pub fn gini(&self) -> T {
        T::one() - T::lit(2.0) * self.area()
    }
}

/// Lorenz curve of `dist`; an all-zero distribution yields the diagonal.
pub fn lorenz<T: Scalar>(dist: &Distribution<T>) -> Result<LorenzCurve<T>, MetricsError> {
    if dist.is_empty() {
        return Err(MetricsError::EmptyDistribution);
    }
    let sorted = dist.sorted();
    let n = T::from_count(sorted.len());
    let total: T = sorted.iter().copied().sum();
    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push((T::zero(), T::zero()));
    let mut acc = T::zero();
    for (k, v) in sorted.iter().enumerate() {
        acc += *v;
        let x = T::from_count(k + 1) / n;
        let y = if total > T::zero() { acc / total } else { x };
        points.push((x, y));
    }
    // pin the endpoint against accumulated rounding
    if let Some(last) = points.last_mut() {
        *last = (T::one(), T::one());
    }
    Ok(LorenzCurve { points })
}

/// Gini coefficient `sum_ij |x_i - x_j| / (2 n^2 mean)`, in `[0, 1)`.
///
/// Evaluated in O(n log n) through the sorted-rank identity
/// `sum_ij |x_i - x_j| = 2 sum_i (2i - n + 1) x_(i)` (0-based ranks).
pub fn gini<T: Scalar>(dist: &Distribution<T>) -> Result<T, MetricsError> {
    if dist.is_empty() {
        return Err(MetricsError::EmptyDistribution);
    }
    let sorted = dist.sorted();
    let n = sorted.len();
    let total: T = sorted.iter().copied().sum();
    if total <= T::zero() {
        return Ok(T::zero());
    }
    let weighted: T = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (T::from_count(2 * i + 1) - T::from_count(n)) * x)
        .sum();
    Ok((weighted / (T::from_count(n) * total)).max(T::zero()))
}

/// Rows of the functionality summary table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functionality {
    Photos,
    ContactsOut,
    ContactsIn,
    CommentsGiven,
    CommentsReceived,
    FavoritesGiven,
    FavoritesReceived,
    Groups,
}

impl Functionality {
    pub const ALL: [Functionality; 8] = [
        Functionality::Photos,
        Functionality::ContactsOut,
        Functionality::ContactsIn,
        Functionality::CommentsGiven,
        Functionality::CommentsReceived,
        Functionality::FavoritesGiven,
        Functionality::FavoritesReceived,
        Functionality::Groups,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functionality::Photos => "photos",
            Functionality::ContactsOut => "contacts_out",
            Functionality::ContactsIn => "contacts_in",
            Functionality::CommentsGiven => "comments_given",
            Functionality::CommentsReceived => "comments_received",
            Functionality::FavoritesGiven => "favorites_given",
            Functionality::FavoritesReceived => "favorites_received",
            Functionality::Groups => "groups",
        }
    }

    pub fn count(self, a: &ActivityVector) -> u64 {
        match self {
            Functionality::Photos => a.photos,
            Functionality::ContactsOut => a.contacts_out,
            Functionality::ContactsIn => a.contacts_in,
            Functionality::CommentsGiven => a.comments_posted,
            Functionality::CommentsReceived => a.comments_received,
            Functionality::FavoritesGiven => a.favorites_given,
            Functionality::FavoritesReceived => a.favorites_received,
            Functionality::Groups => a.groups,
        }
    }
}

impl fmt::Display for Functionality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functionality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Functionality::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown functionality {s:?}"))
    }
}

/// Account class filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserClass {
    All,
    NonPro,
    Pro,
}

impl UserClass {
    pub fn admits(self, is_pro: bool) -> bool {
        match self {
            UserClass::All => true,
            UserClass::NonPro => !is_pro,
            UserClass::Pro => is_pro,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ByClass<V> {
    pub all: V,
    pub non_pro: V,
    pub pro: V,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalityRow<T> {
    pub functionality: Functionality,
    pub total: u64,
    /// Mean among users with a nonzero count; `None` when no such user.
    pub mean_active: ByClass<Option<T>>,
    /// Percentage of users with a zero count; `None` when the class is empty.
    pub pct_zero: ByClass<Option<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalityStats<T> {
    pub rows: Vec<FunctionalityRow<T>>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    users: u64,
    active: u64,
    sum: u64,
}

impl Tally {
    fn add(&mut self, c: u64) {
        self.users += 1;
        self.sum += c;
        self.active += u64::from(c > 0);
    }

    fn mean_active<T: Scalar>(&self) -> Option<T> {
        (self.active > 0).then(|| T::from_u64_lossy(self.sum) / T::from_u64_lossy(self.active))
    }

    fn pct_zero<T: Scalar>(&self) -> Option<T> {
        (self.users > 0)
            .then(|| T::lit(100.0) * T::from_u64_lossy(self.users - self.active) / T::from_u64_lossy(self.users))
    }
}

pub fn functionality_stats<T: Scalar>(d: &Dataset) -> FunctionalityStats<T> {
    let vectors = d.activity_vectors();
    let rows = Functionality::ALL
        .iter()
        .map(|&f| {
            let (mut pro, mut non_pro) = (Tally::default(), Tally::default());
            for (user, a) in d.users().iter().zip(&vectors) {
                let c = f.count(&a.1);
                if user.is_pro { pro.add(c) } else { non_pro.add(c) }
            }
            let all = Tally {
                users: pro.users + non_pro.users,
                active: pro.active + non_pro.active,
                sum: pro.sum + non_pro.sum,
            };
            FunctionalityRow {
                functionality: f,
                total: all.sum,
                mean_active: ByClass { all: all.mean_active(), non_pro: non_pro.mean_active(), pro: pro.mean_active() },
                pct_zero: ByClass { all: all.pct_zero(), non_pro: non_pro.pct_zero(), pro: pro.pct_zero() },
            }
        })
        .collect();
    FunctionalityStats { rows }
}

/// Distribution of one functionality over the users of a class.
pub fn functionality_distribution<T: Scalar>(d: &Dataset, f: Functionality, class: UserClass) -> Distribution<T> {
    let (values, labels): (Vec<u64>, Vec<String>) = d
        .users()
        .iter()
        .zip(d.activity_vectors())
        .filter(|(u, _)| class.admits(u.is_pro))
        .map(|(u, (_, a))| (f.count(&a), u.id.to_string()))
        .unzip();
    Distribution::from_counts(values).with_labels(labels)
}

/// Member count per group.
pub fn group_member_distribution<T: Scalar>(d: &Dataset) -> Distribution<T> {
    let labels = d.groups().iter().map(|g| g.id.to_string()).collect();
    Distribution::from_counts(d.groups().iter().map(|g| d.member_count(g.id) as u64)).with_labels(labels)
}

/// Pool size per group.
pub fn group_pool_distribution<T: Scalar>(d: &Dataset) -> Distribution<T> {
    let labels = d.groups().iter().map(|g| g.id.to_string()).collect();
    Distribution::from_counts(d.groups().iter().map(|g| d.pool_of(g.id).count() as u64)).with_labels(labels)
}

/// User shares by (uploads photos) x (performs outgoing communication acts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segmentation<T> {
    pub inactive: T,
    pub communication_only: T,
    pub photos_only: T,
    pub photos_and_communication: T,
    pub n_users: usize,
}

pub fn segment_users<T: Scalar>(d: &Dataset) -> Result<Segmentation<T>, MetricsError> {
    let n = d.users().len();
    if n == 0 {
        return Err(MetricsError::EmptyDataset);
    }
    let mut counts = [0usize; 4];
    for (_, a) in d.activity_vectors() {
        let slot = usize::from(a.photos > 0) * 2 + usize::from(a.communicates());
        counts[slot] += 1;
    }
    let share = |c: usize| T::from_count(c) / T::from_count(n);
    Ok(Segmentation {
        inactive: share(counts[0]),
        communication_only: share(counts[1]),
        photos_only: share(counts[2]),
        photos_and_communication: share(counts[3]),
        n_users: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdCoverage<T> {
    pub distinct_ids: usize,
    pub min_id: PhotoId,
    pub max_id: PhotoId,
    /// Share of the id range `[min, max]` present.
    pub coverage: T,
    /// Upper bound on the share of ids that are private (or deleted).
    pub private_upper_bound: T,
}

pub fn id_coverage_bound<T: Scalar>(ids: &[PhotoId]) -> Result<IdCoverage<T>, MetricsError> {
    let distinct: BTreeSet<PhotoId> = ids.iter().copied().collect();
    if distinct.len() < 2 {
        return Err(MetricsError::TooFewIds(distinct.len()));
    }
    let (min, max) = (*distinct.first().unwrap(), *distinct.last().unwrap());
    let span = T::from_u64_lossy(max.0 - min.0) + T::one();
    let coverage = T::from_count(distinct.len()) / span;
    Ok(IdCoverage {
        distinct_ids: distinct.len(),
        min_id: min,
        max_id: max,
        coverage,
        private_upper_bound: T::one() - coverage,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedUser<T> {
    pub user: UserId,
    /// Sum over the eight functionalities of the competition rank (1 = best).
    pub rank_sum: u64,
    /// Sum over functionalities of `1 - rank / N`.
    pub intensity: T,
}

/// Competition ranks (ties share the best rank), descending by value.
fn competition_ranks(values: &[u64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]));
    let mut ranks = vec![0; values.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = if pos > 0 && values[order[pos - 1]] == values[i] {
            ranks[order[pos - 1]]
        } else {
            pos as u64 + 1
        };
    }
    ranks
}

/// The `k` most intensive users, by summed normalized ranks over the eight
/// activity components, ties broken by ascending user id.
///
/// Intensity is `8 - rank_sum / N`, so ordering by ascending integer rank sum is
/// exact.
pub fn top_sample<T: Scalar>(d: &Dataset, k: usize) -> Vec<RankedUser<T>> {
    let vectors = d.activity_vectors();
    let n = vectors.len();
    let mut rank_sum = vec![0u64; n];
    for c in 0..8 {
        let column: Vec<u64> = vectors.iter().map(|(_, a)| a.to_array()[c]).collect();
        for (s, r) in rank_sum.iter_mut().zip(competition_ranks(&column)) {
            *s += r;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (rank_sum[i], vectors[i].0));
    order.truncate(k);
    let nf = T::from_count(n.max(1));
    order
        .into_iter()
        .map(|i| RankedUser {
            user: vectors[i].0,
            rank_sum: rank_sum[i],
            intensity: T::lit(8.0) - T::from_u64_lossy(rank_sum[i]) / nf,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Contacts,
    Commented,
    Favorited,
}

impl RelationKind {
    pub const ALL: [RelationKind; 3] = [RelationKind::Contacts, RelationKind::Commented, RelationKind::Favorited];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Contacts => "contacts",
            RelationKind::Commented => "commented",
            RelationKind::Favorited => "favorited",
        }
    }
}

impl FromStr for RelationKind {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MetricsError::InvalidKind(s.to_string()))
    }
}

/// Deduplicated directed user pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedRelation {
    pub kind: RelationKind,
    pub pairs: BTreeSet<(UserId, UserId)>,
}

/// Pairs `(u, v)`: `u` has `v` as contact, or commented / favorited at least one
/// photo of `v` (self pairs excluded).
pub fn derive_relation(d: &Dataset, kind: RelationKind) -> DirectedRelation {
    let owners: HashMap<PhotoId, UserId> = d.photos().iter().map(|p| (p.id, p.owner)).collect();
    let pairs = match kind {
        RelationKind::Contacts => d.contacts().iter().map(|c| (c.from, c.to)).collect(),
        RelationKind::Commented => d
            .comments()
            .iter()
            .map(|c| (c.author, owners[&c.photo]))
            .filter(|(a, b)| a != b)
            .collect(),
        RelationKind::Favorited => d
            .favorites()
            .iter()
            .map(|f| (f.user, owners[&f.photo]))
            .filter(|(a, b)| a != b)
            .collect(),
    };
    DirectedRelation { kind, pairs }
}

/// Share of pairs `(u, v)` whose reverse `(v, u)` is also present.
pub fn reciprocity_rate<T: Scalar>(r: &DirectedRelation) -> Result<T, MetricsError> {
    if r.pairs.is_empty() {
        return Err(MetricsError::EmptyRelation);
    }
    let mutual = r.pairs.iter().filter(|(u, v)| r.pairs.contains(&(*v, *u))).count();
    Ok(T::from_count(mutual) / T::from_count(r.pairs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dist(v: &[f64]) -> Distribution<f64> {
        Distribution::new(v.to_vec()).unwrap()
    }

    /// Direct double sum over all ordered pairs.
    fn gini_pairwise(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        if mean == 0.0 {
            return 0.0;
        }
        let s: f64 = v.iter().flat_map(|a| v.iter().map(move |b| (a - b).abs())).sum();
        s / (2.0 * n * n * mean)
    }

    #[test]
    fn lorenz_hand_cumulation() {
        let c = lorenz(&dist(&[1.0, 2.0, 1.0])).unwrap();
        let expect = [(0.0, 0.0), (1.0 / 3.0, 0.25), (2.0 / 3.0, 0.5), (1.0, 1.0)];
        assert_eq!(c.points.len(), 4);
        for ((x, y), (ex, ey)) in c.points.iter().zip(expect) {
            assert_abs_diff_eq!(*x, ex, epsilon = 1e-15);
            assert_abs_diff_eq!(*y, ey, epsilon = 1e-15);
        }
    }

    #[test]
    fn lorenz_uniform_and_zero_are_diagonal() {
        for v in [[5.0; 4].as_slice(), [0.0; 3].as_slice()] {
            for (x, y) in lorenz(&dist(v)).unwrap().points {
                assert_abs_diff_eq!(x, y, epsilon = 1e-15);
            }
        }
        assert_eq!(lorenz::<f64>(&dist(&[])), Err(MetricsError::EmptyDistribution));
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&dist(&[3.0, 3.0, 3.0])).unwrap(), 0.0);
        assert_abs_diff_eq!(gini(&dist(&[0.0, 1.0])).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(gini_pairwise(&[1.0, 2.0, 3.0]), 8.0 / 36.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gini(&dist(&[1.0, 2.0, 3.0])).unwrap(), 8.0 / 36.0, epsilon = 1e-15);
        assert_eq!(gini(&dist(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(gini::<f64>(&dist(&[])), Err(MetricsError::EmptyDistribution));
    }

    #[test]
    fn negative_values_rejected() {
        assert_eq!(Distribution::new(vec![1.0, -1.0]), Err(MetricsError::InvalidValue(1)));
        assert_eq!(Distribution::new(vec![f64::NAN]), Err(MetricsError::InvalidValue(0)));
    }

    #[test]
    fn gini_in_f32() {
        let d = Distribution::<f32>::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!((gini(&d).unwrap() - 2.0 / 9.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn gini_matches_pairwise_and_lorenz_area(v in prop::collection::vec(0.0f64..1000.0, 1..120)) {
            let d = dist(&v);
            let g = gini(&d).unwrap();
            prop_assert!((g - gini_pairwise(&v)).abs() < 1e-9);
            prop_assert!((g - lorenz(&d).unwrap().gini()).abs() < 1e-9);
            prop_assert!((0.0..1.0).contains(&g));
        }

        #[test]
        fn gini_scale_invariant(v in prop::collection::vec(0.0f64..100.0, 1..60), c in 0.01f64..100.0) {
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            prop_assert!((gini(&dist(&v)).unwrap() - gini(&dist(&scaled)).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn lorenz_below_diagonal_and_monotone(v in prop::collection::vec(0.0f64..50.0, 1..60)) {
            let c = lorenz(&dist(&v)).unwrap();
            for w in c.points.windows(2) {
                prop_assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1 - 1e-15);
            }
            for (x, y) in &c.points {
                prop_assert!(*y <= *x + 1e-12);
            }
        }
    }

    fn user(id: u64, is_pro: bool) -> User {
        User { id: UserId(id), is_pro }
    }

    fn photo(id: u64, owner: u64) -> Photo {
        Photo { id: PhotoId(id), owner: UserId(owner), title: String::new() }
    }

    #[test]
    fn table_rows_for_pro_with_photos() {
        let r = Records {
            users: vec![user(1, true), user(2, false)],
            photos: (1..=4).map(|p| photo(p, 1)).collect(),
            ..Default::default()
        };
        let s = functionality_stats::<f64>(&Dataset::from_records(r).unwrap());
        let photos = &s.rows[0];
        assert_eq!(photos.functionality, Functionality::Photos);
        assert_eq!(photos.total, 4);
        assert_eq!(photos.mean_active.all, Some(4.0));
        assert_eq!(photos.mean_active.non_pro, None);
        assert_eq!(photos.pct_zero.all, Some(50.0));
        assert_eq!(photos.pct_zero.pro, Some(0.0));
        assert_eq!(photos.pct_zero.non_pro, Some(100.0));
    }

    #[test]
    fn table_comment_rows() {
        let r = Records {
            users: vec![user(1, false), user(2, false)],
            photos: vec![photo(10, 2)],
            comments: (1..=3).map(|c| Comment { id: CommentId(c), author: UserId(1), photo: PhotoId(10) }).collect(),
            ..Default::default()
        };
        let s = functionality_stats::<f64>(&Dataset::from_records(r).unwrap());
        let given = &s.rows[3];
        assert_eq!(given.functionality, Functionality::CommentsGiven);
        assert_eq!(given.mean_active.all, Some(3.0));
        assert_eq!(given.pct_zero.all, Some(50.0));
    }

    #[test]
    fn empty_dataset_stats() {
        let s = functionality_stats::<f64>(&Dataset::empty());
        assert!(s.rows.iter().all(|r| r.total == 0 && r.mean_active.all.is_none() && r.pct_zero.all.is_none()));
        assert_eq!(segment_users::<f64>(&Dataset::empty()), Err(MetricsError::EmptyDataset));
    }

    #[test]
    fn segmentation_buckets() {
        // 1: inactive, 2: communication only, 3: photos only, 4: both; 5 only receives a contact
        let r = Records {
            users: (1..=5).map(|u| user(u, false)).collect(),
            photos: vec![photo(1, 3), photo(2, 4)],
            contacts: vec![ContactEdge { from: UserId(2), to: UserId(5) }],
            favorites: vec![Favorite { user: UserId(4), photo: PhotoId(1) }],
            ..Default::default()
        };
        let s = segment_users::<f64>(&Dataset::from_records(r).unwrap()).unwrap();
        assert_abs_diff_eq!(s.inactive, 0.4);
        assert_abs_diff_eq!(s.communication_only, 0.2);
        assert_abs_diff_eq!(s.photos_only, 0.2);
        assert_abs_diff_eq!(s.photos_and_communication, 0.2);

        let single = Dataset::from_records(Records { users: vec![user(1, false)], ..Default::default() }).unwrap();
        assert_eq!(segment_users::<f64>(&single).unwrap().inactive, 1.0);
    }

    #[test]
    fn coverage_examples() {
        let ids = |v: &[u64]| v.iter().map(|&i| PhotoId(i)).collect::<Vec<_>>();
        let c = id_coverage_bound::<f64>(&ids(&[74, 76, 77])).unwrap();
        assert_eq!((c.coverage, c.private_upper_bound), (0.75, 0.25));
        let c = id_coverage_bound::<f64>(&ids(&[10, 11, 12])).unwrap();
        assert_eq!((c.coverage, c.private_upper_bound), (1.0, 0.0));
        let c = id_coverage_bound::<f64>(&ids(&[222851183, 222851185])).unwrap();
        assert_abs_diff_eq!(c.private_upper_bound, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(id_coverage_bound::<f64>(&ids(&[5, 5])), Err(MetricsError::TooFewIds(1)));
    }

    #[test]
    fn competition_ranking_shares_best_rank() {
        assert_eq!(competition_ranks(&[5, 7, 5, 1]), vec![2, 1, 2, 4]);
        assert_eq!(competition_ranks(&[0, 0, 0]), vec![1, 1, 1]);
    }

    #[test]
    fn relations_and_reciprocity() {
        let (a, b, c) = (UserId(1), UserId(2), UserId(3));
        let r = DirectedRelation { kind: RelationKind::Contacts, pairs: [(a, b), (b, a), (a, c)].into() };
        assert_abs_diff_eq!(reciprocity_rate::<f64>(&r).unwrap(), 2.0 / 3.0);
        let none = DirectedRelation { kind: RelationKind::Contacts, pairs: [(a, b), (b, c)].into() };
        assert_eq!(reciprocity_rate::<f64>(&none).unwrap(), 0.0);
        let empty = DirectedRelation { kind: RelationKind::Commented, pairs: BTreeSet::new() };
        assert_eq!(reciprocity_rate::<f64>(&empty), Err(MetricsError::EmptyRelation));
        assert_eq!("likes".parse::<RelationKind>(), Err(MetricsError::InvalidKind("likes".into())));
    }

    #[test]
    fn commented_relation_collapses_and_skips_self() {
        let r = Records {
            users: vec![user(1, false), user(2, false)],
            photos: (1..=5).map(|p| photo(p, 2)).chain([photo(9, 1)]).collect(),
            comments: (1..=5)
                .map(|p| Comment { id: CommentId(p), author: UserId(1), photo: PhotoId(p) })
                .chain([Comment { id: CommentId(9), author: UserId(1), photo: PhotoId(9) }])
                .collect(),
            ..Default::default()
        };
        let d = Dataset::from_records(r).unwrap();
        let rel = derive_relation(&d, RelationKind::Commented);
        assert_eq!(rel.pairs, [(UserId(1), UserId(2))].into());
        assert!(derive_relation(&d, RelationKind::Favorited).pairs.is_empty());
    }
}
