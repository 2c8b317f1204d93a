//! The five partitioning procedures and the [`Clustering`] they produce.
//!
//! Distance conventions follow the objective each method optimizes:
//!
//! * k-Means and k-Medoids assign by squared distance and report the
//!   within-cluster sum of squares as their objective.
//! * Leader joins a point to its nearest leader when the *squared* distance
//!   is strictly below `alpha`.
//! * DBSCAN neighborhoods contain every point whose *squared* distance is at
//!   most `eps`. Most DBSCAN libraries threshold the unsquared distance, so
//!   `eps` here corresponds to their `eps^2`.
//! * Agglomerative linkages work on unsquared distances.
//!
//! Ties in nearest-representative searches go to the lowest cluster index.

mod dbscan;
mod hierarchical;
mod kmeans;
mod kmedoids;
mod leader;

pub use dbscan::dbscan;
pub use hierarchical::{hierarchical, hierarchical_traced, Linkage, Merge};
pub use kmeans::{kmeans, kmeans_traced, KMeansParams, KMeansTrace};
pub use kmedoids::{kmedoids, kmedoids_traced, KMedoidsParams, KMedoidsTrace, MedoidUpdate};
pub use leader::leader;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::dataset::{sq_dist, Dataset};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClusterError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("k = {k} exceeds the number of points m = {m}")]
    KTooLarge { k: usize, m: usize },
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("assignment has {found} entries but the dataset has {expected} points")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cluster id {0} has no members")]
    UnoccupiedCluster(usize),
    #[error("every point is noise")]
    AllNoise,
}

/// Cluster membership of one point. `Noise` is only produced by DBSCAN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Cluster(usize),
    Noise,
}

impl Label {
    pub fn cluster(self) -> Option<usize> {
        match self {
            Label::Cluster(c) => Some(c),
            Label::Noise => None,
        }
    }

    pub fn is_noise(self) -> bool {
        self == Label::Noise
    }

    /// The CSV encoding: cluster id, or `-1` for noise.
    pub fn as_i64(self) -> i64 {
        match self {
            Label::Cluster(c) => c as i64,
            Label::Noise => -1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentativeKind {
    Centroid,
    Medoid,
    Leader,
}

impl RepresentativeKind {
    pub fn name(self) -> &'static str {
        match self {
            RepresentativeKind::Centroid => "centroid",
            RepresentativeKind::Medoid => "medoid",
            RepresentativeKind::Leader => "leader",
        }
    }
}

/// Per-cluster representative vectors. For medoids and leaders `rows` holds
/// the dataset row each representative was copied from.
#[derive(Debug, Clone, PartialEq)]
pub struct Representatives {
    pub kind: RepresentativeKind,
    pub points: Vec<Vec<f64>>,
    pub rows: Option<Vec<usize>>,
}

impl Representatives {
    pub(crate) fn from_rows(kind: RepresentativeKind, data: &Dataset, rows: Vec<usize>) -> Self {
        let points = rows.iter().map(|&r| data.row(r).to_vec()).collect();
        Representatives {
            kind,
            points,
            rows: Some(rows),
        }
    }
}

/// A hard partition of `m` points into `k` non-empty clusters plus optional
/// noise. Equivalent to an `m x k` membership matrix whose rows sum to one
/// (or zero, for noise points).
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    labels: Vec<Label>,
    k: usize,
    representatives: Option<Representatives>,
    objective: Option<f64>,
}

impl Clustering {
    /// Validates that the cluster ids are exactly `0..k` with every id used.
    pub fn new(labels: Vec<Label>) -> Result<Self, ClusterError> {
        let k = labels.iter().filter_map(|l| l.cluster()).max().map_or(0, |c| c + 1);
        let mut seen = vec![false; k];
        for c in labels.iter().filter_map(|l| l.cluster()) {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(ClusterError::UnoccupiedCluster(missing));
        }
        Ok(Clustering {
            labels,
            k,
            representatives: None,
            objective: None,
        })
    }

    /// Builds a clustering from arbitrary ids, renumbered by first appearance.
    pub fn from_ids(ids: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels = ids
            .iter()
            .map(|id| {
                let next = map.len();
                Label::Cluster(*map.entry(*id).or_insert(next))
            })
            .collect();
        Clustering {
            labels,
            k: map.len(),
            representatives: None,
            objective: None,
        }
    }

    /// Builds a clustering from signed ids where any negative id is noise.
    /// Non-negative ids are compacted in ascending order, so an already
    /// contiguous numbering is kept as is.
    pub fn from_signed_ids(ids: &[i64]) -> Self {
        let mut distinct: Vec<i64> = ids.iter().copied().filter(|&i| i >= 0).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let labels = ids
            .iter()
            .map(|&id| {
                if id < 0 {
                    Label::Noise
                } else {
                    Label::Cluster(distinct.binary_search(&id).expect("id collected above"))
                }
            })
            .collect();
        Clustering {
            labels,
            k: distinct.len(),
            representatives: None,
            objective: None,
        }
    }

    pub(crate) fn from_parts(
        labels: Vec<Label>,
        k: usize,
        representatives: Option<Representatives>,
        objective: Option<f64>,
    ) -> Self {
        debug_assert!(Clustering::new(labels.clone()).is_ok_and(|c| c.k == k));
        Clustering {
            labels,
            k,
            representatives,
            objective,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Number of non-empty clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points covered, including noise.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn representatives(&self) -> Option<&Representatives> {
        self.representatives.as_ref()
    }

    /// The objective the producing algorithm minimized, if it has one.
    pub fn objective(&self) -> Option<f64> {
        self.objective
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_noise()).count()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for c in self.labels.iter().filter_map(|l| l.cluster()) {
            sizes[c] += 1;
        }
        sizes
    }

    /// Member indices of every cluster, in cluster-id order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (i, c) in self.labels.iter().enumerate() {
            if let Some(c) = c.cluster() {
                groups[c].push(i);
            }
        }
        groups
    }

    /// The binary membership matrix `U`, one row per point.
    pub fn membership_matrix(&self) -> Vec<Vec<u8>> {
        self.labels
            .iter()
            .map(|l| {
                let mut row = vec![0u8; self.k];
                if let Some(c) = l.cluster() {
                    row[c] = 1;
                }
                row
            })
            .collect()
    }

    /// Labels renumbered by first appearance; two clusterings describe the
    /// same partition iff their canonical labels are equal.
    pub fn canonical_labels(&self) -> Vec<Label> {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        self.labels
            .iter()
            .map(|l| match l {
                Label::Noise => Label::Noise,
                Label::Cluster(c) => {
                    if map[*c] == usize::MAX {
                        map[*c] = next;
                        next += 1;
                    }
                    Label::Cluster(map[*c])
                }
            })
            .collect()
    }

    pub fn same_partition(&self, other: &Clustering) -> bool {
        self.canonical_labels() == other.canonical_labels()
    }
}

pub(crate) fn check_k(data: &Dataset, k: usize) -> Result<(), ClusterError> {
    if data.is_empty() {
        return Err(ClusterError::EmptyDataset);
    }
    if k == 0 {
        return Err(ClusterError::InvalidParameter { name: "k", value: 0.0 });
    }
    if k > data.len() {
        return Err(ClusterError::KTooLarge { k, m: data.len() });
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), ClusterError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ClusterError::InvalidParameter { name, value })
    }
}

/// Index of the nearest representative by squared distance; ties go to the
/// lowest index.
#[inline]
pub(crate) fn nearest<'a>(point: &[f64], reps: impl Iterator<Item = &'a [f64]>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, rep) in reps.enumerate() {
        let d = sq_dist(point, rep);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((j, d));
        }
    }
    best
}

/// Within-cluster sum of squared distances to each cluster's mean.
/// Noise points are left out.
pub fn compute_sse(data: &Dataset, clustering: &Clustering) -> Result<f64, ClusterError> {
    if clustering.len() != data.len() {
        return Err(ClusterError::LengthMismatch {
            expected: data.len(),
            found: clustering.len(),
        });
    }
    if clustering.k() == 0 {
        return Err(ClusterError::AllNoise);
    }
    let means = cluster_means(data, clustering.labels(), clustering.k());
    Ok(clustering
        .labels()
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.cluster().map(|c| sq_dist(data.row(i), &means[c])))
        .sum())
}

pub(crate) fn cluster_means(data: &Dataset, labels: &[Label], k: usize) -> Vec<Vec<f64>> {
    let n = data.dim();
    let mut sums = vec![vec![0.0; n]; k];
    let mut counts = vec![0usize; k];
    for (i, l) in labels.iter().enumerate() {
        if let Some(c) = l.cluster() {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(data.row(i)) {
                *s += x;
            }
        }
    }
    for (sum, &count) in sums.iter_mut().zip(&counts) {
        if count > 0 {
            let inv = count as f64;
            sum.iter_mut().for_each(|s| *s /= inv);
        }
    }
    sums
}
