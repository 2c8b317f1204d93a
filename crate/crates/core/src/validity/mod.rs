//! Cluster-quality measures.
//!
//! Internal indices (Dunn, Davies-Bouldin, C, Silhouette) use plain
//! Euclidean distances and ignore noise points. External indices (Rand,
//! Jaccard, Fowlkes-Mallows) compare against reference class labels through
//! [`PairCounts`]; there every noise point counts as its own singleton
//! cluster.

mod external;
mod internal;
mod report;

pub use external::{fowlkes_mallows, jaccard_index, pair_counts, rand_index, PairCounts, ReferenceLabels};
pub use internal::{
    c_index, c_index_with, davies_bouldin, davies_bouldin_with, dunn, dunn_with, silhouette, silhouette_with,
};
pub use report::{full_report, IndexReport};

use thiserror::Error;

use crate::cluster::ClusterError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("needs at least two clusters, found {found}")]
    TooFewClusters { found: usize },
    #[error("every cluster has zero diameter")]
    DegenerateDiameter,
    #[error("two clusters are at zero distance")]
    ZeroSeparation,
    #[error("no cluster has two members")]
    NoIntraPairs,
    #[error("smallest and largest pair sums coincide")]
    DegenerateSpread,
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("fewer than two points")]
    NoPairs,
    #[error("index undefined: {0}")]
    Undefined(&'static str),
    #[error("no reference labels supplied")]
    NoReferenceLabels,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}
