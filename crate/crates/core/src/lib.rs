//! Clustering and cluster-validity toolkit for web usage sessions.
//!
//! * [`logs`] turns NCSA access logs into a session x URL dwell-time matrix.
//! * [`cluster`] holds k-Means, k-Medoids, Leader, agglomerative and DBSCAN.
//! * [`validity`] scores a clustering with Dunn, Davies-Bouldin, C,
//!   Silhouette, Rand, Jaccard, Fowlkes-Mallows and SSE.
//! * [`harness`] runs parameter sweeps, generates labeled synthetic data and
//!   cross-checks everything against brute-force oracles.

pub mod cluster;
pub mod dataset;
pub mod harness;
pub mod io;
pub mod logs;
pub mod validity;

pub use cluster::{
    compute_sse, dbscan, hierarchical, kmeans, kmedoids, leader, ClusterError, Clustering, KMeansParams,
    KMedoidsParams, Label, Linkage, MedoidUpdate, RepresentativeKind, Representatives,
};
pub use dataset::{distance, distance_matrix, squared_distance, DataError, Dataset, DistanceMatrix};
pub use harness::{generate_synthetic, run_sweep, HarnessError, ResultRow, SweepConfig, SyntheticSpec};
pub use logs::{parse_log_line, preprocess, LogEntry, LogError, LogFormat, PipelineConfig, Session, UrlVocabulary};
pub use validity::{full_report, IndexError, IndexReport, PairCounts, ReferenceLabels};
