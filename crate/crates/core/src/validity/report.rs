use super::external::{fowlkes_mallows, jaccard_index, pair_counts, rand_index, ReferenceLabels};
use super::internal::{c_index_with, davies_bouldin_with, dunn_with, silhouette_with};
use super::IndexError;
use crate::cluster::{compute_sse, Clustering};
use crate::dataset::{distance_matrix, Dataset};

/// Every quality measure for one clustering. A measure that cannot be
/// computed carries the reason instead of a value.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub dunn: Result<f64, IndexError>,
    pub davies_bouldin: Result<f64, IndexError>,
    pub c_index: Result<f64, IndexError>,
    pub silhouette: Result<f64, IndexError>,
    pub rand: Result<f64, IndexError>,
    pub jaccard: Result<f64, IndexError>,
    pub fowlkes_mallows: Result<f64, IndexError>,
    pub sse: Result<f64, IndexError>,
}

impl IndexReport {
    /// `(name, value)` pairs in report order.
    pub fn entries(&self) -> [(&'static str, &Result<f64, IndexError>); 8] {
        [
            ("dunn", &self.dunn),
            ("davies_bouldin", &self.davies_bouldin),
            ("c_index", &self.c_index),
            ("silhouette", &self.silhouette),
            ("rand", &self.rand),
            ("jaccard", &self.jaccard),
            ("fowlkes_mallows", &self.fowlkes_mallows),
            ("sse", &self.sse),
        ]
    }
}

/// Computes all internal measures and, when `labels` is given, the external
/// ones. The distance matrix is built once and shared.
pub fn full_report(data: &Dataset, clustering: &Clustering, labels: Option<&ReferenceLabels>) -> IndexReport {
    let sse = compute_sse(data, clustering).map_err(IndexError::from);
    let (dunn, davies_bouldin, c_index, silhouette) = if clustering.len() != data.len() {
        let err = Err(IndexError::LengthMismatch {
            expected: data.len(),
            found: clustering.len(),
        });
        (err.clone(), err.clone(), err.clone(), err)
    } else {
        let dm = distance_matrix(data);
        (
            dunn_with(&dm, clustering),
            davies_bouldin_with(&dm, clustering),
            c_index_with(&dm, clustering),
            silhouette_with(&dm, clustering),
        )
    };
    let (rand, jaccard, fowlkes_mallows) = match labels.map(|l| pair_counts(l, clustering)) {
        None => (
            Err(IndexError::NoReferenceLabels),
            Err(IndexError::NoReferenceLabels),
            Err(IndexError::NoReferenceLabels),
        ),
        Some(Err(e)) => (Err(e.clone()), Err(e.clone()), Err(e)),
        Some(Ok(pc)) => (rand_index(&pc), jaccard_index(&pc), fowlkes_mallows(&pc)),
    };
    IndexReport {
        dunn,
        davies_bouldin,
        c_index,
        silhouette,
        rand,
        jaccard,
        fowlkes_mallows,
        sse,
    }
}
