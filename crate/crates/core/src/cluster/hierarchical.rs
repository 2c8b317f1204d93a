use std::fmt;
use std::str::FromStr;

use super::{check_k, ClusterError, Clustering};
use crate::dataset::{distance_matrix, Dataset};

/// Inter-cluster distance used when two clusters merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Linkage {
    /// Minimum pairwise distance.
    #[default]
    Single,
    /// Maximum pairwise distance.
    Complete,
    /// Mean pairwise distance.
    Average,
}

impl Linkage {
    /// Distance from the union of `a` and `b` to a third cluster, given the
    /// distances from `a` and `b` to it.
    #[inline]
    fn combine(self, to_a: f64, to_b: f64, size_a: usize, size_b: usize) -> f64 {
        match self {
            Linkage::Single => to_a.min(to_b),
            Linkage::Complete => to_a.max(to_b),
            Linkage::Average => {
                let (sa, sb) = (size_a as f64, size_b as f64);
                (sa * to_a + sb * to_b) / (sa + sb)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Linkage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(format!("unknown linkage {other:?}")),
        }
    }
}

/// One agglomeration step: cluster `absorbed` merged into `survivor` at the
/// given linkage distance. Clusters are named by their lowest original row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub survivor: usize,
    pub absorbed: usize,
    pub distance: f64,
}

pub fn hierarchical(data: &Dataset, k_target: usize, linkage: Linkage) -> Result<Clustering, ClusterError> {
    hierarchical_traced(data, k_target, linkage).map(|(c, _)| c)
}

/// Agglomerative clustering on the full proximity matrix.
///
/// Starts from `m` singletons and repeatedly merges the closest pair of
/// clusters, updating the merged cluster's row of the matrix with the
/// linkage rule, until `k_target` clusters remain. Every step scans all
/// remaining pairs, so a run costs O(m^3) time and O(m^2) memory. Ties go to
/// the pair that comes first in row-major order.
pub fn hierarchical_traced(
    data: &Dataset,
    k_target: usize,
    linkage: Linkage,
) -> Result<(Clustering, Vec<Merge>), ClusterError> {
    check_k(data, k_target)?;
    let m = data.len();
    let matrix = distance_matrix(data);
    let mut dist: Vec<f64> = (0..m).flat_map(|i| matrix.row(i).to_vec()).collect();
    drop(matrix);

    let mut active: Vec<usize> = (0..m).collect();
    let mut size = vec![1usize; m];
    let mut owner: Vec<usize> = (0..m).collect();
    let mut members: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    let mut merges = Vec::with_capacity(m - k_target);

    while active.len() > k_target {
        let (mut best, mut bp, mut bq) = (f64::INFINITY, 0, 1);
        for p in 0..active.len() {
            let row = &dist[active[p] * m..(active[p] + 1) * m];
            for (q, &c) in active.iter().enumerate().skip(p + 1) {
                let d = row[c];
                if d < best {
                    (best, bp, bq) = (d, p, q);
                }
            }
        }

        let (a, b) = (active[bp], active[bq]);
        for &c in &active {
            if c == a || c == b {
                continue;
            }
            let merged = linkage.combine(dist[a * m + c], dist[b * m + c], size[a], size[b]);
            dist[a * m + c] = merged;
            dist[c * m + a] = merged;
        }
        active.remove(bq);
        size[a] += size[b];
        let moved = std::mem::take(&mut members[b]);
        for &i in &moved {
            owner[i] = a;
        }
        members[a].extend(moved);
        merges.push(Merge {
            survivor: a,
            absorbed: b,
            distance: best,
        });
    }

    Ok((Clustering::from_ids(&owner), merges))
}
