use std::collections::HashMap;
use std::hash::Hash;

use super::IndexError;
use crate::cluster::{Clustering, Label};

/// Reference class labels, renumbered densely `0..classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceLabels {
    classes: Vec<usize>,
    count: usize,
}

impl ReferenceLabels {
    /// Maps arbitrary class ids to dense ids by first appearance.
    pub fn from_ids<T: Hash + Eq + Clone>(ids: &[T]) -> Self {
        let mut map: HashMap<T, usize> = HashMap::new();
        let classes = ids
            .iter()
            .map(|id| {
                let next = map.len();
                *map.entry(id.clone()).or_insert(next)
            })
            .collect();
        ReferenceLabels {
            classes,
            count: map.len(),
        }
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The labels read as a partition, for scoring them with internal indices.
    pub fn to_clustering(&self) -> Clustering {
        Clustering::from_ids(&self.classes)
    }
}

/// Pair agreement counts between reference classes and clusters.
///
/// * `a`: same class, same cluster
/// * `b`: same class, different clusters
/// * `c`: different classes, same cluster
/// * `d`: different classes, different clusters
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Counts pair agreements through the class x cluster contingency table.
/// Noise points are singleton clusters.
pub fn pair_counts(labels: &ReferenceLabels, clustering: &Clustering) -> Result<PairCounts, IndexError> {
    let m = labels.len();
    if clustering.len() != m {
        return Err(IndexError::LengthMismatch {
            expected: m,
            found: clustering.len(),
        });
    }
    let k = clustering.k();
    let cluster_key = |i: usize, l: Label| match l {
        Label::Cluster(c) => c,
        Label::Noise => k + i,
    };

    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut by_class = vec![0u64; labels.class_count()];
    let mut by_cluster: HashMap<usize, u64> = HashMap::new();
    for (i, (&class, &l)) in labels.classes().iter().zip(clustering.labels()).enumerate() {
        let key = cluster_key(i, l);
        *joint.entry((class, key)).or_default() += 1;
        by_class[class] += 1;
        *by_cluster.entry(key).or_default() += 1;
    }

    let a: u64 = joint.values().map(|&n| pairs(n)).sum();
    let same_class: u64 = by_class.iter().map(|&n| pairs(n)).sum();
    let same_cluster: u64 = by_cluster.values().map(|&n| pairs(n)).sum();
    let b = same_class - a;
    let c = same_cluster - a;
    let d = pairs(m as u64) - a - b - c;
    Ok(PairCounts { a, b, c, d })
}

/// Fraction of pairs on which the two partitions agree.
pub fn rand_index(pc: &PairCounts) -> Result<f64, IndexError> {
    match pc.total() {
        0 => Err(IndexError::NoPairs),
        total => Ok((pc.a + pc.d) as f64 / total as f64),
    }
}

pub fn jaccard_index(pc: &PairCounts) -> Result<f64, IndexError> {
    match pc.a + pc.b + pc.c {
        0 => Err(IndexError::Undefined("no pair shares a class or a cluster")),
        denom => Ok(pc.a as f64 / denom as f64),
    }
}

/// Geometric mean of the two conditional pair precisions
/// `a / (a + b)` and `a / (a + c)`.
pub fn fowlkes_mallows(pc: &PairCounts) -> Result<f64, IndexError> {
    if pc.a + pc.b == 0 {
        return Err(IndexError::Undefined("no pair shares a class"));
    }
    if pc.a + pc.c == 0 {
        return Err(IndexError::Undefined("no pair shares a cluster"));
    }
    let p_class = pc.a as f64 / (pc.a + pc.b) as f64;
    let p_cluster = pc.a as f64 / (pc.a + pc.c) as f64;
    Ok((p_class * p_cluster).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abab() -> ReferenceLabels {
        ReferenceLabels::from_ids(&["A", "A", "B", "B"])
    }

    #[test]
    fn all_in_one_cluster() {
        let pc = pair_counts(&abab(), &Clustering::from_ids(&[0, 0, 0, 0])).unwrap();
        assert_eq!(pc, PairCounts { a: 2, b: 0, c: 4, d: 0 });
        assert!((rand_index(&pc).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        assert!((jaccard_index(&pc).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        assert!((fowlkes_mallows(&pc).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn identical_partitions_score_one() {
        let pc = pair_counts(&abab(), &Clustering::from_ids(&[7, 7, 3, 3])).unwrap();
        assert_eq!((pc.b, pc.c), (0, 0));
        assert_eq!(rand_index(&pc), Ok(1.0));
        assert_eq!(jaccard_index(&pc), Ok(1.0));
        assert_eq!(fowlkes_mallows(&pc), Ok(1.0));
    }

    #[test]
    fn noise_points_are_singletons() {
        let labels = ReferenceLabels::from_ids(&[0, 0, 0]);
        let c = Clustering::from_signed_ids(&[-1, -1, 0]);
        let pc = pair_counts(&labels, &c).unwrap();
        assert_eq!(pc, PairCounts { a: 0, b: 3, c: 0, d: 0 });
    }

    #[test]
    fn undefined_cases() {
        let singles = ReferenceLabels::from_ids(&[0, 1, 2]);
        let pc = pair_counts(&singles, &Clustering::from_ids(&[0, 1, 2])).unwrap();
        assert_eq!(rand_index(&pc), Ok(1.0));
        assert!(matches!(jaccard_index(&pc), Err(IndexError::Undefined(_))));
        assert!(matches!(fowlkes_mallows(&pc), Err(IndexError::Undefined(_))));

        let one = ReferenceLabels::from_ids(&[0]);
        let pc = pair_counts(&one, &Clustering::from_ids(&[0])).unwrap();
        assert_eq!(rand_index(&pc), Err(IndexError::NoPairs));
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            pair_counts(&abab(), &Clustering::from_ids(&[0, 0])),
            Err(IndexError::LengthMismatch { expected: 4, found: 2 })
        );
    }
}
