use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::HarnessError;
use crate::dataset::Dataset;
use crate::validity::ReferenceLabels;

/// Isotropic Gaussian blobs with known membership.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub clusters: usize,
    pub per_cluster: usize,
    pub dim: usize,
    /// Distance between neighboring blob centers.
    pub spread: f64,
    /// Per-coordinate standard deviation inside a blob.
    pub scale: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(clusters: usize, per_cluster: usize, dim: usize, seed: u64) -> Self {
        SyntheticSpec {
            clusters,
            per_cluster,
            dim,
            spread: 10.0,
            scale: 1.0,
            seed,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |what: &str| Err(HarnessError::InvalidSpec(what.to_owned()));
        if self.clusters == 0 || self.per_cluster == 0 || self.dim == 0 {
            return bad("clusters, per_cluster and dim must be positive");
        }
        if !(self.spread.is_finite() && self.spread > 0.0) {
            return bad("spread must be positive");
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return bad("scale must be positive");
        }
        Ok(())
    }
}

/// Blob centers are distinct vertices of an integer lattice scaled by
/// `spread`, so no two centers are closer than `spread`. Only the first
/// (at most 16) coordinates vary between centers.
fn lattice_centers(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let varying = spec.dim.min(16);
    let mut side = 2usize;
    while side.pow(varying as u32) < 2 * spec.clusters {
        side += 1;
    }
    let cells = side.pow(varying as u32);
    sample(rng, cells, spec.clusters)
        .into_iter()
        .map(|mut cell| {
            let mut center = vec![0.0; spec.dim];
            for c in center.iter_mut().take(varying) {
                *c = (cell % side) as f64 * spec.spread;
                cell /= side;
            }
            center
        })
        .collect()
}

/// Generates `clusters * per_cluster` points, blob by blob; each point's
/// reference label is its blob.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(Dataset, ReferenceLabels), HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers = lattice_centers(spec, &mut rng);
    let noise = Normal::new(0.0, spec.scale).expect("scale validated");
    let m = spec.clusters * spec.per_cluster;
    let mut values = Vec::with_capacity(m * spec.dim);
    let mut ids = Vec::with_capacity(m);
    for (blob, center) in centers.iter().enumerate() {
        for _ in 0..spec.per_cluster {
            values.extend(center.iter().map(|c| c + noise.sample(&mut rng)));
            ids.push(blob);
        }
    }
    let data = Dataset::from_flat(values, m, spec.dim)?;
    Ok((data, ReferenceLabels::from_ids(&ids)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::squared_distance;

    #[test]
    fn sizes_and_labels() {
        let (data, labels) = generate_synthetic(&SyntheticSpec::new(3, 10, 5, 1)).unwrap();
        assert_eq!((data.len(), data.dim()), (30, 5));
        assert_eq!(labels.class_count(), 3);
        assert_eq!(labels.to_clustering().cluster_sizes(), [10, 10, 10]);
    }

    #[test]
    fn seeded_output_is_identical() {
        let spec = SyntheticSpec::new(4, 7, 3, 99);
        assert_eq!(generate_synthetic(&spec).unwrap(), generate_synthetic(&spec).unwrap());
        let other = SyntheticSpec { seed: 100, ..spec };
        assert_ne!(
            generate_synthetic(&spec).unwrap().0,
            generate_synthetic(&other).unwrap().0
        );
    }

    #[test]
    fn centers_are_at_least_spread_apart() {
        for (k, dim) in [(5, 1), (5, 10), (30, 2), (3, 40)] {
            let spec = SyntheticSpec::new(k, 1, dim, 7);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let centers = lattice_centers(&spec, &mut rng);
            for i in 0..k {
                for j in (i + 1)..k {
                    let d2 = squared_distance(&centers[i], &centers[j]).unwrap();
                    assert!(d2 >= spec.spread * spec.spread, "k={k} dim={dim}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = SyntheticSpec {
            scale: 0.0,
            ..SyntheticSpec::new(2, 2, 2, 0)
        };
        assert!(matches!(generate_synthetic(&spec), Err(HarnessError::InvalidSpec(_))));
    }
}
