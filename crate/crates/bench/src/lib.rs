//! Shared fixtures for the benchmarks under `benches/`.

use webclust::{generate_synthetic, Dataset, ReferenceLabels, SyntheticSpec};

/// Five well-separated Gaussian blobs holding `m` points in total.
pub fn blobs(m: usize, dim: usize) -> (Dataset, ReferenceLabels) {
    let spec = SyntheticSpec::new(5, m.div_ceil(5), dim, 17);
    generate_synthetic(&spec).expect("valid synthetic spec")
}
