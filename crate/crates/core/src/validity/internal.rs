use super::IndexError;
use crate::cluster::Clustering;
use crate::dataset::{distance_matrix, Dataset, DistanceMatrix};

fn check_len(expected: usize, clustering: &Clustering) -> Result<(), IndexError> {
    if clustering.len() != expected {
        return Err(IndexError::LengthMismatch {
            expected,
            found: clustering.len(),
        });
    }
    Ok(())
}

fn with_matrix<T>(
    data: &Dataset,
    clustering: &Clustering,
    f: impl FnOnce(&DistanceMatrix, &Clustering) -> Result<T, IndexError>,
) -> Result<T, IndexError> {
    check_len(data.len(), clustering)?;
    f(&distance_matrix(data), clustering)
}

/// Cluster diameters and the `k x k` matrix of minimum inter-cluster pair
/// distances (diagonal unused), noise skipped.
fn diameters_and_separations(dm: &DistanceMatrix, clustering: &Clustering) -> (Vec<f64>, Vec<f64>) {
    let k = clustering.k();
    let labels = clustering.labels();
    let mut diam = vec![0.0f64; k];
    let mut sep = vec![f64::INFINITY; k * k];
    for i in 0..labels.len() {
        let Some(ci) = labels[i].cluster() else { continue };
        let row = dm.row(i);
        for (j, lj) in labels.iter().enumerate().skip(i + 1) {
            let Some(cj) = lj.cluster() else { continue };
            let d = row[j];
            if ci == cj {
                diam[ci] = diam[ci].max(d);
            } else {
                let (lo, hi) = (ci.min(cj), ci.max(cj));
                let s = &mut sep[lo * k + hi];
                *s = s.min(d);
                sep[hi * k + lo] = *s;
            }
        }
    }
    (diam, sep)
}

fn require_two_clusters(clustering: &Clustering) -> Result<usize, IndexError> {
    match clustering.k() {
        k if k >= 2 => Ok(k),
        found => Err(IndexError::TooFewClusters { found }),
    }
}

/// Dunn's index: the smallest inter-cluster distance (closest pair of points
/// from different clusters) divided by the largest cluster diameter.
pub fn dunn(data: &Dataset, clustering: &Clustering) -> Result<f64, IndexError> {
    with_matrix(data, clustering, dunn_with)
}

pub fn dunn_with(dm: &DistanceMatrix, clustering: &Clustering) -> Result<f64, IndexError> {
    check_len(dm.len(), clustering)?;
    require_two_clusters(clustering)?;
    let (diam, sep) = diameters_and_separations(dm, clustering);
    let max_diam = diam.iter().copied().fold(0.0, f64::max);
    if max_diam == 0.0 {
        return Err(IndexError::DegenerateDiameter);
    }
    let min_sep = sep.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min_sep / max_diam)
}

/// Davies-Bouldin in its diameter form: the mean over clusters of the worst
/// `(diam_i + diam_j) / dist_ij`, where `dist_ij` is the closest-pair
/// distance between the two clusters.
pub fn davies_bouldin(data: &Dataset, clustering: &Clustering) -> Result<f64, IndexError> {
    with_matrix(data, clustering, davies_bouldin_with)
}

pub fn davies_bouldin_with(dm: &DistanceMatrix, clustering: &Clustering) -> Result<f64, IndexError> {
    check_len(dm.len(), clustering)?;
    let k = require_two_clusters(clustering)?;
    let (diam, sep) = diameters_and_separations(dm, clustering);
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let s = sep[i * k + j];
            if s == 0.0 {
                return Err(IndexError::ZeroSeparation);
            }
            worst = worst.max((diam[i] + diam[j]) / s);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// C index `(S - S_min) / (S_max - S_min)`.
///
/// `S` sums the distances of the `m'` within-cluster pairs; `S_min` and
/// `S_max` sum the `m'` smallest and largest distances over all pairs of
/// non-noise points.
pub fn c_index(data: &Dataset, clustering: &Clustering) -> Result<f64, IndexError> {
    with_matrix(data, clustering, c_index_with)
}

pub fn c_index_with(dm: &DistanceMatrix, clustering: &Clustering) -> Result<f64, IndexError> {
    check_len(dm.len(), clustering)?;
    let labels = clustering.labels();
    let mut all = Vec::new();
    let (mut within_sum, mut within_pairs) = (0.0, 0usize);
    for i in 0..labels.len() {
        let Some(ci) = labels[i].cluster() else { continue };
        for (j, lj) in labels.iter().enumerate().skip(i + 1) {
            let Some(cj) = lj.cluster() else { continue };
            let d = dm.get(i, j);
            all.push(d);
            if ci == cj {
                within_sum += d;
                within_pairs += 1;
            }
        }
    }
    if within_pairs == 0 {
        return Err(IndexError::NoIntraPairs);
    }
    all.sort_unstable_by(f64::total_cmp);
    // S_min == S_max exactly when every pair is intra-cluster or all
    // distances coincide; testing this directly avoids rounding noise.
    if within_pairs == all.len() || all[0] == all[all.len() - 1] {
        return Err(IndexError::DegenerateSpread);
    }
    let s_min: f64 = all[..within_pairs].iter().sum();
    let s_max: f64 = all[all.len() - within_pairs..].iter().sum();
    Ok(((within_sum - s_min) / (s_max - s_min)).clamp(0.0, 1.0))
}

/// Mean silhouette width over all non-noise points. A point alone in its
/// cluster scores 0.
pub fn silhouette(data: &Dataset, clustering: &Clustering) -> Result<f64, IndexError> {
    with_matrix(data, clustering, silhouette_with)
}

pub fn silhouette_with(dm: &DistanceMatrix, clustering: &Clustering) -> Result<f64, IndexError> {
    check_len(dm.len(), clustering)?;
    let k = require_two_clusters(clustering)?;
    let sizes = clustering.cluster_sizes();
    let labels = clustering.labels();
    let mut sums = vec![0.0; k];
    let (mut total, mut counted) = (0.0, 0usize);
    for (i, li) in labels.iter().enumerate() {
        let Some(own) = li.cluster() else { continue };
        counted += 1;
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, lj) in labels.iter().enumerate() {
            if let Some(c) = lj.cluster() {
                sums[c] += dm.get(i, j);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let scale = a.max(b);
        if scale > 0.0 {
            total += (b - a) / scale;
        }
    }
    Ok(total / counted as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = points.iter().map(|&p| [p]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    fn two_pairs() -> (Dataset, Clustering) {
        (line(&[0.0, 1.0, 10.0, 11.0]), Clustering::from_ids(&[0, 0, 1, 1]))
    }

    #[test]
    fn dunn_examples() {
        let (data, c) = two_pairs();
        assert_eq!(dunn(&data, &c).unwrap(), 9.0);
        let singles = Clustering::from_ids(&[0, 1, 2, 3]);
        assert_eq!(dunn(&data, &singles), Err(IndexError::DegenerateDiameter));
        let one = Clustering::from_ids(&[0, 0, 0, 0]);
        assert_eq!(dunn(&data, &one), Err(IndexError::TooFewClusters { found: 1 }));
    }

    #[test]
    fn davies_bouldin_examples() {
        let (data, c) = two_pairs();
        let db = davies_bouldin(&data, &c).unwrap();
        assert!((db - 4.0 / 18.0).abs() < 1e-15);
        let dup = line(&[3.0, 3.0, 7.0]);
        let split = Clustering::from_ids(&[0, 1, 1]);
        assert_eq!(davies_bouldin(&dup, &split), Err(IndexError::ZeroSeparation));
    }

    #[test]
    fn c_index_examples() {
        let (data, c) = two_pairs();
        assert_eq!(c_index(&data, &c).unwrap(), 0.0);
        let crossed = Clustering::from_ids(&[0, 1, 0, 1]);
        assert!((c_index(&data, &crossed).unwrap() - 18.0 / 19.0).abs() < 1e-15);
        let singles = Clustering::from_ids(&[0, 1, 2, 3]);
        assert_eq!(c_index(&data, &singles), Err(IndexError::NoIntraPairs));
        let flat = line(&[2.0, 2.0, 2.0]);
        assert_eq!(
            c_index(&flat, &Clustering::from_ids(&[0, 0, 1])),
            Err(IndexError::DegenerateSpread)
        );
    }

    #[test]
    fn silhouette_examples() {
        let data = line(&[0.0, 0.0, 10.0, 10.0]);
        let c = Clustering::from_ids(&[0, 0, 1, 1]);
        assert_eq!(silhouette(&data, &c).unwrap(), 1.0);

        // point 0 in {{0,1},{10,11}}: a = 1, b = 10.5
        let (data, c) = two_pairs();
        let s0 = (10.5 - 1.0) / 10.5;
        let s1 = (9.5 - 1.0) / 9.5;
        let expected = (s0 + s1 + s1 + s0) / 4.0;
        assert!((silhouette(&data, &c).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn silhouette_singletons_score_zero() {
        let data = line(&[0.0, 1.0, 20.0]);
        let c = Clustering::from_ids(&[0, 0, 1]);
        // a = 1 for both paired points, b = 20 and 19; the singleton scores 0
        let expected = ((1.0 - 1.0 / 20.0) + (1.0 - 1.0 / 19.0)) / 3.0;
        assert!((silhouette(&data, &c).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn noise_is_ignored_by_internal_indices() {
        let data = line(&[0.0, 1.0, 10.0, 11.0, 500.0]);
        let c = Clustering::from_signed_ids(&[0, 0, 1, 1, -1]);
        assert_eq!(dunn(&data, &c).unwrap(), 9.0);
        assert_eq!(c_index(&data, &c).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch() {
        let (data, _) = two_pairs();
        let short = Clustering::from_ids(&[0, 1]);
        assert_eq!(
            dunn(&data, &short),
            Err(IndexError::LengthMismatch { expected: 4, found: 2 })
        );
    }
}
