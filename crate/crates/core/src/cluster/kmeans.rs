use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_k, check_positive, nearest, ClusterError, Clustering, Label, RepresentativeKind, Representatives};
use crate::dataset::{sq_dist, Dataset};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansParams {
    pub k: usize,
    pub seed: u64,
    /// Stop once the objective moves by less than this between iterations.
    pub tol: f64,
    pub max_iter: usize,
}

impl KMeansParams {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansParams {
            k,
            seed,
            tol: 1e-9,
            max_iter: 100,
        }
    }
}

/// Objective values recorded during a k-Means run: one entry after every
/// assignment half-step and one after every centroid update, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansTrace {
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn kmeans(data: &Dataset, params: &KMeansParams) -> Result<Clustering, ClusterError> {
    kmeans_traced(data, params).map(|(c, _)| c)
}

/// Lloyd iteration from `k` distinct seeded-random rows.
///
/// Each iteration assigns every point to its nearest centroid, then moves
/// each centroid to the mean of its members. The loop ends when the
/// assignment stops changing, when the objective changes by less than
/// `tol`, or after `max_iter` iterations. A cluster left empty by the
/// assignment step takes over the point farthest from its own centroid.
pub fn kmeans_traced(data: &Dataset, params: &KMeansParams) -> Result<(Clustering, KMeansTrace), ClusterError> {
    check_k(data, params.k)?;
    check_positive("tol", params.tol)?;
    if params.max_iter == 0 {
        return Err(ClusterError::InvalidParameter {
            name: "max_iter",
            value: 0.0,
        });
    }
    let (m, n, k) = (data.len(), data.dim(), params.k);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut centroids: Vec<f64> = rand::seq::index::sample(&mut rng, m, k)
        .into_iter()
        .flat_map(|r| data.row(r).iter().copied())
        .collect();

    let mut assign = vec![usize::MAX; m];
    let mut trace = Vec::new();
    let mut prev_objective: Option<f64> = None;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < params.max_iter {
        iterations += 1;

        let mut next: Vec<usize> = data
            .rows()
            .map(|x| nearest(x, centroids.chunks_exact(n)).expect("k >= 1").0)
            .collect();
        repair_empty(data, &mut next, &mut centroids, k);
        let changed = next != assign;
        assign = next;
        push_monotone(&mut trace, objective(data, &centroids, &assign));

        update_centroids(data, &assign, &mut centroids, k);
        let j = objective(data, &centroids, &assign);
        push_monotone(&mut trace, j);

        if !changed || prev_objective.is_some_and(|p| (p - j).abs() < params.tol) {
            converged = true;
            break;
        }
        prev_objective = Some(j);
    }

    let labels = assign.into_iter().map(Label::Cluster).collect();
    let points = centroids.chunks_exact(n).map(<[f64]>::to_vec).collect();
    let final_objective = *trace.last().expect("at least one iteration");
    let clustering = Clustering::from_parts(
        labels,
        k,
        Some(Representatives {
            kind: RepresentativeKind::Centroid,
            points,
            rows: None,
        }),
        Some(final_objective),
    );
    Ok((
        clustering,
        KMeansTrace {
            objective: trace,
            iterations,
            converged,
        },
    ))
}

fn push_monotone(trace: &mut Vec<f64>, j: f64) {
    if let Some(&prev) = trace.last() {
        debug_assert!(
            j <= prev + 1e-9 * prev.abs().max(1.0),
            "k-means objective increased: {prev} -> {j}"
        );
    }
    trace.push(j);
}

fn objective(data: &Dataset, centroids: &[f64], assign: &[usize]) -> f64 {
    let n = data.dim();
    data.rows()
        .zip(assign)
        .map(|(x, &c)| sq_dist(x, &centroids[c * n..(c + 1) * n]))
        .sum()
}

fn update_centroids(data: &Dataset, assign: &[usize], centroids: &mut [f64], k: usize) {
    let n = data.dim();
    let mut counts = vec![0usize; k];
    centroids.iter_mut().for_each(|v| *v = 0.0);
    for (x, &c) in data.rows().zip(assign) {
        counts[c] += 1;
        for (v, xi) in centroids[c * n..(c + 1) * n].iter_mut().zip(x) {
            *v += xi;
        }
    }
    for (c, &count) in counts.iter().enumerate() {
        debug_assert!(count > 0, "empty clusters are repaired before the update");
        let count = count as f64;
        centroids[c * n..(c + 1) * n].iter_mut().for_each(|v| *v /= count);
    }
}

/// Gives every empty cluster the point farthest from its current centroid,
/// taken from a cluster that keeps at least one member.
pub(super) fn repair_empty(data: &Dataset, assign: &mut [usize], centroids: &mut [f64], k: usize) {
    let n = data.dim();
    let mut sizes = vec![0usize; k];
    for &c in assign.iter() {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, x) in data.rows().enumerate() {
            let c = assign[i];
            if sizes[c] < 2 {
                continue;
            }
            let d = sq_dist(x, &centroids[c * n..(c + 1) * n]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        // k <= m guarantees some cluster still has two members.
        let (i, _) = best.expect("k <= m");
        sizes[assign[i]] -= 1;
        sizes[empty] = 1;
        assign[i] = empty;
        centroids[empty * n..(empty + 1) * n].copy_from_slice(data.row(i));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::compute_sse;

    fn line(points: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = points.iter().map(|&p| [p]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_obvious_groups() {
        let data = line(&[0.0, 1.0, 10.0, 11.0]);
        for seed in 0..10 {
            let c = kmeans(&data, &KMeansParams::new(2, seed)).unwrap();
            assert!(c.same_partition(&Clustering::from_ids(&[0, 0, 1, 1])));
            assert_eq!(c.objective(), Some(1.0));
            let mut centers: Vec<f64> = c.representatives().unwrap().points.iter().map(|p| p[0]).collect();
            centers.sort_by(f64::total_cmp);
            assert_eq!(centers, vec![0.5, 10.5]);
        }
    }

    #[test]
    fn k_equals_m_gives_zero_objective() {
        let data = line(&[3.0, -1.0, 8.0, 2.5, 0.0]);
        let c = kmeans(&data, &KMeansParams::new(5, 7)).unwrap();
        assert_eq!(c.k(), 5);
        assert_eq!(c.objective(), Some(0.0));
    }

    #[test]
    fn duplicate_rows_still_fill_every_cluster() {
        let data = line(&[1.0, 1.0, 1.0, 1.0, 9.0]);
        for seed in 0..20 {
            let c = kmeans(&data, &KMeansParams::new(3, seed)).unwrap();
            assert_eq!(c.k(), 3);
            assert!(c.cluster_sizes().iter().all(|&s| s > 0));
        }
    }

    #[test]
    fn objective_equals_sse_and_trace_is_monotone() {
        let data = line(&[0.0, 0.3, 2.0, 2.2, 5.0, 5.1, 5.3, 9.0, 9.9]);
        let (c, trace) = kmeans_traced(&data, &KMeansParams::new(3, 11)).unwrap();
        assert_eq!(c.objective().unwrap(), compute_sse(&data, &c).unwrap());
        assert!(trace.objective.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert_eq!(trace.objective.len(), 2 * trace.iterations);
    }

    #[test]
    fn errors() {
        let data = line(&[0.0, 1.0]);
        assert_eq!(
            kmeans(&data, &KMeansParams::new(3, 0)),
            Err(ClusterError::KTooLarge { k: 3, m: 2 })
        );
        assert_eq!(
            kmeans(&Dataset::empty(1), &KMeansParams::new(1, 0)),
            Err(ClusterError::EmptyDataset)
        );
    }

    #[test]
    fn seeded_runs_are_bit_identical() {
        let data = line(&[0.1, 0.7, 3.3, 4.1, 4.2, 8.8, 9.0, 9.5, 12.0]);
        let p = KMeansParams::new(3, 99);
        assert_eq!(kmeans(&data, &p).unwrap(), kmeans(&data, &p).unwrap());
    }
}
