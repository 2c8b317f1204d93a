use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_k, nearest, ClusterError, Clustering, Label, RepresentativeKind, Representatives};
use crate::dataset::{sq_dist, Dataset};

/// Cost minimized when a cluster picks its new medoid.
///
/// The assignment step and the reported objective always use squared
/// distances. With `Unsquared` the medoid is the member with the smallest
/// summed plain distance to its co-members; that choice does not always
/// lower the squared objective, but it never raises the summed plain
/// distance, so the iteration still terminates. `Squared` makes both
/// half-steps descend on the squared objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MedoidUpdate {
    #[default]
    Unsquared,
    Squared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMedoidsParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub update: MedoidUpdate,
}

impl KMedoidsParams {
    pub fn new(k: usize, seed: u64) -> Self {
        KMedoidsParams {
            k,
            seed,
            max_iter: 100,
            update: MedoidUpdate::Unsquared,
        }
    }
}

/// Values recorded after every assignment step: the squared objective and
/// the summed plain distance of each point to its medoid.
#[derive(Debug, Clone, PartialEq)]
pub struct KMedoidsTrace {
    pub objective: Vec<f64>,
    pub dissimilarity: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn kmedoids(data: &Dataset, params: &KMedoidsParams) -> Result<Clustering, ClusterError> {
    kmedoids_traced(data, params).map(|(c, _)| c)
}

/// Alternating k-Medoids: assign each point to its nearest medoid, then
/// replace every medoid by its cluster's most central member, until the
/// medoid set stops changing or `max_iter` is reached. Initial medoids are
/// `k` distinct seeded-random rows.
pub fn kmedoids_traced(data: &Dataset, params: &KMedoidsParams) -> Result<(Clustering, KMedoidsTrace), ClusterError> {
    check_k(data, params.k)?;
    if params.max_iter == 0 {
        return Err(ClusterError::InvalidParameter {
            name: "max_iter",
            value: 0.0,
        });
    }
    let (m, k) = (data.len(), params.k);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut medoids: Vec<usize> = rand::seq::index::sample(&mut rng, m, k).into_vec();

    let mut trace = KMedoidsTrace {
        objective: Vec::new(),
        dissimilarity: Vec::new(),
        iterations: 0,
        converged: false,
    };
    let mut assign = assign_step(data, &mut medoids, &mut trace);

    while trace.iterations < params.max_iter {
        trace.iterations += 1;
        let updated = update_medoids(data, &assign, &medoids, params.update);
        if updated == medoids {
            trace.converged = true;
            break;
        }
        medoids = updated;
        assign = assign_step(data, &mut medoids, &mut trace);
    }

    let objective = *trace.objective.last().expect("assigned at least once");
    let clustering = Clustering::from_parts(
        assign.into_iter().map(Label::Cluster).collect(),
        k,
        Some(Representatives::from_rows(RepresentativeKind::Medoid, data, medoids)),
        Some(objective),
    );
    Ok((clustering, trace))
}

fn assign_step(data: &Dataset, medoids: &mut [usize], trace: &mut KMedoidsTrace) -> Vec<usize> {
    let k = medoids.len();
    let mut assign: Vec<usize> = data
        .rows()
        .map(|x| nearest(x, medoids.iter().map(|&r| data.row(r))).expect("k >= 1").0)
        .collect();

    // Duplicate rows can leave a medoid with no members; hand it the point
    // farthest from its own medoid.
    let mut sizes = vec![0usize; k];
    for &c in &assign {
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
            let d = sq_dist(x, data.row(medoids[c]));
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("k <= m");
        sizes[assign[i]] -= 1;
        sizes[empty] = 1;
        assign[i] = empty;
        medoids[empty] = i;
    }

    let (mut squared, mut plain) = (0.0, 0.0);
    for (x, &c) in data.rows().zip(&assign) {
        let d2 = sq_dist(x, data.row(medoids[c]));
        squared += d2;
        plain += d2.sqrt();
    }
    trace.objective.push(squared);
    trace.dissimilarity.push(plain);
    assign
}

fn update_medoids(data: &Dataset, assign: &[usize], medoids: &[usize], update: MedoidUpdate) -> Vec<usize> {
    let mut groups = vec![Vec::new(); medoids.len()];
    for (i, &c) in assign.iter().enumerate() {
        groups[c].push(i);
    }
    let cost = |a: usize, members: &[usize]| -> f64 {
        members
            .iter()
            .map(|&b| {
                let d2 = sq_dist(data.row(a), data.row(b));
                match update {
                    MedoidUpdate::Unsquared => d2.sqrt(),
                    MedoidUpdate::Squared => d2,
                }
            })
            .sum()
    };
    groups
        .iter()
        .zip(medoids)
        .map(|(members, &current)| {
            // The current medoid wins ties so a stable configuration is a
            // fixed point; otherwise the lowest row index wins.
            let mut best = current;
            let mut best_cost = cost(current, members);
            for &cand in members {
                let c = cost(cand, members);
                if c < best_cost {
                    best = cand;
                    best_cost = c;
                }
            }
            best
        })
        .collect()
}
