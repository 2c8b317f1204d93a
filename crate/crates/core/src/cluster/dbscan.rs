use super::{check_positive, ClusterError, Clustering, Label};
use crate::dataset::{sq_dist, Dataset};

/// Density-based clustering.
///
/// The neighborhood of a point is every point (itself included) whose
/// squared distance to it is at most `eps`. A point with at least `eta`
/// neighbors is a core point. Rows are scanned in order; each unvisited core
/// point opens a new cluster that grows through the neighborhoods of the
/// core points it reaches. A non-core point joins the first cluster that
/// reaches it, and points reached by no cluster are noise.
pub fn dbscan(data: &Dataset, eps: f64, eta: usize) -> Result<Clustering, ClusterError> {
    if data.is_empty() {
        return Err(ClusterError::EmptyDataset);
    }
    check_positive("eps", eps)?;
    if eta == 0 {
        return Err(ClusterError::InvalidParameter {
            name: "eta",
            value: 0.0,
        });
    }
    let m = data.len();
    let neighbors = |p: usize| -> Vec<usize> {
        let x = data.row(p);
        (0..m).filter(|&q| sq_dist(x, data.row(q)) <= eps).collect()
    };

    let mut cluster: Vec<Option<usize>> = vec![None; m];
    let mut visited = vec![false; m];
    // queued[q] == c + 1 while q waits in cluster c's frontier
    let mut queued = vec![0usize; m];
    let mut k = 0;

    for p in 0..m {
        if visited[p] {
            continue;
        }
        visited[p] = true;
        let seeds = neighbors(p);
        if seeds.len() < eta {
            continue;
        }
        let id = k;
        k += 1;
        cluster[p] = Some(id);

        let mut frontier: Vec<usize> = Vec::with_capacity(seeds.len());
        let mut enqueue = |q: usize, frontier: &mut Vec<usize>, cluster: &[Option<usize>]| {
            if cluster[q].is_none() && queued[q] != id + 1 {
                queued[q] = id + 1;
                frontier.push(q);
            }
        };
        for &q in &seeds {
            enqueue(q, &mut frontier, &cluster);
        }
        let mut next = 0;
        while next < frontier.len() {
            let q = frontier[next];
            next += 1;
            if cluster[q].is_none() {
                cluster[q] = Some(id);
            }
            if !visited[q] {
                visited[q] = true;
                let reach = neighbors(q);
                if reach.len() >= eta {
                    for &r in &reach {
                        enqueue(r, &mut frontier, &cluster);
                    }
                }
            }
        }
    }

    let labels = cluster
        .into_iter()
        .map(|c| c.map_or(Label::Noise, Label::Cluster))
        .collect();
    Ok(Clustering::from_parts(labels, k, None, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = points.iter().map(|&p| [p]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_dense_groups() {
        let c = dbscan(&line(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]), 2.0, 2).unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(c.noise_count(), 0);
        assert!(c.same_partition(&Clustering::from_ids(&[0, 0, 0, 1, 1, 1])));
    }

    #[test]
    fn isolated_points_are_noise() {
        let c = dbscan(&line(&[0.0, 100.0]), 1.0, 2).unwrap();
        assert_eq!(c.k(), 0);
        assert_eq!(c.labels(), &[Label::Noise, Label::Noise]);
    }

    #[test]
    fn eps_bounds_squared_distance_inclusively() {
        // distance 2 -> squared 4: inside at eps = 4, outside at eps = 3.99
        let data = line(&[0.0, 2.0]);
        assert_eq!(dbscan(&data, 4.0, 2).unwrap().k(), 1);
        assert_eq!(dbscan(&data, 3.99, 2).unwrap().k(), 0);
    }

    #[test]
    fn earlier_noise_becomes_border() {
        // Row 0 is scanned first and is not core, but core point 1 reaches it.
        let c = dbscan(&line(&[0.0, 1.0, 1.5, 2.0]), 1.0, 3).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.labels()[0], Label::Cluster(0));
    }

    #[test]
    fn border_point_goes_to_first_cluster() {
        // Point 5 is within eps of core points of both groups.
        let data = line(&[0.0, 1.0, 2.0, 8.0, 9.0, 10.0, 5.0]);
        let c = dbscan(&data, 9.0, 3).unwrap();
        // with eps = 9 (distance 3) 5.0 reaches 2.0 and 8.0
        assert_eq!(c.k(), 1, "5.0 is itself core here and bridges the groups");
        let c = dbscan(&line(&[0.0, 1.0, 2.0, 8.0, 9.0, 10.0, 5.0]), 9.0, 4).unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(c.labels()[6], Label::Cluster(0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let data = line(&[0.0]);
        assert!(dbscan(&data, -1.0, 2).is_err());
        assert!(dbscan(&data, 1.0, 0).is_err());
        assert_eq!(dbscan(&Dataset::empty(1), 1.0, 1), Err(ClusterError::EmptyDataset));
    }
}
