use super::{check_positive, nearest, ClusterError, Clustering, Label, RepresentativeKind, Representatives};
use crate::dataset::Dataset;

/// Single-pass leader clustering in row order.
///
/// The first row leads cluster 0. Every later row joins its nearest leader
/// when the squared distance is strictly below `alpha`, and otherwise starts
/// a new cluster with itself as leader.
pub fn leader(data: &Dataset, alpha: f64) -> Result<Clustering, ClusterError> {
    if data.is_empty() {
        return Err(ClusterError::EmptyDataset);
    }
    check_positive("alpha", alpha)?;

    let mut leaders: Vec<usize> = Vec::new();
    let mut labels = Vec::with_capacity(data.len());
    for (i, x) in data.rows().enumerate() {
        match nearest(x, leaders.iter().map(|&r| data.row(r))) {
            Some((j, d2)) if d2 < alpha => labels.push(Label::Cluster(j)),
            _ => {
                labels.push(Label::Cluster(leaders.len()));
                leaders.push(i);
            }
        }
    }
    let k = leaders.len();
    Ok(Clustering::from_parts(
        labels,
        k,
        Some(Representatives::from_rows(RepresentativeKind::Leader, data, leaders)),
        None,
    ))
}
