use proptest::prelude::*;
use webclust::cluster::{kmeans_traced, kmedoids_traced};
use webclust::{
    dbscan, hierarchical, kmeans, kmedoids, leader, squared_distance, Dataset, KMeansParams, KMedoidsParams, Label,
    Linkage,
};

/// Small integer-valued datasets: exact distances keep tie-breaking stable
/// under translation and power-of-two scaling.
fn grid_data(max_m: usize) -> impl Strategy<Value = Dataset> {
    (1usize..=3, 2usize..=max_m).prop_flat_map(|(dim, m)| {
        prop::collection::vec(-20i32..=20, m * dim)
            .prop_map(move |v| Dataset::from_flat(v.into_iter().map(f64::from).collect(), m, dim).unwrap())
    })
}

fn shifted(data: &Dataset, offset: &[f64]) -> Dataset {
    data.map_values(|c, v| v + offset[c]).unwrap()
}

fn scaled(data: &Dataset, factor: f64) -> Dataset {
    data.map_values(|_, v| v * factor).unwrap()
}

fn d2(data: &Dataset, i: usize, j: usize) -> f64 {
    squared_distance(data.row(i), data.row(j)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_result(data in grid_data(30), k in 1usize..5, seed in any::<u64>()) {
        prop_assume!(k <= data.len());
        let p = KMeansParams::new(k, seed);
        prop_assert_eq!(kmeans(&data, &p).unwrap(), kmeans(&data, &p).unwrap());
        let q = KMedoidsParams::new(k, seed);
        prop_assert_eq!(kmedoids(&data, &q).unwrap(), kmedoids(&data, &q).unwrap());
    }

    #[test]
    fn pairwise_methods_ignore_translation(
        data in grid_data(30),
        offset in prop::collection::vec(-100i32..=100, 3),
        k in 1usize..5,
        threshold in 1u32..60,
        eta in 1usize..5,
    ) {
        prop_assume!(k <= data.len());
        let offset: Vec<f64> = offset.into_iter().map(f64::from).collect();
        let moved = shifted(&data, &offset);
        let t = f64::from(threshold);
        prop_assert!(leader(&data, t).unwrap().same_partition(&leader(&moved, t).unwrap()));
        prop_assert!(dbscan(&data, t, eta).unwrap().same_partition(&dbscan(&moved, t, eta).unwrap()));
        for linkage in [Linkage::Single, Linkage::Complete, Linkage::Average] {
            let a = hierarchical(&data, k, linkage).unwrap();
            let b = hierarchical(&moved, k, linkage).unwrap();
            prop_assert!(a.same_partition(&b), "{:?}", linkage);
        }
    }

    #[test]
    fn power_of_two_scaling_changes_nothing(
        data in grid_data(30),
        power in -3i32..=3,
        k in 1usize..5,
        seed in 0u64..100,
        threshold in 1u32..60,
        eta in 1usize..5,
    ) {
        prop_assume!(k <= data.len());
        let f = 2f64.powi(power);
        let big = scaled(&data, f);
        let t = f64::from(threshold);
        let p = KMeansParams::new(k, seed);
        prop_assert!(kmeans(&data, &p).unwrap().same_partition(&kmeans(&big, &p).unwrap()));
        let q = KMedoidsParams::new(k, seed);
        prop_assert!(kmedoids(&data, &q).unwrap().same_partition(&kmedoids(&big, &q).unwrap()));
        prop_assert!(leader(&data, t).unwrap().same_partition(&leader(&big, t * f * f).unwrap()));
        prop_assert!(dbscan(&data, t, eta).unwrap().same_partition(&dbscan(&big, t * f * f, eta).unwrap()));
        let a = hierarchical(&data, k, Linkage::Average).unwrap();
        prop_assert!(a.same_partition(&hierarchical(&big, k, Linkage::Average).unwrap()));
    }

    #[test]
    fn leader_invariants(data in grid_data(40), threshold in 1u32..80) {
        let alpha = f64::from(threshold);
        let c = leader(&data, alpha).unwrap();
        let leaders = c.representatives().unwrap().rows.clone().unwrap();
        prop_assert_eq!(leaders.len(), c.k());
        prop_assert_eq!(leaders[0], 0);
        for (a, &i) in leaders.iter().enumerate() {
            prop_assert_eq!(c.labels()[i], Label::Cluster(a));
            for &j in &leaders[..a] {
                prop_assert!(d2(&data, i, j) >= alpha);
            }
        }
        for (i, label) in c.labels().iter().enumerate() {
            let lead = leaders[label.cluster().unwrap()];
            prop_assert!(lead <= i);
            prop_assert!(lead == i || d2(&data, i, lead) < alpha);
        }
    }

    #[test]
    fn kmeans_descends_and_settles(data in grid_data(40), k in 1usize..6, seed in any::<u64>()) {
        prop_assume!(k <= data.len());
        let (c, trace) = kmeans_traced(&data, &KMeansParams::new(k, seed)).unwrap();
        for w in trace.objective.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0));
        }
        prop_assert!(c.cluster_sizes().iter().all(|&s| s > 0));
        if trace.converged {
            let centroids = &c.representatives().unwrap().points;
            for (i, label) in c.labels().iter().enumerate() {
                let own = squared_distance(data.row(i), &centroids[label.cluster().unwrap()]).unwrap();
                for other in centroids {
                    prop_assert!(own <= squared_distance(data.row(i), other).unwrap() + 1e-9);
                }
            }
        }
    }

    #[test]
    fn kmedoids_dissimilarity_never_rises(data in grid_data(40), k in 1usize..6, seed in any::<u64>()) {
        prop_assume!(k <= data.len());
        let (c, trace) = kmedoids_traced(&data, &KMedoidsParams::new(k, seed)).unwrap();
        for w in trace.dissimilarity.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0));
        }
        let medoids = c.representatives().unwrap().rows.clone().unwrap();
        for (a, &r) in medoids.iter().enumerate() {
            prop_assert_eq!(c.labels()[r], Label::Cluster(a));
        }
    }

    #[test]
    fn dbscan_clusters_hold_a_core(data in grid_data(40), threshold in 1u32..80, eta in 1usize..6) {
        let eps = f64::from(threshold);
        let c = dbscan(&data, eps, eta).unwrap();
        let m = data.len();
        let core: Vec<bool> = (0..m).map(|i| (0..m).filter(|&j| d2(&data, i, j) <= eps).count() >= eta).collect();
        for members in c.members() {
            prop_assert!(members.iter().any(|&i| core[i]));
        }
        for (i, label) in c.labels().iter().enumerate() {
            if label.is_noise() {
                prop_assert!(!core[i]);
                prop_assert!((0..m).all(|j| !core[j] || d2(&data, i, j) > eps));
            }
        }
    }
}
