use proptest::prelude::*;
use webclust::validity::{fowlkes_mallows, jaccard_index, pair_counts, rand_index};
use webclust::{full_report, Clustering, Dataset, IndexError, IndexReport, ReferenceLabels};

fn instance() -> impl Strategy<Value = (Dataset, Vec<i64>)> {
    (1usize..=3, 3usize..=30).prop_flat_map(|(dim, m)| {
        (
            prop::collection::vec(-15i32..=15, m * dim)
                .prop_map(move |v| Dataset::from_flat(v.into_iter().map(f64::from).collect(), m, dim).unwrap()),
            prop::collection::vec(-1i64..4, m),
        )
    })
}

fn close(a: &Result<f64, IndexError>, b: &Result<f64, IndexError>, scale: f64) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => (x * scale - y).abs() <= 1e-9 * y.abs().max(1.0),
        (Err(e), Err(f)) => e == f,
        _ => false,
    }
}

fn ratios(r: &IndexReport) -> [&Result<f64, IndexError>; 4] {
    [&r.dunn, &r.davies_bouldin, &r.c_index, &r.silhouette]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn translation_leaves_every_index_alone(
        (data, ids) in instance(),
        offset in prop::collection::vec(-50i32..=50, 3),
    ) {
        let c = Clustering::from_signed_ids(&ids);
        let moved = data.map_values(|col, v| v + f64::from(offset[col])).unwrap();
        let a = full_report(&data, &c, None);
        let b = full_report(&moved, &c, None);
        for ((name, x), (_, y)) in a.entries().iter().zip(b.entries()) {
            prop_assert!(close(x, y, 1.0), "{}: {:?} vs {:?}", name, x, y);
        }
    }

    #[test]
    fn scaling_leaves_ratio_indices_alone((data, ids) in instance(), factor in 0.01f64..100.0) {
        let c = Clustering::from_signed_ids(&ids);
        let big = data.map_values(|_, v| v * factor).unwrap();
        let a = full_report(&data, &c, None);
        let b = full_report(&big, &c, None);
        for (x, y) in ratios(&a).into_iter().zip(ratios(&b)) {
            // Exact-equality degeneracy tests may flip under rounding.
            if let (Ok(x), Ok(y)) = (x, y) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{} vs {}", x, y);
            }
        }
        prop_assert!(close(&a.sse, &b.sse, factor * factor));
    }

    #[test]
    fn relabeling_clusters_changes_nothing(
        (data, ids) in instance(),
        perm in Just([0i64, 1, 2, 3]).prop_shuffle(),
        class_ids in prop::collection::vec(0usize..3, 30),
    ) {
        let labels = ReferenceLabels::from_ids(&class_ids[..data.len()]);
        let renamed: Vec<i64> = ids.iter().map(|&i| if i < 0 { i } else { perm[i as usize] }).collect();
        let a = full_report(&data, &Clustering::from_signed_ids(&ids), Some(&labels));
        let b = full_report(&data, &Clustering::from_signed_ids(&renamed), Some(&labels));
        for ((name, x), (_, y)) in a.entries().iter().zip(b.entries()) {
            prop_assert!(close(x, y, 1.0), "{}: {:?} vs {:?}", name, x, y);
        }
    }

    #[test]
    fn external_indices_are_symmetric_and_bounded(
        pairs in prop::collection::vec((0usize..4, 0usize..4), 2..40),
    ) {
        let (u, v): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let forward = pair_counts(&ReferenceLabels::from_ids(&u), &Clustering::from_ids(&v)).unwrap();
        let backward = pair_counts(&ReferenceLabels::from_ids(&v), &Clustering::from_ids(&u)).unwrap();
        prop_assert_eq!(forward.total(), (u.len() * (u.len() - 1) / 2) as u64);
        for f in [rand_index, jaccard_index, fowlkes_mallows] {
            let (a, b) = (f(&forward), f(&backward));
            prop_assert_eq!(a.as_ref().ok(), b.as_ref().ok());
            if let Ok(x) = a {
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }
    }

    #[test]
    fn internal_indices_stay_in_range((data, ids) in instance()) {
        let r = full_report(&data, &Clustering::from_signed_ids(&ids), None);
        if let Ok(s) = r.silhouette {
            prop_assert!((-1.0..=1.0).contains(&s));
        }
        if let Ok(c) = r.c_index {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        for v in [&r.dunn, &r.davies_bouldin, &r.sse].into_iter().flatten() {
            prop_assert!(*v >= 0.0);
        }
    }
}
