use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use webclust::{dbscan, hierarchical, kmeans, kmedoids, leader, KMeansParams, KMedoidsParams, Linkage};
use webclust_bench::blobs;

fn partitioning(c: &mut Criterion) {
    let mut group = c.benchmark_group("partitioning");
    for m in [250, 1000] {
        let (data, _) = blobs(m, 10);
        group.bench_with_input(BenchmarkId::new("kmeans", m), &data, |b, d| {
            b.iter(|| kmeans(black_box(d), &KMeansParams::new(5, 1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("kmedoids", m), &data, |b, d| {
            b.iter(|| kmedoids(black_box(d), &KMedoidsParams::new(5, 1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("leader", m), &data, |b, d| {
            b.iter(|| leader(black_box(d), 200.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dbscan", m), &data, |b, d| {
            b.iter(|| dbscan(black_box(d), 200.0, 4).unwrap())
        });
    }
    group.finish();
}

fn agglomerative(c: &mut Criterion) {
    let mut group = c.benchmark_group("hierarchical");
    group.sample_size(10);
    let (data, _) = blobs(400, 10);
    for linkage in [Linkage::Single, Linkage::Complete, Linkage::Average] {
        group.bench_with_input(BenchmarkId::new(linkage.name(), 400), &data, |b, d| {
            b.iter(|| hierarchical(black_box(d), 5, linkage).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, partitioning, agglomerative);
criterion_main!(benches);
