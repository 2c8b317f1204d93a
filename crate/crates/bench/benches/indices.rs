use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use webclust::validity::{c_index, davies_bouldin, dunn, pair_counts, rand_index, silhouette};
use webclust::{full_report, kmeans, KMeansParams};
use webclust_bench::blobs;

fn indices(c: &mut Criterion) {
    let mut group = c.benchmark_group("indices");
    group.sample_size(20);
    for m in [250, 1000] {
        let (data, labels) = blobs(m, 10);
        let clustering = kmeans(&data, &KMeansParams::new(5, 1)).unwrap();
        let input = (&data, &clustering);
        group.bench_with_input(BenchmarkId::new("dunn", m), &input, |b, (d, c)| {
            b.iter(|| dunn(black_box(d), c))
        });
        group.bench_with_input(BenchmarkId::new("davies_bouldin", m), &input, |b, (d, c)| {
            b.iter(|| davies_bouldin(black_box(d), c))
        });
        group.bench_with_input(BenchmarkId::new("c_index", m), &input, |b, (d, c)| {
            b.iter(|| c_index(black_box(d), c))
        });
        group.bench_with_input(BenchmarkId::new("silhouette", m), &input, |b, (d, c)| {
            b.iter(|| silhouette(black_box(d), c))
        });
        group.bench_with_input(BenchmarkId::new("rand", m), &clustering, |b, c| {
            b.iter(|| rand_index(&pair_counts(black_box(&labels), c).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("full_report", m), &input, |b, (d, c)| {
            b.iter(|| full_report(black_box(d), c, Some(&labels)))
        });
    }
    group.finish();
}

criterion_group!(benches, indices);
criterion_main!(benches);
