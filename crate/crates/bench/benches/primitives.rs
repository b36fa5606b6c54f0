//! Benchmarks for the pipeline's building blocks: sampling, edge colouring,
//! forest decomposition, and the rotation search.

use criterion::{criterion_group, criterion_main, Criterion};
use hamcover_bench::{bipartite, gnp};
use hamcover_core::forest::{approx_linear_arboricity, konig_edge_coloring};
use hamcover_core::hamilton::{default_search_budget, find_hamilton_cycle};
use hamcover_core::random::{sample_gnp, SampleSpec};
use std::hint::black_box;

fn bench_sampling(c: &mut Criterion) {
    c.bench_function("sample G(2000, 0.05)", |b| {
        let spec = SampleSpec::new(2000, 0.05, 7);
        b.iter(|| black_box(sample_gnp(black_box(&spec)).unwrap()));
    });
}

fn bench_konig(c: &mut Criterion) {
    let (g, bp) = bipartite(100, 11);
    c.bench_function("konig colouring, bipartite 200 vertices", |b| {
        b.iter(|| black_box(konig_edge_coloring(black_box(&g), &bp).unwrap()));
    });
}

fn bench_arboricity(c: &mut Criterion) {
    let g = gnp(500, 0.02, 23);
    c.bench_function("linear arboricity G(500, 0.02)", |b| {
        b.iter(|| black_box(approx_linear_arboricity(black_box(&g), 0.1)));
    });
}

fn bench_rotation_search(c: &mut Criterion) {
    let g = gnp(500, 0.05, 31);
    let budget = default_search_budget(500);
    c.bench_function("hamilton cycle search G(500, 0.05)", |b| {
        b.iter(|| black_box(find_hamilton_cycle(black_box(&g), 5, budget).unwrap()));
    });
}

criterion_group!(
    primitives,
    bench_sampling,
    bench_konig,
    bench_arboricity,
    bench_rotation_search
);
criterion_main!(primitives);
