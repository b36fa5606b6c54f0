//! End-to-end benchmarks: cycle packing and full cover construction at a
//! size small enough to iterate yet big enough to exercise every phase.

use criterion::{criterion_group, criterion_main, Criterion};
use hamcover_bench::gnp;
use hamcover_core::hamilton::pack_hamilton_cycles;
use hamcover_core::pipeline::{cover, PipelineConfig};
use std::hint::black_box;

fn bench_packing(c: &mut Criterion) {
    let g = gnp(300, 0.1, 41);
    c.bench_function("pack G(300, 0.1) to min-degree/2", |b| {
        b.iter(|| black_box(pack_hamilton_cycles(black_box(&g), None, 3, 8)));
    });
}

fn bench_cover(c: &mut Criterion) {
    let g = gnp(120, 0.3, 43);
    let cfg = PipelineConfig::desk(9);
    c.bench_function("cover G(120, 0.3), desk profile", |b| {
        b.iter(|| black_box(cover(black_box(&g), 0.3, &cfg).unwrap()));
    });
}

criterion_group!(end_to_end, bench_packing, bench_cover);
criterion_main!(end_to_end);
