use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use omep_core::analysis::{all_full_c_matrices, full_c_matrix_with, orthogonal_through, Engine};
use omep_core::constructions::{build_a12, build_omep_bl, build_series, catalog_design, SeriesVariant, BLOCK};
use omep_core::linalg::{char_poly, g_inverse, GInverse};
use omep_core::oa::oa_from_field;

fn c_matrices(c: &mut Criterion) {
    let a12 = build_a12(SeriesVariant::I);
    let series = build_series(SeriesVariant::I, 12).unwrap();
    let design = catalog_design("d").unwrap();
    let k = design.block_size().unwrap();
    let bl = build_omep_bl(&design, &oa_from_field(k as u64).unwrap()).unwrap();

    c.bench_function("a12 C_D elimination", |b| {
        b.iter(|| full_c_matrix_with(black_box(&a12), "D", Engine::Elimination).unwrap())
    });
    c.bench_function("a12 C_D moore-penrose", |b| {
        b.iter(|| full_c_matrix_with(black_box(&a12), "D", Engine::Projection(GInverse::MoorePenrose)).unwrap())
    });
    c.bench_function("series i n=12 all C-matrices", |b| b.iter(|| all_full_c_matrices(black_box(&series)).unwrap()));
    c.bench_function("design d omep-bl all C-matrices", |b| b.iter(|| all_full_c_matrices(black_box(&bl)).unwrap()));
    c.bench_function("design d omep-bl through blocks", |b| {
        b.iter(|| orthogonal_through(black_box(&bl), "A", "B", BLOCK).unwrap())
    });
}

fn linear_algebra(c: &mut Criterion) {
    let series = build_series(SeriesVariant::I, 7).unwrap();
    let ca = full_c_matrix_with(&series, "A", Engine::Elimination).unwrap();
    c.bench_function("char_poly 7x7", |b| b.iter(|| char_poly(black_box(&ca)).unwrap()));
    c.bench_function("g_inverse 7x7", |b| b.iter(|| g_inverse(black_box(&ca))));
}

criterion_group!(benches, c_matrices, linear_algebra);
criterion_main!(benches);
