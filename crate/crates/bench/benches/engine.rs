use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use motive_calc_bench::{balanced_expr, binomial_power, GM_RHS};
use motive_calc_core::dsl::{default_atlas, parse};
use motive_calc_core::gm::{self, GmScenario};
use motive_calc_core::{atlas, normalize, TatePolynomial};

fn normalizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("normalize");
    for depth in [4, 8, 12] {
        let e = balanced_expr(depth);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &e, |b, e| {
            b.iter(|| normalize(black_box(e)))
        });
    }
    group.finish();
}

fn division(c: &mut Criterion) {
    let mut group = c.benchmark_group("try_div_exact");
    for n in [16, 64, 256] {
        let divisor = TatePolynomial::from_dense([1u32, 2, 2, 2, 1]);
        let product = &binomial_power(n) * &divisor;
        group.bench_with_input(BenchmarkId::from_parameter(n), &product, |b, p| {
            b.iter(|| black_box(p).try_div_exact(&divisor).unwrap())
        });
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let atlas = default_atlas().unwrap();
    c.bench_function("parse gm rhs", |b| b.iter(|| parse(black_box(GM_RHS), &atlas).unwrap()));
}

fn atlas_entries(c: &mut Criterion) {
    c.bench_function("grassmannian Gr(5,12)", |b| {
        b.iter(|| atlas::grassmannian(black_box(5), 12).unwrap())
    });
    let k3 = atlas::k3();
    c.bench_function("hilbert square of K3", |b| {
        b.iter(|| atlas::hilb2_surface(black_box(&k3)).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let s = GmScenario::canonical().unwrap();
    c.bench_function("verify identity", |b| b.iter(|| gm::verify_identity(black_box(&s))));
    c.bench_function("full report", |b| b.iter(|| gm::run(black_box(&s))));
}

criterion_group!(benches, normalizer, division, parsing, atlas_entries, pipeline);
criterion_main!(benches);
