use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use quatloci::cm::{candidate_intersections, cm_gram};
use quatloci::exact::rat;
use quatloci::loci::{r_via_enumeration, r_via_formula};
use quatloci::qforms::{class_number, BinaryQF};
use quatloci::quatalg::{build_maximal_order, DEFAULT_PRIME_BOUND};
use quatloci::siegel::{eval_param, h4_restrict, s_to_j, square_certificate, ParamCurve};

fn counting(c: &mut Criterion) {
    c.bench_function("class_number -16*314", |b| b.iter(|| class_number(black_box(&BigInt::from(-5024)))));
    c.bench_function("r_D formula 210", |b| b.iter(|| r_via_formula(black_box(210))));
    c.bench_function("r_D enumeration 210", |b| b.iter(|| r_via_enumeration(black_box(210))));
}

fn orders(c: &mut Criterion) {
    let q = BinaryQF::from_i64(5, 224, 2520);
    c.bench_function("maximal order D=14", |b| b.iter(|| build_maximal_order(14, black_box(&q), DEFAULT_PRIME_BOUND)));
    let ord = build_maximal_order(14, &q, DEFAULT_PRIME_BOUND).unwrap();
    let (b1, b2, b3) = (BigInt::from(67), BigInt::from(2), BigInt::from(-6));
    c.bench_function("cm_gram D=14", |b| b.iter(|| cm_gram(&ord, black_box(&b1), &b2, &b3)));
    let x14 = BinaryQF::from_i64(5, 224, 2520);
    let x6 = BinaryQF::from_i64(5, 2, 5);
    c.bench_function("intersections fX14 x fX6 n=5", |b| {
        b.iter(|| candidate_intersections(black_box(&x14), &x6, 14, 6, &BigInt::from(5), None))
    });
}

fn siegel(c: &mut Criterion) {
    let x6 = ParamCurve::load("fX6^1").unwrap();
    let j = rat(-17, 5);
    c.bench_function("eval + s_to_j fX6", |b| b.iter(|| s_to_j(&eval_param(&x6, black_box(&j)))));
    let x14 = ParamCurve::load("fX14^1").unwrap();
    c.bench_function("h4_restrict fX14", |b| b.iter(|| h4_restrict(black_box(&x14))));
    let mut g = c.benchmark_group("certificates");
    g.sample_size(10);
    g.bench_function("square_certificate fX14", |b| b.iter(|| square_certificate(black_box(&x14))));
    let big = ParamCurve::load("fX159^1").unwrap();
    g.bench_function("square_certificate fX159", |b| b.iter(|| square_certificate(black_box(&big))));
    g.finish();
}

criterion_group!(benches, counting, orders, siegel);
criterion_main!(benches);
