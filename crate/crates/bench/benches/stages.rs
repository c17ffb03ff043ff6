use anticyclo_bench::{conductor_21, conductor_35};
use anticyclo_core::measure::Moments;
use anticyclo_core::padic::{Padic, Prime};
use anticyclo_core::pipeline::{build, run};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn arithmetic(c: &mut Criterion) {
    let p = Prime::new(7);
    let x = Padic::from_int(&p, 123456789, 40);
    let y = Padic::from_int(&p, 987654321, 40);
    c.bench_function("padic mul, 40 digits", |b| b.iter(|| black_box(&x).mul(black_box(&y))));
    c.bench_function("padic inverse, 40 digits", |b| b.iter(|| black_box(&x).inv().unwrap()));
}

fn exact_stages(c: &mut Criterion) {
    let cfg = conductor_21(16);
    c.bench_function("quotient and eigencocycle, N = 21", |b| b.iter(|| build(black_box(&cfg)).unwrap()));
    let built = build(&cfg).unwrap();
    c.bench_function("moments, N = 21, 16 digits", |b| {
        b.iter(|| Moments::compute(&built.q, &built.g, &built.c, 16, 20).unwrap())
    });
}

fn full_runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    let cfg = conductor_21(16);
    g.bench_function("N = 21, p = 3, 16 digits", |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    let cfg = conductor_35(12);
    g.bench_function("N = 35, p = 7, 12 digits", |b| b.iter(|| run(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, arithmetic, exact_stages, full_runs);
criterion_main!(benches);
