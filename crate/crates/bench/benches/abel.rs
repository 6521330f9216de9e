use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use intuitive_abel::{
    abel_system, beta_direct_vector, eval_log_poly, intuitive_sweep, log_poly, parse_rational,
    solve_truncated, AffineParams, BigFloat, PrecisionConfig, Rational, Scalar, Stabilization,
    TruncatedSeries,
};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn affine_series(order: usize) -> TruncatedSeries<Rational> {
    AffineParams::new(q("1/2"), q("1"))
        .unwrap()
        .map_series(order)
}

fn direct_formula(c: &mut Criterion) {
    let p = AffineParams::new(q("1/3"), q("2")).unwrap();
    let mut g = c.benchmark_group("beta_direct_vector");
    for n in [16, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, &n| {
            bch.iter(|| beta_direct_vector(&p, black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn log_polynomial(c: &mut Criterion) {
    let bits = 512;
    let b = BigFloat::from_rational(&q("1/2"), &bits);
    let x = BigFloat::from_rational(&q("3/10"), &bits);
    let mut g = c.benchmark_group("log_poly_bigfloat");
    for n in [100, 400] {
        g.bench_with_input(BenchmarkId::new("build", n), &n, |bch, &n| {
            bch.iter(|| log_poly(&b, black_box(n)).unwrap())
        });
        let poly = log_poly(&b, n).unwrap();
        g.bench_with_input(BenchmarkId::new("eval", n), &n, |bch, _| {
            bch.iter(|| eval_log_poly(&poly, black_box(&x)))
        });
    }
    g.finish();
}

fn exact_solve(c: &mut Criterion) {
    let f = affine_series(24);
    let mut g = c.benchmark_group("solve_exact");
    for n in [8, 16, 24] {
        let sys = abel_system(&f, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &sys, |bch, sys| {
            bch.iter(|| solve_truncated(black_box(sys)).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let f = affine_series(32).map(|v| v.to_f64().value());
    let cfg = PrecisionConfig::machine();
    let ns: Vec<usize> = (1..=32).collect();
    c.bench_function("sweep_machine_1_to_32", |bch| {
        bch.iter(|| intuitive_sweep(&f, black_box(&ns), &cfg, &Stabilization::default()).unwrap())
    });
}

criterion_group!(benches, direct_formula, log_polynomial, exact_solve, sweep);
criterion_main!(benches);
