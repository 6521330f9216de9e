//! Results checked against independent oracles: naive untruncated polynomial
//! arithmetic, Cramer's rule with cofactor determinants, and reference values
//! computed offline in exact rational / 300-bit arithmetic.

use intuitive_abel::affine::{binom_term_bound, check_not_root_of_unity};
use intuitive_abel::powerseries::exp_series;
use intuitive_abel::*;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn zero() -> Rational {
    Rational::from(0)
}

/// Full product with no truncation.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).cloned().unwrap_or_else(zero) + b.get(i).cloned().unwrap_or_else(zero))
        .collect()
}

/// `outer(inner(x))` by summing `c_k * inner^k` term by term.
fn poly_compose(outer: &[Rational], inner: &[Rational]) -> Vec<Rational> {
    let mut out = vec![zero()];
    let mut power = vec![Rational::from(1)];
    for c in outer {
        let term: Vec<Rational> = power.iter().map(|p| p.clone() * c.clone()).collect();
        out = poly_add(&out, &term);
        power = poly_mul(&power, inner);
    }
    out
}

fn padded(mut v: Vec<Rational>, len: usize) -> Vec<Rational> {
    v.resize(len, zero());
    v.truncate(len);
    v
}

fn det(m: &[Vec<Rational>]) -> Rational {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = zero();
    for (col, a) in m[0].iter().enumerate() {
        if *a == zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let t = a.clone() * det(&minor);
        acc = if col % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

fn cramer(m: &[Vec<Rational>], rhs: &[Rational]) -> Vec<Rational> {
    let d = det(m);
    (0..m.len())
        .map(|col| {
            let replaced: Vec<Vec<Rational>> = m
                .iter()
                .zip(rhs)
                .map(|(r, b)| {
                    let mut r = r.clone();
                    r[col] = b.clone();
                    r
                })
                .collect();
            det(&replaced) / d.clone()
        })
        .collect()
}

fn sample_series() -> Vec<TruncatedSeries<Rational>> {
    [
        &["1/2", "3/2", "1/5", "-1/7", "1/11", "2"][..],
        &["-1", "1/3", "0", "1", "0", "-1/2"],
        &["3", "-2", "1/4", "1/8", "1/16", "1/32"],
    ]
    .iter()
    .map(|c| TruncatedSeries::at_zero(c.iter().map(|s| q(s)).collect()).unwrap())
    .collect()
}

#[test]
fn powers_match_naive_products() {
    for f in sample_series() {
        let mut naive = vec![Rational::from(1)];
        for n in 0..=6 {
            assert_eq!(
                f.pow(n).coeffs(),
                padded(naive.clone(), f.order() + 1).as_slice()
            );
            naive = poly_mul(&naive, f.coeffs());
        }
    }
}

#[test]
fn composition_matches_naive_substitution() {
    let series = sample_series();
    for outer in &series {
        for inner in &series {
            let got = outer.compose(inner, 5).unwrap();
            let want = padded(poly_compose(outer.coeffs(), inner.coeffs()), 6);
            assert_eq!(got.coeffs(), want.as_slice());
        }
    }
}

#[test]
fn recentering_matches_naive_shift() {
    let shift = q("3/7");
    for f in sample_series() {
        let got = f.recenter(&shift);
        let mut want = poly_compose(f.coeffs(), &[shift.clone(), Rational::from(1)]);
        want[0] = want[0].clone() - shift.clone();
        assert_eq!(got.coeffs(), padded(want, f.order() + 1).as_slice());
    }
}

#[test]
fn truncated_solutions_match_cramer() {
    for f in sample_series() {
        for n in 1..=5 {
            let sys = abel_system(&f, n).unwrap();
            let rows = sys.matrix.to_rows();
            if det(&rows) == zero() {
                assert!(solve_truncated(&sys).is_err());
                continue;
            }
            assert_eq!(
                solve_truncated(&sys).unwrap(),
                cramer(&rows, &sys.rhs),
                "N={n}"
            );
        }
    }
}

#[test]
fn float_solutions_track_exact_ones() {
    for f in sample_series() {
        let ff = f.to_scalar::<f64>(&());
        let fb = f.to_scalar::<BigFloat>(&256);
        for n in 1..=5 {
            let Ok(exact) = solve_truncated(&abel_system(&f, n).unwrap()) else {
                continue;
            };
            let xf = solve_truncated(&abel_system(&ff, n).unwrap()).unwrap();
            let xb = solve_truncated(&abel_system(&fb, n).unwrap()).unwrap();
            for ((e, a), b) in exact.iter().zip(&xf).zip(&xb) {
                let e = Scalar::as_f64(e);
                assert!((a - e).abs() <= 1e-9 * (1.0 + e.abs()), "{a} vs {e}");
                assert!((b.as_f64() - e).abs() <= 1e-15 * (1.0 + e.abs()));
            }
        }
    }
}

#[test]
fn residual_matches_naive_composition() {
    let f = &sample_series()[0];
    for n in 1..=5 {
        let x = solve_truncated(&abel_system(f, n).unwrap()).unwrap();
        let alpha = solution_series(&x).unwrap();
        let composed = poly_compose(alpha.coeffs(), f.coeffs());
        let mut want = padded(
            composed
                .iter()
                .zip(alpha.coeffs().iter().chain(std::iter::repeat(&zero())))
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
            n + 1,
        );
        want[0] = want[0].clone() - Rational::from(1);
        assert_eq!(
            abel_residual(&alpha, f, n).unwrap().coeffs(),
            want.as_slice()
        );
        // the truncated system forces every coefficient below degree n to vanish
        assert!(want[..n].iter().all(|c| *c == zero()));
    }
}

#[test]
fn affine_two_by_two() {
    let p = AffineParams::new(q("2"), q("1")).unwrap();
    let sys = abel_system(&p.map_series(1), 2).unwrap();
    let want = vec![q("4/3"), q("-1/3")];
    assert_eq!(solve_truncated(&sys).unwrap(), want);
    assert_eq!(beta_direct_vector(&p, 2).unwrap(), want);
    assert_eq!(beta_recurrence(&p, 2, 1).unwrap(), want[0]);
    assert_eq!(beta_recurrence(&p, 2, 2).unwrap(), want[1]);
}

#[test]
fn affine_base_cases() {
    for (b, s) in [("2", "1"), ("1/3", "-2"), ("-2", "5/3")] {
        let p = AffineParams::new(q(b), q(s)).unwrap();
        let want = Rational::from(1) / (q(s) * (q(b) - Rational::from(1)));
        assert_eq!(beta_direct(&p, 1, 1).unwrap(), want);
        assert_eq!(beta_recurrence(&p, 1, 1).unwrap(), want);
    }
    let p = AffineParams::new(q("2"), q("1")).unwrap();
    for n in 1..=10usize {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let want = Rational::from(sign) / (Rational::from(1) - Rational::from(1i64 << n));
        assert_eq!(beta_recurrence(&p, n, n).unwrap(), want);
    }
}

#[test]
fn first_coefficient_trajectory() {
    // beta_1 for b=2, s=1 at N = 8, 16, 32, 64, from exact rational sums
    let want = [
        1.441_830_397_386_285,
        1.442_694_847_301_235_7,
        1.442_716_305_198_884,
        1.442_710_183_907_466_7,
    ];
    let ns = [8, 16, 32, 64];
    for (b, sign) in [("2", 1.0), ("1/2", -1.0)] {
        let p = AffineParams::new(q(b), q("1")).unwrap();
        let report = intuitive_sweep(
            &p.map_series(63),
            &ns,
            &PrecisionConfig::exact(),
            &Stabilization::default(),
        )
        .unwrap();
        let traj = report.trajectory(1).unwrap();
        for (v, w) in traj.values.iter().zip(want) {
            let v = Scalar::as_f64(v.as_ref().unwrap());
            assert!((v - sign * w).abs() < 1e-14, "b={b}: {v} vs {}", sign * w);
        }
        let last = Scalar::as_f64(traj.values[3].as_ref().unwrap());
        assert!((last - sign / std::f64::consts::LN_2).abs() < 1e-4);
    }
}

#[test]
fn exponential_bell_entries() {
    // (e^{nx})_m = n^m / m!
    let f = exp_series::<Rational>(3, &());
    let bell = bell_matrix(&f, 4).unwrap();
    let mut fact = Rational::from(1);
    for m in 0..4usize {
        if m > 0 {
            fact *= Rational::from(m);
        }
        for n in 0..=4usize {
            let want = Rational::from(n.pow(m as u32)) / fact.clone();
            assert_eq!(*bell.get(m, n), want);
        }
    }
    let sys = abel_system(&f, 4).unwrap();
    assert_eq!(sys.matrix[(1, 1)], q("2"));
    assert_eq!(*bell.get(1, 2), q("2"));
    let one = abel_system(&exp_series::<Rational>(0, &()), 1).unwrap();
    assert_eq!(solve_truncated(&one).unwrap(), vec![q("1")]);
}

#[test]
fn log_polynomial_reference_value() {
    // L_200(0.3) for b = 1/2 and log_{1/2}(0.3)
    let cfg = PrecisionConfig::bits(53).unwrap();
    let v = affine::log_approx_bigfloat(&q("1/2"), 200, &q("0.3"), &cfg).unwrap();
    assert!((v.as_f64() - 1.736_963_119_615_474_3).abs() < 1e-14);
    let r = affine::reference_log(&q("1/2"), &q("0.3"), 200).unwrap();
    assert!((r.as_f64() - 1.736_965_594_166_206).abs() < 1e-14);
    assert!((v - r).as_f64().abs() < 1e-3);
}

#[test]
fn log_polynomial_small_cases() {
    let poly = log_poly(&q("1/2"), 3).unwrap();
    assert_eq!(poly.eval(&q("1/4")), q("15/8"));
    for n in 1..=12 {
        let poly = log_poly(&q("1/2"), n).unwrap();
        assert_eq!(poly.eval(&q("1")), zero());
        assert_eq!(poly.eval(&q("1/2")), q("1"));
    }
}

#[test]
fn binomial_tail_partial_sums() {
    // sum_{j=1}^{10^4} |C(x, j+1)| from 40-digit arithmetic
    let want = [
        (0.25, 0.668_397_911_025_324_3),
        (0.5, 0.494_358_456_750_838_9),
        (0.75, 0.249_724_207_606_863_4),
    ];
    for (x, w) in want {
        let t = binom_tail(&x, 10_000).unwrap();
        assert!((t.partial - w).abs() < 1e-12, "x={x}: {}", t.partial);
        assert!(t.partial < 1.0 - x);
    }
    assert_eq!(binom_tail(&1.0, 100).unwrap().partial, 0.0);
    let c4 = 0.5 * -0.5 * -1.5 * -2.5 / 24.0;
    assert_eq!(c4, -0.0390625);
    let bound = binom_term_bound(0.5, 4);
    assert!((bound - 0.264_625_002_076_584_3).abs() < 1e-12);
    assert!(c4.abs() <= bound);
}

#[test]
fn roots_of_unity() {
    assert_eq!(
        check_not_root_of_unity(&q("1"), 3),
        Err(AbelError::RootOfUnity { k: 1 })
    );
    assert_eq!(
        check_not_root_of_unity(&q("-1"), 3),
        Err(AbelError::RootOfUnity { k: 2 })
    );
    assert!(check_not_root_of_unity(&q("-1"), 1).is_ok());
    assert!(check_not_root_of_unity(&(1.0 + 1e-13), 4).is_err());
    assert!(check_not_root_of_unity(&(1.0 + 1e-9), 4).is_ok());
}

fn big(s: &str, bits: usize) -> BigFloat {
    BigFloat::from_rational(&q(s), &bits)
}

#[test]
fn polynomial_abel_unit_step_is_the_map() {
    // f(x) = x/2; the degree-200 context iterates it in the original coordinate
    let bits = 264;
    let ctx = IterationContext::polynomial(
        big("1/2", bits),
        big("1", bits),
        200,
        (big("0.1", bits), big("0.95", bits)),
        1e-12,
    )
    .unwrap();
    let got = fractional_iterate(&ctx, &big("1", bits), &big("0.3", bits)).unwrap();
    assert!((got.as_f64() - 0.15).abs() < 1e-3, "{}", got.as_f64());
}

#[test]
fn polynomial_abel_half_steps_compose() {
    let bits = 264;
    let ctx = IterationContext::polynomial(
        big("1/2", bits),
        big("1", bits),
        200,
        (big("0.1", bits), big("0.95", bits)),
        1e-12,
    )
    .unwrap();
    let zs: Vec<BigFloat> = ["0.3", "0.4", "0.5", "0.6", "0.7", "0.8"]
        .iter()
        .map(|z| big(z, bits))
        .collect();
    let half = big("1/2", bits);
    let deviation = semigroup_check(&ctx, &half, &half, &zs).unwrap();
    assert!(deviation < 1e-2, "{deviation}");
}
