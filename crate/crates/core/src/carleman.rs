//! Bell (transposed Carleman) matrices and the truncated Abel equation system.
//!
//! Column `n` of the Bell matrix holds the coefficients of `f^n`. Writing the
//! Abel equation `alpha(f(x)) = alpha(x) + 1` coefficient-wise gives the linear
//! system `sum_n ((f^n)_m - I_{m,n}) alpha_n = I_{m,0}`; column 0 is identically
//! zero and is dropped, leaving unknowns `alpha_1..alpha_N`.

use serde::Serialize;

use crate::error::{AbelError, Result};
use crate::linalg::DenseMatrix;
use crate::powerseries::TruncatedSeries;
use crate::scalar::Scalar;

/// `N x (N+1)` grid with entry `(m, n) = (f^n)_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellMatrix<S> {
    entries: DenseMatrix<S>,
    order: usize,
}

impl<S: Scalar> BellMatrix<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &DenseMatrix<S> {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> &S {
        &self.entries[(m, n)]
    }
}

/// `A|_N x = u|_N` with `A[m][n] = (f^{n+1})_m - I_{m,n+1}` and `u = (1, 0, ..)`.
/// Column index `n` carries the unknown `alpha_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelSystem<S> {
    pub matrix: DenseMatrix<S>,
    pub rhs: Vec<S>,
}

impl<S: Scalar> AbelSystem<S> {
    pub fn size(&self) -> usize {
        self.rhs.len()
    }
}

fn check_input<S: Scalar>(f: &TruncatedSeries<S>, n: usize) -> Result<()> {
    if n == 0 {
        return Err(AbelError::Domain(
            "truncation size N must be positive".into(),
        ));
    }
    if !f.center().is_zero() {
        return Err(AbelError::NonZeroCenter(f.center().render()));
    }
    if f.order() + 1 < n {
        return Err(AbelError::InsufficientOrder {
            need: n - 1,
            have: f.order(),
        });
    }
    Ok(())
}

pub fn bell_matrix<S: Scalar>(f: &TruncatedSeries<S>, n: usize) -> Result<BellMatrix<S>> {
    check_input(f, n)?;
    let f = f.truncate(n - 1);
    let powers = f.powers(n);
    let zero = f.center().zero_like();
    let mut entries = DenseMatrix::filled(n, n + 1, zero);
    for (col, p) in powers.iter().enumerate() {
        for m in 0..n {
            entries[(m, col)] = p.coeff(m);
        }
    }
    Ok(BellMatrix { entries, order: n })
}

pub fn abel_system<S: Scalar>(f: &TruncatedSeries<S>, n: usize) -> Result<AbelSystem<S>> {
    Ok(abel_system_from_bell(&bell_matrix(f, n)?))
}

pub fn abel_system_from_bell<S: Scalar>(bell: &BellMatrix<S>) -> AbelSystem<S> {
    let n = bell.order();
    let zero = bell.get(0, 0).zero_like();
    let one = zero.one_like();
    let mut matrix = DenseMatrix::filled(n, n, zero.clone());
    for m in 0..n {
        for col in 0..n {
            let mut v = bell.get(m, col + 1).clone();
            if m == col + 1 {
                v = v - one.clone();
            }
            matrix[(m, col)] = v;
        }
    }
    let mut rhs = vec![zero; n];
    rhs[0] = one;
    AbelSystem { matrix, rhs }
}

/// Row-major CSV, one line per row, full-precision cells.
pub fn matrix_csv<S: Scalar>(m: &DenseMatrix<S>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(Scalar::render).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// The system as CSV with the right-hand side as an extra last column.
pub fn system_csv<S: Scalar>(sys: &AbelSystem<S>) -> String {
    let mut out = String::new();
    for i in 0..sys.size() {
        let mut line: Vec<String> = sys.matrix.row(i).iter().map(Scalar::render).collect();
        line.push(sys.rhs[i].render());
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn rows(m: &DenseMatrix<Rational>) -> Vec<Vec<String>> {
        m.to_rows()
            .into_iter()
            .map(|r| r.iter().map(Scalar::render).collect())
            .collect()
    }

    fn strs(rs: &[&[&str]]) -> Vec<Vec<String>> {
        rs.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn bell_of_2x_plus_1() {
        let f = TruncatedSeries::affine(q("2"), q("1"), 2);
        let b = bell_matrix(&f, 3).unwrap();
        assert_eq!(
            rows(b.entries()),
            strs(&[
                &["1", "1", "1", "1"],
                &["0", "2", "4", "6"],
                &["0", "0", "4", "12"]
            ])
        );
    }

    #[test]
    fn bell_of_identity_is_identity_pattern() {
        let f = TruncatedSeries::affine(q("1"), q("0"), 5);
        let b = bell_matrix(&f, 5).unwrap();
        for m in 0..5 {
            for n in 0..=5 {
                let want = if m == n { q("1") } else { q("0") };
                assert_eq!(*b.get(m, n), want);
            }
        }
        let sys = abel_system(&f, 4).unwrap();
        assert!(sys.matrix.to_rows().iter().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn abel_system_of_2x_plus_1() {
        let f = TruncatedSeries::affine(q("2"), q("1"), 1);
        let sys = abel_system(&f, 2).unwrap();
        assert_eq!(rows(&sys.matrix), strs(&[&["1", "1"], &["1", "4"]]));
        assert_eq!(sys.rhs, vec![q("1"), q("0")]);
    }

    #[test]
    fn column_zero_is_unit_vector() {
        let f = TruncatedSeries::at_zero(vec![q("3"), q("-1"), q("1/2"), q("7")]).unwrap();
        let b = bell_matrix(&f, 4).unwrap();
        assert_eq!(*b.get(0, 0), q("1"));
        for m in 1..4 {
            assert!(b.get(m, 0).is_zero());
        }
    }

    #[test]
    fn input_checks() {
        let f = TruncatedSeries::affine(q("2"), q("1"), 1);
        assert!(matches!(
            bell_matrix(&f, 3),
            Err(AbelError::InsufficientOrder { need: 2, have: 1 })
        ));
        assert!(bell_matrix(&f, 0).is_err());
        let c = TruncatedSeries::new(vec![q("1"), q("2")], q("1")).unwrap();
        assert!(matches!(
            bell_matrix(&c, 1),
            Err(AbelError::NonZeroCenter(_))
        ));
    }

    #[test]
    fn csv_rendering() {
        let f = TruncatedSeries::affine(q("1/2"), q("1"), 1);
        let sys = abel_system(&f, 2).unwrap();
        assert_eq!(system_csv(&sys), "1,1,1\n-1/2,1,0\n");
        assert_eq!(
            matrix_csv(bell_matrix(&f, 2).unwrap().entries()),
            "1,1,1\n0,1/2,1\n"
        );
    }
}
