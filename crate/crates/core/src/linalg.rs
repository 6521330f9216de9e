//! Dense matrices and the two direct solvers behind [`Scalar::solve_dense`].

use std::ops::{Index, IndexMut};

use dashu_int::ops::Gcd;
use dashu_int::{IBig, UBig};
use serde::Serialize;

use crate::error::{AbelError, Result};
use crate::scalar::{abs_cmp, Rational, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn filled(rows: usize, cols: usize, value: S) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(x[0].zero_like(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl<S> Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

struct LuFactors<S> {
    lu: DenseMatrix<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> LuFactors<S> {
    fn solve(&self, rhs: &[S]) -> Vec<S> {
        let n = self.lu.rows();
        let mut y: Vec<S> = self.perm.iter().map(|&p| rhs[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)].clone() * y[j].clone();
                y[i] = y[i].clone() - t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(i, j)].clone() * y[j].clone();
                y[i] = y[i].clone() - t;
            }
            y[i] = y[i].clone() / self.lu[(i, i)].clone();
        }
        y
    }
}

/// min/max absolute diagonal of the eliminated matrix.
fn diagonal_ratio<S: Scalar>(m: &DenseMatrix<S>, upto: usize) -> f64 {
    let mags: Vec<f64> = (0..upto).map(|i| m[(i, i)].as_f64().abs()).collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || upto == 0 {
        0.0
    } else {
        min / max
    }
}

fn lu_factor<S: Scalar>(a: &DenseMatrix<S>) -> Result<LuFactors<S>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    let scale = a.data.iter().map(|v| v.as_f64().abs()).fold(0.0, f64::max);
    let ctx = a.data[0].ctx();
    let threshold = n as f64 * S::unit_roundoff(&ctx) * scale;

    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| abs_cmp(&lu[(i, k)], &lu[(j, k)]))
            .expect("non-empty range");
        let pivot = lu[(p, k)].clone();
        if pivot.is_zero() || pivot.as_f64().abs() <= threshold {
            return Err(AbelError::Singular {
                n,
                condition: diagonal_ratio(&lu, k),
            });
        }
        lu.swap_rows(k, p);
        perm.swap(k, p);
        for i in k + 1..n {
            let factor = lu[(i, k)].clone() / pivot.clone();
            for j in k + 1..n {
                let t = factor.clone() * lu[(k, j)].clone();
                lu[(i, j)] = lu[(i, j)].clone() - t;
            }
            lu[(i, k)] = factor;
        }
    }
    Ok(LuFactors { lu, perm })
}

/// Dense LU with partial pivoting followed by one step of iterative refinement.
pub fn lu_solve<S: Scalar>(a: &DenseMatrix<S>, rhs: &[S]) -> Result<Vec<S>> {
    assert_eq!(a.rows(), rhs.len());
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let factors = lu_factor(a)?;
    let mut x = factors.solve(rhs);

    let ax = a.mul_vec(&x);
    let residual: Vec<S> = rhs.iter().zip(ax).map(|(b, v)| b.clone() - v).collect();
    let dx = factors.solve(&residual);
    for (xi, di) in x.iter_mut().zip(dx) {
        *xi = xi.clone() + di;
    }
    Ok(x)
}

/// Exact solve: scale each augmented row to integers, then fraction-free
/// (Bareiss) elimination with row swaps on zero pivots, then rational
/// back-substitution.
pub fn bareiss_solve(a: &DenseMatrix<Rational>, rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    assert_eq!(n, rhs.len());

    let mut m: Vec<Vec<IBig>> = (0..n)
        .map(|i| {
            let row: Vec<&Rational> = a.row(i).iter().chain(std::iter::once(&rhs[i])).collect();
            let lcm = row.iter().fold(UBig::ONE, |acc, r| {
                let d = r.denominator();
                let g = (&acc).gcd(d);
                &acc / g * d
            });
            let lcm = IBig::from(lcm);
            row.into_iter()
                .map(|r| {
                    let (num, den) = r.clone().into_parts();
                    num * (&lcm / IBig::from(den))
                })
                .collect()
        })
        .collect();

    let mut prev = IBig::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != IBig::ZERO) else {
            return Err(AbelError::Singular { n, condition: 0.0 });
        };
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = IBig::ZERO;
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::from(0); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from(m[i][j].clone()) * x[j].clone();
        }
        x[i] = acc / Rational::from(m[i][i].clone());
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, BigFloat};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qm(rows: &[&[&str]]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| q(s)).collect())
                .collect(),
        )
    }

    #[test]
    fn bareiss_two_by_two() {
        let a = qm(&[&["1", "1"], &["1", "4"]]);
        let x = bareiss_solve(&a, &[q("1"), q("0")]).unwrap();
        assert_eq!(x, vec![q("4/3"), q("-1/3")]);
    }

    #[test]
    fn bareiss_needs_row_swap() {
        let a = qm(&[&["0", "2"], &["3", "1"]]);
        let x = bareiss_solve(&a, &[q("4"), q("5")]).unwrap();
        assert_eq!(x, vec![q("1"), q("2")]);
    }

    #[test]
    fn bareiss_fractional_entries() {
        let a = qm(&[
            &["1/2", "1/3", "0"],
            &["0", "1/5", "2/7"],
            &["1", "0", "-1/4"],
        ]);
        let x_true = vec![q("3"), q("-2/3"), q("7/5")];
        let rhs = a.mul_vec(&x_true);
        assert_eq!(bareiss_solve(&a, &rhs).unwrap(), x_true);
    }

    #[test]
    fn singular_detection() {
        let a = qm(&[&["1", "2"], &["2", "4"]]);
        assert!(matches!(
            bareiss_solve(&a, &[q("1"), q("0")]),
            Err(AbelError::Singular { n: 2, .. })
        ));
        let z = DenseMatrix::filled(3, 3, 0.0f64);
        assert!(matches!(
            lu_solve(&z, &[1.0, 0.0, 0.0]),
            Err(AbelError::Singular { n: 3, .. })
        ));
        let near = DenseMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-17]]);
        assert!(lu_solve(&near, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn lu_matches_exact_solution() {
        let a = DenseMatrix::from_rows(vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ]);
        let x = lu_solve(&a, &[8.0, -11.0, -3.0]).unwrap();
        for (got, want) in x.iter().zip([2.0, 3.0, -1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_bigfloat() {
        let ctx = 200usize;
        let c = |s: &str| BigFloat::from_rational(&q(s), &ctx);
        let a = DenseMatrix::from_rows(vec![vec![c("1"), c("1")], vec![c("1"), c("4")]]);
        let x = lu_solve(&a, &[c("1"), c("0")]).unwrap();
        assert!((x[0].clone() - c("4/3")).as_f64().abs() < 1e-55);
        assert!((x[1].clone() - c("-1/3")).as_f64().abs() < 1e-55);
    }
}
