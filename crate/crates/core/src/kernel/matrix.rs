//! Dense scalar and Laurent-polynomial matrices, plus the linear solvers.

use std::fmt;

use super::laurent::LaurentPoly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

// ---- Scalar matrices ----

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> ScalarMatrix<S> {
    pub fn zeros(ctx: S::Ctx, rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, data: vec![S::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: S::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, S::one(ctx));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ScalarMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).clone() * &v[0];
                for j in 1..self.cols {
                    acc += self.get(i, j).clone() * &v[j];
                }
                acc
            })
            .collect())
    }
}

/// Solves a square system with partial pivoting.
///
/// Exact backends pick the first nonzero pivot; float backends the largest in
/// magnitude and report `SingularMatrix` when it falls under the tolerance.
pub fn solve_linear<S: Scalar>(a: &ScalarMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!("{}x{} system with {} right-hand sides", a.rows, a.cols, b.len())));
    }
    let x = eliminate(a, b)?;
    if x.len() != a.cols {
        return Err(Error::SingularMatrix);
    }
    Ok(x)
}

/// Solves an overdetermined but consistent system `A x = b` (rows ≥ cols).
///
/// Fails with `SingularMatrix` when the columns are dependent and with
/// `DimensionMismatch` describing the offending row when the rows beyond the
/// rank are inconsistent.
pub fn solve_consistent<S: Scalar>(a: &ScalarMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if a.rows < a.cols || b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!("{}x{} system with {} right-hand sides", a.rows, a.cols, b.len())));
    }
    let x = eliminate(a, b)?;
    let ax = a.mul_vec(&x)?;
    let ctx = b.first().map(|s| s.ctx());
    if let Some(ctx) = ctx {
        let scale = S::max_abs(ctx, b.iter().chain(a.data.iter()));
        for (i, (l, r)) in ax.iter().zip(b).enumerate() {
            if !(l.clone() - r).is_negligible(&scale) {
                return Err(Error::DimensionMismatch(format!("row {i} of the system is inconsistent")));
            }
        }
    }
    Ok(x)
}

fn eliminate<S: Scalar>(a: &ScalarMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    let (rows, cols) = (a.rows, a.cols);
    if cols == 0 {
        return Ok(Vec::new());
    }
    let ctx = a.data[0].ctx();
    let scale = S::max_abs(ctx, &a.data);
    let mut m: Vec<Vec<S>> = (0..rows)
        .map(|i| {
            let mut row: Vec<S> = a.data[i * cols..(i + 1) * cols].to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..cols {
        let pivot = if S::EXACT {
            (col..rows).find(|&r| !m[r][col].is_zero())
        } else {
            (col..rows).max_by(|&r1, &r2| m[r1][col].abs().sign_cmp(&m[r2][col].abs()))
        };
        let Some(p) = pivot.filter(|&p| !m[p][col].is_negligible(&scale)) else {
            return Err(Error::SingularMatrix);
        };
        m.swap(col, p);
        let inv = m[col][col].recip();
        for r in col + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() * &inv;
            for c in col..=cols {
                let t = f.clone() * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    let mut x = vec![S::zero(ctx); cols];
    for i in (0..cols).rev() {
        let mut acc = m[i][cols].clone();
        for j in i + 1..cols {
            acc -= m[i][j].clone() * &x[j];
        }
        x[i] = acc / &m[i][i];
    }
    Ok(x)
}

// ---- Laurent matrices ----

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly<S>>,
    ctx: S::Ctx,
}

impl<S: Scalar> LaurentMatrix<S> {
    pub fn zeros(ctx: S::Ctx, rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, data: vec![LaurentPoly::zero(ctx); rows * cols], ctx }
    }

    pub fn identity(ctx: S::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: S::Ctx, rows: Vec<Vec<LaurentPoly<S>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(LaurentMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), ctx })
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<S> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly<S>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &LaurentPoly<S>)> {
        self.data.iter().enumerate().map(move |(k, e)| (k / self.cols, k % self.cols, e))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = LaurentPoly::zero(self.ctx);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[LaurentPoly<S>]) -> Result<Vec<LaurentPoly<S>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(LaurentPoly::zero(self.ctx), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&LaurentPoly<S>, &LaurentPoly<S>) -> LaurentPoly<S>) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(LaurentMatrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx })
    }

    /// Entrywise `d/dx`.
    pub fn derivative(&self) -> Self {
        self.map(LaurentPoly::derivative)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ctx, self.cols, self.rows);
        for (i, j, e) in self.entries() {
            out.set(j, i, e.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly<S>) -> LaurentPoly<S>) -> Self {
        LaurentMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), ctx: self.ctx }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn max_abs_coeff(&self) -> S {
        let per_entry: Vec<S> = self.data.iter().map(LaurentPoly::max_abs_coeff).collect();
        S::max_abs(self.ctx, &per_entry)
    }

    /// Lowest exponent over all entries (`None` for the zero matrix).
    pub fn min_degree(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentPoly::min_degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentPoly::max_degree).max()
    }
}

impl<S: Scalar> fmt::Display for LaurentMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{BigFloat, Exact, Precision, Rational};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn mat(rows: &[&[i64]]) -> ScalarMatrix<Rational> {
        ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn solve_identity_diagonal_and_two_by_two() {
        let id = ScalarMatrix::identity(Exact, 3);
        assert_eq!(solve_linear(&id, &[q(1), q(2), q(3)]).unwrap(), vec![q(1), q(2), q(3)]);
        let d = mat(&[&[2, 0], &[0, 4]]);
        assert_eq!(solve_linear(&d, &[q(1), q(1)]).unwrap(), vec![Rational::new(1, 2), Rational::new(1, 4)]);
        let a = mat(&[&[1, 1], &[1, 2]]);
        assert_eq!(solve_linear(&a, &[q(3), q(5)]).unwrap(), vec![q(1), q(2)]);
    }

    #[test]
    fn singular_systems_are_reported() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_linear(&a, &[q(1), q(1)]), Err(Error::SingularMatrix));
        let p = Precision::digits(30);
        let f = |v: &str| BigFloat::parse(p, v).unwrap();
        let a = ScalarMatrix::from_rows(vec![vec![f("1"), f("1")], vec![f("1"), f("1.00000000000000000000000000001")]]).unwrap();
        assert_eq!(solve_linear(&a, &[f("1"), f("2")]), Err(Error::SingularMatrix));
    }

    #[test]
    fn overdetermined_consistency() {
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_consistent(&a, &[q(1), q(2), q(3)]).unwrap(), vec![q(1), q(2)]);
        assert!(matches!(solve_consistent(&a, &[q(1), q(2), q(4)]), Err(Error::DimensionMismatch(_))));
    }

    fn lm(ctx: Exact, rows: Vec<Vec<LaurentPoly<Rational>>>) -> LaurentMatrix<Rational> {
        LaurentMatrix::from_rows(ctx, rows).unwrap()
    }

    fn mono(c: i64, k: i64) -> LaurentPoly<Rational> {
        LaurentPoly::monomial(q(c), k)
    }

    #[test]
    fn laurent_products() {
        let b = lm(Exact, vec![vec![mono(1, 2), mono(3, -1)], vec![mono(0, 0), mono(1, 0)]]);
        assert_eq!(LaurentMatrix::identity(Exact, 2).mul(&b).unwrap(), b);
        let d1 = lm(Exact, vec![vec![mono(1, 1), mono(0, 0)], vec![mono(0, 0), mono(1, -1)]]);
        let d2 = lm(Exact, vec![vec![mono(1, -1), mono(0, 0)], vec![mono(0, 0), mono(1, 1)]]);
        assert_eq!(d1.mul(&d2).unwrap(), LaurentMatrix::identity(Exact, 2));
        let xs = lm(Exact, vec![vec![mono(1, 1); 2]; 2]);
        let ones = lm(Exact, vec![vec![mono(1, 0); 2]; 2]);
        assert_eq!(xs.mul(&ones).unwrap(), lm(Exact, vec![vec![mono(2, 1); 2]; 2]));
        assert!(xs.mul(&LaurentMatrix::identity(Exact, 3)).is_err());
    }

    #[test]
    fn laurent_derivative() {
        let c = lm(Exact, vec![vec![mono(4, 0), mono(1, 2), mono(1, -1)]]);
        let d = c.derivative();
        assert!(d.get(0, 0).is_zero());
        assert_eq!(d.get(0, 1), &mono(2, 1));
        assert_eq!(d.get(0, 2), &mono(-1, -2));
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), n)
    }

    fn laurent_entry() -> impl Strategy<Value = LaurentPoly<Rational>> {
        (-1i64..=1, prop::collection::vec(-3i64..=3, 0..3))
            .prop_map(|(lo, c)| LaurentPoly::new(Exact, lo, c.into_iter().map(q).collect()))
    }

    fn laurent_matrix(n: usize) -> impl Strategy<Value = LaurentMatrix<Rational>> {
        prop::collection::vec(prop::collection::vec(laurent_entry(), n), n).prop_map(|rows| lm(Exact, rows))
    }

    proptest! {
        #[test]
        fn solve_then_multiply_back(rows in small_matrix(4), b in prop::collection::vec(-9i64..=9, 4)) {
            let a = ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap();
            let b: Vec<Rational> = b.into_iter().map(q).collect();
            match solve_linear(&a, &b) {
                Ok(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
                Err(e) => prop_assert_eq!(e, Error::SingularMatrix),
            }
        }

        #[test]
        fn product_rule(a in laurent_matrix(2), b in laurent_matrix(2)) {
            let lhs = a.mul(&b).unwrap().derivative();
            let rhs = a.derivative().mul(&b).unwrap().add(&a.mul(&b.derivative()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_min_degree_bound(a in laurent_matrix(2), b in laurent_matrix(2)) {
            let p = a.mul(&b).unwrap();
            if let (Some(lo), Some(la), Some(lb)) = (p.min_degree(), a.min_degree(), b.min_degree()) {
                prop_assert!(lo >= la + lb);
            }
        }
    }
}
