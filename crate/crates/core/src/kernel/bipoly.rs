//! Bivariate polynomials in `(x, y)`, used for kernel identities.

use super::poly::Poly;
use super::scalar::Scalar;

/// Dense coefficients `c[i][j]` of `x^i y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<S: Scalar> {
    coeffs: Vec<Vec<S>>,
    ctx: S::Ctx,
}

impl<S: Scalar> BiPoly<S> {
    pub fn zero(ctx: S::Ctx) -> Self {
        BiPoly { coeffs: Vec::new(), ctx }
    }

    /// `p(x) q(y)`.
    pub fn outer(p: &Poly<S>, q: &Poly<S>) -> Self {
        let coeffs = p.coeffs().iter().map(|a| q.coeffs().iter().map(|b| a.clone() * b).collect()).collect();
        BiPoly { coeffs, ctx: p.ctx() }
    }

    pub fn coeff(&self, i: usize, j: usize) -> S {
        self.coeffs.get(i).and_then(|row| row.get(j)).cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    fn dims(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs.iter().map(Vec::len).max().unwrap_or(0))
    }

    fn combine(&self, rhs: &Self, f: impl Fn(S, &S) -> S) -> Self {
        let (a0, a1) = self.dims();
        let (b0, b1) = rhs.dims();
        let coeffs = (0..a0.max(b0))
            .map(|i| (0..a1.max(b1)).map(|j| f(self.coeff(i, j), &rhs.coeff(i, j))).collect())
            .collect();
        BiPoly { coeffs, ctx: self.ctx }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &S) -> Self {
        BiPoly { coeffs: self.coeffs.iter().map(|r| r.iter().map(|a| a.clone() * c).collect()).collect(), ctx: self.ctx }
    }

    /// Multiplies by `(x - y)`.
    pub fn mul_x_minus_y(&self) -> Self {
        let (d0, d1) = self.dims();
        let mut out = vec![vec![S::zero(self.ctx); d1 + 1]; d0 + 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i + 1][j] += c;
                out[i][j + 1] -= c;
            }
        }
        BiPoly { coeffs: out, ctx: self.ctx }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(S::is_zero)
    }

    pub fn max_abs_coeff(&self) -> S {
        S::max_abs(self.ctx, self.coeffs.iter().flatten())
    }

    /// Equality of values, ignoring trailing zero padding.
    pub fn same_as(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{Exact, Rational};

    #[test]
    fn x_minus_y_times_one_variable_factors() {
        let p = Poly::<Rational>::from_i64s(Exact, &[1, 1]);
        let one = Poly::<Rational>::one(Exact);
        let b = BiPoly::outer(&p, &one).mul_x_minus_y();
        // (1 + x)(x - y) = x + x^2 - y - xy
        assert_eq!(b.coeff(1, 0), Rational::from(1));
        assert_eq!(b.coeff(2, 0), Rational::from(1));
        assert_eq!(b.coeff(0, 1), Rational::from(-1));
        assert_eq!(b.coeff(1, 1), Rational::from(-1));
        assert!(b.sub(&b).is_zero());
    }
}
