//! Dense univariate polynomials, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
    ctx: S::Ctx,
}

impl<S: Scalar> Poly<S> {
    // ---- Constructors ----

    pub fn new(ctx: S::Ctx, coeffs: Vec<S>) -> Self {
        let mut p = Poly { coeffs, ctx };
        p.normalize();
        p
    }

    pub fn zero(ctx: S::Ctx) -> Self {
        Poly { coeffs: Vec::new(), ctx }
    }

    pub fn one(ctx: S::Ctx) -> Self {
        Self::constant(S::one(ctx))
    }

    pub fn constant(c: S) -> Self {
        let ctx = c.ctx();
        Self::new(ctx, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(ctx: S::Ctx) -> Self {
        Self::monomial(S::one(ctx), 1)
    }

    pub fn monomial(c: S, degree: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![S::zero(ctx); degree];
        coeffs.push(c);
        Self::new(ctx, coeffs)
    }

    pub fn from_i64s(ctx: S::Ctx, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| S::from_i64(ctx, c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    // ---- Accessors ----

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == S::one(self.ctx))
    }

    pub fn max_abs_coeff(&self) -> S {
        S::max_abs(self.ctx, &self.coeffs)
    }

    // ---- Arithmetic ----

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * &S::from_i64(self.ctx, i as i64))
            .collect();
        Self::new(self.ctx, coeffs)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.ctx, self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![S::zero(self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs, ctx: self.ctx }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(self.ctx), self.clone());
        };
        let mut quot = vec![S::zero(self.ctx); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = rem[k + dd].clone() * &lead_inv;
            if !q.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= q.clone() * dc;
                }
            }
            rem[k + dd] = S::zero(self.ctx);
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(self.ctx, quot), Self::new(self.ctx, rem))
    }

    /// Monic greatest common divisor; meaningful for exact backends.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Drops coefficients negligible relative to `scale` (float backends).
    pub fn trimmed(&self, scale: &S) -> Self {
        Self::new(
            self.ctx,
            self.coeffs
                .iter()
                .map(|c| if c.is_negligible(scale) { S::zero(self.ctx) } else { c.clone() })
                .collect(),
        )
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(self.ctx, coeffs)
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - &rhs.coeff(i)).collect();
        Poly::new(self.ctx, coeffs)
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut out = vec![S::zero(self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b;
            }
        }
        Poly::new(self.ctx, out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), ctx: self.ctx }
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}
