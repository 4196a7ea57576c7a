//! Laurent polynomials `sum_{k=lo}^{hi} c_k x^k` with possibly negative `lo`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S: Scalar> {
    min_degree: i64,
    coeffs: Vec<S>,
    ctx: S::Ctx,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn new(ctx: S::Ctx, min_degree: i64, coeffs: Vec<S>) -> Self {
        let mut p = LaurentPoly { min_degree, coeffs, ctx };
        p.normalize();
        p
    }

    pub fn zero(ctx: S::Ctx) -> Self {
        LaurentPoly { min_degree: 0, coeffs: Vec::new(), ctx }
    }

    pub fn one(ctx: S::Ctx) -> Self {
        Self::constant(S::one(ctx))
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: S, k: i64) -> Self {
        let ctx = c.ctx();
        Self::new(ctx, k, vec![c])
    }

    pub fn from_poly(p: &Poly<S>) -> Self {
        Self::new(p.ctx(), 0, p.coeffs().to_vec())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_degree += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_degree = 0;
        }
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_degree + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> S {
        let idx = k - self.min_degree;
        if idx < 0 {
            return S::zero(self.ctx);
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_else(|| S::zero(self.ctx))
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        let lo = self.min_degree;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (lo + i as i64, c))
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> S {
        S::max_abs(self.ctx, &self.coeffs)
    }

    /// Polynomial part, if there are no negative powers.
    pub fn to_poly(&self) -> Option<Poly<S>> {
        if self.is_zero() {
            return Some(Poly::zero(self.ctx));
        }
        if self.min_degree < 0 {
            return None;
        }
        let mut c = vec![S::zero(self.ctx); self.min_degree as usize];
        c.extend(self.coeffs.iter().cloned());
        Some(Poly::new(self.ctx, c))
    }

    pub fn mul_x_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { min_degree: self.min_degree + k, coeffs: self.coeffs.clone(), ctx: self.ctx }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.ctx, self.min_degree, self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * &S::from_i64(self.ctx, self.min_degree + i as i64))
            .collect();
        Self::new(self.ctx, self.min_degree - 1, coeffs)
    }

    /// Value at a nonzero point.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        let mut scale = S::one(self.ctx);
        let base = if self.min_degree < 0 { x.recip() } else { x.clone() };
        for _ in 0..self.min_degree.unsigned_abs() {
            scale *= &base;
        }
        acc * &scale
    }

    /// Drops coefficients negligible relative to `scale`.
    pub fn trimmed(&self, scale: &S) -> Self {
        Self::new(
            self.ctx,
            self.min_degree,
            self.coeffs.iter().map(|c| if c.is_negligible(scale) { S::zero(self.ctx) } else { c.clone() }).collect(),
        )
    }
}

impl<S: Scalar> Add for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        combine(self, rhs, |a, b| a + b)
    }
}

impl<S: Scalar> Sub for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        combine(self, rhs, |a, b| a - b)
    }
}

fn combine<S: Scalar>(a: &LaurentPoly<S>, b: &LaurentPoly<S>, f: impl Fn(S, &S) -> S) -> LaurentPoly<S> {
    let bounds = [a, b].into_iter().filter_map(|p| Some((p.min_degree()?, p.max_degree()?)));
    let Some((lo, hi)) = bounds.reduce(|(l1, h1), (l2, h2)| (l1.min(l2), h1.max(h2))) else {
        return LaurentPoly::zero(a.ctx);
    };
    let coeffs = (lo..=hi).map(|k| f(a.coeff(k), &b.coeff(k))).collect();
    LaurentPoly::new(a.ctx, lo, coeffs)
}

impl<S: Scalar> Mul for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(self.ctx);
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
        LaurentPoly::new(self.ctx, self.min_degree + rhs.min_degree, out)
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly { min_degree: self.min_degree, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), ctx: self.ctx }
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
