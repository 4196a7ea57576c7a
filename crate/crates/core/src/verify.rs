//! Outcome records for identity checks and the residual bookkeeping behind them.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{BiPoly, LaurentMatrix, LaurentPoly, Poly, Scalar};

/// A passed identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub check: String,
    pub location: String,
    /// Exact backend: largest absolute coefficient (so 0 on success).
    /// Float backend: largest residual relative to the largest magnitude seen.
    pub max_residual: f64,
    /// Non-fatal observations, e.g. a skipped ratio relation.
    pub flags: Vec<String>,
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: residual {:e}", self.check, self.location, self.max_residual)?;
        for flag in &self.flags {
            write!(f, " [{flag}]")?;
        }
        Ok(())
    }
}

/// Accumulates `lhs - rhs` differences of one identity.
#[derive(Debug)]
pub struct Residual<S: Scalar> {
    check: String,
    location: String,
    worst: S,
    worst_at: String,
    scale: S,
    flags: Vec<String>,
}

impl<S: Scalar> Residual<S> {
    pub fn new(ctx: S::Ctx, check: impl Into<String>, location: impl Into<String>) -> Self {
        Residual {
            check: check.into(),
            location: location.into(),
            worst: S::zero(ctx),
            worst_at: String::new(),
            scale: S::zero(ctx),
            flags: Vec::new(),
        }
    }

    fn record(&mut self, at: &str, diff: S, scale: S) {
        if scale.sign_cmp(&self.scale) == std::cmp::Ordering::Greater {
            self.scale = scale;
        }
        let d = diff.abs();
        if d.sign_cmp(&self.worst) == std::cmp::Ordering::Greater {
            self.worst = d;
            self.worst_at = at.to_string();
        }
    }

    /// `sum(terms) = 0`, scaled by the largest term.
    pub fn terms(&mut self, at: &str, terms: &[S]) {
        let ctx = self.worst.ctx();
        let sum = terms.iter().fold(S::zero(ctx), |acc, t| acc + t);
        self.record(at, sum, S::max_abs(ctx, terms));
    }

    pub fn scalar(&mut self, at: &str, lhs: &S, rhs: &S) {
        self.terms(at, &[lhs.clone(), -rhs.clone()]);
    }

    pub fn laurent(&mut self, at: &str, lhs: &LaurentPoly<S>, rhs: &LaurentPoly<S>) {
        let ctx = self.worst.ctx();
        let scale = S::max_abs(ctx, [&lhs.max_abs_coeff(), &rhs.max_abs_coeff()]);
        let diff = lhs - rhs;
        self.record(at, diff.max_abs_coeff(), scale);
    }

    pub fn poly(&mut self, at: &str, lhs: &Poly<S>, rhs: &Poly<S>) {
        self.laurent(at, &LaurentPoly::from_poly(lhs), &LaurentPoly::from_poly(rhs));
    }

    pub fn bipoly(&mut self, at: &str, lhs: &BiPoly<S>, rhs: &BiPoly<S>) {
        let ctx = self.worst.ctx();
        let scale = S::max_abs(ctx, [&lhs.max_abs_coeff(), &rhs.max_abs_coeff()]);
        self.record(at, lhs.sub(rhs).max_abs_coeff(), scale);
    }

    /// Entrywise comparison; `label` receives `(i, j)`.
    pub fn matrix(&mut self, label: impl Fn(usize, usize) -> String, lhs: &LaurentMatrix<S>, rhs: &LaurentMatrix<S>) {
        for i in 0..lhs.rows() {
            for j in 0..lhs.cols() {
                self.laurent(&label(i, j), lhs.get(i, j), rhs.get(i, j));
            }
        }
    }

    /// `value = 0`, where `scale` is the size of the terms that were summed into it.
    pub fn vanishes(&mut self, at: &str, value: &LaurentPoly<S>, scale: S) {
        self.record(at, value.max_abs_coeff(), scale);
    }

    pub fn flag(&mut self, note: impl Into<String>) {
        self.flags.push(note.into());
    }

    /// Residual in the reporting convention of [`Verification::max_residual`].
    pub fn value(&self) -> f64 {
        if S::EXACT || self.scale.is_zero() {
            return self.worst.to_f64();
        }
        (self.worst.clone() / &self.scale).to_f64()
    }

    fn passes(&self) -> bool {
        if S::EXACT {
            self.worst.is_zero()
        } else {
            self.worst.is_negligible(&self.scale)
        }
    }

    /// `Ok` when every recorded difference is zero under the backend policy.
    pub fn finish(self) -> Result<Verification> {
        let value = self.value();
        if !self.passes() {
            let location =
                if self.worst_at.is_empty() { self.location } else { format!("{} ({})", self.location, self.worst_at) };
            return Err(Error::IdentityViolation { check: self.check, location, residual: value });
        }
        Ok(Verification { check: self.check, location: self.location, max_residual: value, flags: self.flags })
    }
}
