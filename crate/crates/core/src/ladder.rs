//! Ladder matrices `N(n; x)` and the identities they satisfy.
//!
//! With `K_k(x, t) = (v_k'(t) - v_k'(x)) / (x - t)`,
//! `N_{i0} = sum_k int P_{n-e_i} A_{n,k} K_k dmu_k` and, for `j >= 1`,
//! `N_{ij} = -a_{n,j} sum_k int P_{n-e_i} A_{n+e_j,k} K_k dmu_k + v_i' delta_ij`,
//! where `P_{n-e_0}` means `P_n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{LaurentMatrix, LaurentPoly, Poly, Scalar};
use crate::mop::{MopSystem, MultiIndex};
use crate::verify::{Residual, Verification};

#[derive(Clone, Debug, PartialEq)]
pub struct LadderMatrix<S: Scalar> {
    pub index: MultiIndex,
    pub matrix: LaurentMatrix<S>,
}

impl<S: Scalar> fmt::Display for LadderMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{} = {}", self.index, self.matrix)
    }
}

/// Scalar functions of the single-weight ladder at degree `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalLadder<S: Scalar> {
    pub n: u32,
    pub h: S,
    pub alpha: S,
    /// `beta_n = h_n / h_{n-1}`, zero at `n = 0`.
    pub beta: S,
    pub a_fn: LaurentPoly<S>,
    /// Zero at `n = 0`.
    pub b_fn: LaurentPoly<S>,
}

impl<S: Scalar> MopSystem<S> {
    /// `sum_k int p(t) A_k(t) K_k(x, t) dmu_k(t)` as a Laurent polynomial in `x`.
    fn kernel_integral(&self, p: &Poly<S>, a: &[Poly<S>]) -> Result<LaurentPoly<S>> {
        let ctx = self.ctx();
        let mut acc = LaurentPoly::zero(ctx);
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for term in self.weights().kernel_expansion(k)?.terms() {
                let integral = self.inner_shifted(p, ak, k, term.t_power)?;
                acc = &acc + &LaurentPoly::monomial(term.coeff.clone() * &integral, term.x_power);
            }
        }
        Ok(acc)
    }

    pub fn ladder_matrix(&self, n: &MultiIndex) -> Result<LadderMatrix<S>> {
        self.check_index(n)?;
        let ctx = self.ctx();
        let r = self.r();
        let coeffs = self.nn_coeffs(n)?;
        let q = self.type1(n)?;
        let ups = (0..r).map(|j| self.type1(&n.plus(j))).collect::<Result<Vec<_>>>()?;
        let mut rows_p = vec![self.type2(n)?.p.clone()];
        for i in 0..r {
            rows_p.push(self.lower(n, i)?);
        }
        let mut m = LaurentMatrix::zeros(ctx, r + 1, r + 1);
        for (i, p) in rows_p.iter().enumerate() {
            if !p.is_zero() {
                m.set(i, 0, self.kernel_integral(p, &q.a)?);
            }
            for j in 1..=r {
                let mut entry = if p.is_zero() || coeffs.a[j - 1].is_zero() {
                    LaurentPoly::zero(ctx)
                } else {
                    self.kernel_integral(p, &ups[j - 1].a)?.scale(&-coeffs.a[j - 1].clone())
                };
                if i == j {
                    entry = &entry + &self.weights().potential(i - 1).derivative();
                }
                m.set(i, j, entry);
            }
        }
        Ok(LadderMatrix { index: n.clone(), matrix: m })
    }

    /// `P_stack' = N P_stack`, row by row.
    pub fn verify_ladder_type2(&self, n: &MultiIndex) -> Result<Verification> {
        let n_mat = self.ladder_matrix(n)?.matrix;
        let stack = self.stacked(n)?;
        let rhs = n_mat.mul_vec(&stack)?;
        let mut check = Residual::new(self.ctx(), "type II ladder", n.to_string());
        for (i, (p, r)) in stack.iter().zip(&rhs).enumerate() {
            let label = if i == 0 { "lowering row 0".to_string() } else { format!("raising row {i}") };
            check.laurent(&label, &p.derivative(), r);
        }
        check.finish()
    }

    /// For each `l`, with `U = (A_{n,l}, -a_{n,1} A_{n+e_1,l}, ..., -a_{n,r} A_{n+e_r,l})`:
    /// `-U' = (N^T - v_l' I) U`.
    ///
    /// This is the polynomial form of the ladder for `Q = sum A_k w_k`; the
    /// `-v_l'` shift is the derivative of the weight `w_l` carried by `A_{.,l}`.
    pub fn verify_ladder_type1(&self, n: &MultiIndex) -> Result<Verification> {
        let ctx = self.ctx();
        let r = self.r();
        let nt = self.ladder_matrix(n)?.matrix.transpose();
        let coeffs = self.nn_coeffs(n)?;
        let q = self.type1(n)?;
        let ups = (0..r).map(|j| self.type1(&n.plus(j))).collect::<Result<Vec<_>>>()?;
        let mut check = Residual::new(ctx, "type I ladder", n.to_string());
        for l in 0..r {
            let mut u = vec![LaurentPoly::from_poly(&q.a[l])];
            for j in 0..r {
                u.push(LaurentPoly::from_poly(&ups[j].a[l].scale(&-coeffs.a[j].clone())));
            }
            let vl = self.weights().potential(l).derivative();
            let shifted = nt.sub(&LaurentMatrix::identity(ctx, r + 1).map(|e| e * &vl))?;
            let rhs = shifted.mul_vec(&u)?;
            for (i, (ui, ri)) in u.iter().zip(&rhs).enumerate() {
                check.laurent(&format!("component {}, row {i}", l + 1), &-&ui.derivative(), ri);
            }
        }
        check.finish()
    }

    /// `N(n+e_l) W = W' + W N(n)` with `W = W(n+e_l)`, for every `l`.
    pub fn verify_compatibility(&self, n: &MultiIndex) -> Result<Verification> {
        let mut check = Residual::new(self.ctx(), "compatibility", n.to_string());
        let here = self.ladder_matrix(n)?.matrix;
        for l in 0..self.r() {
            let w = self.transfer_matrix(n, l)?.matrix;
            let up = self.ladder_matrix(&n.plus(l))?.matrix;
            let lhs = up.mul(&w)?;
            let rhs = w.derivative().add(&w.mul(&here)?)?;
            check.matrix(|i, j| format!("l={}, entry ({i},{j})", l + 1), &lhs, &rhs);
        }
        check.finish()
    }

    fn require_single_polynomial_weight(&self) -> Result<()> {
        if self.r() != 1 {
            return Err(Error::Unsupported(format!("the classical ladder needs r = 1, got r = {}", self.r())));
        }
        if !self.weights().potential(0).log_coeff().is_zero() {
            return Err(Error::Unsupported("the classical ladder needs a polynomial potential".into()));
        }
        Ok(())
    }

    /// `h_n`, `alpha_n`, `beta_n`, `A_n(z)` and `B_n(z)` of a single weight.
    pub fn classical_ladder(&self, n: u32) -> Result<ClassicalLadder<S>> {
        self.require_single_polynomial_weight()?;
        let ctx = self.ctx();
        let p = self.type2(&MultiIndex::new(vec![n]))?.p.clone();
        let h = self.inner(&p, &p, 0)?;
        let alpha = self.inner(&p.shift_up(1), &p, 0)? / &h;
        // K = -(v'(z) - v'(y)) / (z - y)
        let a_fn = self.kernel_integral(&p, std::slice::from_ref(&p))?.scale(&-h.recip());
        let (beta, b_fn) = if n == 0 {
            (S::zero(ctx), LaurentPoly::zero(ctx))
        } else {
            let prev = self.type2(&MultiIndex::new(vec![n - 1]))?.p.clone();
            let h_prev = self.inner(&prev, &prev, 0)?;
            let b_fn = self.kernel_integral(&prev, std::slice::from_ref(&p))?.scale(&-h_prev.recip());
            (h.clone() / &h_prev, b_fn)
        };
        Ok(ClassicalLadder { n, h, alpha, beta, a_fn, b_fn })
    }

    /// `(S1)`, `(S2)`, the scalar ladder equations, and their agreement with
    /// the `r = 1` ladder matrix and recurrence coefficients.
    pub fn verify_classical_s1_s2(&self, n: u32) -> Result<Verification> {
        self.require_single_polynomial_weight()?;
        let ctx = self.ctx();
        let mut check = Residual::new(ctx, "classical ladder", format!("n = {n}"));
        let cur = self.classical_ladder(n)?;
        let next = self.classical_ladder(n + 1)?;
        let z_minus_alpha = LaurentPoly::new(ctx, 0, vec![-cur.alpha.clone(), S::one(ctx)]);
        let vp = self.weights().potential(0).derivative();

        let s1_rhs = &(&z_minus_alpha * &cur.a_fn) - &vp;
        check.laurent("S1", &(&next.b_fn + &cur.b_fn), &s1_rhs);
        let prev_a = if n == 0 { LaurentPoly::zero(ctx) } else { self.classical_ladder(n - 1)?.a_fn };
        let s2_lhs = &LaurentPoly::one(ctx) + &(&z_minus_alpha * &(&next.b_fn - &cur.b_fn));
        let s2_rhs = &next.a_fn.scale(&next.beta) - &prev_a.scale(&cur.beta);
        check.laurent("S2", &s2_lhs, &s2_rhs);

        let idx = MultiIndex::new(vec![n]);
        let p = LaurentPoly::from_poly(&self.type2(&idx)?.p);
        let p_prev = LaurentPoly::from_poly(&self.lower(&idx, 0)?);
        check.laurent(
            "first ladder equation",
            &(&p.derivative() + &(&cur.b_fn * &p)),
            &(&cur.a_fn * &p_prev).scale(&cur.beta),
        );
        if n > 0 {
            check.laurent(
                "second ladder equation",
                &(&p_prev.derivative() - &(&(&cur.b_fn + &vp) * &p_prev)),
                &-&(&prev_a * &p),
            );
        }

        // r = 1 correspondence: N = [[-B_n, beta_n A_n], [-A_{n-1}, B_n + v']]
        let n_mat = self.ladder_matrix(&idx)?.matrix;
        check.laurent("N(0,0)", n_mat.get(0, 0), &-&cur.b_fn);
        check.laurent("N(0,1)", n_mat.get(0, 1), &cur.a_fn.scale(&cur.beta));
        check.laurent("N(1,0)", n_mat.get(1, 0), &-&prev_a);
        check.laurent("N(1,1)", n_mat.get(1, 1), &(&cur.b_fn + &vp));
        let coeffs = self.nn_coeffs(&idx)?;
        check.scalar("b = alpha_n", &coeffs.b[0], &cur.alpha);
        check.scalar("a = beta_n", &coeffs.a[0], &cur.beta);
        if n > 0 {
            let h_prev = cur.h.clone() / &cur.beta;
            let a1 = LaurentPoly::from_poly(&self.type1(&idx)?.a[0]);
            check.laurent("A_n = P_{n-1}/h_{n-1}", &a1, &p_prev.scale(&h_prev.recip()));
        }
        check.finish()
    }
}
