//! Nearest-neighbor recurrence coefficients, transfer matrices and the
//! partial difference equations linking neighboring coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{solve_consistent, LaurentMatrix, LaurentPoly, Poly, Scalar, ScalarMatrix};
use crate::mop::{memo, MopSystem, MultiIndex, PerturbTarget};
use crate::verify::{Residual, Verification};

/// `a_{n,j}` and `b_{n,j}` in
/// `x P_n = P_{n+e_l} + b_{n,l} P_n + sum_j a_{n,j} P_{n-e_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NnCoeffs<S: Scalar> {
    pub index: MultiIndex,
    pub a: Vec<S>,
    pub b: Vec<S>,
}

/// `W(n + e_l)`, mapping the stacked vector at `n` to the one at `n + e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix<S: Scalar> {
    pub direction: usize,
    /// The index `n + e_l` the matrix belongs to.
    pub index: MultiIndex,
    pub matrix: LaurentMatrix<S>,
}

impl<S: Scalar> fmt::Display for NnCoeffs<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|v| v.to_string()).collect();
        let b: Vec<String> = self.b.iter().map(|v| v.to_string()).collect();
        write!(f, "{}: a = [{}], b = [{}]", self.index, a.join(", "), b.join(", "))
    }
}

fn agree<S: Scalar>(x: &S, y: &S) -> bool {
    let scale = S::max_abs(x.ctx(), [x, y]);
    (x.clone() - y).is_negligible(&scale)
}

impl<S: Scalar> MopSystem<S> {
    /// `(P_n, P_{n-e_1}, ..., P_{n-e_r})`, with zero entries where `n_j = 0`.
    pub fn stacked(&self, n: &MultiIndex) -> Result<Vec<LaurentPoly<S>>> {
        let mut out = vec![LaurentPoly::from_poly(&self.type2(n)?.p)];
        for j in 0..self.r() {
            out.push(LaurentPoly::from_poly(&self.lower(n, j)?));
        }
        Ok(out)
    }

    pub fn nn_coeffs(&self, n: &MultiIndex) -> Result<std::sync::Arc<NnCoeffs<S>>> {
        self.check_index(n)?;
        memo(&self.coeffs, n, || {
            let mut c = self.compute_coeffs(n)?;
            if let Some(p) = &self.perturbation {
                let factor = S::one(self.ctx()) + &p.relative;
                match p.target {
                    PerturbTarget::A => c.a[0] *= &factor,
                    PerturbTarget::B => c.b[0] *= &factor,
                }
            }
            Ok(c)
        })
    }

    /// Solves `x P_n - P_{n+e_l} = b_l P_n + sum_{n_j >= 1} a_j P_{n-e_j}`
    /// coefficientwise; returns `(b_l, a)` with zeros for inactive `j`.
    fn match_direction(&self, n: &MultiIndex, l: usize) -> Result<(S, Vec<S>)> {
        let ctx = self.ctx();
        let size = n.size() as usize;
        let p = self.type2(n)?.p.clone();
        let target = &p.shift_up(1) - &self.type2(&n.plus(l))?.p;
        let active: Vec<usize> = (0..self.r()).filter(|&j| n.get(j) > 0).collect();
        let mut columns = vec![p];
        for &j in &active {
            columns.push(self.lower(n, j)?);
        }
        let rows = (0..=size).map(|i| columns.iter().map(|c| c.coeff(i)).collect()).collect();
        let rhs: Vec<S> = (0..=size).map(|i| target.coeff(i)).collect();
        let sol = solve_consistent(&ScalarMatrix::from_rows(rows)?, &rhs).map_err(|e| match e {
            Error::SingularMatrix => Error::NotNormal { index: n.to_string() },
            Error::DimensionMismatch(detail) => Error::InconsistentCoefficients {
                index: n.to_string(),
                detail: format!("direction {}: {detail}", l + 1),
            },
            e => e,
        })?;
        let mut a = vec![S::zero(ctx); self.r()];
        for (k, &j) in active.iter().enumerate() {
            a[j] = sol[k + 1].clone();
        }
        Ok((sol[0].clone(), a))
    }

    fn compute_coeffs(&self, n: &MultiIndex) -> Result<NnCoeffs<S>> {
        let ctx = self.ctx();
        let r = self.r();
        let inconsistent = |detail: String| Error::InconsistentCoefficients { index: n.to_string(), detail };

        let mut b = Vec::with_capacity(r);
        let mut matched_a: Option<Vec<S>> = None;
        for l in 0..r {
            let (bl, a) = self.match_direction(n, l)?;
            if let Some(prev) = &matched_a {
                for j in 0..r {
                    if !agree(&prev[j], &a[j]) {
                        return Err(inconsistent(format!(
                            "a_{} differs between directions 1 and {}: {} vs {}",
                            j + 1,
                            l + 1,
                            prev[j],
                            a[j]
                        )));
                    }
                }
            } else {
                matched_a = Some(a);
            }
            b.push(bl);
        }
        let matched_a = matched_a.unwrap_or_default();

        let mut a = vec![S::zero(ctx); r];
        for j in 0..r {
            if n.get(j) == 0 {
                continue;
            }
            let p = &self.type2(n)?.p;
            let lower = self.type2(&n.minus(j)?)?;
            let num = self.inner(&Poly::monomial(S::one(ctx), n.get(j) as usize), p, j)?;
            let den = self.inner(&Poly::monomial(S::one(ctx), n.get(j) as usize - 1), &lower.p, j)?;
            if den.is_zero() {
                return Err(Error::NotNormal { index: n.to_string() });
            }
            let by_moments = num / &den;
            let by_kappa = self.kappa(n, j)? / &self.kappa(&n.plus(j), j)?;
            if !agree(&by_moments, &by_kappa) || !agree(&by_moments, &matched_a[j]) {
                return Err(inconsistent(format!(
                    "a_{}: moment ratio {by_moments}, kappa ratio {by_kappa}, coefficient matching {}",
                    j + 1,
                    matched_a[j]
                )));
            }
            a[j] = by_moments;
        }

        // b_{n,l} = sum_k int x P_n A_{n+e_l,k} dmu_k
        let xp = self.type2(n)?.p.shift_up(1);
        for (l, bl) in b.iter().enumerate() {
            let q = self.type1(&n.plus(l))?;
            let mut integral = S::zero(ctx);
            for (k, ak) in q.a.iter().enumerate() {
                integral += self.inner(&xp, ak, k)?;
            }
            if !agree(bl, &integral) {
                return Err(inconsistent(format!(
                    "b_{}: coefficient matching {bl}, type I integral {integral}",
                    l + 1
                )));
            }
        }
        Ok(NnCoeffs { index: n.clone(), a, b })
    }

    /// Both recurrence systems at `n` in every direction, plus
    /// `sum_k int x P_n A_{n,k} dmu_k = sum_j a_{n,j}`.
    pub fn verify_nn_recurrence(&self, n: &MultiIndex) -> Result<Verification> {
        self.check_index(n)?;
        let ctx = self.ctx();
        let c = self.nn_coeffs(n)?;
        let p = self.type2(n)?.p.clone();
        let mut check = Residual::new(ctx, "nearest-neighbor recurrence", n.to_string());
        for l in 0..self.r() {
            let mut rhs = &self.type2(&n.plus(l))?.p + &p.scale(&c.b[l]);
            for j in 0..self.r() {
                rhs = &rhs + &self.lower(n, j)?.scale(&c.a[j]);
            }
            check.poly(&format!("type II direction {}", l + 1), &p.shift_up(1), &rhs);
        }
        if n.size() > 0 {
            let q = self.type1(n)?;
            for l in (0..self.r()).filter(|&l| n.get(l) > 0) {
                let down = n.minus(l)?;
                let q_down = self.type1(&down)?;
                let b_down = self.nn_coeffs(&down)?.b[l].clone();
                for k in 0..self.r() {
                    let mut rhs = &q_down.a[k] + &q.a[k].scale(&b_down);
                    for j in 0..self.r() {
                        rhs = &rhs + &self.type1(&n.plus(j))?.a[k].scale(&c.a[j]);
                    }
                    check.poly(&format!("type I direction {} component {}", l + 1, k + 1), &q.a[k].shift_up(1), &rhs);
                }
            }
            let mut integral = S::zero(ctx);
            for (k, ak) in q.a.iter().enumerate() {
                integral += self.inner(&p.shift_up(1), ak, k)?;
            }
            let sum_a = c.a.iter().fold(S::zero(ctx), |acc, v| acc + v);
            check.scalar("sum of a", &integral, &sum_a);
        }
        check.finish()
    }

    /// The three partial difference equations for every ordered pair `i != j`.
    ///
    /// The ratio relation is checked cross-multiplied; when one of its
    /// denominators vanishes it is skipped and a flag is recorded.
    pub fn verify_pde(&self, n: &MultiIndex) -> Result<Verification> {
        self.check_index(n)?;
        let ctx = self.ctx();
        let mut check = Residual::new(ctx, "coefficient difference equations", n.to_string());
        let c = self.nn_coeffs(n)?;
        for i in 0..self.r() {
            for j in (0..self.r()).filter(|&j| j != i) {
                let ci = self.nn_coeffs(&n.plus(i))?;
                let cj = self.nn_coeffs(&n.plus(j))?;
                let pair = format!("i={}, j={}", i + 1, j + 1);
                check.terms(
                    &format!("b relation {pair}"),
                    &[ci.b[j].clone(), -c.b[j].clone(), -cj.b[i].clone(), c.b[i].clone()],
                );
                let mut terms: Vec<S> = cj.a.to_vec();
                terms.extend(ci.a.iter().map(|v| -v.clone()));
                terms.push(-(cj.b[i].clone() * &c.b[j]));
                terms.push(c.b[i].clone() * &ci.b[j]);
                check.terms(&format!("determinant relation {pair}"), &terms);

                if n.get(i) == 0 {
                    continue;
                }
                let cd = self.nn_coeffs(&n.minus(i)?)?;
                let gap = c.b[j].clone() - &c.b[i];
                let gap_down = cd.b[j].clone() - &cd.b[i];
                let scale = S::max_abs(ctx, [&c.b[i], &c.b[j], &cd.b[i], &cd.b[j]]);
                if gap.is_negligible(&scale) || gap_down.is_negligible(&scale) {
                    check.flag(Error::DegenerateRatio { index: format!("{n} ({pair})") }.to_string());
                    continue;
                }
                check.terms(&format!("ratio relation {pair}"), &[c.a[i].clone() * &gap, -(cj.a[i].clone() * &gap_down)]);
            }
        }
        check.finish()
    }

    /// `W(n + e_l)` with `P_stack(n + e_l) = W P_stack(n)`, verified on construction.
    pub fn transfer_matrix(&self, n: &MultiIndex, l: usize) -> Result<TransferMatrix<S>> {
        self.check_index(n)?;
        let ctx = self.ctx();
        let r = self.r();
        let up = n.plus(l);
        let c = self.nn_coeffs(n)?;
        let constant = |v: S| LaurentPoly::constant(v);
        let mut w = LaurentMatrix::zeros(ctx, r + 1, r + 1);
        w.set(0, 0, LaurentPoly::new(ctx, 0, vec![-c.b[l].clone(), S::one(ctx)]));
        for j in 0..r {
            w.set(0, j + 1, constant(-c.a[j].clone()));
            if up.get(j) == 0 {
                continue;
            }
            w.set(j + 1, 0, LaurentPoly::one(ctx));
            if n.get(j) > 0 && j != l {
                let below = self.nn_coeffs(&n.minus(j)?)?;
                w.set(j + 1, j + 1, constant(below.b[j].clone() - &below.b[l]));
            }
        }
        let mut check = Residual::new(ctx, "transfer matrix", format!("{up} from {n}"));
        let mapped = w.mul_vec(&self.stacked(n)?)?;
        for (i, (lhs, rhs)) in mapped.iter().zip(self.stacked(&up)?).enumerate() {
            check.laurent(&format!("row {i}"), lhs, &rhs);
        }
        check.finish()?;
        Ok(TransferMatrix { direction: l, index: up, matrix: w })
    }

    /// `W_j(n+e_i+e_j) W_i(n+e_i) = W_i(n+e_i+e_j) W_j(n+e_j)` for all `i < j`.
    pub fn verify_w_commutation(&self, n: &MultiIndex) -> Result<Verification> {
        self.check_index(n)?;
        let mut check = Residual::new(self.ctx(), "transfer matrix commutation", n.to_string());
        for i in 0..self.r() {
            for j in i + 1..self.r() {
                let left = self.transfer_matrix(&n.plus(i), j)?.matrix.mul(&self.transfer_matrix(n, i)?.matrix)?;
                let right = self.transfer_matrix(&n.plus(j), i)?.matrix.mul(&self.transfer_matrix(n, j)?.matrix)?;
                check.matrix(|a, b| format!("i={}, j={}, entry ({a},{b})", i + 1, j + 1), &left, &right);
            }
        }
        check.finish()
    }
}
