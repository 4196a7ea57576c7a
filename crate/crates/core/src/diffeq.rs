//! Linear differential equations of order `r + 1` obtained by eliminating
//! the neighbors from `Y' = R Y`.
//!
//! With `R_(0) = I`, `R_(k+1) = R_(k)' + R_(k) R` we have `Y^(k) = R_(k) Y`.
//! Rows `k = 1..r` of the first component express the neighbors through
//! `y, y', ..., y^(r)`; substituting into row `r + 1` gives the equation.
//! For type II polynomials `R = N`; for type I vectors `R = -N^T`, which
//! acts on the weighted functions `A_{n,l} w_l`.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{LaurentMatrix, LaurentPoly, Poly, RationalFn, Scalar};
use crate::mop::{MopSystem, MultiIndex};
use crate::verify::{Residual, Verification};

/// `sum_k coeffs[k] y^(k) = 0`, `k = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeCoeffs<S: Scalar> {
    pub coeffs: Vec<Poly<S>>,
}

impl<S: Scalar> OdeCoeffs<S> {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Poly<S> {
        &self.coeffs[self.order()]
    }

    /// Builds a normalized equation from Laurent coefficients: clears negative
    /// powers, divides out the common polynomial factor and makes the leading
    /// scalar of the top coefficient 1.
    pub fn from_laurent(coeffs: &[LaurentPoly<S>]) -> Result<Self> {
        let lowest = coeffs.iter().filter_map(LaurentPoly::min_degree).min().unwrap_or(0);
        let polys: Vec<Poly<S>> =
            coeffs.iter().map(|c| c.mul_x_pow(-lowest).to_poly().expect("negative powers cleared")).collect();
        if polys.last().is_none_or(Poly::is_zero) {
            return Err(Error::InvalidParameter("differential equation with zero leading coefficient".into()));
        }
        let polys = remove_content(polys);
        let lead = polys.last().expect("nonempty").leading().recip();
        Ok(OdeCoeffs { coeffs: polys.iter().map(|p| p.scale(&lead)).collect() })
    }

    /// Apply to `y` given as successive derivatives `y, y', ..., y^(order)`.
    fn apply(&self, derivs: &[LaurentPoly<S>]) -> (LaurentPoly<S>, S) {
        let ctx = derivs[0].ctx();
        let mut acc = LaurentPoly::zero(ctx);
        let mut scale = S::zero(ctx);
        for (c, d) in self.coeffs.iter().zip(derivs) {
            let term = &LaurentPoly::from_poly(c) * d;
            let m = term.max_abs_coeff();
            if m.sign_cmp(&scale) == std::cmp::Ordering::Greater {
                scale = m;
            }
            acc = &acc + &term;
        }
        (acc, scale)
    }

    /// Degree of each coefficient after dropping negligible scalars.
    pub fn degrees(&self) -> Vec<Option<usize>> {
        let ctx = self.coeffs[0].ctx();
        let scale = S::max_abs(ctx, self.coeffs.iter().map(Poly::max_abs_coeff).collect::<Vec<_>>().iter());
        self.coeffs.iter().map(|c| c.trimmed(&scale).degree()).collect()
    }

    /// Equality up to the backend tolerance.
    pub fn same_as(&self, other: &Self) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let ctx = self.coeffs[0].ctx();
        let scale = S::max_abs(ctx, self.coeffs.iter().chain(&other.coeffs).map(Poly::max_abs_coeff).collect::<Vec<_>>().iter());
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| (a - b).max_abs_coeff().is_negligible(&scale))
    }
}

impl<S: Scalar> fmt::Display for OdeCoeffs<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.coeffs.iter().enumerate().rev().map(|(k, c)| format!("[{c}] y^({k})")).collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Divides by the gcd of all coefficients (exact backends only; float gcd is ill-posed).
fn remove_content<S: Scalar>(polys: Vec<Poly<S>>) -> Vec<Poly<S>> {
    if !S::EXACT {
        return polys;
    }
    let g = polys.iter().filter(|p| !p.is_zero()).fold(None::<Poly<S>>, |acc, p| {
        Some(match acc {
            None => p.monic(),
            Some(g) => g.gcd(p),
        })
    });
    match g {
        Some(g) if g.degree().unwrap_or(0) > 0 => polys.iter().map(|p| p.div_rem(&g).0).collect(),
        _ => polys,
    }
}

/// `R_(0..=order)`.
fn derivative_matrices<S: Scalar>(r: &LaurentMatrix<S>, order: usize) -> Result<Vec<LaurentMatrix<S>>> {
    let mut out = vec![LaurentMatrix::identity(r.ctx(), r.rows())];
    for k in 0..order {
        let next = out[k].derivative().add(&out[k].mul(r)?)?;
        out.push(next);
    }
    Ok(out)
}

fn det<S: Scalar>(m: &[Vec<LaurentPoly<S>>]) -> LaurentPoly<S> {
    let n = m.len();
    let ctx = m[0][0].ctx();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = LaurentPoly::zero(ctx);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly<S>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = entry * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The pieces of the elimination: `M[k][j] = R_(k+1)[0][j+1]`,
/// `c[j] = R_(r+1)[0][j+1]` and `d[k] = R_(k)[0][0]`, `k = 0..=r+1`.
struct System<S: Scalar> {
    m: Vec<Vec<LaurentPoly<S>>>,
    c: Vec<LaurentPoly<S>>,
    d: Vec<LaurentPoly<S>>,
}

fn system<S: Scalar>(r_mat: &LaurentMatrix<S>) -> Result<System<S>> {
    let r = r_mat.rows() - 1;
    let derived = derivative_matrices(r_mat, r + 1)?;
    let m = (1..=r).map(|k| (1..=r).map(|j| derived[k].get(0, j).clone()).collect()).collect();
    let c = (1..=r).map(|j| derived[r + 1].get(0, j).clone()).collect();
    let d = derived.iter().map(|mk| mk.get(0, 0).clone()).collect();
    Ok(System { m, c, d })
}

/// Fraction-free route: multiply through by `det M` and use Cramer's rule.
fn eliminate_cramer<S: Scalar>(sys: &System<S>, index: &MultiIndex) -> Result<Vec<LaurentPoly<S>>> {
    let r = sys.m.len();
    let ctx = sys.d[0].ctx();
    // lambda^T M = c^T, i.e. M^T lambda = c
    let mt: Vec<Vec<LaurentPoly<S>>> = (0..r).map(|j| (0..r).map(|k| sys.m[k][j].clone()).collect()).collect();
    let d_m = det(&mt);
    let entries: Vec<S> = mt.iter().flatten().map(LaurentPoly::max_abs_coeff).collect();
    let mut scale = S::max_abs(ctx, &entries);
    for _ in 1..r {
        scale = scale.clone() * &scale;
    }
    if d_m.is_zero() || d_m.max_abs_coeff().is_negligible(&scale) {
        return Err(Error::DegenerateElimination { index: index.to_string() });
    }
    let lambdas: Vec<LaurentPoly<S>> = (0..r)
        .map(|k| {
            let replaced: Vec<Vec<LaurentPoly<S>>> = mt
                .iter()
                .zip(&sys.c)
                .map(|(row, cj)| row.iter().enumerate().map(|(i, v)| if i == k { cj.clone() } else { v.clone() }).collect())
                .collect();
            det(&replaced)
        })
        .collect();
    // det * y^(r+1) - sum_k det_k y^(k) + (sum_k det_k d_k - det d_(r+1)) y
    let mut coeffs = vec![LaurentPoly::zero(ctx); r + 2];
    coeffs[r + 1] = d_m.clone();
    let mut zeroth = -&(&d_m * &sys.d[r + 1]);
    for k in 1..=r {
        coeffs[k] = -&lambdas[k - 1];
        zeroth = &zeroth + &(&lambdas[k - 1] * &sys.d[k]);
    }
    coeffs[0] = zeroth;
    Ok(coeffs)
}

/// Exact route: Gaussian elimination over rational functions.
fn eliminate_rational<S: Scalar>(sys: &System<S>, index: &MultiIndex) -> Result<Vec<LaurentPoly<S>>> {
    let r = sys.m.len();
    let ctx = sys.d[0].ctx();
    let degenerate = || Error::DegenerateElimination { index: index.to_string() };
    let f = RationalFn::from_laurent;
    // augmented M^T | c
    let mut a: Vec<Vec<RationalFn<S>>> =
        (0..r).map(|j| (0..r).map(|k| f(&sys.m[k][j])).chain(std::iter::once(f(&sys.c[j]))).collect()).collect();
    for col in 0..r {
        let p = (col..r).find(|&i| !a[i][col].is_zero()).ok_or_else(degenerate)?;
        a.swap(col, p);
        let inv = a[col][col].inv()?;
        for i in 0..r {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            for c in col..=r {
                let t = &factor * &a[col][c];
                a[i][c] = &a[i][c] - &t;
            }
        }
    }
    let lambda: Vec<RationalFn<S>> = (0..r).map(|k| &a[k][r] * &a[k][k].inv().expect("pivot")).collect();
    let mut coeffs = vec![RationalFn::zero(ctx); r + 2];
    coeffs[r + 1] = RationalFn::from_poly(Poly::one(ctx));
    let mut zeroth = -&f(&sys.d[r + 1]);
    for k in 1..=r {
        coeffs[k] = -&lambda[k - 1];
        zeroth = &zeroth + &(&lambda[k - 1] * &f(&sys.d[k]));
    }
    coeffs[0] = zeroth;
    // common denominator
    let mut den = Poly::one(ctx);
    for c in &coeffs {
        let g = den.gcd(c.denominator());
        den = &den * &c.denominator().div_rem(&g).0;
    }
    Ok(coeffs
        .iter()
        .map(|c| LaurentPoly::from_poly(&(c.numerator() * &den.div_rem(c.denominator()).0)))
        .collect())
}

fn derive<S: Scalar>(r_mat: &LaurentMatrix<S>, index: &MultiIndex) -> Result<OdeCoeffs<S>> {
    let sys = system(r_mat)?;
    let cramer = OdeCoeffs::from_laurent(&eliminate_cramer(&sys, index)?)?;
    if !S::EXACT {
        return Ok(cramer);
    }
    let exact = OdeCoeffs::from_laurent(&eliminate_rational(&sys, index)?)?;
    if exact != cramer {
        return Err(Error::InconsistentCoefficients {
            index: index.to_string(),
            detail: format!("elimination routes disagree: {exact} vs {cramer}"),
        });
    }
    Ok(exact)
}

impl<S: Scalar> MopSystem<S> {
    /// Equation of order `r + 1` annihilating `P_n`.
    pub fn derive_ode_type2(&self, n: &MultiIndex) -> Result<OdeCoeffs<S>> {
        derive(&self.ladder_matrix(n)?.matrix, n)
    }

    /// Equation of order `r + 1` annihilating every `A_{n,l} w_l`.
    pub fn derive_ode_type1(&self, n: &MultiIndex) -> Result<OdeCoeffs<S>> {
        let ctx = self.ctx();
        let m = self.ladder_matrix(n)?.matrix.transpose().scale(&-S::one(ctx));
        derive(&m, n)
    }
}

/// `sum_k coeffs[k] p^(k) = 0`.
pub fn verify_annihilation<S: Scalar>(ode: &OdeCoeffs<S>, p: &Poly<S>, location: &str) -> Result<Verification> {
    let ctx = p.ctx();
    let derivs: Vec<LaurentPoly<S>> =
        (0..=ode.order()).map(|k| LaurentPoly::from_poly(&p.nth_derivative(k))).collect();
    let (value, scale) = ode.apply(&derivs);
    let mut check = Residual::new(ctx, "differential equation", location);
    check.vanishes("y", &value, scale);
    check.finish()
}

/// Same for `q = a w` where `w'/w = -v'`: `q^(k) = (D^k a) w`, `D = d/dx - v'`.
pub fn verify_annihilation_weighted<S: Scalar>(
    ode: &OdeCoeffs<S>,
    a: &Poly<S>,
    v_prime: &LaurentPoly<S>,
    location: &str,
) -> Result<Verification> {
    let ctx = a.ctx();
    let mut derivs = vec![LaurentPoly::from_poly(a)];
    for k in 0..ode.order() {
        let next = &derivs[k].derivative() - &(v_prime * &derivs[k]);
        derivs.push(next);
    }
    let (value, scale) = ode.apply(&derivs);
    let mut check = Residual::new(ctx, "weighted differential equation", location);
    check.vanishes("a w", &value, scale);
    check.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Exact, Rational};
    use crate::weights::WeightSystem;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_i64s(Exact, c)
    }

    #[test]
    fn hermite_type_two_small_case() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap());
        let n = MultiIndex::new(vec![1, 1]);
        let ode = h.derive_ode_type2(&n).unwrap();
        // p''' - 4x p'' + (1 + 4x^2) p' - 8x p
        assert_eq!(ode.coeffs, vec![p(&[0, -8]), p(&[1, 0, 4]), p(&[0, -4]), p(&[1])]);
        verify_annihilation(&ode, &h.type2(&n).unwrap().p, "(1,1)").unwrap();
        verify_annihilation(&ode, &Poly::zero(Exact), "zero").unwrap();
        assert!(verify_annihilation(&ode, &p(&[0, 1]), "x").is_err());
    }

    #[test]
    fn type_one_equation_is_shared_by_components() {
        let h = MopSystem::new(WeightSystem::laguerre_first(vec![q(1, 2), q(3, 4)]).unwrap());
        let n = MultiIndex::new(vec![2, 1]);
        let ode = h.derive_ode_type1(&n).unwrap();
        let t = h.type1(&n).unwrap();
        for l in 0..2 {
            let vp = h.weights().potential(l).derivative();
            verify_annihilation_weighted(&ode, &t.a[l], &vp, "A").unwrap();
        }
    }

    #[test]
    fn boundary_index_is_degenerate() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap());
        assert!(matches!(
            h.derive_ode_type2(&MultiIndex::new(vec![0, 2])),
            Err(Error::DegenerateElimination { .. })
        ));
    }
}
