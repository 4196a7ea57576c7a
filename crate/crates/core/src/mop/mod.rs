//! Type II polynomials and type I vectors built from moments.

mod cd;
mod index;

pub use cd::LatticePath;
pub use index::MultiIndex;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::kernel::{solve_linear, Poly, Scalar, ScalarMatrix};
use crate::recurrence::NnCoeffs;
use crate::verify::{Residual, Verification};
use crate::weights::WeightSystem;

/// Monic `P_n` of degree `|n|` orthogonal to `x^k`, `k < n_j`, against every weight `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeTwo<S: Scalar> {
    pub index: MultiIndex,
    pub p: Poly<S>,
}

/// `(A_{n,1}, ..., A_{n,r})` with `deg A_{n,j} <= n_j - 1`,
/// `sum_j int x^k A_{n,j} dmu_j = 0` for `k <= |n| - 2` and `= 1` for `k = |n| - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeOne<S: Scalar> {
    pub index: MultiIndex,
    pub a: Vec<Poly<S>>,
}

impl<S: Scalar> TypeOne<S> {
    /// Coefficient of `x^{n_j - 1}` in `A_{n,j}` (zero when `n_j = 0`).
    pub fn kappa(&self, j: usize) -> S {
        let nj = self.index.get(j) as usize;
        match nj {
            0 => S::zero(self.a[j].ctx()),
            _ => self.a[j].coeff(nj - 1),
        }
    }
}

/// What a test-hook perturbation corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbTarget {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation<S: Scalar> {
    pub target: PerturbTarget,
    /// `a_{n,1}` (or `b_{n,1}`) is replaced by `value * (1 + relative)`.
    pub relative: S,
}

type Memo<T> = Mutex<HashMap<MultiIndex, Arc<T>>>;

/// A weight system together with memo tables for everything derived from it.
#[derive(Debug)]
pub struct MopSystem<S: Scalar> {
    ws: WeightSystem<S>,
    type2: Memo<TypeTwo<S>>,
    type1: Memo<TypeOne<S>>,
    pub(crate) coeffs: Memo<NnCoeffs<S>>,
    pub(crate) perturbation: Option<Perturbation<S>>,
}

pub(crate) fn memo<K: Eq + Hash + Clone, T>(
    cache: &Mutex<HashMap<K, Arc<T>>>,
    key: &K,
    compute: impl FnOnce() -> Result<T>,
) -> Result<Arc<T>> {
    if let Some(v) = cache.lock().expect("memo poisoned").get(key) {
        return Ok(v.clone());
    }
    // computed outside the lock; a concurrent duplicate yields the same value
    let value = Arc::new(compute()?);
    Ok(cache.lock().expect("memo poisoned").entry(key.clone()).or_insert(value).clone())
}

impl<S: Scalar> MopSystem<S> {
    pub fn new(ws: WeightSystem<S>) -> Self {
        MopSystem {
            ws,
            type2: Mutex::default(),
            type1: Mutex::default(),
            coeffs: Mutex::default(),
            perturbation: None,
        }
    }

    /// Corrupts one recurrence coefficient family so that downstream
    /// identities must fail; exists to prove the checks are not vacuous.
    /// Only builds with the `test-hooks` feature accept it.
    pub fn with_perturbation(mut self, perturbation: Perturbation<S>) -> Result<Self> {
        if !crate::TEST_HOOKS {
            return Err(Error::Unsupported("coefficient perturbation needs the test-hooks feature".into()));
        }
        self.perturbation = Some(perturbation);
        Ok(self)
    }

    pub fn weights(&self) -> &WeightSystem<S> {
        &self.ws
    }

    pub fn r(&self) -> usize {
        self.ws.r()
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ws.ctx()
    }

    pub(crate) fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.r() != self.r() {
            return Err(Error::DimensionMismatch(format!("index {n} has {} parts for {} weights", n.r(), self.r())));
        }
        Ok(())
    }

    // ---- Moment functional ----

    /// The products `p_i q_l mu_{i+l+shift}` whose sum is `int p q t^shift dmu_j`.
    fn inner_terms(&self, p: &Poly<S>, q: &Poly<S>, j: usize, shift: i64) -> Result<Vec<S>> {
        let mut out = Vec::new();
        for (i, pi) in p.coeffs().iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (l, ql) in q.coeffs().iter().enumerate() {
                if ql.is_zero() {
                    continue;
                }
                out.push(pi.clone() * ql * &self.ws.moment(j, (i + l) as i64 + shift)?);
            }
        }
        Ok(out)
    }

    /// `int p(t) q(t) dmu_j(t)`.
    pub fn inner(&self, p: &Poly<S>, q: &Poly<S>, j: usize) -> Result<S> {
        self.inner_shifted(p, q, j, 0)
    }

    /// `int p(t) q(t) t^shift dmu_j(t)`; `shift = -1` needs an `x^alpha` weight.
    pub fn inner_shifted(&self, p: &Poly<S>, q: &Poly<S>, j: usize, shift: i64) -> Result<S> {
        let terms = self.inner_terms(p, q, j, shift)?;
        Ok(terms.into_iter().fold(S::zero(self.ctx()), |acc, t| acc + t))
    }

    fn monomial(&self, k: usize) -> Poly<S> {
        Poly::monomial(S::one(self.ctx()), k)
    }

    // ---- Type II ----

    pub fn type2(&self, n: &MultiIndex) -> Result<Arc<TypeTwo<S>>> {
        self.check_index(n)?;
        memo(&self.type2, n, || self.solve_type2(n))
    }

    fn solve_type2(&self, n: &MultiIndex) -> Result<TypeTwo<S>> {
        let ctx = self.ctx();
        let size = n.size() as usize;
        let mut rows = Vec::with_capacity(size);
        let mut rhs = Vec::with_capacity(size);
        for j in 0..self.r() {
            for k in 0..n.get(j) as i64 {
                rows.push((0..size).map(|i| self.ws.moment(j, k + i as i64)).collect::<Result<Vec<_>>>()?);
                rhs.push(-self.ws.moment(j, k + size as i64)?);
            }
        }
        let coeffs = if size == 0 {
            Vec::new()
        } else {
            solve_linear(&ScalarMatrix::from_rows(rows)?, &rhs).map_err(|e| not_normal(e, n))?
        };
        let mut all = coeffs;
        all.push(S::one(ctx));
        let p = Poly::new(ctx, all);

        let mut check = Residual::new(ctx, "type II orthogonality", n.to_string());
        for j in 0..self.r() {
            for k in 0..n.get(j) as usize {
                check.terms(&format!("weight {}, x^{k}", j + 1), &self.inner_terms(&p, &self.monomial(k), j, 0)?);
            }
        }
        check.finish()?;
        Ok(TypeTwo { index: n.clone(), p })
    }

    /// `P_{n - e_j}`, or the zero polynomial when `n_j = 0`.
    pub fn lower(&self, n: &MultiIndex, j: usize) -> Result<Poly<S>> {
        match n.minus(j) {
            Ok(m) => Ok(self.type2(&m)?.p.clone()),
            Err(_) => Ok(Poly::zero(self.ctx())),
        }
    }

    // ---- Type I ----

    /// Type I vector; the zero vector at `|n| = 0`.
    pub fn type1(&self, n: &MultiIndex) -> Result<Arc<TypeOne<S>>> {
        self.check_index(n)?;
        memo(&self.type1, n, || self.solve_type1(n))
    }

    fn solve_type1(&self, n: &MultiIndex) -> Result<TypeOne<S>> {
        let ctx = self.ctx();
        let size = n.size() as usize;
        if size == 0 {
            return Ok(TypeOne { index: n.clone(), a: vec![Poly::zero(ctx); self.r()] });
        }
        let mut rows = Vec::with_capacity(size);
        for k in 0..size as i64 {
            let mut row = Vec::with_capacity(size);
            for j in 0..self.r() {
                for i in 0..n.get(j) as i64 {
                    row.push(self.ws.moment(j, k + i)?);
                }
            }
            rows.push(row);
        }
        let mut rhs = vec![S::zero(ctx); size];
        rhs[size - 1] = S::one(ctx);
        let x = solve_linear(&ScalarMatrix::from_rows(rows)?, &rhs).map_err(|e| not_normal(e, n))?;
        let mut a = Vec::with_capacity(self.r());
        let mut offset = 0;
        for j in 0..self.r() {
            let nj = n.get(j) as usize;
            a.push(Poly::new(ctx, x[offset..offset + nj].to_vec()));
            offset += nj;
        }

        let mut check = Residual::new(ctx, "type I orthogonality", n.to_string());
        for k in 0..size {
            let mut terms = Vec::new();
            for (j, aj) in a.iter().enumerate() {
                terms.extend(self.inner_terms(aj, &self.monomial(k), j, 0)?);
            }
            if k == size - 1 {
                terms.push(-S::one(ctx));
            }
            check.terms(&format!("x^{k}"), &terms);
        }
        check.finish()?;
        Ok(TypeOne { index: n.clone(), a })
    }

    pub fn is_normal(&self, n: &MultiIndex) -> bool {
        self.type2(n).is_ok()
    }

    /// `gamma_{n,j} = 1 / int x^{n_j - 1} P_{n - e_j} dmu_j`, for `n_j >= 1`.
    pub fn gamma(&self, n: &MultiIndex, j: usize) -> Result<S> {
        let m = n.minus(j)?;
        let h = self.inner(&self.monomial(n.get(j) as usize - 1), &self.type2(&m)?.p, j)?;
        if h.is_zero() {
            return Err(Error::NotNormal { index: n.to_string() });
        }
        Ok(h.recip())
    }

    /// `kappa_{n,j}`, the leading coefficient of `A_{n,j}`.
    pub fn kappa(&self, n: &MultiIndex, j: usize) -> Result<S> {
        Ok(self.type1(n)?.kappa(j))
    }

    /// `sum_k int P_m A_{n,k} dmu_k`.
    pub fn pairing(&self, m: &MultiIndex, n: &MultiIndex) -> Result<S> {
        let p = self.type2(m)?;
        let q = self.type1(n)?;
        let mut acc = S::zero(self.ctx());
        for (k, ak) in q.a.iter().enumerate() {
            acc += self.inner(&p.p, ak, k)?;
        }
        Ok(acc)
    }

    /// Zero pattern of the pairing for all `|m|, |n| <= max_total`, the value
    /// 1 when `|n| = |m| + 1`, and `kappa_{n+e_j,j} int x^{n_j} P_n dmu_j = 1`.
    pub fn verify_biorthogonality(&self, max_total: u32) -> Result<Verification> {
        let ctx = self.ctx();
        let mut check = Residual::new(ctx, "biorthogonality", format!("|n| <= {max_total}"));
        let all = MultiIndex::all_up_to(self.r(), max_total);
        for m in &all {
            for n in all.iter().filter(|n| n.size() >= 1) {
                let expected = if n.size() == m.size() + 1 {
                    S::one(ctx)
                } else if n.le(m) || m.size() + 2 <= n.size() {
                    S::zero(ctx)
                } else {
                    continue;
                };
                check.scalar(&format!("P{m} Q{n}"), &self.pairing(m, n)?, &expected);
            }
        }
        for n in all.iter().filter(|n| n.size() < max_total) {
            for j in 0..self.r() {
                let h = self.inner(&self.monomial(n.get(j) as usize), &self.type2(n)?.p, j)?;
                check.scalar(&format!("kappa {n} dir {}", j + 1), &(self.kappa(&n.plus(j), j)? * &h), &S::one(ctx));
            }
        }
        check.finish()
    }
}

fn not_normal(e: Error, n: &MultiIndex) -> Error {
    match e {
        Error::SingularMatrix => Error::NotNormal { index: n.to_string() },
        e => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{BigFloat, Exact, Precision, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn hermite() -> MopSystem<Rational> {
        MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap())
    }

    fn idx(parts: &[u32]) -> MultiIndex {
        MultiIndex::new(parts.to_vec())
    }

    #[test]
    fn inner_products() {
        let h = hermite();
        let one = Poly::one(Exact);
        assert_eq!(h.inner(&one, &one, 0).unwrap(), q(1, 1));
        assert_eq!(h.inner(&Poly::x(Exact), &one, 0).unwrap(), q(1, 2));
        let l = MopSystem::new(WeightSystem::laguerre_second(q(1, 1), vec![q(1, 1)]).unwrap());
        let mu1 = l.weights().moment(0, 1).unwrap();
        let centered = Poly::new(Exact, vec![-mu1, q(1, 1)]);
        assert_eq!(l.inner(&centered, &one, 0).unwrap(), q(0, 1));
        assert_eq!(l.inner_shifted(&one, &one, 0, -1).unwrap(), q(1, 1));
        assert!(h.inner_shifted(&one, &one, 0, -1).is_err());
    }

    #[test]
    fn small_type_two() {
        let h = hermite();
        assert_eq!(h.type2(&idx(&[0, 0])).unwrap().p, Poly::one(Exact));
        assert_eq!(h.type2(&idx(&[1, 0])).unwrap().p, Poly::new(Exact, vec![q(-1, 2), q(1, 1)]));
        assert_eq!(h.type2(&idx(&[1, 1])).unwrap().p, Poly::new(Exact, vec![q(-3, 4), q(0, 1), q(1, 1)]));
        for n in MultiIndex::all_up_to(2, 6) {
            let p = h.type2(&n).unwrap();
            assert!(p.p.is_monic());
            assert_eq!(p.p.degree(), Some(n.size() as usize));
        }
    }

    #[test]
    fn small_type_one() {
        let h = hermite();
        let t = h.type1(&idx(&[1, 0])).unwrap();
        assert_eq!(t.a, vec![Poly::one(Exact), Poly::zero(Exact)]);
        let t = h.type1(&idx(&[1, 1])).unwrap();
        let moment = |k: usize| -> Rational {
            (0..2).map(|j| h.inner(&t.a[j], &Poly::monomial(q(1, 1), k), j).unwrap()).fold(q(0, 1), |a, b| a + b)
        };
        assert_eq!(moment(0), q(0, 1));
        assert_eq!(moment(1), q(1, 1));
        assert!(h.type1(&idx(&[0, 0])).unwrap().a.iter().all(Poly::is_zero));
    }

    #[test]
    fn normality() {
        let h = hermite();
        assert!(MultiIndex::all_up_to(2, 6).iter().all(|n| h.is_normal(n)));
        let degenerate = MopSystem::new(WeightSystem::hermite_unchecked(vec![q(1, 1), q(1, 1)]).unwrap());
        assert!(degenerate.is_normal(&idx(&[0, 0])));
        assert!(!degenerate.is_normal(&idx(&[1, 1])));
        assert!(matches!(degenerate.type1(&idx(&[1, 1])), Err(Error::NotNormal { .. })));
        assert!(matches!(h.type2(&idx(&[1])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn gamma_matches_lower_neighbor_integral() {
        let h = hermite();
        let n = idx(&[2, 1]);
        for j in 0..2 {
            let m = n.minus(j).unwrap();
            let h_int = h
                .inner(&Poly::monomial(q(1, 1), n.get(j) as usize - 1), &h.type2(&m).unwrap().p, j)
                .unwrap();
            assert_eq!(h.gamma(&n, j).unwrap() * h_int, q(1, 1));
        }
        assert!(h.gamma(&idx(&[0, 1]), 0).is_err());
    }

    #[test]
    fn biorthogonality_for_exact_families() {
        hermite().verify_biorthogonality(4).unwrap();
        MopSystem::new(WeightSystem::laguerre_second(q(1, 1), vec![q(1, 1), q(2, 1)]).unwrap())
            .verify_biorthogonality(4)
            .unwrap();
        MopSystem::new(WeightSystem::laguerre_first(vec![q(1, 2), q(3, 4)]).unwrap())
            .verify_biorthogonality(4)
            .unwrap();
    }

    #[test]
    fn float_backend_agrees_with_exact() {
        let p = Precision::digits(40);
        let f = MopSystem::new(WeightSystem::hermite(vec![BigFloat::from_i64(p, 1), BigFloat::from_i64(p, -1)]).unwrap());
        let e = hermite();
        for n in MultiIndex::all_up_to(2, 5) {
            let pf = f.type2(&n).unwrap();
            let pe = e.type2(&n).unwrap();
            for (a, b) in pf.p.coeffs().iter().zip(pe.p.coeffs()) {
                let diff = a.clone() - &BigFloat::from_rational(p, b);
                assert!(diff.is_negligible(&BigFloat::one(p)), "{n}");
            }
        }
    }

    #[test]
    fn perturbation_is_gated_and_breaks_compatibility() {
        let perturbation = Perturbation { target: PerturbTarget::A, relative: q(1, 1000) };
        let perturbed = hermite().with_perturbation(perturbation);
        if !crate::TEST_HOOKS {
            assert!(matches!(perturbed, Err(Error::Unsupported(_))));
            return;
        }
        let p = perturbed.unwrap();
        let n = idx(&[2, 1]);
        assert_eq!(p.nn_coeffs(&n).unwrap().a[0], hermite().nn_coeffs(&n).unwrap().a[0].clone() * q(1001, 1000));
        assert!(matches!(p.verify_compatibility(&n), Err(Error::IdentityViolation { .. })));
    }

    #[test]
    fn concurrent_queries_agree() {
        let h = hermite();
        let all = MultiIndex::all_up_to(2, 5);
        let results: Vec<Vec<Arc<TypeTwo<Rational>>>> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4).map(|_| s.spawn(|| all.iter().map(|n| h.type2(n).unwrap()).collect())).collect();
            hs.into_iter().map(|t| t.join().unwrap()).collect()
        });
        for r in &results[1..] {
            assert_eq!(r, &results[0]);
        }
    }
}
