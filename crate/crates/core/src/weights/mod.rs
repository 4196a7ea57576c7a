//! Weight systems: potentials, normalized moments and ladder kernels.
//!
//! Every weight has the form `x^alpha exp(-V(x))` with `V` a polynomial, so
//! `v = -ln w = -alpha ln x + V(x)` and the ladder kernel
//! `(v'(t) - v'(x)) / (x - t)` is a finite sum of monomials `x^i t^j`.
//! Moments are stored divided by the total mass of each weight.

pub mod cubic;

use std::fmt;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::kernel::{BigFloat, LaurentPoly, Poly, Scalar};

pub use cubic::{contour_moments, cubic_seeds, Complex, CubicSeeds};

/// The example families the crate knows how to generate moments for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `exp(-x^2 + c_j x)` on the real line.
    Hermite,
    /// `x^alpha exp(-c_j x)` on `(0, inf)`.
    LaguerreSecond,
    /// `x^alpha_j exp(-x)` on `(0, inf)`.
    LaguerreFirst,
    /// `exp(-x^3/3 - c_j x)` on the rays `arg x = ±2pi/3`.
    Cubic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hermite => "hermite",
            Family::LaguerreSecond => "laguerre2",
            Family::LaguerreFirst => "laguerre1",
            Family::Cubic => "cubic",
        })
    }
}

// ---- Potentials and kernels ----

/// `v(x) = -log_coeff * ln x + poly(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<S: Scalar> {
    log_coeff: S,
    poly: Poly<S>,
}

impl<S: Scalar> Potential<S> {
    pub fn new(log_coeff: S, poly: Poly<S>) -> Self {
        Potential { log_coeff, poly }
    }

    pub fn log_coeff(&self) -> &S {
        &self.log_coeff
    }

    pub fn poly(&self) -> &Poly<S> {
        &self.poly
    }

    /// `v'(x)` as a Laurent polynomial.
    pub fn derivative(&self) -> LaurentPoly<S> {
        let poly = LaurentPoly::from_poly(&self.poly.derivative());
        if self.log_coeff.is_zero() {
            return poly;
        }
        &poly - &LaurentPoly::monomial(self.log_coeff.clone(), -1)
    }

    /// Finite expansion of `(v'(t) - v'(x)) / (x - t)`.
    pub fn kernel_expansion(&self) -> KernelExpansion<S> {
        let mut terms = Vec::new();
        if !self.log_coeff.is_zero() {
            terms.push(KernelTerm { x_power: -1, t_power: -1, coeff: -self.log_coeff.clone() });
        }
        // (t^m - x^m)/(x - t) = -sum_{i+j=m-1} x^i t^j
        for (m, d) in self.poly.derivative().coeffs().iter().enumerate().skip(1) {
            if d.is_zero() {
                continue;
            }
            for i in 0..m {
                terms.push(KernelTerm { x_power: i as i64, t_power: (m - 1 - i) as i64, coeff: -d.clone() });
            }
        }
        KernelExpansion { terms }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelTerm<S: Scalar> {
    pub x_power: i64,
    pub t_power: i64,
    pub coeff: S,
}

/// `sum coeff * x^x_power * t^t_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpansion<S: Scalar> {
    terms: Vec<KernelTerm<S>>,
}

impl<S: Scalar> KernelExpansion<S> {
    pub fn terms(&self) -> &[KernelTerm<S>] {
        &self.terms
    }

    pub fn eval(&self, x: &S, t: &S) -> S {
        let ctx = x.ctx();
        let pow = |b: &S, k: i64| {
            let base = if k < 0 { b.recip() } else { b.clone() };
            (0..k.unsigned_abs()).fold(S::one(ctx), |acc, _| acc * &base)
        };
        self.terms
            .iter()
            .fold(S::zero(ctx), |acc, term| acc + term.coeff.clone() * &pow(x, term.x_power) * &pow(t, term.t_power))
    }
}

// ---- Moments ----

#[derive(Clone, Debug)]
enum MomentRule<S: Scalar> {
    Hermite { c: S },
    LaguerreSecond { alpha: S, c: S },
    LaguerreFirst { alpha: S },
    Cubic { c: S, mu1: S },
}

/// Memoized normalized moments `mu_k = nu_k / nu_0` of one weight.
#[derive(Debug)]
pub struct MomentTable<S: Scalar> {
    rule: MomentRule<S>,
    cache: RwLock<Vec<S>>,
}

impl<S: Scalar> MomentTable<S> {
    fn new(rule: MomentRule<S>, ctx: S::Ctx) -> Self {
        MomentTable { rule, cache: RwLock::new(vec![S::one(ctx)]) }
    }

    fn negative_one(&self) -> Option<S> {
        match &self.rule {
            MomentRule::LaguerreSecond { alpha, c } => Some(c.clone() / alpha),
            MomentRule::LaguerreFirst { alpha } => Some(alpha.recip()),
            _ => None,
        }
    }

    fn next(&self, mu: &[S]) -> S {
        let k = mu.len();
        let ctx = mu[0].ctx();
        let kk = S::from_i64(ctx, k as i64);
        match &self.rule {
            MomentRule::Hermite { c } => {
                let prev2 = if k >= 2 { mu[k - 2].clone() * &S::from_i64(ctx, k as i64 - 1) } else { S::zero(ctx) };
                (c.clone() * &mu[k - 1] + prev2) / S::from_i64(ctx, 2)
            }
            MomentRule::LaguerreSecond { alpha, c } => mu[k - 1].clone() * &(alpha.clone() + &kk) / c,
            MomentRule::LaguerreFirst { alpha } => mu[k - 1].clone() * &(alpha.clone() + &kk),
            MomentRule::Cubic { c, mu1 } => match k {
                1 => mu1.clone(),
                2 => -c.clone(),
                // nu_{j+2} = j nu_{j-1} - c nu_j with j = k - 2
                _ => mu[k - 3].clone() * &S::from_i64(ctx, k as i64 - 2) - c.clone() * &mu[k - 2],
            },
        }
    }

    fn get(&self, weight: usize, k: i64) -> Result<S> {
        if k == -1 {
            return self.negative_one().ok_or_else(|| Error::InvalidMoment {
                weight,
                k,
                reason: "negative moments exist only for weights with an x^alpha factor".into(),
            });
        }
        if k < -1 {
            return Err(Error::InvalidMoment { weight, k, reason: "moment index below -1".into() });
        }
        let k = k as usize;
        if let Some(v) = self.cache.read().expect("moment cache poisoned").get(k) {
            return Ok(v.clone());
        }
        let mut cache = self.cache.write().expect("moment cache poisoned");
        while cache.len() <= k {
            let v = self.next(&cache);
            cache.push(v);
        }
        Ok(cache[k].clone())
    }
}

// ---- Weights ----

#[derive(Debug)]
pub struct Weight<S: Scalar> {
    potential: Potential<S>,
    moments: MomentTable<S>,
}

impl<S: Scalar> Weight<S> {
    pub fn potential(&self) -> &Potential<S> {
        &self.potential
    }

    pub fn hermite(c: S) -> Self {
        let ctx = c.ctx();
        // v = x^2 - c x
        let poly = Poly::new(ctx, vec![S::zero(ctx), -c.clone(), S::one(ctx)]);
        Weight { potential: Potential::new(S::zero(ctx), poly), moments: MomentTable::new(MomentRule::Hermite { c }, ctx) }
    }

    pub fn laguerre_second(alpha: S, c: S) -> Self {
        let ctx = c.ctx();
        let poly = Poly::new(ctx, vec![S::zero(ctx), c.clone()]);
        Weight {
            potential: Potential::new(alpha.clone(), poly),
            moments: MomentTable::new(MomentRule::LaguerreSecond { alpha, c }, ctx),
        }
    }

    pub fn laguerre_first(alpha: S) -> Self {
        let ctx = alpha.ctx();
        let poly = Poly::new(ctx, vec![S::zero(ctx), S::one(ctx)]);
        Weight {
            potential: Potential::new(alpha.clone(), poly),
            moments: MomentTable::new(MomentRule::LaguerreFirst { alpha }, ctx),
        }
    }

    /// Cubic weight with first normalized moment `mu1` already known.
    fn cubic(c: S, mu1: S) -> Self {
        let ctx = c.ctx();
        // v = x^3/3 + c x
        let poly = Poly::new(ctx, vec![S::zero(ctx), c.clone(), S::zero(ctx), S::from_ratio(ctx, 1, 3)]);
        Weight { potential: Potential::new(S::zero(ctx), poly), moments: MomentTable::new(MomentRule::Cubic { c, mu1 }, ctx) }
    }
}

/// `r` weights of one family sharing a scalar backend.
#[derive(Debug)]
pub struct WeightSystem<S: Scalar> {
    family: Family,
    weights: Vec<Weight<S>>,
    ctx: S::Ctx,
}

fn distinct<S: Scalar>(values: &[S], what: &str) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Err(Error::InvalidParameter(format!("{what}{} and {what}{} must differ", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn positive<S: Scalar>(v: &S, name: &str) -> Result<()> {
    if v.sign() != std::cmp::Ordering::Greater {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn nonempty<S: Scalar>(values: &[S]) -> Result<S::Ctx> {
    values.first().map(S::ctx).ok_or_else(|| Error::InvalidParameter("at least one weight is required".into()))
}

impl<S: Scalar> WeightSystem<S> {
    /// Multiple Hermite weights `exp(-x^2 + c_j x)`; the `c_j` must differ.
    pub fn hermite(cs: Vec<S>) -> Result<Self> {
        distinct(&cs, "c")?;
        Self::hermite_unchecked(cs)
    }

    /// Hermite system without the distinctness guard (for degenerate tests).
    pub fn hermite_unchecked(cs: Vec<S>) -> Result<Self> {
        let ctx = nonempty(&cs)?;
        Ok(WeightSystem { family: Family::Hermite, weights: cs.into_iter().map(Weight::hermite).collect(), ctx })
    }

    /// `x^alpha exp(-c_j x)` with `alpha > 0`, `c_j > 0` distinct.
    pub fn laguerre_second(alpha: S, cs: Vec<S>) -> Result<Self> {
        let ctx = nonempty(&cs)?;
        positive(&alpha, "alpha")?;
        for (j, c) in cs.iter().enumerate() {
            positive(c, &format!("c{}", j + 1))?;
        }
        distinct(&cs, "c")?;
        let weights = cs.into_iter().map(|c| Weight::laguerre_second(alpha.clone(), c)).collect();
        Ok(WeightSystem { family: Family::LaguerreSecond, weights, ctx })
    }

    /// `x^alpha_j exp(-x)` with `alpha_j > 0` and no integer differences.
    pub fn laguerre_first(alphas: Vec<S>) -> Result<Self> {
        let ctx = nonempty(&alphas)?;
        for (j, a) in alphas.iter().enumerate() {
            positive(a, &format!("alpha{}", j + 1))?;
        }
        for i in 0..alphas.len() {
            for j in i + 1..alphas.len() {
                if (alphas[i].clone() - &alphas[j]).is_integer() {
                    return Err(Error::InvalidParameter(format!(
                        "alpha{} - alpha{} must not be an integer",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(WeightSystem { family: Family::LaguerreFirst, weights: alphas.into_iter().map(Weight::laguerre_first).collect(), ctx })
    }

    /// Cubic functional with a prescribed first moment `mu_1` per weight.
    ///
    /// Any `mu_1` yields moments satisfying `L[p'] = L[v' p]`, which is all the
    /// ladder and differential-equation identities use, so this allows exact
    /// checks of the cubic structure. [`WeightSystem::cubic`] supplies the
    /// true contour value.
    pub fn cubic_with_first_moments(cs: Vec<S>, mu1s: Vec<S>) -> Result<Self> {
        let ctx = nonempty(&cs)?;
        distinct(&cs, "c")?;
        if mu1s.len() != cs.len() {
            return Err(Error::InvalidParameter(format!("{} first moments for {} weights", mu1s.len(), cs.len())));
        }
        let weights = cs.into_iter().zip(mu1s).map(|(c, mu1)| Weight::cubic(c, mu1)).collect();
        Ok(WeightSystem { family: Family::Cubic, weights, ctx })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn weight(&self, j: usize) -> &Weight<S> {
        &self.weights[j]
    }

    pub fn potential(&self, j: usize) -> &Potential<S> {
        &self.weights[j].potential
    }

    /// Normalized moment `mu_k` of weight `j` (0-based), `k >= -1`.
    pub fn moment(&self, j: usize, k: i64) -> Result<S> {
        let w = self.weights.get(j).ok_or_else(|| Error::InvalidMoment {
            weight: j,
            k,
            reason: format!("system has only {} weights", self.r()),
        })?;
        w.moments.get(j, k)
    }

    pub fn kernel_expansion(&self, j: usize) -> Result<KernelExpansion<S>> {
        self.weights
            .get(j)
            .map(|w| w.potential.kernel_expansion())
            .ok_or_else(|| Error::InvalidParameter(format!("no weight with index {j}")))
    }
}

impl WeightSystem<BigFloat> {
    /// Cubic weights `exp(-x^3/3 - c_j x)` on the two-ray contour.
    ///
    /// The precision of the `c_j` fixes the working precision; the first
    /// moment of each weight is seeded by contour quadrature.
    pub fn cubic(cs: Vec<BigFloat>) -> Result<Self> {
        let ctx = nonempty(&cs)?;
        distinct(&cs, "c")?;
        let weights = cs
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                let seeds = cubic_seeds(&c, ctx).map_err(|e| match e {
                    Error::InvalidMoment { k, reason, .. } => Error::InvalidMoment { weight: j, k, reason },
                    e => e,
                })?;
                let mu1 = seeds.normalized_first_moment()?;
                Ok(Weight::cubic(c, mu1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightSystem { family: Family::Cubic, weights, ctx })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Exact, Rational};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Gamma ratio `Gamma(k + alpha + 1) / Gamma(alpha + 1)` by the product formula.
    fn rising(alpha: &Rational, k: i64) -> Rational {
        (1..=k).fold(q(1, 1), |acc, i| acc * (alpha.clone() + q(i, 1)))
    }

    #[test]
    fn hermite_moments() {
        let ws = WeightSystem::hermite(vec![q(1, 1)]).unwrap();
        assert_eq!(ws.moment(0, 0).unwrap(), q(1, 1));
        assert_eq!(ws.moment(0, 1).unwrap(), q(1, 2));
        assert_eq!(ws.moment(0, 2).unwrap(), q(3, 4));
        assert!(ws.moment(0, -1).is_err());
    }

    /// Moments of `exp(-(x - c/2)^2)` by binomial expansion against the
    /// centered Gaussian moments `(2m-1)!!/2^m`.
    fn shifted_gaussian(c: &Rational, k: u32) -> Rational {
        let h = c.clone() / q(2, 1);
        let mut total = q(0, 1);
        let mut binom = q(1, 1);
        for i in 0..=k {
            if i % 2 == 0 {
                let m = i / 2;
                let dfact = (1..=m).fold(q(1, 1), |acc, t| acc * q(2 * t as i64 - 1, 2));
                let hp = (0..k - i).fold(q(1, 1), |acc, _| acc * h.clone());
                total += binom.clone() * dfact * hp;
            }
            binom *= q((k - i) as i64, (i + 1) as i64);
        }
        total
    }

    #[test]
    fn hermite_matches_shifted_gaussian() {
        for c in [q(1, 1), q(-3, 2), q(0, 1), q(5, 3)] {
            let ws = WeightSystem::hermite(vec![c.clone()]).unwrap();
            for k in 0..=20 {
                assert_eq!(ws.moment(0, k as i64).unwrap(), shifted_gaussian(&c, k), "c={c} k={k}");
            }
        }
    }

    #[test]
    fn laguerre_second_matches_gamma_ratio() {
        let ws = WeightSystem::laguerre_second(q(1, 1), vec![q(2, 1), q(1, 3)]).unwrap();
        assert_eq!(ws.moment(0, 1).unwrap(), q(1, 1));
        assert_eq!(ws.moment(0, 2).unwrap(), q(3, 2));
        assert_eq!(ws.moment(0, -1).unwrap(), q(2, 1));
        for j in 0..2 {
            let c = [q(2, 1), q(1, 3)][j].clone();
            for k in 0..=20 {
                let ck = (0..k).fold(q(1, 1), |acc, _| acc * c.clone());
                assert_eq!(ws.moment(j, k).unwrap(), rising(&q(1, 1), k) / ck);
            }
        }
    }

    #[test]
    fn laguerre_first_matches_gamma_ratio() {
        let alphas = [q(1, 2), q(3, 4)];
        let ws = WeightSystem::laguerre_first(alphas.to_vec()).unwrap();
        for (j, a) in alphas.iter().enumerate() {
            assert_eq!(ws.moment(j, -1).unwrap(), a.recip());
            for k in 0..=20 {
                assert_eq!(ws.moment(j, k).unwrap(), rising(a, k));
            }
        }
    }

    #[test]
    fn parameter_guards() {
        assert!(WeightSystem::hermite(vec![q(1, 1), q(1, 1)]).is_err());
        assert!(WeightSystem::hermite_unchecked(vec![q(1, 1), q(1, 1)]).is_ok());
        assert!(WeightSystem::laguerre_second(q(0, 1), vec![q(1, 1), q(2, 1)]).is_err());
        assert!(WeightSystem::laguerre_second(q(1, 1), vec![q(-1, 1), q(2, 1)]).is_err());
        assert!(WeightSystem::laguerre_first(vec![q(3, 2), q(1, 2)]).is_err());
        assert!(WeightSystem::laguerre_first(vec![q(1, 2), q(3, 4)]).is_ok());
        assert!(WeightSystem::<Rational>::hermite(vec![]).is_err());
    }

    #[test]
    fn kernel_expansions() {
        let h = Weight::hermite(q(3, 1)).potential().kernel_expansion();
        assert_eq!(h.terms(), &[KernelTerm { x_power: 0, t_power: 0, coeff: q(-2, 1) }]);
        let l = Weight::laguerre_second(q(1, 1), q(2, 1)).potential().kernel_expansion();
        assert_eq!(l.terms(), &[KernelTerm { x_power: -1, t_power: -1, coeff: q(-1, 1) }]);
        let c = Weight::cubic(q(2, 1), q(0, 1)).potential().kernel_expansion();
        let mut powers: Vec<_> = c.terms().iter().map(|t| (t.x_power, t.t_power, t.coeff.clone())).collect();
        powers.sort();
        assert_eq!(powers, vec![(0, 1, q(-1, 1)), (1, 0, q(-1, 1))]);
    }

    #[test]
    fn potential_derivatives() {
        let l = Weight::laguerre_first(q(1, 2)).potential().derivative();
        assert_eq!(l.coeff(-1), q(-1, 2));
        assert_eq!(l.coeff(0), q(1, 1));
        let h = Weight::hermite(q(1, 1)).potential().derivative();
        assert_eq!(h, LaurentPoly::from_poly(&Poly::from_i64s(Exact, &[-1, 2])));
    }

    #[test]
    fn moment_table_is_stable_under_repeat_and_threads() {
        let ws = WeightSystem::hermite(vec![q(1, 3), q(-1, 1)]).unwrap();
        let first: Vec<_> = (0..15).map(|k| ws.moment(1, k).unwrap()).collect();
        let again: Vec<Vec<Rational>> = std::thread::scope(|s| {
            let handles: Vec<_> =
                (0..4).map(|_| s.spawn(|| (0..15).rev().map(|k| ws.moment(1, k).unwrap()).rev().collect())).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for v in again {
            assert_eq!(v, first);
        }
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-30i64..=30, 1i64..=7).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn kernel_reproduces_potential_quotient(
            alpha in 1i64..=5, c in -4i64..=4, x in nonzero_rational(), t in nonzero_rational(),
        ) {
            prop_assume!(x != t);
            let weights = [
                Weight::hermite(q(c, 1)),
                Weight::laguerre_second(q(alpha, 2), q(c.abs() + 1, 1)),
                Weight::laguerre_first(q(alpha, 3)),
                Weight::cubic(q(c, 1), q(0, 1)),
            ];
            for w in &weights {
                let vp = w.potential().derivative();
                let direct = (vp.eval(&t) - vp.eval(&x)) / (x.clone() - &t);
                prop_assert_eq!(w.potential().kernel_expansion().eval(&x, &t), direct);
            }
        }
    }
}
