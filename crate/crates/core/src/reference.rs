//! Closed forms for two-weight systems, used as an independent route for the
//! computed coefficients, ladder matrices and differential equations.
//!
//! Notation for `r = 2`: `a = a_{n,1}`, `b = a_{n,2}`, `c = b_{n,1}`,
//! `d = b_{n,2}`. Relations return residuals (zero when they hold).

use crate::diffeq::OdeCoeffs;
use crate::error::{Error, Result};
use crate::kernel::{LaurentMatrix, LaurentPoly, Poly, Scalar};
use crate::mop::{MopSystem, MultiIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct PairCoefficients<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> MopSystem<S> {
    /// `(a, b, c, d)` at `(n, m)` for a two-weight system.
    pub fn pair_coefficients(&self, n: u32, m: u32) -> Result<PairCoefficients<S>> {
        if self.r() != 2 {
            return Err(Error::Unsupported(format!("pair coefficients need r = 2, not {}", self.r())));
        }
        let nn = self.nn_coeffs(&MultiIndex::new(vec![n, m]))?;
        Ok(PairCoefficients { a: nn.a[0].clone(), b: nn.a[1].clone(), c: nn.b[0].clone(), d: nn.b[1].clone() })
    }
}

/// A named residual.
pub type Relation<S> = (&'static str, S);

fn int<S: Scalar>(ctx: S::Ctx, v: i64) -> S {
    S::from_i64(ctx, v)
}

fn poly<S: Scalar>(coeffs: Vec<S>) -> Poly<S> {
    let ctx = coeffs[0].ctx();
    Poly::new(ctx, coeffs)
}

fn lp<S: Scalar>(coeffs: Vec<S>) -> LaurentPoly<S> {
    LaurentPoly::from_poly(&poly(coeffs))
}

fn ode<S: Scalar>(coeffs: Vec<Vec<S>>) -> OdeCoeffs<S> {
    let laurent: Vec<LaurentPoly<S>> = coeffs.into_iter().map(lp).collect();
    OdeCoeffs::from_laurent(&laurent).expect("closed-form equations have a nonzero leading coefficient")
}

fn matrix<S: Scalar>(ctx: S::Ctx, rows: Vec<Vec<LaurentPoly<S>>>) -> LaurentMatrix<S> {
    LaurentMatrix::from_rows(ctx, rows).expect("3x3")
}

/// `exp(-x^2 + c_j x)`.
pub mod hermite {
    use super::*;

    pub fn coefficients<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32) -> PairCoefficients<S> {
        let ctx = c1.ctx();
        let half = S::from_ratio(ctx, 1, 2);
        PairCoefficients {
            a: int::<S>(ctx, n as i64) * &half,
            b: int::<S>(ctx, m as i64) * &half,
            c: c1.clone() * &half,
            d: c2.clone() * &half,
        }
    }

    /// `[[0, 2a, 2b], [-2, 2x - c1, 0], [-2, 0, 2x - c2]]`.
    pub fn ladder_matrix<S: Scalar>(c1: &S, c2: &S, k: &PairCoefficients<S>) -> LaurentMatrix<S> {
        let ctx = c1.ctx();
        let two = int::<S>(ctx, 2);
        let z = || LaurentPoly::zero(ctx);
        let k_ = |v: S| LaurentPoly::constant(v);
        matrix(
            ctx,
            vec![
                vec![z(), k_(two.clone() * &k.a), k_(two.clone() * &k.b)],
                vec![k_(-two.clone()), lp(vec![-c1.clone(), two.clone()]), z()],
                vec![k_(-two.clone()), z(), lp(vec![-c2.clone(), two])],
            ],
        )
    }

    fn middle<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32, shift: i64) -> Vec<S> {
        // c1 (c2 - 2x) + 2 (m + n + shift - c2 x + 2 x^2)
        let ctx = c1.ctx();
        let s = int::<S>(ctx, n as i64 + m as i64 + shift);
        vec![
            c1.clone() * c2 + &(int::<S>(ctx, 2) * &s),
            -(int::<S>(ctx, 2) * &(c1.clone() + c2)),
            int(ctx, 4),
        ]
    }

    fn tail<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32) -> Vec<S> {
        // 2 (c1 m + c2 n - 2 (m + n) x)
        let ctx = c1.ctx();
        let two = int::<S>(ctx, 2);
        vec![
            two.clone() * &(c1.clone() * &int(ctx, m as i64) + &(c2.clone() * &int(ctx, n as i64))),
            int(ctx, -4 * (n as i64 + m as i64)),
        ]
    }

    /// `p''' + (c1 + c2 - 4x) p'' + (c1(c2 - 2x) + 2(m+n-1 - c2 x + 2x^2)) p' + 2(c1 m + c2 n - 2(m+n)x) p`.
    pub fn ode_type2<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        let ctx = c1.ctx();
        ode(vec![
            tail(c1, c2, n, m),
            middle(c1, c2, n, m, -1),
            vec![c1.clone() + c2, int(ctx, -4)],
            vec![S::one(ctx)],
        ])
    }

    /// Type I equation with the `y'` coefficient copied from the type II one,
    /// i.e. with `2(m+n-1)`. This form does not hold; see [`ode_type1`].
    pub fn ode_type1_mirrored<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        type1_with_shift(c1, c2, n, m, -1)
    }

    /// Equation for `A_{(n,m),l} w_l`: signs of the odd-offset terms of the
    /// type II equation flipped and `2(m+n+1)` in the `y'` coefficient.
    pub fn ode_type1<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        type1_with_shift(c1, c2, n, m, 1)
    }

    fn type1_with_shift<S: Scalar>(c1: &S, c2: &S, n: u32, m: u32, shift: i64) -> OdeCoeffs<S> {
        let ctx = c1.ctx();
        ode(vec![
            tail(c1, c2, n, m).into_iter().map(|v| -v).collect(),
            middle(c1, c2, n, m, shift),
            vec![-(c1.clone() + c2), int(ctx, 4)],
            vec![S::one(ctx)],
        ])
    }

    /// Entrywise consequences of the compatibility conditions. `get(n, m)`
    /// supplies coefficients; relations needing `n - 1` or `m - 1` are
    /// omitted at the boundary.
    pub fn compatibility_relations<S: Scalar>(
        c1: &S,
        c2: &S,
        n: u32,
        m: u32,
        get: &dyn Fn(u32, u32) -> Result<PairCoefficients<S>>,
    ) -> Result<Vec<Relation<S>>> {
        let ctx = c1.ctx();
        let two = int::<S>(ctx, 2);
        let one = S::one(ctx);
        let k = get(n, m)?;
        let kn = get(n + 1, m)?;
        let km = get(n, m + 1)?;
        let mut out = vec![
            ("sum step in n", two.clone() * &(k.a.clone() - &kn.a + &k.b - &kn.b) + &one),
            ("sum step in m", two.clone() * &(k.a.clone() - &km.a + &k.b - &km.b) + &one),
            ("c constant", two.clone() * &k.c - c1),
            ("d constant", two.clone() * &k.d - c2),
        ];
        if m > 0 {
            let lo = get(n, m - 1)?;
            let gap = lo.d.clone() - &lo.c;
            let rhs = c2.clone() - &(two.clone() * &k.c);
            out.push(("gap below in m", two.clone() * &gap - &rhs));
            out.push(("b ratio in n", two.clone() * &kn.b * &gap - &(k.b.clone() * &rhs)));
        }
        if n > 0 {
            let lo = get(n - 1, m)?;
            let gap = lo.d.clone() - &lo.c;
            let rhs = c1.clone() - &(two.clone() * &k.d);
            out.push(("gap below in n", two.clone() * &gap + &rhs));
            out.push(("a ratio in m", two.clone() * &km.a * &gap + &(k.a.clone() * &rhs)));
        }
        Ok(out)
    }
}

/// `x^alpha exp(-c_j x)`.
pub mod laguerre_second {
    use super::*;

    pub fn coefficients<S: Scalar>(alpha: &S, c1: &S, c2: &S, n: u32, m: u32) -> PairCoefficients<S> {
        let ctx = c1.ctx();
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let total = nn.clone() + &mm + alpha;
        let one = S::one(ctx);
        PairCoefficients {
            a: total.clone() * &nn / &(c1.clone() * c1),
            b: total * &mm / &(c2.clone() * c2),
            c: (int::<S>(ctx, 2 * n as i64 + m as i64) + alpha + &one) / c1 + &(mm.clone() / c2),
            d: (int::<S>(ctx, n as i64 + 2 * m as i64) + alpha + &one) / c2 + &(nn / c1),
        }
    }

    /// `x N` as a polynomial matrix.
    pub fn x_ladder_matrix<S: Scalar>(alpha: &S, c1: &S, c2: &S, n: u32, m: u32) -> LaurentMatrix<S> {
        let ctx = c1.ctx();
        let k = coefficients(alpha, c1, c2, n, m);
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let k_ = |v: S| LaurentPoly::constant(v);
        let big_a = c1.clone() * &k.a;
        let big_b = c2.clone() * &k.b;
        let big_d = -(mm.clone() * c1 / c2);
        let big_e = -(nn.clone() * c2 / c1);
        matrix(
            ctx,
            vec![
                vec![k_(nn.clone() + &mm), k_(big_a), k_(big_b)],
                vec![k_(-c1.clone()), lp(vec![-nn - alpha, c1.clone()]), k_(big_d)],
                vec![k_(-c2.clone()), k_(big_e), lp(vec![-mm - alpha, c2.clone()])],
            ],
        )
    }

    pub fn ode_type2<S: Scalar>(alpha: &S, c1: &S, c2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        let ctx = c1.ctx();
        let one = S::one(ctx);
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let s = c1.clone() + c2;
        let p = c1.clone() * c2;
        let ap1 = alpha.clone() + &one;
        let weighted = nn.clone() * c1 + &(mm.clone() * c2);
        ode(vec![
            vec![alpha.clone() * &weighted, -(p.clone() * &(nn + &mm))],
            vec![alpha.clone() * &ap1, -(s.clone() * &ap1 - &weighted), p],
            vec![S::zero(ctx), int::<S>(ctx, 2) * &ap1, -s],
            vec![S::zero(ctx), S::zero(ctx), one],
        ])
    }

    /// Equation for `A_{(n,m),l} w_l`.
    pub fn ode_type1<S: Scalar>(alpha: &S, c1: &S, c2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        let ctx = c1.ctx();
        let one = S::one(ctx);
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let s = c1.clone() + c2;
        let p = c1.clone() * c2;
        let am1 = alpha.clone() - &one;
        let weighted = nn.clone() * c1 + &(mm.clone() * c2);
        ode(vec![
            vec![-(alpha.clone() * &weighted), p.clone() * &(nn + &mm)],
            vec![alpha.clone() * &am1, -(s.clone() * &am1 - &weighted), p],
            vec![S::zero(ctx), -(int::<S>(ctx, 2) * &am1), s],
            vec![S::zero(ctx), S::zero(ctx), one],
        ])
    }
}

/// `x^alpha_j exp(-x)`.
pub mod laguerre_first {
    use super::*;

    pub fn coefficients<S: Scalar>(a1: &S, a2: &S, n: u32, m: u32) -> PairCoefficients<S> {
        let ctx = a1.ctx();
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let one = S::one(ctx);
        let diff = a1.clone() - a2;
        PairCoefficients {
            a: nn.clone() * &(nn.clone() + a1) * &(nn.clone() + &diff) / &(nn.clone() - &mm + &diff),
            b: mm.clone() * &(mm.clone() + a2) * &(mm.clone() - &diff) / &(mm.clone() - &nn - &diff),
            c: int::<S>(ctx, 2 * n as i64 + m as i64) + a1 + &one,
            d: int::<S>(ctx, n as i64 + 2 * m as i64) + a2 + &one,
        }
    }

    /// `x N` as a polynomial matrix.
    pub fn x_ladder_matrix<S: Scalar>(a1: &S, a2: &S, n: u32, m: u32) -> LaurentMatrix<S> {
        let ctx = a1.ctx();
        let k = coefficients(a1, a2, n, m);
        let (nn, mm) = (int::<S>(ctx, n as i64), int::<S>(ctx, m as i64));
        let one = S::one(ctx);
        let k_ = |v: S| LaurentPoly::constant(v);
        let z = || LaurentPoly::zero(ctx);
        matrix(
            ctx,
            vec![
                vec![k_(nn.clone() + &mm), k_(k.a), k_(k.b)],
                vec![k_(-one.clone()), lp(vec![-nn - a1, one.clone()]), z()],
                vec![k_(-one.clone()), z(), lp(vec![-mm - a2, one])],
            ],
        )
    }

    pub fn ode_type2<S: Scalar>(a1: &S, a2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        let ctx = a1.ctx();
        let one = S::one(ctx);
        let (n_, m_) = (n as i64, m as i64);
        let sum = a1.clone() + a2;
        ode(vec![
            vec![int::<S>(ctx, n_ + m_ + n_ * m_) + &(a1.clone() * &int(ctx, m_)) + &(a2.clone() * &int(ctx, n_)), int(ctx, -(n_ + m_))],
            vec![
                (a1.clone() + &one) * &(a2.clone() + &one),
                -(sum.clone() + &int(ctx, 3 - n_ - m_)),
                one.clone(),
            ],
            vec![S::zero(ctx), sum + &int(ctx, 3), int(ctx, -2)],
            vec![S::zero(ctx), S::zero(ctx), one],
        ])
    }

    /// Equation for `A_{(n,m),l} w_l`.
    pub fn ode_type1<S: Scalar>(a1: &S, a2: &S, n: u32, m: u32) -> OdeCoeffs<S> {
        let ctx = a1.ctx();
        let one = S::one(ctx);
        let (n_, m_) = (n as i64, m as i64);
        let sum = a1.clone() + a2;
        ode(vec![
            vec![-(int::<S>(ctx, m_ * n_ - n_ - m_) + &(a1.clone() * &int(ctx, m_)) + &(a2.clone() * &int(ctx, n_))), int(ctx, n_ + m_)],
            vec![
                (a1.clone() - &one) * &(a2.clone() - &one),
                -(sum.clone() - &int(ctx, n_ + m_ + 3)),
                one.clone(),
            ],
            vec![S::zero(ctx), -(sum - &int(ctx, 3)), int(ctx, 2)],
            vec![S::zero(ctx), S::zero(ctx), one],
        ])
    }
}

/// `exp(-x^3/3 - c_j x)`.
pub mod cubic {
    use super::*;

    /// Ladder matrix in terms of the coefficients at `(n, m)` and the two
    /// lower values `c_{n-1,m}`, `d_{n,m-1}` (any value when the matching
    /// `a` or `b` vanishes).
    pub fn ladder_matrix<S: Scalar>(
        c1: &S,
        c2: &S,
        k: &PairCoefficients<S>,
        c_below: &S,
        d_below: &S,
    ) -> LaurentMatrix<S> {
        let ctx = c1.ctx();
        let one = S::one(ctx);
        let z = S::zero(ctx);
        let k_ = |v: S| LaurentPoly::constant(v);
        matrix(
            ctx,
            vec![
                vec![
                    k_(-(k.a.clone() + &k.b)),
                    lp(vec![k.a.clone() * &k.c, k.a.clone()]),
                    lp(vec![k.b.clone() * &k.d, k.b.clone()]),
                ],
                vec![lp(vec![-c_below.clone(), -one.clone()]), lp(vec![k.a.clone() + c1, z.clone(), one.clone()]), k_(k.b.clone())],
                vec![lp(vec![-d_below.clone(), -one.clone()]), k_(k.a.clone()), lp(vec![k.b.clone() + c2, z, one])],
            ],
        )
    }

    /// The nonlinear relations and the determinant identity at `(n, m)`.
    pub fn relations<S: Scalar>(
        c1: &S,
        c2: &S,
        n: u32,
        m: u32,
        get: &dyn Fn(u32, u32) -> Result<PairCoefficients<S>>,
    ) -> Result<Vec<Relation<S>>> {
        let ctx = c1.ctx();
        let one = S::one(ctx);
        let k = get(n, m)?;
        let kn = get(n + 1, m)?;
        let km = get(n, m + 1)?;
        // lower values only ever appear multiplied by a_{n,m} or b_{n,m}
        let c_lo = if n > 0 { get(n - 1, m)?.c } else { S::zero(ctx) };
        let d_lo = if m > 0 { get(n, m - 1)?.d } else { S::zero(ctx) };
        let det = kn.d.clone() * &k.c - &(k.d.clone() * &km.c);
        Ok(vec![
            ("quadratic in c", c1.clone() + &k.a + &kn.a + &k.b + &kn.b + &(k.c.clone() * &k.c)),
            ("quadratic in d", c2.clone() + &k.a + &km.a + &k.b + &km.b + &(k.d.clone() * &k.d)),
            (
                "mixed step in n",
                -one.clone() - &(k.b.clone() * &k.c) + &(kn.b.clone() * &k.c) - &(k.a.clone() * &(c_lo.clone() + &k.c))
                    + &(kn.a.clone() * &(k.c.clone() + &kn.c))
                    - &(k.b.clone() * &d_lo)
                    + &(kn.b.clone() * &kn.d),
            ),
            (
                "mixed step in m",
                -one - &(k.b.clone() * &d_lo) - &(k.b.clone() * &k.d) - &(k.a.clone() * &(c_lo + &k.d))
                    + &(km.a.clone() * &(km.c.clone() + &k.d))
                    + &(km.b.clone() * &km.d)
                    + &(km.b.clone() * &k.d),
            ),
            ("determinant", det - &(k.d.clone() * &k.d - &(k.c.clone() * &k.c) - c1 + c2)),
        ])
    }
}

/// The two-weight difference relations between neighboring coefficients.
/// The ratio relations are cross-multiplied and omitted at the boundary.
pub fn pair_relations<S: Scalar>(
    n: u32,
    m: u32,
    get: &dyn Fn(u32, u32) -> Result<PairCoefficients<S>>,
) -> Result<Vec<Relation<S>>> {
    let k = get(n, m)?;
    let kn = get(n + 1, m)?;
    let km = get(n, m + 1)?;
    let det = kn.d.clone() * &k.c - &(k.d.clone() * &km.c);
    let mut out = vec![
        ("d step equals c step", kn.d.clone() - &k.d - &(km.c.clone() - &k.c)),
        ("coefficient sums", kn.b.clone() - &km.b + &kn.a - &km.a - &det),
    ];
    let gap = k.c.clone() - &k.d;
    if n > 0 {
        let lo = get(n - 1, m)?;
        out.push(("a ratio", km.a.clone() * &(lo.c.clone() - &lo.d) - &(k.a.clone() * &gap)));
    }
    if m > 0 {
        let lo = get(n, m - 1)?;
        out.push(("b ratio", kn.b.clone() * &(lo.c.clone() - &lo.d) - &(k.b.clone() * &gap)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Exact, Rational};
    use crate::weights::WeightSystem;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn hermite_small_case_equation() {
        let e = hermite::ode_type2(&q(1, 1), &q(-1, 1), 1, 1);
        assert_eq!(e.coeffs, vec![Poly::from_i64s(Exact, &[0, -8]), Poly::from_i64s(Exact, &[1, 0, 4]), Poly::from_i64s(Exact, &[0, -4]), Poly::from_i64s(Exact, &[1])]);
    }

    #[test]
    fn closed_form_coefficients_match_computed() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap());
        assert_eq!(h.pair_coefficients(2, 1).unwrap(), hermite::coefficients(&q(1, 1), &q(-1, 1), 2, 1));
        let l = MopSystem::new(WeightSystem::laguerre_second(q(1, 1), vec![q(1, 1), q(2, 1)]).unwrap());
        assert_eq!(l.pair_coefficients(1, 2).unwrap(), laguerre_second::coefficients(&q(1, 1), &q(1, 1), &q(2, 1), 1, 2));
        let f = MopSystem::new(WeightSystem::laguerre_first(vec![q(1, 2), q(3, 4)]).unwrap());
        assert_eq!(f.pair_coefficients(2, 1).unwrap(), laguerre_first::coefficients(&q(1, 2), &q(3, 4), 2, 1));
    }

    #[test]
    fn hermite_relations_vanish() {
        let (c1, c2) = (q(1, 1), q(-1, 1));
        let get = |n, m| Ok(hermite::coefficients(&c1, &c2, n, m));
        for (name, v) in hermite::compatibility_relations(&c1, &c2, 2, 2, &get).unwrap() {
            assert!(v.is_zero(), "{name}");
        }
        for (name, v) in pair_relations(2, 2, &get).unwrap() {
            assert!(v.is_zero(), "{name}");
        }
    }

    #[test]
    fn pair_coefficients_need_two_weights() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1)]).unwrap());
        assert!(matches!(h.pair_coefficients(1, 0), Err(Error::Unsupported(_))));
    }
}
