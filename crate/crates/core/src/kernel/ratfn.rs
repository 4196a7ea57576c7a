//! Rational functions `num/den` over a scalar backend.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::laurent::LaurentPoly;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Stored with a monic denominator; exact backends also cancel the gcd.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RationalFn<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly<S>, den: Poly<S>) -> Self {
        let ctx = num.ctx();
        if num.is_zero() {
            return RationalFn { num, den: Poly::one(ctx) };
        }
        let (num, den) = if S::EXACT {
            let g = num.gcd(&den);
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let inv = den.leading().recip();
        RationalFn { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        let ctx = p.ctx();
        RationalFn { num: p, den: Poly::one(ctx) }
    }

    pub fn from_laurent(p: &LaurentPoly<S>) -> Self {
        let ctx = p.ctx();
        match p.min_degree() {
            Some(lo) if lo < 0 => {
                let num = p.mul_x_pow(-lo).to_poly().expect("shifted to nonnegative powers");
                Self::normalized(num, Poly::monomial(S::one(ctx), (-lo) as usize))
            }
            _ => Self::from_poly(p.to_poly().expect("no negative powers")),
        }
    }

    pub fn zero(ctx: S::Ctx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    pub fn numerator(&self) -> &Poly<S> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at a point that is not a pole.
    pub fn eval(&self, x: &S) -> S {
        self.num.eval(x) / &self.den.eval(x)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }
}

impl<S: Scalar> Add for &RationalFn<S> {
    type Output = RationalFn<S>;
    fn add(self, rhs: &RationalFn<S>) -> RationalFn<S> {
        if self.den == rhs.den {
            return RationalFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFn::normalized(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<S: Scalar> Sub for &RationalFn<S> {
    type Output = RationalFn<S>;
    fn sub(self, rhs: &RationalFn<S>) -> RationalFn<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &RationalFn<S> {
    type Output = RationalFn<S>;
    fn mul(self, rhs: &RationalFn<S>) -> RationalFn<S> {
        RationalFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<S: Scalar> Div for &RationalFn<S> {
    type Output = Result<RationalFn<S>>;
    fn div(self, rhs: &RationalFn<S>) -> Result<RationalFn<S>> {
        Ok(self * &rhs.inv()?)
    }
}

impl<S: Scalar> Neg for &RationalFn<S> {
    type Output = RationalFn<S>;
    fn neg(self) -> RationalFn<S> {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{Exact, Rational};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_i64s(Exact, c)
    }

    #[test]
    fn cancels_common_factor() {
        let f = RationalFn::new(&p(&[-1, 1]) * &p(&[2, 1]), &p(&[-1, 1]) * &p(&[0, 3])).unwrap();
        assert_eq!(f.numerator(), &p(&[2, 1]).scale(&Rational::new(1, 3)));
        assert_eq!(f.denominator(), &p(&[0, 1]));
    }

    #[test]
    fn laurent_conversion() {
        let l = LaurentPoly::new(Exact, -1, vec![Rational::from(2), Rational::from(0), Rational::from(1)]);
        let f = RationalFn::from_laurent(&l);
        assert_eq!(f.numerator(), &p(&[2, 0, 1]));
        assert_eq!(f.denominator(), &p(&[0, 1]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFn::new(p(&[1]), p(&[])).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..=5, 1..4)
    }

    proptest! {
        #[test]
        fn normalization_idempotent_and_value_preserving(
            a in small_poly(), b in small_poly(), c in small_poly(),
            xs in prop::collection::vec(-20i64..=20, 5),
        ) {
            let common = p(&c);
            let den = &p(&b) * &common;
            prop_assume!(!den.is_zero());
            let num = &p(&a) * &common;
            let f = RationalFn::new(num.clone(), den.clone()).unwrap();
            let again = RationalFn::new(f.numerator().clone(), f.denominator().clone()).unwrap();
            prop_assert_eq!(&again, &f);
            prop_assert!(f.denominator().is_monic());
            for x in xs {
                let x = Rational::new(x, 7);
                if den.eval(&x).is_zero() {
                    continue;
                }
                prop_assert_eq!(f.eval(&x), num.eval(&x) / &den.eval(&x));
            }
        }
    }
}
