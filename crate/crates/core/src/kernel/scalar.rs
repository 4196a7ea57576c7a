//! Scalar backends: exact rationals and fixed-precision binary floats.
//!
//! Every algebraic object in the crate is generic over [`Scalar`]. The backend
//! is picked once per weight system, so mixing backends is a type error rather
//! than a runtime coercion.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;

use crate::error::Error;

/// Field element used throughout the kernel.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Construction context (precision for floats, nothing for rationals).
    type Ctx: Copy + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    /// True when arithmetic is exact and zero tests need no tolerance.
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(ctx: Self::Ctx, v: i64) -> Self;
    /// `num/den`; `den` must be nonzero.
    fn from_ratio(ctx: Self::Ctx, num: i64, den: i64) -> Self;
    fn parse(ctx: Self::Ctx, text: &str) -> Result<Self, Error>;
    /// Like `parse`, but decimal and scientific input is accepted by every
    /// backend (converted exactly by the exact one).
    fn parse_decimal(ctx: Self::Ctx, text: &str) -> Result<Self, Error>;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 0)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 1)
    }

    /// Exact zero test (no tolerance).
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn sign(&self) -> Ordering;
    fn is_integer(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Canonical text form: `p/q` for rationals, full-precision decimal for floats.
    fn canonical(&self) -> String;

    /// Zero test under the backend's tolerance policy, relative to `scale`.
    fn is_negligible(&self, scale: &Self) -> bool;

    /// Relative tolerance of the backend (0 for exact arithmetic).
    fn tolerance(ctx: Self::Ctx) -> f64;

    fn recip(&self) -> Self {
        Self::one(self.ctx()) / self
    }

    fn max_abs<'a, I: IntoIterator<Item = &'a Self>>(ctx: Self::Ctx, it: I) -> Self {
        let mut best = Self::zero(ctx);
        for v in it {
            let a = v.abs();
            if a.sign_cmp(&best) == Ordering::Greater {
                best = a;
            }
        }
        best
    }

    /// Ordering of two values.
    fn sign_cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other).sign()
    }
}

// ---- Exact rationals ----

/// Context of the exact backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exact;

/// Arbitrary-size rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(pub rug::Rational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(rug::Rational::from((num, den)))
    }
    pub fn inner(&self) -> &rug::Rational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(rug::Rational::from(v))
    }
}

impl Scalar for Rational {
    type Ctx = Exact;
    const EXACT: bool = true;

    fn ctx(&self) -> Exact {
        Exact
    }
    fn from_i64(_: Exact, v: i64) -> Self {
        Rational::from(v)
    }
    fn from_ratio(_: Exact, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(num, den)
    }
    fn parse(_: Exact, text: &str) -> Result<Self, Error> {
        let t = text.trim();
        if t.contains(['.', 'e', 'E']) {
            return Err(Error::InvalidParameter(format!(
                "`{t}` is not an exact rational (decimal input is rejected by the exact backend)"
            )));
        }
        let parsed = rug::Rational::parse(t)
            .map_err(|_| Error::InvalidParameter(format!("`{t}` is not a rational number")))?;
        Ok(Rational(rug::Rational::from(parsed)))
    }
    fn parse_decimal(ctx: Exact, text: &str) -> Result<Self, Error> {
        let t = text.trim();
        if t.contains('/') || !t.contains(['.', 'e', 'E']) {
            return Self::parse(ctx, t);
        }
        let bad = || Error::InvalidParameter(format!("`{t}` is not a decimal number"));
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits = format!("{int}{frac}");
        let num = rug::Integer::from_str_radix(&digits, 10).map_err(|_| bad())?;
        let shift = exp - frac.len() as i32;
        let ten = rug::Integer::from(10).pow(shift.unsigned_abs());
        let value = if shift >= 0 { rug::Rational::from(num * ten) } else { rug::Rational::from((num, ten)) };
        Ok(Rational(value))
    }
    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }
    fn abs(&self) -> Self {
        Rational(self.0.clone().abs())
    }
    fn sign(&self) -> Ordering {
        self.0.cmp0()
    }
    fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn canonical(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
    fn tolerance(_: Exact) -> f64 {
        0.0
    }
}

// ---- Binary floats ----

/// Context of the float backend: requested decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

/// Guard digits excluded from the zero-tolerance policy.
pub const GUARD_DIGITS: u32 = 10;

impl Precision {
    pub fn digits(digits: u32) -> Self {
        assert!(digits > GUARD_DIGITS, "precision must exceed the guard digits");
        Precision { digits }
    }
    pub fn decimal_digits(self) -> u32 {
        self.digits
    }
    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32
    }
    /// Same context with `extra` more decimal digits.
    pub fn widened(self, extra: u32) -> Self {
        Precision { digits: self.digits + extra }
    }
}

/// MPFR float at a fixed precision carried with the value.
#[derive(Clone, Debug, PartialEq)]
pub struct BigFloat {
    value: rug::Float,
    prec: Precision,
}

impl BigFloat {
    pub fn with_val<T>(prec: Precision, v: T) -> Self
    where
        rug::Float: rug::Assign<T>,
    {
        BigFloat { value: rug::Float::with_val(prec.bits(), v), prec }
    }
    pub fn from_float(prec: Precision, v: rug::Float) -> Self {
        let mut f = v;
        f.set_prec(prec.bits());
        BigFloat { value: f, prec }
    }
    pub fn inner(&self) -> &rug::Float {
        &self.value
    }
    pub fn into_inner(self) -> rug::Float {
        self.value
    }
    pub fn pi(prec: Precision) -> Self {
        BigFloat::with_val(prec, rug::float::Constant::Pi)
    }
    pub fn from_rational(prec: Precision, r: &Rational) -> Self {
        BigFloat::with_val(prec, &r.0)
    }
    /// Re-rounds to another precision.
    pub fn to_prec(&self, prec: Precision) -> Self {
        BigFloat::from_float(prec, self.value.clone())
    }
    pub fn sqrt(&self) -> Self {
        self.map(|v| v.sqrt())
    }
    pub fn exp(&self) -> Self {
        self.map(|v| v.exp())
    }
    pub fn ln(&self) -> Self {
        self.map(|v| v.ln())
    }
    pub fn sin(&self) -> Self {
        self.map(|v| v.sin())
    }
    pub fn cos(&self) -> Self {
        self.map(|v| v.cos())
    }
    pub fn gamma(&self) -> Self {
        self.map(|v| v.gamma())
    }
    pub fn powi(&self, k: i32) -> Self {
        self.map(|v| v.pow(k))
    }
    pub fn pow(&self, e: &BigFloat) -> Self {
        self.map(|v| v.pow(&e.value))
    }
    fn map(&self, f: impl FnOnce(rug::Float) -> rug::Float) -> Self {
        BigFloat { value: f(self.value.clone()), prec: self.prec }
    }
    /// Base-10 exponent estimate of `|self|` (`-inf` for zero).
    pub fn log10_abs(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mant, exp) = self.value.to_f64_exp();
        mant.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl Scalar for BigFloat {
    type Ctx = Precision;
    const EXACT: bool = false;

    fn ctx(&self) -> Precision {
        self.prec
    }
    fn from_i64(ctx: Precision, v: i64) -> Self {
        BigFloat::with_val(ctx, v)
    }
    fn from_ratio(ctx: Precision, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigFloat::with_val(ctx, &rug::Rational::from((num, den)))
    }
    fn parse(ctx: Precision, text: &str) -> Result<Self, Error> {
        let t = text.trim();
        if t.contains('/') {
            let r = Rational::parse(Exact, t)?;
            return Ok(BigFloat::from_rational(ctx, &r));
        }
        let parsed = rug::Float::parse(t)
            .map_err(|_| Error::InvalidParameter(format!("`{t}` is not a decimal number")))?;
        Ok(BigFloat::with_val(ctx, parsed))
    }
    fn parse_decimal(ctx: Precision, text: &str) -> Result<Self, Error> {
        Self::parse(ctx, text)
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }
    fn sign(&self) -> Ordering {
        self.value.cmp0().unwrap_or(Ordering::Equal)
    }
    fn is_integer(&self) -> bool {
        self.value.is_integer()
    }
    fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
    fn canonical(&self) -> String {
        self.value.to_string_radix(10, None)
    }
    fn is_negligible(&self, scale: &Self) -> bool {
        let tol = BigFloat::with_val(self.prec, 10).powi(-((self.prec.digits - GUARD_DIGITS) as i32));
        self.abs().sign_cmp(&(tol * &scale.abs())) != Ordering::Greater
    }
    fn tolerance(ctx: Precision) -> f64 {
        10f64.powi(-((ctx.digits - GUARD_DIGITS) as i32))
    }
}

// ---- Operator plumbing ----

macro_rules! rational_ops {
    ($($tr:ident $m:ident $atr:ident $am:ident $op:tt);*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { Rational(self.0 $op rhs.0) }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational { Rational(self.0 $op &rhs.0) }
        }
        impl $atr for Rational {
            fn $am(&mut self, rhs: Rational) { self.0 = std::mem::take(&mut self.0) $op rhs.0; }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, rhs: &'a Rational) { self.0 = std::mem::take(&mut self.0) $op &rhs.0; }
        }
    )*};
}

rational_ops! {
    Add add AddAssign add_assign +;
    Sub sub SubAssign sub_assign -;
    Mul mul MulAssign mul_assign *
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}
impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / &rhs.0)
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

macro_rules! float_ops {
    ($($tr:ident $m:ident $atr:ident $am:ident $op:tt);*) => {$(
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                debug_assert_eq!(self.prec, rhs.prec, "precision mismatch");
                BigFloat { value: self.value $op rhs.value, prec: self.prec }
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                debug_assert_eq!(self.prec, rhs.prec, "precision mismatch");
                BigFloat { value: self.value $op &rhs.value, prec: self.prec }
            }
        }
        impl $atr for BigFloat {
            fn $am(&mut self, rhs: BigFloat) {
                debug_assert_eq!(self.prec, rhs.prec, "precision mismatch");
                self.value.$am(rhs.value);
            }
        }
        impl<'a> $atr<&'a BigFloat> for BigFloat {
            fn $am(&mut self, rhs: &'a BigFloat) {
                debug_assert_eq!(self.prec, rhs.prec, "precision mismatch");
                self.value.$am(&rhs.value);
            }
        }
    )*};
}

float_ops! {
    Add add AddAssign add_assign +;
    Sub sub SubAssign sub_assign -;
    Mul mul MulAssign mul_assign *;
    Div div DivAssign div_assign /
}

use std::ops::DivAssign;

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { value: -self.value, prec: self.prec }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rationals_stay_reduced() {
        let r = q(6, -4);
        assert_eq!(r.canonical(), "-3/2");
        assert_eq!((q(1, 3) + q(1, 6)).canonical(), "1/2");
        assert_eq!(Rational::from(3).canonical(), "3/1");
    }

    #[test]
    fn exact_parse_rejects_decimals() {
        assert_eq!(Rational::parse(Exact, " -3/4 ").unwrap(), q(-3, 4));
        assert!(Rational::parse(Exact, "0.5").is_err());
        assert!(Rational::parse(Exact, "1e3").is_err());
        assert!(Rational::parse(Exact, "abc").is_err());
    }

    #[test]
    fn exact_decimal_parse_is_exact() {
        assert_eq!(Rational::parse_decimal(Exact, "1e-3").unwrap(), q(1, 1000));
        assert_eq!(Rational::parse_decimal(Exact, "-2.5").unwrap(), q(-5, 2));
        assert_eq!(Rational::parse_decimal(Exact, "0.25E2").unwrap(), q(25, 1));
        assert_eq!(Rational::parse_decimal(Exact, "3/4").unwrap(), q(3, 4));
        assert!(Rational::parse_decimal(Exact, "1.2.3").is_err());
    }

    #[test]
    fn float_parse_accepts_both_forms() {
        let p = Precision::digits(40);
        let a = BigFloat::parse(p, "0.25").unwrap();
        let b = BigFloat::parse(p, "1/4").unwrap();
        assert_eq!(a, b);
        assert!(BigFloat::parse(p, "x").is_err());
    }

    #[test]
    fn float_tolerance_policy() {
        let p = Precision::digits(30);
        let scale = BigFloat::from_i64(p, 100);
        let tiny = BigFloat::parse(p, "1e-19").unwrap();
        let small = BigFloat::parse(p, "1e-17").unwrap();
        assert!(tiny.is_negligible(&scale));
        assert!(!small.is_negligible(&scale));
        assert_eq!(BigFloat::tolerance(p), 1e-20);
    }

    #[test]
    fn float_carries_requested_bits() {
        let p = Precision::digits(60);
        assert_eq!(p.bits(), 200);
        let third = BigFloat::from_ratio(p, 1, 3);
        let back = third.clone() * &BigFloat::from_i64(p, 3) - &BigFloat::one(p);
        assert!(back.is_negligible(&BigFloat::one(p)));
        assert!(third.canonical().len() > 55);
    }
}
