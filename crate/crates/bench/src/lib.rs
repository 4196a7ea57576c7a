//! Fixtures shared by the benchmarks.

use mopkit_core::{BigFloat, MopSystem, MultiIndex, Precision, Rational, Scalar, WeightSystem};

pub fn hermite() -> MopSystem<Rational> {
    MopSystem::new(WeightSystem::hermite(vec![Rational::new(1, 1), Rational::new(-1, 1)]).unwrap())
}

pub fn laguerre_first() -> MopSystem<Rational> {
    MopSystem::new(WeightSystem::laguerre_first(vec![Rational::new(1, 2), Rational::new(3, 4)]).unwrap())
}

/// Cubic weights with c = (1, 2) at `digits` decimal digits.
pub fn cubic(digits: u32) -> MopSystem<BigFloat> {
    let p = Precision::digits(digits);
    MopSystem::new(WeightSystem::cubic(vec![BigFloat::from_i64(p, 1), BigFloat::from_i64(p, 2)]).unwrap())
}

pub fn indices(max_total: u32) -> Vec<MultiIndex> {
    MultiIndex::all_up_to(2, max_total)
}
