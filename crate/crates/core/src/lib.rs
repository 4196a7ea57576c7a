//! Multiple orthogonal polynomials from moment data.
//!
//! Builds type I and type II multiple orthogonal polynomials for systems of
//! `r` weights, their nearest-neighbor recurrence coefficients, ladder and
//! transfer matrices, and the linear differential equations they satisfy, with
//! checkers for every identity linking them.

pub mod diffeq;
pub mod error;
pub mod kernel;
pub mod ladder;
pub mod mop;
pub mod recurrence;
pub mod reference;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use kernel::{BigFloat, Exact, LaurentMatrix, LaurentPoly, Poly, Precision, Rational, RationalFn, Scalar};
pub use weights::{Family, KernelExpansion, Potential, WeightSystem};
pub use mop::{LatticePath, MopSystem, MultiIndex, Perturbation, PerturbTarget, TypeOne, TypeTwo};
pub use recurrence::{NnCoeffs, TransferMatrix};
pub use verify::Verification;
pub use ladder::{ClassicalLadder, LadderMatrix};
pub use diffeq::OdeCoeffs;
pub use reference::PairCoefficients;

/// Whether fault injection hooks are compiled in.
pub const TEST_HOOKS: bool = cfg!(feature = "test-hooks");
