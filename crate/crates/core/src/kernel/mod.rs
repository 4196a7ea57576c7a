//! Arithmetic substrate: scalars, polynomials, rational functions, matrices.

pub mod bipoly;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use bipoly::BiPoly;
pub use laurent::LaurentPoly;
pub use matrix::{solve_consistent, solve_linear, LaurentMatrix, ScalarMatrix};
pub use poly::Poly;
pub use ratfn::RationalFn;
pub use scalar::{BigFloat, Exact, Precision, Rational, Scalar};
