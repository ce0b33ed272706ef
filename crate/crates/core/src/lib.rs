//! Exact arithmetic dynamics of rational self-maps of projective and affine space over ℚ.

pub mod algebra;
pub mod heights;
pub mod maps;
pub mod degrees;
pub mod dynamics;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Polynomial with exact rational coefficients.
pub type Poly = algebra::MultiPoly<BigRational>;
/// Polynomial with integer coefficients (components of projective maps).
pub type IntPoly = algebra::MultiPoly<BigInt>;
/// Polynomial with double-precision coefficients.
pub type FloatPoly = algebra::MultiPoly<f64>;
pub use algebra::ExactRational;
