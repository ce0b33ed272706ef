//! Exact arithmetic foundation: rationals, sparse multivariate polynomials, gcd,
//! reduction modulo primes and exact linear algebra.

pub mod gcd;
mod matrix;
pub mod modp;
mod monomial;
mod parse;
mod poly;
pub mod rational;
mod scalar;

pub use gcd::{gcd, gcd_many, integer_associate, poly_gcd};
pub use matrix::{ExactMatrix, Matrix};
pub use modp::{poly_mod_p, PolyModP};
pub use monomial::Monomial;
pub use parse::{parse_poly, parse_poly_with};
pub use poly::{var_list, Degree, MultiPoly, VarList};
pub use rational::ExactRational;
pub use scalar::{ExactScalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("expected {expected} substitutions, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("prime {prime} divides the denominator of coefficient {coefficient}")]
    BadPrime { prime: u64, coefficient: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}
