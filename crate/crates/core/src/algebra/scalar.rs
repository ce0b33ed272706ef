use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Coefficient ring for [`MultiPoly`](super::MultiPoly) and [`Matrix`](super::Matrix).
///
/// Exact types (`BigInt`, `BigRational`) are what the dynamics code uses; `f32`/`f64`
/// are supported for quick numerical evaluation of the same polynomials.
pub trait Scalar: Signed + Clone + Debug + Display + Send + Sync + 'static {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn from_i64(value: i64) -> Self;
}

macro_rules! impl_scalar_big {
    ($($t:ty => $conv:expr),*) => {$(
        impl Scalar for $t {
            fn add_ref(&self, rhs: &Self) -> Self { self + rhs }
            fn sub_ref(&self, rhs: &Self) -> Self { self - rhs }
            fn mul_ref(&self, rhs: &Self) -> Self { self * rhs }
            fn add_assign_ref(&mut self, rhs: &Self) { *self += rhs; }
            fn from_i64(value: i64) -> Self { $conv(value) }
        }
    )*};
}

impl_scalar_big!(
    BigInt => BigInt::from,
    BigRational => |v: i64| BigRational::from_integer(BigInt::from(v)),
    f64 => |v: i64| v as f64,
    f32 => |v: i64| v as f32
);

/// Exact scalars that have an exact conversion to `BigRational`.
pub trait ExactScalar: Scalar + Eq + std::hash::Hash {
    fn to_rational(&self) -> BigRational;
}

impl ExactScalar for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl ExactScalar for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}
