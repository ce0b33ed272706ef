//! Weil heights and enumeration of rational points of bounded height.

mod enumerate;
mod point;

pub use enumerate::{count_estimate, enumerate_bounded_height, BoundedHeightIter, HeightBound, Space};
pub use point::{
    h_plus, int_gcd, ln_big, ratio, normalize, round_significant, weil_height, AffinePoint, Height, Point, ProjPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("cannot parse point `{text}`: {message}")]
    Parse { text: String, message: String },
}
