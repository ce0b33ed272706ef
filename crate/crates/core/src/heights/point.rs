use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::HeightError;
use crate::algebra::rational::parse_rational;

/// Point of `P^N(Q)` as coprime integers with the first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

/// Point of `A^N(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    coords: Vec<BigRational>,
}

/// Weil height, kept both exactly (the max absolute coordinate of the normalized
/// representative) and as its natural log.
#[derive(Clone, Debug, PartialEq)]
pub struct Height {
    pub max_coordinate: BigInt,
    pub log: f64,
}

impl Height {
    pub fn of_max(max_coordinate: BigInt) -> Self {
        let log = ln_big(&max_coordinate);
        Height { max_coordinate, log }
    }

    /// `max(h, 1)`.
    pub fn plus(&self) -> f64 {
        self.log.max(1.0)
    }

    /// Number of decimal digits of the max coordinate (from the log, so it is cheap for huge
    /// integers; may be off by one right at a power of ten).
    pub fn decimal_digits(&self) -> u64 {
        (self.log / std::f64::consts::LN_10).floor() as u64 + 1
    }
}

/// Natural log of a positive integer, accurate to double precision at any size.
pub fn ln_big(n: &BigInt) -> f64 {
    assert!(n.sign() == Sign::Plus, "log of a nonpositive integer");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Rounds to the given number of significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap()
}

/// Euclidean gcd. Unlike the binary gcd it is cheap when one operand is small, which is the
/// common case for orbit points with a unit coordinate.
pub fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if y.is_one() {
            return y;
        }
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// `num / den` in lowest terms, skipping the reduction when `den` is one.
pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    if den.is_one() {
        return BigRational::new_raw(num, den);
    }
    let mut g = int_gcd(&num, &den);
    if den.is_negative() {
        g = -g;
    }
    BigRational::new_raw(num / &g, den / g)
}

/// Clears denominators with the lcm, divides by the gcd and fixes the sign.
///
/// Stays in integer arithmetic: rational operations would reduce with a binary gcd, which is
/// quadratic on the huge numerators met along orbits.
pub fn normalize(raw: &[BigRational]) -> Result<ProjPoint, HeightError> {
    let l = raw.iter().fold(BigInt::one(), |acc, r| {
        let d = r.denom();
        if d.is_one() {
            acc
        } else {
            let g = int_gcd(&acc, d);
            acc / g * d
        }
    });
    ProjPoint::new(
        raw.iter()
            .map(|r| if r.denom().is_one() { r.numer() * &l } else { r.numer() * (&l / r.denom()) })
            .collect(),
    )
}

impl ProjPoint {
    /// Normalizes an integer vector. Rejects the zero vector.
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self, HeightError> {
        let mut order: Vec<usize> = (0..coords.len()).filter(|&i| !coords[i].is_zero()).collect();
        order.sort_by_key(|&i| coords[i].bits());
        let mut g = BigInt::zero();
        for &i in &order {
            g = if g.is_zero() { coords[i].abs() } else { int_gcd(&g, &coords[i]) };
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return Err(HeightError::AllZero);
        }
        let first_negative = coords.iter().find(|c| !c.is_zero()).unwrap().is_negative();
        let g = if first_negative { -g } else { g };
        if !g.is_one() {
            coords.iter_mut().for_each(|c| *c = &*c / &g);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, HeightError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn max_abs(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn height(&self) -> Height {
        Height::of_max(self.max_abs())
    }

    /// Affine point `(a0/aN, ..., a(N-1)/aN)` when the last coordinate is nonzero.
    pub fn dehomogenize(&self) -> Option<AffinePoint> {
        let last = self.coords.last()?;
        if last.is_zero() {
            return None;
        }
        Some(AffinePoint {
            coords: self.coords[..self.coords.len() - 1]
                .iter()
                .map(|c| ratio(c.clone(), last.clone()))
                .collect(),
        })
    }
}

impl AffinePoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        AffinePoint { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        AffinePoint {
            coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Projective closure `[r1 : ... : rN : 1]`, normalized.
    pub fn to_projective(&self) -> ProjPoint {
        let mut raw = self.coords.clone();
        raw.push(BigRational::one());
        normalize(&raw).expect("closure has a nonzero coordinate")
    }

    /// Height of the projective closure.
    pub fn height(&self) -> Height {
        self.to_projective().height()
    }
}

/// `h_H(P) = log max |a_j|` for a normalized point.
pub fn weil_height(p: &ProjPoint) -> Height {
    p.height()
}

/// `h+(P) = max(h(P), 1)`.
pub fn h_plus(p: &ProjPoint) -> f64 {
    p.height().plus()
}

/// A point of either space. Affine points get heights through their projective closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine(AffinePoint),
    Projective(ProjPoint),
}

impl Point {
    pub fn height(&self) -> Height {
        match self {
            Point::Affine(p) => p.height(),
            Point::Projective(p) => p.height(),
        }
    }

    pub fn to_projective(&self) -> ProjPoint {
        match self {
            Point::Affine(p) => p.to_projective(),
            Point::Projective(p) => p.clone(),
        }
    }

    /// Ambient dimension N.
    pub fn dimension(&self) -> usize {
        match self {
            Point::Affine(p) => p.dimension(),
            Point::Projective(p) => p.dimension(),
        }
    }

    /// Coordinates as rationals (affine coordinates, or the homogeneous integers).
    pub fn rational_coords(&self) -> Vec<BigRational> {
        match self {
            Point::Affine(p) => p.coords.clone(),
            Point::Projective(p) => {
                p.coords.iter().map(|c| BigRational::from_integer(c.clone())).collect()
            }
        }
    }

    /// Parses `[a0:a1:...:aN]` (projective) or `(r1, ..., rN)` (affine).
    pub fn parse(text: &str) -> Result<Point, HeightError> {
        let t = text.trim();
        let err = |message: &str| HeightError::Parse { text: text.to_string(), message: message.into() };
        if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let coords: Result<Vec<BigInt>, _> =
                inner.split(':').map(|s| s.trim().parse::<BigInt>()).collect();
            let coords = coords.map_err(|_| err("projective coordinates must be integers"))?;
            if coords.len() < 2 {
                return Err(err("a projective point needs at least two coordinates"));
            }
            return Ok(Point::Projective(ProjPoint::new(coords)?));
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let coords: Option<Vec<BigRational>> = inner.split(',').map(parse_rational).collect();
            let coords = coords.ok_or_else(|| err("affine coordinates must be rationals p/q"))?;
            return Ok(Point::Affine(AffinePoint::new(coords)));
        }
        Err(err("expected [a0:...:aN] or (r1, ..., rN)"))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Affine(p) => p.fmt(f),
            Point::Projective(p) => p.fmt(f),
        }
    }
}

macro_rules! serialize_as_string {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}

serialize_as_string!(ProjPoint, AffinePoint, Point);

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Height", 2)?;
        st.serialize_field("max_coordinate", &self.max_coordinate.to_string())?;
        st.serialize_field("log", &round_significant(self.log, 12))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int_rat, rat};

    #[test]
    fn normalize_examples() {
        let p = normalize(&[rat(1, 2), int_rat(3), int_rat(1)]).unwrap();
        assert_eq!(p.to_string(), "[1:6:2]");
        assert_eq!(normalize(&[int_rat(0), int_rat(5), int_rat(0)]).unwrap().to_string(), "[0:1:0]");
        assert_eq!(normalize(&[int_rat(-2), int_rat(-4)]).unwrap().to_string(), "[1:2]");
        assert_eq!(normalize(&[int_rat(0), int_rat(0)]), Err(HeightError::AllZero));
    }

    #[test]
    fn height_examples() {
        let p = ProjPoint::from_i64(&[2, 3, 5]).unwrap();
        assert_eq!(weil_height(&p).log, 5f64.ln());
        assert_eq!(weil_height(&ProjPoint::from_i64(&[1, 0]).unwrap()).log, 0.0);
        let q = normalize(&[rat(1, 2), int_rat(3)]).unwrap();
        assert_eq!(q.to_string(), "[1:6]");
        assert_eq!(weil_height(&q).log, 6f64.ln());
        assert_eq!(h_plus(&ProjPoint::from_i64(&[1, 0]).unwrap()), 1.0);
        assert_eq!(h_plus(&p), 5f64.ln());
        assert_eq!(h_plus(&ProjPoint::from_i64(&[1, 2]).unwrap()), 1.0);
    }

    #[test]
    fn big_logs() {
        let n = BigInt::from(10).pow(400);
        assert!((ln_big(&n) - 400.0 * 10f64.ln()).abs() < 1e-10);
        let m = BigInt::from(3).pow(5000);
        assert!((ln_big(&m) / (5000.0 * 3f64.ln()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parse_and_display() {
        let p = Point::parse("[ -2 : 4 : 6 ]").unwrap();
        assert_eq!(p.to_string(), "[1:-2:-3]");
        let a = Point::parse("(1/2, -3, 0)").unwrap();
        assert_eq!(a.to_string(), "(1/2, -3, 0)");
        assert_eq!(a.to_projective().to_string(), "[1:-6:0:2]");
        assert!(Point::parse("[0:0]").is_err());
        assert!(Point::parse("(1, x)").is_err());
        assert!(Point::parse("1, 2").is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_significant(std::f64::consts::PI, 12), 3.14159265359);
        assert_eq!(round_significant(0.0, 12), 0.0);
    }
}
