use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MultiPoly;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` with decimal integers. Returns `None` on malformed input or
/// a zero denominator.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Least common multiple of the denominators of every coefficient of every polynomial.
pub fn common_denominator<'a, I>(polys: I) -> BigInt
where
    I: IntoIterator<Item = &'a MultiPoly<BigRational>>,
{
    polys
        .into_iter()
        .flat_map(|p| p.terms().map(|(_, c)| c.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d))
}

/// Multiplies the whole tuple by the lcm of all denominators and returns integer polynomials.
pub fn clear_denominators(polys: &[MultiPoly<BigRational>]) -> Vec<MultiPoly<BigInt>> {
    let l = common_denominator(polys);
    polys
        .iter()
        .map(|p| p.map_coeffs(|c| (c * &l).to_integer()))
        .collect()
}

pub fn to_rational_poly(p: &MultiPoly<BigInt>) -> MultiPoly<BigRational> {
    p.map_coeffs(|c| BigRational::from_integer(c.clone()))
}

/// Returns the integer polynomial when every coefficient is integral.
pub fn to_integer_poly(p: &MultiPoly<BigRational>) -> Option<MultiPoly<BigInt>> {
    if p.terms().all(|(_, c)| c.is_integer()) {
        Some(p.map_coeffs(|c| c.to_integer()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/2"), Some(rat(3, 2)));
        assert_eq!(parse_rational(" -4/6 "), Some(rat(-2, 3)));
        assert_eq!(parse_rational("7"), Some(int_rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn invariants_of_reduced_form() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = rat(0, 5);
        assert_eq!(z.denom(), &BigInt::from(1));
    }
}
