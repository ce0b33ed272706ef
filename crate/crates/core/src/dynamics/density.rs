use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{vanishes_at, DynamicsError};
use crate::algebra::modp::{is_prime, mul_mod, pow_mod, rank_mod_p, reduce_int};
use crate::algebra::rational::to_rational_poly;
use crate::algebra::{integer_associate, ExactMatrix, Monomial, VarList};
use crate::heights::Point;
use crate::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveSearchOptions {
    /// Number of 62-bit primes tried for the modular full-rank certificate.
    pub prime_count: usize,
    /// Largest coordinate size (decimal digits) for which the exact nullspace is computed
    /// when the modular certificate fails.
    pub exact_digit_cap: u64,
}

impl Default for CurveSearchOptions {
    fn default() -> Self {
        CurveSearchOptions { prime_count: 3, exact_digit_cap: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveStatus {
    /// A nonzero polynomial of degree ≤ D vanishing at every point.
    Found,
    /// No such polynomial: the evaluation matrix has full column rank.
    None,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSearch {
    pub status: CurveStatus,
    pub degree: u32,
    pub points: usize,
    pub monomials: usize,
    #[serde(skip)]
    pub curve: Option<Poly>,
    #[serde(rename = "curve")]
    pub curve_text: Option<String>,
    /// How the outcome was established.
    pub certificate: String,
}

/// Searches for a hypersurface of degree ≤ `max_degree` through all `points` (all affine in
/// `vars`, or all projective with one variable per homogeneous coordinate).
///
/// Monomials are evaluated in homogeneous form on the normalized integer coordinates, which
/// only rescales rows, so the nullspace is that of the affine evaluation matrix.
pub fn invariant_curve_search(
    points: &[Point],
    vars: &VarList,
    max_degree: u32,
    opts: &CurveSearchOptions,
) -> Result<CurveSearch, DynamicsError> {
    let affine = match points.first() {
        Some(Point::Affine(_)) | None => true,
        Some(Point::Projective(_)) => false,
    };
    let n = vars.len() - usize::from(!affine);
    for p in points {
        if p.dimension() != n || matches!(p, Point::Affine(_)) != affine {
            return Err(DynamicsError::DimensionMismatch { expected: n, found: p.dimension() });
        }
    }
    let exponents = homogeneous_exponents(n + 1, max_degree);
    let mut out = CurveSearch {
        status: CurveStatus::Inconclusive,
        degree: max_degree,
        points: points.len(),
        monomials: exponents.len(),
        curve: None,
        curve_text: None,
        certificate: String::new(),
    };
    if points.len() < exponents.len() {
        out.certificate = format!("{} points cannot separate {} monomials", points.len(), exponents.len());
        return Ok(out);
    }
    let coords: Vec<Vec<BigInt>> = points.iter().map(|p| p.to_projective().coords().to_vec()).collect();

    for p in large_primes(opts.prime_count) {
        let rows: Vec<Vec<u64>> = coords
            .iter()
            .map(|c| {
                let r: Vec<u64> = c.iter().map(|x| reduce_int(x, p)).collect();
                exponents
                    .iter()
                    .map(|e| e.iter().zip(&r).fold(1, |acc, (&k, &x)| mul_mod(acc, pow_mod(x, k as u64, p), p)))
                    .collect()
            })
            .collect();
        if rank_mod_p(rows, p) == exponents.len() {
            out.status = CurveStatus::None;
            out.certificate = format!("full column rank modulo {p}");
            return Ok(out);
        }
    }

    let digits = points.iter().map(|p| p.height().decimal_digits()).max().unwrap_or(0);
    if digits > opts.exact_digit_cap {
        out.certificate = format!(
            "rank deficient modulo every tried prime; exact check skipped ({digits} digits > cap {})",
            opts.exact_digit_cap
        );
        return Ok(out);
    }
    let rows: Vec<Vec<BigRational>> = coords
        .iter()
        .map(|c| {
            exponents
                .iter()
                .map(|e| {
                    let v = e.iter().zip(c).fold(BigInt::one(), |acc, (&k, x)| acc * x.pow(k));
                    BigRational::from_integer(v)
                })
                .collect()
        })
        .collect();
    let kernel = ExactMatrix::from_rows(rows).nullspace();
    let Some(v) = kernel.first() else {
        out.status = CurveStatus::None;
        out.certificate = "full column rank over Q".into();
        return Ok(out);
    };
    let mut names = vars.to_vec();
    if affine {
        names.push("_h".into());
    }
    let hvars: VarList = names.into();
    let homogeneous = Poly::from_terms(
        hvars,
        exponents.iter().zip(v).map(|(e, c)| (Monomial::new(e.clone()), c.clone())),
    );
    let curve = if affine { homogeneous.dehomogenize(n) } else { homogeneous };
    let mut curve = to_rational_poly(&integer_associate(&curve));
    if curve.leading_coefficient().is_some_and(|c| c.is_negative()) {
        curve = -&curve;
    }
    for p in points {
        assert!(vanishes_at(&curve, p)?, "nullspace vector must vanish at {p}");
    }
    out.status = CurveStatus::Found;
    out.certificate = format!("exact nullspace of dimension {}", kernel.len());
    out.curve_text = Some(curve.to_string());
    out.curve = Some(curve);
    Ok(out)
}

/// Exponent vectors of length `len` summing to `degree`.
fn homogeneous_exponents(len: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == len {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(len, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, degree, &mut Vec::new(), &mut out);
    out
}

fn large_primes(count: usize) -> impl Iterator<Item = u64> {
    (0..(1u64 << 62)).rev().step_by(2).filter(|&q| is_prime(q)).take(count)
}
