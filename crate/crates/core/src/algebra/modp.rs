//! Reduction modulo a prime and small univariate helpers over prime fields.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{AlgebraError, Monomial, MultiPoly, VarList};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue of an arbitrary integer.
pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Residue of a rational whose denominator is prime to `p`.
pub fn reduce_rational(r: &BigRational, p: u64) -> Option<u64> {
    let d = reduce_int(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(reduce_int(r.numer(), p), inv_mod(d, p), p))
}

/// Polynomial with coefficients in the prime field `F_p`, residues stored in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModP {
    vars: VarList,
    prime: u64,
    terms: BTreeMap<Monomial, u64>,
}

impl PolyModP {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.prime;
        let mut total = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = mul_mod(t, pow_mod(*x, e as u64, p), p);
                }
            }
            total = add_mod(total, t, p);
        }
        total
    }

    pub fn from_int_poly(poly: &MultiPoly<BigInt>, prime: u64) -> PolyModP {
        let terms = poly
            .terms()
            .map(|(m, c)| (m.clone(), reduce_int(c, prime)))
            .filter(|(_, c)| *c != 0)
            .collect();
        PolyModP { vars: poly.var_list().clone(), prime, terms }
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                if *c != 1 || m.is_one() {
                    factors.push(c.to_string());
                }
                for (i, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(self.vars[i].clone()),
                        _ => factors.push(format!("{}^{}", self.vars[i], e)),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.prime)
    }
}

/// Coefficientwise reduction of a rational polynomial modulo `prime`.
///
/// Fails when `prime` is not prime or divides the denominator of some coefficient.
pub fn poly_mod_p(poly: &MultiPoly<BigRational>, prime: u64) -> Result<PolyModP, AlgebraError> {
    if !is_prime(prime) {
        return Err(AlgebraError::NotPrime(prime));
    }
    let mut terms = BTreeMap::new();
    for (m, c) in poly.terms() {
        let r = reduce_rational(c, prime).ok_or_else(|| AlgebraError::BadPrime {
            prime,
            coefficient: MultiPoly::term(poly.var_list().clone(), m.clone(), c.clone()).to_string(),
        })?;
        if r != 0 {
            terms.insert(m.clone(), r);
        }
    }
    Ok(PolyModP { vars: poly.var_list().clone(), prime, terms })
}

/// Dense univariate polynomial over `F_p`, coefficients from low to high degree, trimmed.
pub type UniModP = Vec<u64>;

fn trim(mut a: UniModP) -> UniModP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by nonzero `b`.
pub fn uni_rem(a: &[u64], b: &[u64], p: u64) -> UniModP {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let q = mul_mod(*r.last().unwrap(), inv_lead, p);
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(q, bc, p), p);
        }
        r = trim(r);
    }
    r
}

/// Monic greatest common divisor (empty vector when both are zero).
pub fn uni_gcd(a: &[u64], b: &[u64], p: u64) -> UniModP {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = uni_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        x.iter_mut().for_each(|c| *c = mul_mod(*c, inv, p));
    }
    x
}

/// Interpolates the unique polynomial of degree < n through `(xs[i], ys[i])`.
pub fn uni_interpolate(xs: &[u64], ys: &[u64], p: u64) -> UniModP {
    let n = xs.len();
    // Newton divided differences
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(coef[i], coef[i - 1], p);
            let den = sub_mod(xs[i], xs[i - j], p);
            coef[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (t - xs[i]) + coef[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add_mod(next[k + 1], out[k], p);
            }
            next[k] = sub_mod(next[k], mul_mod(out[k], xs[i], p), p);
        }
        next[0] = add_mod(next[0], coef[i], p);
        out = next;
    }
    trim(out)
}

/// Rank of a dense matrix over `F_p` by Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    rows.iter_mut().flatten().for_each(|c| *c %= p);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = mul_mod(rows[r][col], inv, p);
                for c in col..ncols {
                    let sub = mul_mod(factor, rows[rank][c], p);
                    rows[r][c] = sub_mod(rows[r][c], sub, p);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, var_list};

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn reduction_examples() {
        let v = var_list(&["x"]);
        let p = parse_poly("3x + 1/2", &v).unwrap();
        assert_eq!(poly_mod_p(&p, 5).unwrap().to_string(), "3*x + 3 (mod 5)");
        let q = parse_poly("x^2", &v).unwrap();
        assert_eq!(poly_mod_p(&q, 7).unwrap().to_string(), "x^2 (mod 7)");
        let bad = parse_poly("1/3*x", &v).unwrap();
        match poly_mod_p(&bad, 3) {
            Err(AlgebraError::BadPrime { prime: 3, coefficient }) => assert_eq!(coefficient, "1/3*x"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(poly_mod_p(&q, 9), Err(AlgebraError::NotPrime(9))));
    }

    #[test]
    fn univariate_gcd_and_interpolation() {
        let p = 101;
        // (t - 1)(t - 2) and (t - 1)(t + 5)
        let a = vec![2, p - 3, 1];
        let b = vec![p - 5, 4, 1];
        assert_eq!(uni_gcd(&a, &b, p), vec![p - 1, 1]);
        let xs = [0, 1, 2];
        let ys: Vec<u64> = xs.iter().map(|&t| (t * t + p - 3 * t + 2) % p).collect();
        assert_eq!(uni_interpolate(&xs, &ys, p), a);
    }

    #[test]
    fn rank_over_small_field() {
        assert_eq!(rank_mod_p(vec![vec![1, 1], vec![2, 2]], 7), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 0], vec![0, 1]], 7), 2);
        assert_eq!(rank_mod_p(vec![vec![7, 0], vec![0, 0]], 7), 0);
    }
}
