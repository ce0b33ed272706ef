//! Exact multivariate gcd over the integers.
//!
//! Pipeline: strip monomial content, take primitive parts, try to certify coprimality by
//! restricting to random lines modulo a large prime, and only if that fails run a
//! recursive primitive PRS. The certificate is sound: a common factor `g` of degree
//! `e > 0` restricts to a nonzero binary form of degree `e` dividing both restrictions,
//! so coprime restrictions force `e = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modp::{add_mod, mul_mod, pow_mod, reduce_int, uni_gcd, uni_interpolate};
use super::rational::{clear_denominators, to_rational_poly};
use super::{Monomial, MultiPoly};

type IntPoly = MultiPoly<BigInt>;

const CERT_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
const CERT_ATTEMPTS: u64 = 3;

/// Nonnegative gcd of the coefficients (zero for the zero polynomial).
pub fn content(p: &IntPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the integer content and makes the graded-lex leading coefficient positive.
pub fn normalize(p: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut c = content(p);
    if p.leading_coefficient().unwrap().is_negative() {
        c = -c;
    }
    if c.is_one() {
        return p.clone();
    }
    p.map_coeffs(|a| a / &c)
}

/// Canonical integer associate of a rational polynomial: cleared denominators, content 1,
/// positive leading coefficient.
pub fn integer_associate(p: &MultiPoly<BigRational>) -> IntPoly {
    let cleared = clear_denominators(std::slice::from_ref(p));
    normalize(&cleared[0])
}

/// `p / d` when `d` divides `p` exactly over the integers.
pub fn div_exact(p: &IntPoly, d: &IntPoly) -> Option<IntPoly> {
    assert!(!d.is_zero(), "division by the zero polynomial");
    let (ld_m, ld_c) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
    if d.num_terms() == 1 {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let q = m.div(&ld_m)?;
            let (qc, r) = c.div_rem(&ld_c);
            if !r.is_zero() {
                return None;
            }
            terms.push((q, qc));
        }
        return Some(MultiPoly::from_terms(p.var_list().clone(), terms));
    }
    let mut rem = p.clone();
    let mut quotient: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some((lm, lc)) = rem.leading_term() {
        let qm = lm.div(&ld_m)?;
        let (qc, r) = lc.div_rem(&ld_c);
        if !r.is_zero() {
            return None;
        }
        if lm.degree() < ld_m.degree() {
            return None;
        }
        let t = MultiPoly::term(p.var_list().clone(), qm.clone(), qc.clone());
        rem = &rem - &(&t * d);
        quotient.push((qm, qc));
    }
    Some(MultiPoly::from_terms(p.var_list().clone(), quotient))
}

/// Normalized gcd of two integer polynomials: content 1, positive leading coefficient.
/// `gcd(p, 0)` is the normalized `p`; `gcd(0, 0)` is zero.
pub fn gcd(p: &IntPoly, q: &IntPoly) -> IntPoly {
    p.check_vars(q).expect("gcd operands over different variables");
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    let mp = p.monomial_content().unwrap();
    let mq = q.monomial_content().unwrap();
    let common = mp.gcd(&mq);
    let a = normalize(&p.div_monomial(&mp));
    let b = normalize(&q.div_monomial(&mq));
    let core = gcd_stripped(&a, &b);
    core.mul_monomial(&common)
}

/// Gcd of two normalized polynomials, neither divisible by a variable.
fn gcd_stripped(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let one = IntPoly::one(a.var_list().clone());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    if a == b {
        return a.clone();
    }
    if certify_coprime(a, b) {
        return one;
    }
    let (small, large) = if a.degree() <= b.degree() { (a, b) } else { (b, a) };
    if div_exact(large, small).is_some() {
        return small.clone();
    }
    prs_gcd(a, b)
}

/// Gcd of a whole tuple. Zero entries are ignored; all-zero input gives zero.
pub fn gcd_many(polys: &[IntPoly]) -> IntPoly {
    let nonzero: Vec<&IntPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    match nonzero.len() {
        0 => return polys.first().cloned().expect("gcd of an empty tuple"),
        1 => return normalize(nonzero[0]),
        _ => {}
    }
    let vars = nonzero[0].var_list().clone();
    let contents: Vec<Monomial> = nonzero.iter().map(|p| p.monomial_content().unwrap()).collect();
    let common = contents[1..].iter().fold(contents[0].clone(), |acc, m| acc.gcd(m));
    let stripped: Vec<IntPoly> = nonzero
        .iter()
        .zip(&contents)
        .map(|(p, m)| normalize(&p.div_monomial(m)))
        .collect();
    let one = IntPoly::one(vars.clone());
    if stripped.iter().any(IntPoly::is_constant) {
        return one.mul_monomial(&common);
    }
    if stripped.iter().all(|s| *s == stripped[0]) {
        return stripped[0].mul_monomial(&common);
    }
    // A random combination shares every common factor of the tuple.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let combo = stripped[1..].iter().fold(IntPoly::zero(vars.clone()), |acc, s| {
        let c = BigInt::from(rng.gen_range(1..1_000_000i64));
        &acc + &s.scale(&c)
    });
    if !combo.is_zero() && certify_coprime(&stripped[0], &combo) {
        return one.mul_monomial(&common);
    }
    let mut g = stripped[0].clone();
    for s in &stripped[1..] {
        g = gcd(&g, s);
        if g.is_constant() {
            break;
        }
    }
    g.mul_monomial(&common)
}

/// Rational-coefficient gcd, returned as its canonical integer associate.
pub fn poly_gcd(p: &MultiPoly<BigRational>, q: &MultiPoly<BigRational>) -> MultiPoly<BigRational> {
    to_rational_poly(&gcd(&integer_associate(p), &integer_associate(q)))
}

/// Values of the homogenization of `p` along the line `x = a + t*b`, `w = aw + t*bw`,
/// at `t = 0..=deg`, interpolated to a univariate polynomial in `t`.
fn restrict_to_line(p: &IntPoly, a: &[u64], b: &[u64], prime: u64) -> (Vec<u64>, u32) {
    let deg = p.degree().finite().unwrap();
    let n = p.nvars();
    let residues: Vec<(&Monomial, u64)> =
        p.terms().map(|(m, c)| (m, reduce_int(c, prime))).collect();
    let ts: Vec<u64> = (0..=deg as u64).collect();
    let mut ys = Vec::with_capacity(ts.len());
    for &t in &ts {
        let point: Vec<u64> =
            (0..=n).map(|i| add_mod(a[i], mul_mod(t, b[i], prime), prime)).collect();
        let mut total = 0u64;
        for (m, c) in &residues {
            let mut v = *c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = mul_mod(v, pow_mod(point[i], e as u64, prime), prime);
                }
            }
            let we = deg - m.degree();
            if we > 0 {
                v = mul_mod(v, pow_mod(point[n], we as u64, prime), prime);
            }
            total = add_mod(total, v, prime);
        }
        ys.push(total);
    }
    (uni_interpolate(&ts, &ys, prime), deg)
}

/// Sound (never wrong when it returns `true`) test that `p` and `q` are coprime.
pub fn certify_coprime(p: &IntPoly, q: &IntPoly) -> bool {
    if p.is_zero() || q.is_zero() {
        return false;
    }
    let n = p.nvars();
    for attempt in 0..CERT_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0ff_ee00 + attempt);
        let a: Vec<u64> = (0..=n).map(|_| rng.gen_range(1..CERT_PRIME)).collect();
        let b: Vec<u64> = (0..=n).map(|_| rng.gen_range(1..CERT_PRIME)).collect();
        let (ra, da) = restrict_to_line(p, &a, &b, CERT_PRIME);
        let (rb, db) = restrict_to_line(q, &a, &b, CERT_PRIME);
        if ra.is_empty() || rb.is_empty() {
            continue;
        }
        // order of vanishing at the point at infinity of the line
        let ka = da as usize + 1 - ra.len();
        let kb = db as usize + 1 - rb.len();
        if ka > 0 && kb > 0 {
            continue;
        }
        if uni_gcd(&ra, &rb, CERT_PRIME).len() == 1 {
            return true;
        }
    }
    false
}

/// Primitive part with respect to `var`, together with the content (a polynomial free of
/// `var`).
fn split_content(p: &IntPoly, var: usize) -> (IntPoly, IntPoly) {
    let coeffs: Vec<IntPoly> = p.coefficients_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    let cont = gcd_many(&coeffs);
    let pp = div_exact(p, &cont).expect("content divides polynomial");
    (normalize(&pp), cont)
}

/// Pseudo-remainder of `a` by `b` in `var`, with integer content removed along the way.
fn pseudo_rem(a: &IntPoly, b: &IntPoly, var: usize) -> IntPoly {
    let db = b.degree_in(var).finite().unwrap();
    let b_coeffs = b.coefficients_in(var);
    let lb = b_coeffs[db as usize].clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var).finite() {
        if dr < db {
            break;
        }
        let lr = r.coefficients_in(var).swap_remove(dr as usize);
        let shift = Monomial::var(r.nvars(), var);
        let mut shifted_b = b.clone();
        for _ in 0..(dr - db) {
            shifted_b = shifted_b.mul_monomial(&shift);
        }
        r = &(&lb * &r) - &(&lr * &shifted_b);
        let c = content(&r);
        if !c.is_zero() && !c.is_one() {
            r = r.map_coeffs(|x| x / &c);
        }
    }
    r
}

/// Recursive primitive-PRS gcd. Always correct; slow on large inputs.
fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let one = IntPoly::one(a.var_list().clone());
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return one;
    }
    let sa = a.support_vars();
    let sb = b.support_vars();
    if let Some(&v) = sa.iter().find(|v| !sb.contains(v)) {
        let mut parts = a.coefficients_in(v);
        parts.push(b.clone());
        return gcd_many(&parts);
    }
    if let Some(&v) = sb.iter().find(|v| !sa.contains(v)) {
        let mut parts = b.coefficients_in(v);
        parts.push(a.clone());
        return gcd_many(&parts);
    }
    let var = *sa
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap();
    let (pa, ca) = split_content(a, var);
    let (pb, cb) = split_content(b, var);
    let cont = gcd(&ca, &cb);
    let (mut x, mut y) = if pa.degree_in(var) >= pb.degree_in(var) { (pa, pb) } else { (pb, pa) };
    let core = loop {
        let r = pseudo_rem(&x, &y, var);
        if r.is_zero() {
            break y;
        }
        if r.degree_in(var) == super::Degree::Finite(0) {
            break one.clone();
        }
        x = y;
        y = split_content(&r, var).0;
    };
    normalize(&(&core * &cont))
}
