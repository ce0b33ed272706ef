use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{AlgebraError, Monomial, Scalar};

/// Shared, ordered list of variable names.
pub type VarList = Arc<[String]>;

pub fn var_list<S: AsRef<str>>(names: &[S]) -> VarList {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Total degree of a polynomial. The zero polynomial has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse multivariate polynomial over a [`Scalar`] ring.
///
/// Terms are kept in a `BTreeMap` keyed by graded-lex [`Monomial`], so the last entry is
/// the leading term. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<C> {
    vars: VarList,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(vars: VarList) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: VarList) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: VarList, c: C) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::one(n), c)])
    }

    pub fn var(vars: VarList, index: usize) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::var(n, index), C::one())])
    }

    pub fn term(vars: VarList, monomial: Monomial, c: C) -> Self {
        Self::from_terms(vars, [(monomial, c)])
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(vars: VarList, terms: I) -> Self {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), vars.len(), "monomial arity does not match variable list");
            match map.get_mut(&m) {
                Some(acc) => acc.add_assign_ref(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { vars, terms: map }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_list(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::NegInfinity,
            Some(m) => Degree::Finite(m.degree()),
        }
    }

    pub fn degree_in(&self, var: usize) -> Degree {
        self.terms
            .keys()
            .map(|m| m.exponents()[var])
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Smallest total degree among the terms.
    pub fn low_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&C> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Variables that actually occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exponents()[i] > 0))
            .collect()
    }

    pub fn check_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    *acc = if negate { acc.sub_ref(c) } else { acc.add_ref(c) };
                    if acc.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), if negate { -c.clone() } else { c.clone() });
                }
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.vars.clone());
        }
        if let Some(product) = self.mul_packed(other) {
            return product;
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity((self.terms.len() * other.terms.len()).min(1 << 16));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = c1.mul_ref(c2);
                match acc.entry(m1.mul(m2)) {
                    Entry::Occupied(mut e) => e.get_mut().add_assign_ref(&prod),
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Product with every monomial packed into one `u64` (per-variable bit fields wide enough
    /// for the exponent sums), so that accumulation never allocates a key.
    fn mul_packed(&self, other: &Self) -> Option<Self> {
        let n = self.vars.len();
        let max_exp = |p: &Self| {
            p.terms.keys().fold(vec![0u64; n], |mut acc, m| {
                for (a, &e) in acc.iter_mut().zip(m.exponents()) {
                    *a = (*a).max(e as u64);
                }
                acc
            })
        };
        let (ma, mb) = (max_exp(self), max_exp(other));
        let widths: Vec<u32> = ma.iter().zip(&mb).map(|(a, b)| 64 - (a + b).leading_zeros()).collect();
        if widths.iter().sum::<u32>() > 64 {
            return None;
        }
        let shifts: Vec<u32> = widths.iter().scan(0, |s, w| { let at = *s; *s += w; Some(at) }).collect();
        let pack = |m: &Monomial| m.exponents().iter().zip(&shifts).fold(0u64, |k, (&e, &sh)| k | (e as u64) << sh);
        let a: Vec<(u64, &C)> = self.terms.iter().map(|(m, c)| (pack(m), c)).collect();
        let b: Vec<(u64, &C)> = other.terms.iter().map(|(m, c)| (pack(m), c)).collect();
        let mut acc: FxHashMap<u64, C> = FxHashMap::default();
        acc.reserve((a.len() * b.len()).min(1 << 20));
        for &(k1, c1) in &a {
            for &(k2, c2) in &b {
                let prod = c1.mul_ref(c2);
                match acc.entry(k1 + k2) {
                    Entry::Occupied(mut e) => e.get_mut().add_assign_ref(&prod),
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let unpack = |k: u64| {
            Monomial::new(widths.iter().zip(&shifts).map(|(&w, &sh)| ((k >> sh) & ((1u64 << w) - 1)) as u32).collect())
        };
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (unpack(k), c)).collect();
        Some(MultiPoly { vars: self.vars.clone(), terms })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.mul_ref(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, monomial: &Monomial) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(monomial), c.clone())).collect(),
        }
    }

    /// Divides every term by `monomial`. Panics if some term is not divisible.
    pub fn div_monomial(&self, monomial: &Monomial) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div(monomial).expect("monomial does not divide term"), c.clone()))
                .collect(),
        }
    }

    /// Largest monomial dividing every term, or `None` for the zero polynomial.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut result = Self::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Evaluates at a point given by one value per variable.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong arity");
        let mut powers: Vec<Vec<C>> = point.iter().map(|v| vec![C::one(), v.clone()]).collect();
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_ref(&cache[1]);
                    cache.push(next);
                }
                t = t.mul_ref(&cache[e as usize]);
            }
            total.add_assign_ref(&t);
        }
        total
    }

    /// Substitutes `subs[i]` for variable `i`. The result lives in the substitutions' ring.
    pub fn compose(&self, subs: &[MultiPoly<C>]) -> Result<MultiPoly<C>, AlgebraError> {
        if subs.len() != self.nvars() {
            return Err(AlgebraError::ArityMismatch { expected: self.nvars(), found: subs.len() });
        }
        let target = match subs.first() {
            Some(s) => s.vars.clone(),
            // a polynomial in zero variables is a constant
            None => return Ok(self.clone()),
        };
        for s in &subs[1..] {
            subs[0].check_vars(s)?;
        }
        let max_exp: Vec<u32> = (0..self.nvars())
            .map(|i| self.degree_in(i).finite().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPoly<C>>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(s, &e)| {
                let mut v = vec![MultiPoly::one(target.clone())];
                for k in 1..=e as usize {
                    let next = v[k - 1].mul_unchecked(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = MultiPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    prod = prod.mul_unchecked(&powers[i][e as usize]);
                }
            }
            for (pm, pc) in prod.terms {
                match acc.entry(pm) {
                    Entry::Occupied(mut o) => o.get_mut().add_assign_ref(&pc),
                    Entry::Vacant(v) => {
                        v.insert(pc);
                    }
                }
            }
        }
        Ok(MultiPoly {
            vars: target,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Homogenizes to its own total degree by appending a variable named `name`.
    pub fn homogenize(&self, name: &str) -> Self {
        let d = self.degree().finite().unwrap_or(0);
        self.homogenize_to(d, name)
    }

    /// Homogenizes to degree `degree` (must be at least the total degree).
    pub fn homogenize_to(&self, degree: u32, name: &str) -> Self {
        let mut names = self.vars.to_vec();
        names.push(name.to_string());
        let vars: VarList = names.into();
        MultiPoly {
            vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let d = m.degree();
                    assert!(d <= degree, "homogenization degree below total degree");
                    (m.push(degree - d), c.clone())
                })
                .collect(),
        }
    }

    /// Sets variable `index` to 1 and removes it from the variable list.
    pub fn dehomogenize(&self, index: usize) -> Self {
        let mut names = self.vars.to_vec();
        names.remove(index);
        Self::from_terms(
            names.into(),
            self.terms.iter().map(|(m, c)| (m.without(index), c.clone())),
        )
    }

    /// Same terms over a different list of variable names of equal length.
    pub fn with_vars(&self, vars: VarList) -> Result<Self, AlgebraError> {
        if vars.len() != self.nvars() {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.to_vec(),
                right: vars.to_vec(),
            });
        }
        Ok(MultiPoly { vars, terms: self.terms.clone() })
    }

    /// Coefficients with respect to variable `var`, as polynomials in the same ring that do
    /// not involve `var`. Entry `k` is the coefficient of `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = match self.degree_in(var).finite() {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut buckets: Vec<BTreeMap<Monomial, C>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponents()[var] as usize;
            buckets[e].insert(m.with_exponent(var, 0), c.clone());
        }
        buckets
            .into_iter()
            .map(|terms| MultiPoly { vars: self.vars.clone(), terms })
            .collect()
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    /// Writes in the parser's grammar, leading term first: `3/2*x^2*y - z + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a, C: Scalar> $trait<&'a MultiPoly<C>> for &'a MultiPoly<C> {
            type Output = MultiPoly<C>;

            /// Panics if the variable lists differ; see the `try_*` methods.
            fn $method(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
                self.$checked(rhs).expect("polynomial operands over different variables")
            }
        }

        impl<C: Scalar> $trait for MultiPoly<C> {
            type Output = MultiPoly<C>;

            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Scalar> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = MultiPoly<BigInt>;

    fn xy() -> (VarList, P, P) {
        let v = var_list(&["x", "y"]);
        (v.clone(), P::var(v.clone(), 0), P::var(v, 1))
    }

    fn int(v: &VarList, c: i64) -> P {
        P::constant(v.clone(), BigInt::from(c))
    }

    #[test]
    fn difference_of_squares() {
        let (_, x, y) = xy();
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn zeroth_power_is_one() {
        let (v, x, _) = xy();
        assert_eq!((&x + &int(&v, 1)).pow(0), P::one(v));
    }

    #[test]
    fn square_of_binomial() {
        let (v, x, y) = xy();
        let p = &(&int(&v, 2) * &x) + &(&int(&v, 3) * &y);
        assert_eq!(p.pow(2).to_string(), "4*x^2 + 12*x*y + 9*y^2");
    }

    #[test]
    fn degree_sentinel_and_products() {
        let (v, x, y) = xy();
        assert_eq!(P::zero(v.clone()).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let p = &(&x * &x) + &y;
        let q = &(&x * &y) + &int(&v, 1);
        assert_eq!((&p * &q).degree(), Degree::Finite(4));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let (_, x, _) = xy();
        let z = P::var(var_list(&["z"]), 0);
        assert!(matches!(x.try_add(&z), Err(AlgebraError::VariableMismatch { .. })));
    }

    #[test]
    fn compose_swap_and_identity() {
        let (v, x, y) = xy();
        let p = &(&x * &x) + &y;
        assert_eq!(p.compose(&[y.clone(), x.clone()]).unwrap(), &(&y * &y) + &x);
        let u = var_list(&["x"]);
        let xu = P::var(u.clone(), 0);
        let shift = &xu + &P::one(u.clone());
        assert_eq!(xu.compose(&[shift.clone()]).unwrap(), shift);
        assert!(matches!(p.compose(&[x.clone()]), Err(AlgebraError::ArityMismatch { .. })));
        let _ = v;
    }

    #[test]
    fn compose_henon_component() {
        // (y^2 + x) o (y, y^2 + x) = (y^2 + x)^2 + y
        let (_, x, y) = xy();
        let second = &(&y * &y) + &x;
        let composed = second.compose(&[y.clone(), second.clone()]).unwrap();
        assert_eq!(composed, &second.pow(2) + &y);
    }

    #[test]
    fn homogenize_round_trip() {
        let (v, x, y) = xy();
        let p = &(&(&y * &y) + &x) + &int(&v, 3);
        let h = p.homogenize("w");
        assert!(h.is_homogeneous());
        assert_eq!(h.to_string(), "x*w + y^2 + 3*w^2");
        assert_eq!(h.dehomogenize(2), p);
    }

    #[test]
    fn coefficients_in_variable() {
        let (v, x, y) = xy();
        let p = &(&(&x * &x) * &y) + &(&y + &int(&v, 2));
        let c = p.coefficients_in(0);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], &y + &int(&v, 2));
        assert!(c[1].is_zero());
        assert_eq!(c[2], y);
    }

    #[test]
    fn evaluation() {
        let (v, x, y) = xy();
        let p = &(&(&x * &x) * &y) - &(&y + &int(&v, 2));
        let val = p.eval(&[BigInt::from(3), BigInt::from(-2)]);
        assert_eq!(val, BigInt::from(-18));
        let pf = p.map_coeffs(|c| c.to_string().parse::<f64>().unwrap());
        assert_eq!(pf.eval(&[3.0, -2.0]), -18.0);
    }
}
