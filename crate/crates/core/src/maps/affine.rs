use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{homogenizing_name, Evaluation, MapError, ProjRationalMap};
use crate::algebra::rational::clear_denominators;
use crate::algebra::{parse_poly, MultiPoly, VarList};
use crate::heights::{ratio, AffinePoint, Point, ProjPoint};
use crate::{IntPoly, Poly};

/// Polynomial self-map of `A^N`: one polynomial in `N` variables per coordinate.
#[derive(Clone, Debug)]
pub struct AffinePolyMap {
    vars: VarList,
    components: Vec<Poly>,
    /// Components homogenized to `max(deg, 1)` with denominators cleared; the last entry is
    /// `L * w^d`. Used to evaluate with integer arithmetic only.
    closure: Vec<IntPoly>,
}

impl PartialEq for AffinePolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for AffinePolyMap {}

impl AffinePolyMap {
    pub fn new(components: Vec<Poly>) -> Result<Self, MapError> {
        let first = components.first().ok_or(MapError::DimensionMismatch { expected: 1, found: 0 })?;
        let vars = first.var_list().clone();
        for c in &components[1..] {
            first.check_vars(c)?;
        }
        if vars.len() != components.len() {
            return Err(MapError::DimensionMismatch { expected: vars.len(), found: components.len() });
        }
        let d = components.iter().filter_map(|c| c.degree().finite()).max().unwrap_or(0).max(1);
        let w = homogenizing_name(&vars);
        let mut homog: Vec<Poly> = components.iter().map(|c| c.homogenize_to(d, &w)).collect();
        let hvars = homog[0].var_list().clone();
        let mut last = vec![0; vars.len() + 1];
        last[vars.len()] = d;
        homog.push(MultiPoly::term(hvars, crate::algebra::Monomial::new(last), One::one()));
        let closure = clear_denominators(&homog);
        Ok(AffinePolyMap { vars, components, closure })
    }

    /// Parses one polynomial string per coordinate over `vars`.
    pub fn parse<S: AsRef<str>>(vars: &VarList, components: &[S]) -> Result<Self, MapError> {
        let polys: Result<Vec<Poly>, _> =
            components.iter().map(|c| parse_poly(c.as_ref(), vars)).collect();
        Self::new(polys?)
    }

    pub fn identity(vars: VarList) -> Self {
        Self::new((0..vars.len()).map(|i| MultiPoly::var(vars.clone(), i)).collect())
            .expect("identity is well formed")
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// Largest component degree (0 for constant maps).
    pub fn degree(&self) -> u32 {
        self.components.iter().filter_map(|c| c.degree().finite()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().enumerate().all(|(i, c)| *c == MultiPoly::var(self.vars.clone(), i))
    }

    /// Exact image of a rational point, computed on integer representatives.
    pub fn evaluate(&self, p: &AffinePoint) -> Result<AffinePoint, MapError> {
        if p.dimension() != self.dimension() {
            return Err(MapError::DimensionMismatch { expected: self.dimension(), found: p.dimension() });
        }
        let q = p.to_projective();
        let values: Vec<BigInt> = self.closure.iter().map(|c| c.eval(q.coords())).collect();
        let image = ProjPoint::new(values).expect("last coordinate of the closure is nonzero");
        let coords = image.coords();
        let den = coords[coords.len() - 1].clone();
        Ok(AffinePoint::new(coords[..coords.len() - 1].iter().map(|a| ratio(a.clone(), den.clone())).collect()))
    }

    /// Image of a projective point under the extension to `P^N`.
    pub fn evaluate_projective(&self, p: &ProjPoint) -> Result<Evaluation, MapError> {
        if p.dimension() != self.dimension() {
            return Err(MapError::DimensionMismatch { expected: self.dimension(), found: p.dimension() });
        }
        let values: Vec<BigInt> = self.closure.iter().map(|c| c.eval(p.coords())).collect();
        Ok(match ProjPoint::new(values) {
            Ok(q) => Evaluation::Point(Point::Projective(q)),
            Err(_) => Evaluation::Indeterminate,
        })
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &AffinePolyMap) -> Result<Self, MapError> {
        if self.dimension() != g.dimension() {
            return Err(MapError::DimensionMismatch { expected: self.dimension(), found: g.dimension() });
        }
        let comps: Result<Vec<Poly>, _> = self.components.iter().map(|c| c.compose(&g.components)).collect();
        Self::new(comps?)
    }

    pub fn iterate(&self, n: u32) -> Result<Self, MapError> {
        assert!(n >= 1, "iterate needs n >= 1");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Extension to `P^N`: components homogenized to the top degree with `w^d` appended.
    pub fn homogenize(&self) -> Result<ProjRationalMap, MapError> {
        if self.degree() == 0 {
            return Err(MapError::ConstantMap);
        }
        ProjRationalMap::saturate_int(self.closure.clone())
    }

    /// Rows of exponents when every component is a monic monomial.
    pub fn exponent_matrix(&self) -> Option<Vec<Vec<u32>>> {
        self.components
            .iter()
            .map(|c| {
                let (m, a) = c.leading_term()?;
                (c.num_terms() == 1 && a.is_one()).then(|| m.exponents().to_vec())
            })
            .collect()
    }
}

impl fmt::Display for AffinePolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var_list;

    fn map(vars: &[&str], comps: &[&str]) -> AffinePolyMap {
        AffinePolyMap::parse(&var_list(vars), comps).unwrap()
    }

    #[test]
    fn henon_homogenized() {
        let h = map(&["x", "y"], &["y", "y^2 + x"]);
        let f = h.homogenize().unwrap();
        assert_eq!(f.to_string(), "[y*w : x*w + y^2 : w^2]");
        assert_eq!(f.degree(), 2);
        assert_eq!(f.dehomogenize().unwrap(), h);
    }

    #[test]
    fn identity_homogenized() {
        let f = AffinePolyMap::identity(var_list(&["x", "y"])).homogenize().unwrap();
        assert!(f.is_identity());
        assert_eq!(f.to_string(), "[x : y : w]");
    }

    #[test]
    fn gs02_homogenized() {
        let g = map(&["x", "y", "z"], &["y*x^2 + z", "y^3 + x", "y"]);
        let f = g.homogenize().unwrap();
        assert_eq!(f.to_string(), "[x^2*y + z*w^2 : x*w^2 + y^3 : y*w^2 : w^3]");
    }

    #[test]
    fn constant_map_rejected() {
        let c = map(&["x"], &["3"]);
        assert!(matches!(c.homogenize(), Err(MapError::ConstantMap)));
        assert_eq!(c.evaluate(&AffinePoint::from_i64(&[7])).unwrap().to_string(), "(3)");
    }

    #[test]
    fn evaluation_examples() {
        let h = map(&["x", "y"], &["y", "y^2 + x"]);
        assert_eq!(h.evaluate(&AffinePoint::from_i64(&[1, 2])).unwrap().to_string(), "(2, 5)");
        let s = map(&["x"], &["x + 1"]);
        assert_eq!(s.evaluate(&AffinePoint::from_i64(&[0])).unwrap().to_string(), "(1)");
        let g = map(&["x", "y", "z"], &["y*x^2 + z", "y^3 + x", "y"]);
        assert_eq!(g.evaluate(&AffinePoint::from_i64(&[1, 1, 1])).unwrap().to_string(), "(2, 2, 1)");
        let r = map(&["x", "y"], &["1/2*x + y", "x*y"]);
        let p = AffinePoint::new(vec![crate::algebra::rational::rat(1, 3), crate::algebra::rational::rat(-2, 5)]);
        assert_eq!(r.evaluate(&p).unwrap().to_string(), "(-7/30, -2/15)");
    }

    #[test]
    fn monomial_exponents() {
        let m = map(&["x", "y"], &["x*y", "x"]);
        assert_eq!(m.exponent_matrix(), Some(vec![vec![1, 1], vec![1, 0]]));
        assert_eq!(map(&["x"], &["2*x"]).exponent_matrix(), None);
    }
}
