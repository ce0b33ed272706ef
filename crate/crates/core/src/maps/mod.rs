//! Polynomial self-maps of affine space, rational self-maps of projective space, and the
//! built-in zoo of examples.

mod affine;
mod projective;
mod zoo;

use std::fmt;

pub use affine::AffinePolyMap;
pub use projective::ProjRationalMap;
pub use zoo::{cremona, default_vars, determinant, monomial, parse_matrix, zoo_get, zoo_list, ParamSpec, ZooFamily, ZooMap};

use crate::algebra::{AlgebraError, VarList};
use crate::heights::Point;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("component {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("component {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: u32, found: u32 },
    #[error("all components are zero")]
    AllZero,
    #[error("the map is constant")]
    ConstantMap,
    #[error("unknown map family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: String, message: String },
}

/// Result of evaluating a rational map: an image point, or a point of the indeterminacy locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Point(Point),
    Indeterminate,
}

impl Evaluation {
    pub fn point(self) -> Option<Point> {
        match self {
            Evaluation::Point(p) => Some(p),
            Evaluation::Indeterminate => None,
        }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Point(p) => p.fmt(f),
            Evaluation::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// Name for the appended homogenizing variable: `w`, or `w0`, `w1`, ... on a clash.
pub fn homogenizing_name(vars: &[String]) -> String {
    if !vars.iter().any(|v| v == "w") {
        return "w".into();
    }
    (0..).map(|i| format!("w{i}")).find(|c| !vars.contains(c)).unwrap()
}

/// Either kind of self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelfMap {
    Affine(AffinePolyMap),
    Projective(ProjRationalMap),
}

impl SelfMap {
    pub fn dimension(&self) -> usize {
        match self {
            SelfMap::Affine(f) => f.dimension(),
            SelfMap::Projective(f) => f.dimension(),
        }
    }

    pub fn vars(&self) -> &VarList {
        match self {
            SelfMap::Affine(f) => f.vars(),
            SelfMap::Projective(f) => f.vars(),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, SelfMap::Affine(_))
    }

    pub fn as_affine(&self) -> Option<&AffinePolyMap> {
        match self {
            SelfMap::Affine(f) => Some(f),
            SelfMap::Projective(_) => None,
        }
    }

    /// Degree of the map (largest component degree for affine maps).
    pub fn degree(&self) -> u32 {
        match self {
            SelfMap::Affine(f) => f.degree(),
            SelfMap::Projective(f) => f.degree(),
        }
    }

    pub fn to_projective(&self) -> Result<ProjRationalMap, MapError> {
        match self {
            SelfMap::Affine(f) => f.homogenize(),
            SelfMap::Projective(f) => Ok(f.clone()),
        }
    }

    /// Evaluates at a point. Affine points on projective maps go through their closure, and
    /// projective points on affine maps through the extension to `P^N`.
    pub fn evaluate(&self, p: &Point) -> Result<Evaluation, MapError> {
        if p.dimension() != self.dimension() {
            return Err(MapError::DimensionMismatch { expected: self.dimension(), found: p.dimension() });
        }
        match (self, p) {
            (SelfMap::Affine(f), Point::Affine(a)) => Ok(Evaluation::Point(Point::Affine(f.evaluate(a)?))),
            (SelfMap::Affine(f), Point::Projective(q)) => f.evaluate_projective(q),
            (SelfMap::Projective(f), Point::Projective(q)) => f.evaluate(q),
            (SelfMap::Projective(f), Point::Affine(a)) => f.evaluate(&a.to_projective()),
        }
    }

    /// `self ∘ g`; affine when both are affine.
    pub fn compose(&self, g: &SelfMap) -> Result<SelfMap, MapError> {
        match (self, g) {
            (SelfMap::Affine(f), SelfMap::Affine(g)) => Ok(SelfMap::Affine(f.compose(g)?)),
            _ => Ok(SelfMap::Projective(self.to_projective()?.compose(&g.to_projective()?)?)),
        }
    }

    pub fn iterate(&self, n: u32) -> Result<SelfMap, MapError> {
        Ok(match self {
            SelfMap::Affine(f) => SelfMap::Affine(f.iterate(n)?),
            SelfMap::Projective(f) => SelfMap::Projective(f.iterate(n)?),
        })
    }

    pub fn is_identity(&self) -> bool {
        match self {
            SelfMap::Affine(f) => f.is_identity(),
            SelfMap::Projective(f) => f.is_identity(),
        }
    }

    /// Exponent matrix of a monic monomial map (rows = components).
    pub fn exponent_matrix(&self) -> Option<Vec<Vec<u32>>> {
        self.as_affine()?.exponent_matrix()
    }
}

impl fmt::Display for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfMap::Affine(m) => m.fmt(f),
            SelfMap::Projective(m) => m.fmt(f),
        }
    }
}

/// True iff `g ∘ f` and `f ∘ g` are both the identity: as exact polynomial tuples for affine
/// pairs, after saturation otherwise.
pub fn inverse_check(f: &SelfMap, g: &SelfMap) -> bool {
    if f.dimension() != g.dimension() {
        return false;
    }
    let both = |a: &SelfMap, b: &SelfMap| a.compose(b).map(|c| c.is_identity()).unwrap_or(false);
    both(g, f) && both(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var_list;

    #[test]
    fn homogenizing_name_avoids_clash() {
        assert_eq!(homogenizing_name(&["x".into(), "y".into()]), "w");
        assert_eq!(homogenizing_name(&["w".into(), "w0".into()]), "w1");
    }

    #[test]
    fn squares_are_not_inverse() {
        let v = var_list(&["x", "y"]);
        let f = SelfMap::Affine(AffinePolyMap::parse(&v, &["x^2", "y^2"]).unwrap());
        assert!(!inverse_check(&f, &f));
    }

    #[test]
    fn henon_pair_inverse() {
        let v = var_list(&["x", "y"]);
        let f = SelfMap::Affine(AffinePolyMap::parse(&v, &["y", "y^2 + x"]).unwrap());
        let g = SelfMap::Affine(AffinePolyMap::parse(&v, &["y - x^2", "x"]).unwrap());
        assert!(inverse_check(&f, &g));
        let pf = SelfMap::Projective(f.to_projective().unwrap());
        let pg = SelfMap::Projective(g.to_projective().unwrap());
        assert!(inverse_check(&pf, &pg));
        // raw composition of the extensions has degree 4 before saturation
        assert!(pf.compose(&pg).unwrap().is_identity());
    }
}
