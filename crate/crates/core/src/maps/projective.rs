use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AffinePolyMap, Evaluation, MapError};
use crate::algebra::gcd::{div_exact, gcd_many};
use crate::algebra::rational::{clear_denominators, to_rational_poly};
use crate::algebra::{Monomial, MultiPoly, VarList};
use crate::heights::{Point, ProjPoint};
use crate::{IntPoly, Poly};

/// Rational self-map of `P^N` given by `N + 1` coprime homogeneous integer polynomials of a
/// common degree, normalized so the tuple has content 1 and the first nonzero component has
/// a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjRationalMap {
    vars: VarList,
    components: Vec<IntPoly>,
    degree: u32,
}

impl ProjRationalMap {
    /// Saturates a tuple of homogeneous rational polynomials.
    pub fn saturate(components: &[Poly]) -> Result<Self, MapError> {
        Self::saturate_int(clear_denominators(components))
    }

    /// Divides out the common factor of a homogeneous tuple and normalizes it.
    pub fn saturate_int(components: Vec<IntPoly>) -> Result<Self, MapError> {
        let n = components.len();
        if n < 2 {
            return Err(MapError::DimensionMismatch { expected: 2, found: n });
        }
        let vars = components[0].var_list().clone();
        for c in &components[1..] {
            components[0].check_vars(c)?;
        }
        if vars.len() != n {
            return Err(MapError::DimensionMismatch { expected: vars.len(), found: n });
        }
        let mut degree = None;
        for (index, c) in components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return Err(MapError::NotHomogeneous { index });
            }
            let d = c.degree().finite().unwrap();
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => {
                    return Err(MapError::DegreeMismatch { index, expected: e, found: d })
                }
                _ => {}
            }
        }
        let Some(mut degree) = degree else { return Err(MapError::AllZero) };

        let g = gcd_many(&components);
        let mut components = if g.is_constant() {
            components
        } else {
            degree -= g.degree().finite().unwrap();
            components
                .iter()
                .map(|c| div_exact(c, &g).expect("gcd divides every component"))
                .collect()
        };
        if degree == 0 {
            return Err(MapError::ConstantMap);
        }

        let mut content = BigInt::zero();
        for c in &components {
            for (_, a) in c.terms() {
                content = content.gcd(a);
                if content.is_one() {
                    break;
                }
            }
        }
        let lead_negative = components
            .iter()
            .find(|c| !c.is_zero())
            .and_then(|c| c.leading_coefficient())
            .is_some_and(|a| a.is_negative());
        if lead_negative {
            content = -content;
        }
        if !content.is_one() {
            components = components.iter().map(|c| c.map_coeffs(|a| a / &content)).collect();
        }
        Ok(ProjRationalMap { vars, components, degree })
    }

    /// The identity `[X0 : ... : XN]` on the given homogeneous variables.
    pub fn identity(vars: VarList) -> Self {
        let components = (0..vars.len()).map(|i| MultiPoly::var(vars.clone(), i)).collect();
        ProjRationalMap { vars, components, degree: 1 }
    }

    pub fn dimension(&self) -> usize {
        self.components.len() - 1
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn components(&self) -> &[IntPoly] {
        &self.components
    }

    pub fn rational_components(&self) -> Vec<Poly> {
        self.components.iter().map(to_rational_poly).collect()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Total number of stored terms over all components.
    pub fn term_count(&self) -> usize {
        self.components.iter().map(MultiPoly::num_terms).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 1
            && self
                .components
                .iter()
                .enumerate()
                .all(|(i, c)| *c == MultiPoly::var(self.vars.clone(), i))
    }

    /// `self ∘ g`, saturated.
    pub fn compose(&self, g: &ProjRationalMap) -> Result<Self, MapError> {
        if self.dimension() != g.dimension() {
            return Err(MapError::DimensionMismatch { expected: self.dimension(), found: g.dimension() });
        }
        let raw: Result<Vec<IntPoly>, _> =
            self.components.iter().map(|c| c.compose(&g.components)).collect();
        Self::saturate_int(raw?)
    }

    /// `f^n` by repeated composition, saturating at every step.
    pub fn iterate(&self, n: u32) -> Result<Self, MapError> {
        assert!(n >= 1, "iterate needs n >= 1");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Image of a point, or `Indeterminate` when every component vanishes there.
    pub fn evaluate(&self, p: &ProjPoint) -> Result<Evaluation, MapError> {
        if p.coords().len() != self.components.len() {
            return Err(MapError::DimensionMismatch {
                expected: self.dimension(),
                found: p.dimension(),
            });
        }
        let values: Vec<BigInt> = self.components.iter().map(|c| c.eval(p.coords())).collect();
        Ok(match ProjPoint::new(values) {
            Ok(q) => Evaluation::Point(Point::Projective(q)),
            Err(_) => Evaluation::Indeterminate,
        })
    }

    /// The affine map on the chart `X_N != 0`, when the last component is `c * X_N^d`
    /// (that is, when the map is the closure of a polynomial map).
    pub fn dehomogenize(&self) -> Option<AffinePolyMap> {
        let n = self.dimension();
        let last = self.components.last()?;
        let (m, c) = last.leading_term()?;
        let mut pure = vec![0; n + 1];
        pure[n] = self.degree;
        if last.num_terms() != 1 || *m != Monomial::new(pure) {
            return None;
        }
        let c = num_rational::BigRational::from_integer(c.clone());
        let comps: Vec<Poly> = self.components[..n]
            .iter()
            .map(|p| {
                let inv = c.recip();
                to_rational_poly(&p.dehomogenize(n)).scale(&inv)
            })
            .collect();
        AffinePolyMap::new(comps).ok()
    }
}

impl fmt::Display for ProjRationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}
