//! Orbits, arithmetic degrees, the ℓ-sequence, return sets, invariant-curve searches and
//! periodic-point surveys. Everything iterates maps on points; no map is ever composed here.

mod arith;
mod density;
mod dml;
mod orbit;
mod survey;

pub use arith::{
    ell_sequence, ell_sequence_two_sided, estimate_arith_degree, power_consistency_check, ratios_from_heights,
    roots_from_heights, ArithDegreeEstimate, EllSequence, PowerConsistencyReport,
};
pub use density::{invariant_curve_search, CurveSearch, CurveSearchOptions, CurveStatus};
pub use dml::{return_set, Decomposition, Progression, ReturnSet};
pub use orbit::{detect_periodicity, forward_orbit, full_orbit, Direction, OrbitRecord, Periodicity};
pub use survey::{periodic_point_survey, OrbitClass, PeriodicEntry, Survey, SurveyCounts, SurveyOptions};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::integer_associate;
use crate::degrees::DegreeError;
use crate::heights::Point;
use crate::maps::MapError;
use crate::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error("the supplied inverse does not compose to the identity")]
    NotInverse,
    #[error("orbit too short: need {needed} points, have {found}")]
    OrbitTooShort { needed: usize, found: usize },
    #[error("orbit meets the indeterminacy locus at index {index}")]
    Indeterminate { index: i64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("enumeration would visit about {estimate} points, above the cap of {cap}")]
    EnumerationTooLarge { estimate: u64, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Whether `poly` vanishes at `p`, decided in integers: affine points are tested through the
/// homogenization of `poly` at their projective closure; projective points take either a
/// homogeneous polynomial in all `N + 1` coordinates or an affine one read on the chart
/// where the last coordinate is nonzero.
pub fn vanishes_at(poly: &Poly, p: &Point) -> Result<bool, DynamicsError> {
    if poly.is_zero() {
        return Ok(true);
    }
    let n = p.dimension();
    let q = p.to_projective();
    let ip = integer_associate(poly);
    let homogeneous = if ip.nvars() == n + 1 {
        if !ip.is_homogeneous() {
            return Err(DynamicsError::InvalidArgument(format!("`{poly}` is not homogeneous")));
        }
        ip
    } else if ip.nvars() == n {
        if let Point::Projective(_) = p {
            if q.coords()[n].is_zero() {
                // off the chart: only the top-degree part survives at infinity
                let d = ip.degree().finite().unwrap_or(0);
                let top = ip.homogeneous_part(d).homogenize_to(d, "_h");
                return Ok(top.eval(q.coords()).is_zero());
            }
        }
        ip.homogenize("_h")
    } else {
        return Err(DynamicsError::DimensionMismatch { expected: n, found: ip.nvars() });
    };
    let value: BigInt = homogeneous.eval(q.coords());
    Ok(value.is_zero())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{parse_poly, var_list};
    use crate::maps::{zoo_get, ZooMap};
    use std::collections::BTreeMap;

    pub fn zoo(name: &str, params: &[(&str, &str)]) -> ZooMap {
        let p: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        zoo_get(name, &p).unwrap()
    }

    #[test]
    fn vanishing_on_both_spaces() {
        let v = var_list(&["x", "y"]);
        let parabola = parse_poly("y - x^2", &v).unwrap();
        assert!(vanishes_at(&parabola, &Point::parse("(1/2, 1/4)").unwrap()).unwrap());
        assert!(!vanishes_at(&parabola, &Point::parse("(1/2, 1/3)").unwrap()).unwrap());
        assert!(vanishes_at(&parabola, &Point::parse("[2:4:1]").unwrap()).unwrap());
        // the closure of y = x^2 meets infinity at [0:1:0]
        assert!(vanishes_at(&parabola, &Point::parse("[0:1:0]").unwrap()).unwrap());
        assert!(!vanishes_at(&parabola, &Point::parse("[1:0:0]").unwrap()).unwrap());
        let w = var_list(&["x", "y", "z"]);
        let conic = parse_poly("x*z - y^2", &w).unwrap();
        assert!(vanishes_at(&conic, &Point::parse("[1:1:1]").unwrap()).unwrap());
    }
}
