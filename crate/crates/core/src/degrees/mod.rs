//! Degree growth of iterates, dynamical degrees and the constants of the ℓ-sequence lemma.

mod lemma;
mod sequence;
mod topdeg;

pub use lemma::{LemmaConstants, LemmaResiduals};
pub use sequence::{degree_sequence, estimate_delta1, DegreeSequence, DynDegreeEstimate};
pub use topdeg::{topological_degree, FiberSample, TopDegreeEstimate, TopDegreeMethod, TopDegreeOptions};

use serde::Serialize;

use crate::maps::{MapError, SelfMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("need at least {needed} degree entries, found {found}")]
    TooFewEntries { needed: usize, found: usize },
    #[error("no good prime found after {attempts} attempts")]
    NoGoodPrime { attempts: usize },
    #[error("exhaustive fiber scan in dimension {dimension} does not fit max_scan = {max_scan}")]
    ScanTooLarge { dimension: usize, max_scan: u64 },
    #[error("the map is not a monomial map")]
    NotMonomial,
    #[error("no verified inverse was supplied")]
    NoVerifiedInverse,
    #[error("hyperbolicity report supports dimensions 2 and 3 (3 only with an inverse), got {0}")]
    UnsupportedDimension(usize),
    #[error("lemma hypothesis violated: {0}")]
    LemmaHypothesis(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub dimension: usize,
    pub delta1: DynDegreeEstimate,
    pub delta1_value: f64,
    pub delta2_value: f64,
    /// How `δ2` was obtained: a topological-degree method, or `δ1` of the inverse.
    pub delta2_source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_delta1: Option<DynDegreeEstimate>,
    /// `δ1 > δ2`, the hypothesis of the arithmetic-degree equality.
    pub delta1_dominates: bool,
    /// Some dynamical degree strictly exceeds all others (`δ0 = δ_dim = 1` for birational
    /// maps in dimension 3, `δ0 = 1` always).
    pub cohomologically_hyperbolic: bool,
    pub confidence: Confidence,
}

/// Compares the dynamical degrees of a surface map, or of a birational 3-fold map through
/// `δ2(f) = δ1(f^{-1})`.
pub fn hyperbolicity_report(
    map_id: &str,
    f: &SelfMap,
    inverse: Option<&SelfMap>,
    n_max: u32,
    term_cap: usize,
    opts: &TopDegreeOptions,
) -> Result<HyperbolicityReport, DegreeError> {
    let dim = f.dimension();
    let delta1_of = |id: &str, g: &SelfMap| -> Result<DynDegreeEstimate, DegreeError> {
        estimate_delta1(&degree_sequence(id, &g.to_projective()?, n_max.max(2), term_cap))
    };
    match (dim, inverse) {
        (2, _) => {
            let d1 = delta1_of(map_id, f)?;
            let top = topological_degree(f, inverse, opts)?;
            let (a, b) = (d1.best_value(), top.value as f64);
            let confidence = if d1.stable && !top.heuristic { Confidence::Exact } else { Confidence::Heuristic };
            let method = method_name(top.method);
            Ok(HyperbolicityReport {
                dimension: 2,
                delta1_value: a,
                delta2_value: b,
                delta2_source: format!("topological degree ({method})"),
                inverse_delta1: None,
                delta1_dominates: a > b,
                cohomologically_hyperbolic: strictly_dominant(&[1.0, a, b]),
                confidence,
                delta1: d1,
            })
        }
        (3, Some(g)) => {
            if !crate::maps::inverse_check(f, g) {
                return Err(DegreeError::NoVerifiedInverse);
            }
            let d1 = delta1_of(map_id, f)?;
            let inv = delta1_of(&format!("{map_id}^-1"), g)?;
            let (a, b) = (d1.best_value(), inv.best_value());
            let confidence = if d1.stable && inv.stable { Confidence::Exact } else { Confidence::Heuristic };
            Ok(HyperbolicityReport {
                dimension: 3,
                delta1_value: a,
                delta2_value: b,
                delta2_source: "delta1 of the inverse".into(),
                delta1_dominates: a > b,
                cohomologically_hyperbolic: strictly_dominant(&[1.0, a, b, 1.0]),
                confidence,
                inverse_delta1: Some(inv),
                delta1: d1,
            })
        }
        _ => Err(DegreeError::UnsupportedDimension(dim)),
    }
}

fn method_name(m: TopDegreeMethod) -> &'static str {
    match m {
        TopDegreeMethod::ExactMonomial => "exact-monomial",
        TopDegreeMethod::BirationalUnit => "birational-unit",
        TopDegreeMethod::FiberSampling => "fiber-sampling",
    }
}

fn strictly_dominant(values: &[f64]) -> bool {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    values.iter().filter(|&&v| v == max).count() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::zoo_get;
    use std::collections::BTreeMap;

    fn zoo(name: &str, params: &[(&str, &str)]) -> crate::maps::ZooMap {
        let p: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        zoo_get(name, &p).unwrap()
    }

    #[test]
    fn henon_hyperbolic() {
        let z = zoo("henon", &[]);
        let r = hyperbolicity_report("henon", &z.map, z.inverse.as_ref(), 5, 1_000_000, &Default::default())
            .unwrap();
        assert!(r.delta1_dominates && r.cohomologically_hyperbolic);
        assert_eq!((r.delta1_value, r.delta2_value), (2.0, 1.0));
        assert_eq!(r.confidence, Confidence::Exact);
    }

    #[test]
    fn squares_fail_the_hypothesis() {
        let z = zoo("power", &[("n", "2"), ("d", "2")]);
        let r = hyperbolicity_report("power", &z.map, None, 4, 1_000_000, &Default::default()).unwrap();
        assert!(!r.delta1_dominates);
        assert_eq!((r.delta1_value, r.delta2_value), (2.0, 4.0));
    }

    #[test]
    fn gs02_three_fold() {
        let z = zoo("gs02", &[("d", "2")]);
        let r = hyperbolicity_report("gs02", &z.map, z.inverse.as_ref(), 2, 1_000_000, &Default::default())
            .unwrap();
        assert_eq!((r.delta1_value, r.delta2_value), (3.0, 7.0));
        assert!(r.cohomologically_hyperbolic);
        assert_eq!(r.confidence, Confidence::Exact);
    }

    #[test]
    fn unsupported_dimension() {
        let z = zoo("shift", &[]);
        assert!(matches!(
            hyperbolicity_report("shift", &z.map, None, 3, 1000, &Default::default()),
            Err(DegreeError::UnsupportedDimension(1))
        ));
    }
}
