use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::DynamicsError;
use crate::heights::{count_estimate, BoundedHeightIter, Height, HeightBound, Point, ProjPoint, Space};
use crate::maps::{inverse_check, Evaluation, SelfMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyOptions {
    /// Refuse to enumerate more than this many candidate tuples.
    pub enumeration_cap: u64,
    /// Points handed to the thread pool per batch.
    pub batch: usize,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions { enumeration_cap: 50_000_000, batch: 1 << 14 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum OrbitClass {
    Periodic { period: u32 },
    /// Entered a cycle not containing the start within the scan.
    Preperiodic { step: u32 },
    /// Height exceeded `2B + 1` at this step.
    Escaping { step: u32 },
    /// This iterate lies in the indeterminacy locus.
    IndeterminateHit { step: u32 },
    /// None of the above within `T` steps.
    Wandering,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicEntry {
    pub point: Point,
    pub period: u32,
    pub height: Height,
    /// `f^-period(P) = P` with the verified inverse, when one was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_confirms: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SurveyCounts {
    pub enumerated: u64,
    pub periodic: u64,
    pub preperiodic: u64,
    pub escaping: u64,
    pub indeterminate: u64,
    pub wandering: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Survey {
    pub map_id: String,
    pub space: Space,
    pub height_bound: Option<f64>,
    pub max_coordinate: Option<u64>,
    pub period_bound: u32,
    pub escape_height: Option<f64>,
    pub counts: SurveyCounts,
    pub periodic: Vec<PeriodicEntry>,
    pub max_periodic_height: Option<Height>,
}

/// Classifies every point of height ≤ `bound` by scanning `T` iterates with exact equality.
///
/// The escape test (height above `2B + 1`) only prunes the scan; periodicity is always
/// established by an exact return to the start point.
pub fn periodic_point_survey(
    map_id: &str,
    f: &SelfMap,
    f_inv: Option<&SelfMap>,
    bound: HeightBound,
    period_bound: u32,
    opts: &SurveyOptions,
) -> Result<Survey, DynamicsError> {
    if period_bound == 0 {
        return Err(DynamicsError::InvalidArgument("period bound must be at least 1".into()));
    }
    let space = if f.is_affine() { Space::Affine } else { Space::Projective };
    let estimate = count_estimate(f.dimension(), bound, space);
    if estimate > opts.enumeration_cap as f64 {
        return Err(DynamicsError::EnumerationTooLarge { estimate: estimate.ceil() as u64, cap: opts.enumeration_cap });
    }
    let inverse = match f_inv {
        Some(g) if inverse_check(f, g) => Some(g),
        Some(_) => return Err(DynamicsError::NotInverse),
        None => None,
    };
    let escape = bound.log().map(|b| 2.0 * b + 1.0);

    let mut survey = Survey {
        map_id: map_id.to_string(),
        space,
        height_bound: bound.log(),
        max_coordinate: bound.max_coordinate(),
        period_bound,
        escape_height: escape,
        counts: SurveyCounts::default(),
        periodic: Vec::new(),
        max_periodic_height: None,
    };
    let Some(escape) = escape else { return Ok(survey) };

    let mut points = BoundedHeightIter::new(f.dimension(), bound, space);
    loop {
        let batch: Vec<Point> = points.by_ref().take(opts.batch.max(1)).collect();
        if batch.is_empty() {
            break;
        }
        let classes: Vec<Result<OrbitClass, DynamicsError>> =
            batch.par_iter().map(|p| classify(f, p, period_bound, escape)).collect();
        for (p, class) in batch.into_iter().zip(classes) {
            let c = &mut survey.counts;
            c.enumerated += 1;
            match class? {
                OrbitClass::Periodic { period } => {
                    c.periodic += 1;
                    let inverse_confirms = match inverse {
                        Some(g) => Some(returns_after(g, &p, period)?),
                        None => None,
                    };
                    survey.periodic.push(PeriodicEntry { height: p.height(), point: p, period, inverse_confirms });
                }
                OrbitClass::Preperiodic { .. } => c.preperiodic += 1,
                OrbitClass::Escaping { .. } => c.escaping += 1,
                OrbitClass::IndeterminateHit { .. } => c.indeterminate += 1,
                OrbitClass::Wandering => c.wandering += 1,
            }
        }
    }
    survey.max_periodic_height = survey
        .periodic
        .iter()
        .map(|e| e.height.clone())
        .max_by(|a, b| a.max_coordinate.cmp(&b.max_coordinate));
    Ok(survey)
}

fn step(f: &SelfMap, x: &ProjPoint) -> Result<Option<ProjPoint>, DynamicsError> {
    Ok(match f.evaluate(&Point::Projective(x.clone()))? {
        Evaluation::Point(q) => Some(q.to_projective()),
        Evaluation::Indeterminate => None,
    })
}

/// Orbit class of `p` within `period_bound` steps; iterates in integer projective form.
pub fn classify(f: &SelfMap, p: &Point, period_bound: u32, escape: f64) -> Result<OrbitClass, DynamicsError> {
    let start = p.to_projective();
    let mut seen: HashSet<ProjPoint> = HashSet::new();
    let mut x = start.clone();
    for k in 1..=period_bound {
        let Some(next) = step(f, &x)? else {
            return Ok(OrbitClass::IndeterminateHit { step: k - 1 });
        };
        if next == start {
            return Ok(OrbitClass::Periodic { period: k });
        }
        if seen.contains(&next) {
            return Ok(OrbitClass::Preperiodic { step: k });
        }
        if next.height().log > escape {
            return Ok(OrbitClass::Escaping { step: k });
        }
        seen.insert(next.clone());
        x = next;
    }
    Ok(OrbitClass::Wandering)
}

fn returns_after(g: &SelfMap, p: &Point, n: u32) -> Result<bool, DynamicsError> {
    let start = p.to_projective();
    let mut x = start.clone();
    for _ in 0..n {
        match step(g, &x)? {
            Some(y) => x = y,
            None => return Ok(false),
        }
    }
    Ok(x == start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::tests::zoo;

    fn names(s: &Survey) -> Vec<String> {
        s.periodic.iter().map(|e| e.point.to_string()).collect()
    }

    #[test]
    fn henon_fixed_points() {
        let z = zoo("henon", &[("a", "1"), ("b", "-1")]);
        let s = periodic_point_survey("henon", &z.map, z.inverse.as_ref(), HeightBound::from_log(3f64.ln()), 2, &Default::default())
            .unwrap();
        let mut found = names(&s);
        found.sort();
        assert!(found.contains(&"(1, 1)".to_string()) && found.contains(&"(-1, -1)".to_string()));
        assert_eq!(s.max_periodic_height.unwrap().max_coordinate, 1.into());
        assert!(s.periodic.iter().all(|e| e.inverse_confirms == Some(true)));
    }

    #[test]
    fn swap_everything_periodic() {
        let z = zoo("swap", &[]);
        let s = periodic_point_survey("swap", &z.map, None, HeightBound::from_log(2f64.ln()), 2, &Default::default()).unwrap();
        assert_eq!(s.counts.periodic, s.counts.enumerated);
        assert!(s.periodic.iter().all(|e| e.period <= 2));
    }

    #[test]
    fn shift_has_none() {
        let z = zoo("shift", &[]);
        let s = periodic_point_survey("shift", &z.map, None, HeightBound::from_log(3.0), 5, &Default::default()).unwrap();
        assert!(s.periodic.is_empty() && s.max_periodic_height.is_none());
        assert!(s.counts.enumerated > 0);
    }

    #[test]
    fn cremona_projective_survey() {
        let z = zoo("cremona", &[]);
        let s = periodic_point_survey("cremona", &z.map, None, HeightBound::from_max_coordinate(2), 2, &Default::default()).unwrap();
        assert!(s.counts.indeterminate > 0);
        assert!(names(&s).contains(&"[1:1:1]".to_string()));
    }

    #[test]
    fn refuses_large_enumerations() {
        let z = zoo("henon", &[]);
        let opts = SurveyOptions { enumeration_cap: 1000, ..Default::default() };
        assert!(matches!(
            periodic_point_survey("henon", &z.map, None, HeightBound::from_log(5.0), 2, &opts),
            Err(DynamicsError::EnumerationTooLarge { .. })
        ));
    }
}
