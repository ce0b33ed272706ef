use std::collections::HashMap;

use serde::Serialize;

use super::DynamicsError;
use crate::heights::{Height, Point};
use crate::maps::{inverse_check, Evaluation, SelfMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
    Full,
}

/// Points `f^i(P)` with their heights. `indices[k]` is the exponent `i` of `points[k]`
/// (negative for backward iterates); indices are increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub map_id: String,
    pub start: Point,
    pub direction: Direction,
    pub indices: Vec<i64>,
    pub points: Vec<Point>,
    pub heights: Vec<Height>,
    /// Index of the first point found in the indeterminacy locus of the forward map.
    pub indeterminacy_index: Option<i64>,
    /// Same for the inverse, in full orbits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward_indeterminacy_index: Option<i64>,
    /// Set when a coordinate exceeded the digit cap before `n_max` was reached.
    pub truncated: bool,
}

impl OrbitRecord {
    /// The point `f^i(P)`, if recorded.
    pub fn at(&self, i: i64) -> Option<&Point> {
        let k = self.indices.binary_search(&i).ok()?;
        Some(&self.points[k])
    }

    /// Heights (natural logs) of the points with nonnegative index, in order.
    pub fn forward_heights(&self) -> Vec<f64> {
        self.indices
            .iter()
            .zip(&self.heights)
            .filter(|(i, _)| **i >= 0)
            .map(|(_, h)| h.log)
            .collect()
    }

    /// Heights of `f^{-n}(P)` for `n = 0, 1, ...`.
    pub fn backward_heights(&self) -> Vec<f64> {
        self.indices
            .iter()
            .zip(&self.heights)
            .filter(|(i, _)| **i <= 0)
            .map(|(_, h)| h.log)
            .rev()
            .collect()
    }

    /// Record of `f^k(P)`: drops the first `k` forward points and re-indexes.
    pub fn shifted(&self, k: usize) -> OrbitRecord {
        let start = self.indices.iter().position(|&i| i == k as i64).expect("shift within range");
        OrbitRecord {
            map_id: self.map_id.clone(),
            start: self.points[start].clone(),
            direction: Direction::Forward,
            indices: self.indices[start..].iter().map(|i| i - k as i64).collect(),
            points: self.points[start..].to_vec(),
            heights: self.heights[start..].to_vec(),
            indeterminacy_index: self.indeterminacy_index.map(|i| i - k as i64),
            backward_indeterminacy_index: None,
            truncated: self.truncated,
        }
    }
}

/// Iterates `f` on points (never composing maps), stopping early at the indeterminacy locus
/// or when a coordinate exceeds `digit_cap` decimal digits.
pub fn forward_orbit(
    map_id: &str,
    f: &SelfMap,
    p: &Point,
    n_max: usize,
    digit_cap: u64,
) -> Result<OrbitRecord, DynamicsError> {
    let (points, stop) = iterate_points(f, p, n_max, digit_cap)?;
    let heights = points.iter().map(Point::height).collect();
    let indices = (0..points.len() as i64).collect();
    Ok(OrbitRecord {
        map_id: map_id.to_string(),
        start: p.clone(),
        direction: Direction::Forward,
        indices,
        points,
        heights,
        indeterminacy_index: match stop {
            Stop::Indeterminate(i) => Some(i as i64),
            _ => None,
        },
        backward_indeterminacy_index: None,
        truncated: stop == Stop::DigitCap,
    })
}

/// Forward and backward orbit, indexed `-n_max..=n_max`.
pub fn full_orbit(
    map_id: &str,
    f: &SelfMap,
    f_inv: &SelfMap,
    p: &Point,
    n_max: usize,
    digit_cap: u64,
) -> Result<OrbitRecord, DynamicsError> {
    if !inverse_check(f, f_inv) {
        return Err(DynamicsError::NotInverse);
    }
    let (fwd, fstop) = iterate_points(f, p, n_max, digit_cap)?;
    let (bwd, bstop) = iterate_points(f_inv, p, n_max, digit_cap)?;
    let mut indices: Vec<i64> = (1..bwd.len() as i64).rev().map(|i| -i).collect();
    let mut points: Vec<Point> = bwd[1..].iter().rev().cloned().collect();
    indices.extend(0..fwd.len() as i64);
    points.extend(fwd);
    let heights = points.iter().map(Point::height).collect();
    Ok(OrbitRecord {
        map_id: map_id.to_string(),
        start: p.clone(),
        direction: Direction::Full,
        indices,
        points,
        heights,
        indeterminacy_index: match fstop {
            Stop::Indeterminate(i) => Some(i as i64),
            _ => None,
        },
        backward_indeterminacy_index: match bstop {
            Stop::Indeterminate(i) => Some(-(i as i64)),
            _ => None,
        },
        truncated: fstop == Stop::DigitCap || bstop == Stop::DigitCap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Done,
    Indeterminate(usize),
    DigitCap,
}

fn iterate_points(f: &SelfMap, p: &Point, n_max: usize, digit_cap: u64) -> Result<(Vec<Point>, Stop), DynamicsError> {
    let mut points = vec![p.clone()];
    for i in 0..n_max {
        match f.evaluate(&points[i])? {
            Evaluation::Indeterminate => return Ok((points, Stop::Indeterminate(i))),
            Evaluation::Point(q) => {
                if q.height().decimal_digits() > digit_cap {
                    return Ok((points, Stop::DigitCap));
                }
                points.push(q);
            }
        }
    }
    Ok((points, Stop::Done))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Periodicity {
    /// `f^(preperiod + period)(P) = f^preperiod(P)` with both minimal.
    Periodic { period: u64, preperiod: u64 },
    AperiodicWithinScan,
}

/// First repeat among the forward points of the record, by exact comparison.
pub fn detect_periodicity(rec: &OrbitRecord) -> Periodicity {
    let mut seen: HashMap<&Point, i64> = HashMap::new();
    for (i, p) in rec.indices.iter().zip(&rec.points) {
        if *i < 0 {
            continue;
        }
        if let Some(&j) = seen.get(p) {
            return Periodicity::Periodic { period: (i - j) as u64, preperiod: j as u64 };
        }
        seen.insert(p, *i);
    }
    Periodicity::AperiodicWithinScan
}
