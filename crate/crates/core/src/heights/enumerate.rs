//! Northcott enumeration: every rational point of bounded height, each exactly once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{AffinePoint, Point, ProjPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Affine,
    Projective,
}

/// Height bound `h <= B`, held as the exact largest admissible max-coordinate `M`
/// (the largest integer with `ln M <= B`). `None` means the bound is negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeightBound {
    max_coordinate: Option<u64>,
}

impl HeightBound {
    pub fn from_log(bound: f64) -> Self {
        if bound.is_nan() || bound < 0.0 {
            return HeightBound { max_coordinate: None };
        }
        let cap = i64::MAX as u64 / 4;
        let mut m = bound.exp().floor().min(cap as f64) as u64;
        while m < cap && ((m + 1) as f64).ln() <= bound {
            m += 1;
        }
        while m > 1 && (m as f64).ln() > bound {
            m -= 1;
        }
        HeightBound { max_coordinate: Some(m.max(1)) }
    }

    pub fn from_max_coordinate(m: u64) -> Self {
        HeightBound { max_coordinate: (m >= 1).then_some(m) }
    }

    pub fn max_coordinate(&self) -> Option<u64> {
        self.max_coordinate
    }

    /// `ln M`, the largest height actually admitted.
    pub fn log(&self) -> Option<f64> {
        self.max_coordinate.map(|m| (m as f64).ln())
    }
}

/// Rough number of candidate tuples the enumeration scans (an upper bound on the output).
pub fn count_estimate(dimension: usize, bound: HeightBound, space: Space) -> f64 {
    let Some(m) = bound.max_coordinate else { return 0.0 };
    let side = 2.0 * m as f64 + 1.0;
    match space {
        Space::Projective => side.powi(dimension as i32 + 1) / 2.0,
        Space::Affine => side.powi(dimension as i32) * m as f64,
    }
}

/// Points of height at most `bound` in `P^N(Q)` or `A^N(Q)` (affine points through their
/// projective closure `[a1 : ... : aN : c]` with `c > 0`).
///
/// Order: by exact max-coordinate, then lexicographically on the integer tuple.
pub fn enumerate_bounded_height(dimension: usize, bound: f64, space: Space) -> BoundedHeightIter {
    BoundedHeightIter::new(dimension, HeightBound::from_log(bound), space)
}

pub struct BoundedHeightIter {
    space: Space,
    len: usize,
    max_m: u64,
    m: i64,
    prefix: Vec<i64>,
    last_values: Vec<i64>,
    last_pos: usize,
    exhausted: bool,
}

impl BoundedHeightIter {
    pub fn new(dimension: usize, bound: HeightBound, space: Space) -> Self {
        assert!(dimension >= 1, "dimension must be positive");
        let len = dimension + 1;
        let mut it = BoundedHeightIter {
            space,
            len,
            max_m: bound.max_coordinate.unwrap_or(0),
            m: 1,
            prefix: Vec::new(),
            last_values: Vec::new(),
            last_pos: 0,
            exhausted: bound.max_coordinate.is_none(),
        };
        if !it.exhausted {
            it.start_shell();
        }
        it
    }

    fn start_shell(&mut self) {
        let m = self.m;
        self.prefix = vec![-m; self.len - 1];
        self.load_last_values();
    }

    fn load_last_values(&mut self) {
        let m = self.m;
        let prefix_on_shell = self.prefix.iter().any(|c| c.abs() == m);
        self.last_values = match (self.space, prefix_on_shell) {
            (Space::Projective, true) => (-m..=m).collect(),
            (Space::Projective, false) => vec![-m, m],
            (Space::Affine, true) => (1..=m).collect(),
            (Space::Affine, false) => vec![m],
        };
        self.last_pos = 0;
    }

    /// Advances the prefix odometer; returns false when the shell is finished.
    fn next_prefix(&mut self) -> bool {
        let m = self.m;
        for i in (0..self.prefix.len()).rev() {
            if self.prefix[i] < m {
                self.prefix[i] += 1;
                for c in &mut self.prefix[i + 1..] {
                    *c = -m;
                }
                self.load_last_values();
                return true;
            }
        }
        false
    }

    fn accept(&self, last: i64) -> bool {
        let mut g = last.abs();
        for &c in &self.prefix {
            g = g.gcd(&c);
        }
        if g != 1 {
            return false;
        }
        match self.space {
            Space::Affine => true,
            Space::Projective => {
                let first = self.prefix.iter().copied().chain(std::iter::once(last)).find(|&c| c != 0);
                first.is_some_and(|c| c > 0)
            }
        }
    }

    fn emit(&self, last: i64) -> Point {
        match self.space {
            Space::Projective => {
                let mut coords: Vec<BigInt> = self.prefix.iter().map(|&c| BigInt::from(c)).collect();
                coords.push(BigInt::from(last));
                Point::Projective(ProjPoint::new(coords).expect("nonzero tuple"))
            }
            Space::Affine => Point::Affine(AffinePoint::new(
                self.prefix
                    .iter()
                    .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(last)))
                    .collect(),
            )),
        }
    }
}

impl Iterator for BoundedHeightIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        while !self.exhausted {
            while self.last_pos < self.last_values.len() {
                let last = self.last_values[self.last_pos];
                self.last_pos += 1;
                if self.accept(last) {
                    return Some(self.emit(last));
                }
            }
            if !self.next_prefix() {
                if self.m as u64 >= self.max_m {
                    self.exhausted = true;
                } else {
                    self.m += 1;
                    self.start_shell();
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn strings(it: BoundedHeightIter) -> Vec<String> {
        it.map(|p| p.to_string()).collect()
    }

    #[test]
    fn affine_line_log_two() {
        let pts = strings(enumerate_bounded_height(1, 2f64.ln(), Space::Affine));
        let set: BTreeSet<String> = pts.iter().cloned().collect();
        assert_eq!(pts.len(), 7);
        let expect: BTreeSet<String> =
            ["(0)", "(1)", "(-1)", "(2)", "(-2)", "(1/2)", "(-1/2)"].iter().map(|s| s.to_string()).collect();
        assert_eq!(set, expect);
    }

    #[test]
    fn projective_line_height_zero() {
        let pts = strings(enumerate_bounded_height(1, 0.0, Space::Projective));
        assert_eq!(pts, vec!["[0:1]", "[1:-1]", "[1:0]", "[1:1]"]);
    }

    #[test]
    fn negative_bound_is_empty() {
        assert_eq!(enumerate_bounded_height(2, -0.5, Space::Projective).count(), 0);
        assert_eq!(enumerate_bounded_height(1, -1e-9, Space::Affine).count(), 0);
    }

    #[test]
    fn bound_from_log_is_exact_at_integers() {
        for m in 1..2000u64 {
            assert_eq!(HeightBound::from_log((m as f64).ln()).max_coordinate(), Some(m));
        }
        assert_eq!(HeightBound::from_log(0.5).max_coordinate(), Some(1));
    }

    #[test]
    fn ordered_by_max_coordinate() {
        let heights: Vec<BigInt> = enumerate_bounded_height(2, 3f64.ln(), Space::Projective)
            .map(|p| p.height().max_coordinate)
            .collect();
        assert!(heights.windows(2).all(|w| w[0] <= w[1]));
    }
}
