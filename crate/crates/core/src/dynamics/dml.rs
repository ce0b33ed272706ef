use serde::Serialize;

use super::orbit::forward_orbit;
use super::{vanishes_at, DynamicsError};
use crate::heights::Point;
use crate::maps::SelfMap;
use crate::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: u64,
    pub difference: u64,
}

/// Progressions `{start + k·difference : k ≥ 0}` plus a finite residual set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub progressions: Vec<Progression>,
    pub residual: Vec<u64>,
}

impl Decomposition {
    /// Members in `[1, n_max]`, sorted.
    pub fn replay(&self, n_max: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.residual.iter().copied().filter(|&n| n <= n_max).collect();
        for p in &self.progressions {
            out.extend((p.start..=n_max).step_by(p.difference as usize));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Return times `{n ∈ [1, n_max] : f^n(P) ∈ Y}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReturnSet {
    pub map_id: String,
    pub start: Point,
    pub n_max: u64,
    /// Last index actually tested (smaller than `n_max` when the orbit stopped early).
    pub scanned_to: u64,
    pub indices: Vec<u64>,
    /// `None` means no decomposition within the scan.
    pub decomposition: Option<Decomposition>,
    pub partial: bool,
}

pub fn return_set(
    map_id: &str,
    f: &SelfMap,
    p: &Point,
    y: &[Poly],
    n_max: u64,
    digit_cap: u64,
) -> Result<ReturnSet, DynamicsError> {
    let rec = forward_orbit(map_id, f, p, n_max as usize, digit_cap)?;
    let scanned_to = rec.points.len() as u64 - 1;
    let mut indicator = Vec::with_capacity(scanned_to as usize);
    for q in &rec.points[1..] {
        let mut member = true;
        for g in y {
            if !vanishes_at(g, q)? {
                member = false;
                break;
            }
        }
        indicator.push(member);
    }
    let indices = (1..=scanned_to).filter(|&n| indicator[n as usize - 1]).collect();
    Ok(ReturnSet {
        map_id: map_id.to_string(),
        start: p.clone(),
        n_max,
        scanned_to,
        indices,
        decomposition: decompose(&indicator),
        partial: scanned_to < n_max,
    })
}

/// `s[i]` is membership of index `i + 1`. Finds the smallest period `q`, then the smallest
/// start `m`, such that the suffix from `m` is `q`-periodic and covers at least two full
/// periods; the periodic part gives the progressions and the prefix the residual.
pub fn decompose(s: &[bool]) -> Option<Decomposition> {
    let len = s.len();
    for q in 1..=len / 2 {
        // smallest m (0-based) with s[i] == s[i + q] for all i >= m
        let mut m = len - q;
        while m > 0 && s[m - 1] == s[m - 1 + q] {
            m -= 1;
        }
        if len - m < 2 * q {
            continue;
        }
        let progressions = (m..m + q)
            .filter(|&i| s[i])
            .map(|i| Progression { start: i as u64 + 1, difference: q as u64 })
            .collect();
        let residual = (0..m).filter(|&i| s[i]).map(|i| i as u64 + 1).collect();
        return Some(Decomposition { progressions, residual });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::dynamics::tests::zoo;

    #[test]
    fn shift_hits_zero_once() {
        let z = zoo("shift", &[]);
        let y = [parse_poly("x", z.map.vars()).unwrap()];
        let r = return_set("shift", &z.map, &Point::parse("(-3)").unwrap(), &y, 10, 1000).unwrap();
        assert_eq!(r.indices, vec![3]);
        assert_eq!(r.decomposition, Some(Decomposition { progressions: vec![], residual: vec![3] }));
    }

    #[test]
    fn identity_always_returns() {
        let z = zoo("identity", &[]);
        let y = [parse_poly("x - y", z.map.vars()).unwrap()];
        let r = return_set("identity", &z.map, &Point::parse("(2, 2)").unwrap(), &y, 8, 1000).unwrap();
        assert_eq!(r.indices, (1..=8).collect::<Vec<_>>());
        let d = r.decomposition.unwrap();
        assert_eq!(d.progressions, vec![Progression { start: 1, difference: 1 }]);
        assert!(d.residual.is_empty());
    }

    #[test]
    fn henon_fixed_point_on_line() {
        let z = zoo("henon", &[("a", "1"), ("b", "-1")]);
        let y = [parse_poly("x - 1", z.map.vars()).unwrap()];
        let r = return_set("henon", &z.map, &Point::parse("(1, 1)").unwrap(), &y, 10, 1000).unwrap();
        assert_eq!(r.indices.len(), 10);
    }

    #[test]
    fn swap_returns_every_other_step() {
        let z = zoo("swap", &[]);
        let y = [parse_poly("x - 2", z.map.vars()).unwrap()];
        let r = return_set("swap", &z.map, &Point::parse("(1, 2)").unwrap(), &y, 11, 1000).unwrap();
        assert_eq!(r.indices, vec![1, 3, 5, 7, 9, 11]);
        let d = r.decomposition.unwrap();
        assert_eq!(d.progressions, vec![Progression { start: 1, difference: 2 }]);
        assert_eq!(d.replay(11), r.indices);
    }

    #[test]
    fn decomposition_needs_two_periods() {
        // 1 0 0 1 0 0 0: no period fits twice with a consistent tail except the all-zero tail
        let s = [true, false, false, true, false, false, false];
        let d = decompose(&s).unwrap();
        assert_eq!(d.residual, vec![1, 4]);
        assert!(decompose(&[true, false, true]).is_none());
    }
}
