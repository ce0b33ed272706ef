use serde::Serialize;

use super::DegreeError;
use crate::maps::ProjRationalMap;

/// `deg(f^n)` for `n = 1..`, possibly cut short by the term cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub map_id: String,
    pub entries: Vec<(u32, u64)>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_reason: Option<String>,
}

impl DegreeSequence {
    pub fn degrees(&self) -> Vec<u64> {
        self.entries.iter().map(|&(_, d)| d).collect()
    }

    pub fn degree_at(&self, n: u32) -> Option<u64> {
        self.entries.iter().find(|&&(m, _)| m == n).map(|&(_, d)| d)
    }

    /// Checks `deg(f^(m+n)) <= deg(f^m) * deg(f^n)` over all stored pairs.
    pub fn is_submultiplicative(&self) -> bool {
        self.entries.iter().all(|&(m, dm)| {
            self.entries.iter().all(|&(n, dn)| match self.degree_at(m + n) {
                Some(d) => d <= dm * dn,
                None => true,
            })
        })
    }
}

/// Degrees of the saturated iterates `f, f^2, ..., f^n_max`. Stops (with the truncation flag
/// set) when an iterate would hold more than `term_cap` terms in total.
pub fn degree_sequence(map_id: &str, f: &ProjRationalMap, n_max: u32, term_cap: usize) -> DegreeSequence {
    assert!(n_max >= 1, "n_max must be positive");
    let mut seq = DegreeSequence {
        map_id: map_id.to_string(),
        entries: vec![(1, f.degree() as u64)],
        truncated: false,
        truncation_reason: None,
    };
    let mut current = f.clone();
    for n in 2..=n_max {
        if let Some(reason) = over_cap(f, &current, term_cap) {
            seq.truncated = true;
            seq.truncation_reason = Some(reason);
            break;
        }
        current = f.compose(&current).expect("iterates share the dimension of f");
        if current.term_count() > term_cap {
            seq.truncated = true;
            seq.truncation_reason =
                Some(format!("f^{n} has {} terms, above the cap of {term_cap}", current.term_count()));
            break;
        }
        seq.entries.push((n, current.degree() as u64));
    }
    seq
}

/// Refuses a composition whose estimated size (the smaller of the dense monomial count and
/// `terms * d^N`) is above the cap.
fn over_cap(f: &ProjRationalMap, current: &ProjRationalMap, term_cap: usize) -> Option<String> {
    let k = f.dimension() as u64;
    let d = f.degree() as u64 * current.degree() as u64;
    let dense = (1..=k).fold(1f64, |acc, i| acc * (d + i) as f64 / i as f64) * (k + 1) as f64;
    let sparse = current.term_count() as f64 * (f.degree() as f64).powi(k as i32);
    let estimate = dense.min(sparse);
    (estimate > term_cap as f64)
        .then(|| format!("next iterate estimated at {estimate:.0} terms, above the cap of {term_cap}"))
}

/// Growth data for `δ1`: n-th roots and successive ratios of the degree sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynDegreeEstimate {
    pub map_id: String,
    pub roots: Vec<f64>,
    pub ratios: Vec<f64>,
    pub stable: bool,
    pub delta1_exact: Option<u64>,
    pub truncated: bool,
}

impl DynDegreeEstimate {
    /// Exact value when stable, otherwise the last computed root.
    pub fn best_value(&self) -> f64 {
        self.delta1_exact.map(|d| d as f64).unwrap_or_else(|| *self.roots.last().unwrap())
    }
}

pub fn estimate_delta1(seq: &DegreeSequence) -> Result<DynDegreeEstimate, DegreeError> {
    if seq.entries.len() < 2 {
        return Err(DegreeError::TooFewEntries { needed: 2, found: seq.entries.len() });
    }
    let roots = seq.entries.iter().map(|&(n, d)| (d as f64).powf(1.0 / n as f64)).collect();
    let ratios = seq.entries.windows(2).map(|w| w[1].1 as f64 / w[0].1 as f64).collect();
    let d1 = seq.entries[0].1;
    let stable = seq
        .entries
        .iter()
        .all(|&(n, d)| d1.checked_pow(n).is_some_and(|p| p == d));
    Ok(DynDegreeEstimate {
        map_id: seq.map_id.clone(),
        roots,
        ratios,
        stable,
        delta1_exact: stable.then_some(d1),
        truncated: seq.truncated,
    })
}
