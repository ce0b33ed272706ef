use serde::Serialize;

use super::orbit::{detect_periodicity, forward_orbit, OrbitRecord, Periodicity};
use super::DynamicsError;
use crate::degrees::LemmaConstants;
use crate::heights::Point;
use crate::maps::SelfMap;

/// Finite-scan view of the arithmetic degree: `roots[n-1] = h+(f^n P)^(1/n)` for `n ≥ 1`,
/// `ratios[n] = h(f^(n+1) P) / h(f^n P)` (absent when `h(f^n P) = 0`), and min/max of both over
/// the last `tail_window` indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArithDegreeEstimate {
    pub map_id: String,
    pub start: Point,
    pub roots: Vec<f64>,
    pub ratios: Vec<Option<f64>>,
    pub tail_window: usize,
    pub lower_report: f64,
    pub upper_report: f64,
    pub ratio_lower: Option<f64>,
    pub ratio_upper: Option<f64>,
    pub periodicity: Periodicity,
    /// `1` for (pre)periodic orbits, whose heights are bounded.
    pub alpha_exact: Option<f64>,
}

pub fn roots_from_heights(heights: &[f64]) -> Vec<f64> {
    heights.iter().enumerate().skip(1).map(|(n, h)| h.max(1.0).powf(1.0 / n as f64)).collect()
}

pub fn ratios_from_heights(heights: &[f64]) -> Vec<Option<f64>> {
    heights.windows(2).map(|w| if w[0] == 0.0 { None } else { Some(w[1] / w[0]) }).collect()
}

fn min_max(xs: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    xs.fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    })
}

pub fn estimate_arith_degree(rec: &OrbitRecord, tail_window: usize) -> Result<ArithDegreeEstimate, DynamicsError> {
    if let Some(index) = rec.indeterminacy_index {
        return Err(DynamicsError::Indeterminate { index });
    }
    if tail_window == 0 {
        return Err(DynamicsError::InvalidArgument("tail window must be positive".into()));
    }
    let heights = rec.forward_heights();
    if heights.len() < tail_window + 2 {
        return Err(DynamicsError::OrbitTooShort { needed: tail_window + 2, found: heights.len() });
    }
    let roots = roots_from_heights(&heights);
    let ratios = ratios_from_heights(&heights);
    let (lower_report, upper_report) = min_max(roots[roots.len() - tail_window..].iter().copied()).unwrap();
    let ratio_tail = min_max(ratios[ratios.len() - tail_window..].iter().flatten().copied());
    let periodicity = detect_periodicity(rec);
    Ok(ArithDegreeEstimate {
        map_id: rec.map_id.clone(),
        start: rec.start.clone(),
        roots,
        ratios,
        tail_window,
        lower_report,
        upper_report,
        ratio_lower: ratio_tail.map(|t| t.0),
        ratio_upper: ratio_tail.map(|t| t.1),
        alpha_exact: matches!(periodicity, Periodicity::Periodic { .. }).then_some(1.0),
        periodicity,
    })
}

/// Compares the orbit of `P` under `g = f^n` (obtained by iterating `f` on points, `n` steps
/// per `g`-step) with the `n`-th power of the estimate under `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerConsistencyReport {
    pub map_id: String,
    pub n: u32,
    pub scan: usize,
    pub g_points: usize,
    pub f_root_lower: f64,
    pub g_root_lower: f64,
    pub root_discrepancy: f64,
    pub f_ratio_lower: Option<f64>,
    pub g_ratio_lower: Option<f64>,
    pub ratio_discrepancy: Option<f64>,
    pub periodic: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn power_consistency_check(
    map_id: &str,
    f: &SelfMap,
    p: &Point,
    n: u32,
    scan: usize,
    tail_window: usize,
    digit_cap: u64,
) -> Result<PowerConsistencyReport, DynamicsError> {
    if n < 2 {
        return Err(DynamicsError::InvalidArgument("the power must be at least 2".into()));
    }
    let rec = forward_orbit(map_id, f, p, scan, digit_cap)?;
    let f_est = estimate_arith_degree(&rec, tail_window)?;
    let step = n as usize;
    let g_rec = OrbitRecord {
        map_id: format!("{map_id}^{n}"),
        indices: (0..).take(rec.points.len().div_ceil(step)).collect(),
        points: rec.points.iter().step_by(step).cloned().collect(),
        heights: rec.heights.iter().step_by(step).cloned().collect(),
        ..rec.clone()
    };
    let g_window = tail_window.div_ceil(step).min(g_rec.points.len().saturating_sub(2)).max(1);
    let g_est = estimate_arith_degree(&g_rec, g_window)?;
    let periodic = f_est.alpha_exact.is_some();
    let (f_root, g_root) = if periodic { (1.0, 1.0) } else { (f_est.lower_report, g_est.lower_report) };
    let (f_ratio, g_ratio) = if periodic { (Some(1.0), Some(1.0)) } else { (f_est.ratio_lower, g_est.ratio_lower) };
    let pow = |x: f64| x.powi(n as i32);
    Ok(PowerConsistencyReport {
        map_id: map_id.to_string(),
        n,
        scan,
        g_points: g_rec.points.len(),
        f_root_lower: f_root,
        g_root_lower: g_root,
        root_discrepancy: rel(g_root, pow(f_root)),
        f_ratio_lower: f_ratio,
        g_ratio_lower: g_ratio,
        ratio_discrepancy: f_ratio.zip(g_ratio).map(|(a, b)| rel(b, pow(a))),
        periodic,
    })
}

/// The sequence `ℓ_n = h_{n+1}/d1 − h_n/(α d2) − C/(α − 1)` with the step flags
/// `ℓ_{n+1} ≥ α ℓ_n`. In the two-sided flavor the forward values are `ℓ⁺` and the backward ones
/// `ℓ⁻_n = h_{-(n+1)}/d2 − h_{-n}/(β d1) − C/(β − 1)` with flags `ℓ⁻_{n+1} ≥ β ℓ⁻_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllSequence {
    pub constants: LemmaConstants<f64>,
    pub two_sided: bool,
    pub values: Vec<f64>,
    pub flags: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward_flags: Option<Vec<bool>>,
    /// Finite-scan proxy for `ℓ_∞`: min of `h_n / α^n` over the last third of the indices.
    pub ell_inf_proxy: Option<f64>,
    pub all_flags_hold: bool,
}

fn ell_values(h: &[f64], a: f64, b: f64, growth: f64, c: f64) -> (Vec<f64>, Vec<bool>) {
    let shift = c / (growth - 1.0);
    let values: Vec<f64> = h.windows(2).map(|w| w[1] / a - w[0] / (growth * b) - shift).collect();
    let flags = values.windows(2).map(|w| w[1] >= growth * w[0]).collect();
    (values, flags)
}

fn ell_inf_proxy(h: &[f64], alpha: f64) -> Option<f64> {
    if h.is_empty() {
        return None;
    }
    let tail = h.len().div_ceil(3);
    (h.len() - tail..h.len()).map(|n| h[n] / alpha.powi(n as i32)).reduce(f64::min)
}

pub fn ell_sequence(heights: &[f64], consts: &LemmaConstants<f64>) -> EllSequence {
    let k = consts;
    let (values, flags) = ell_values(heights, k.d1, k.d2, k.alpha, k.c);
    EllSequence {
        constants: *k,
        two_sided: false,
        all_flags_hold: flags.iter().all(|&b| b),
        values,
        flags,
        backward_values: None,
        backward_flags: None,
        ell_inf_proxy: ell_inf_proxy(heights, k.alpha),
    }
}

/// `forward[n] = h(f^n Q)`, `backward[n] = h(f^{-n} Q)`; both start at `Q` itself.
pub fn ell_sequence_two_sided(forward: &[f64], backward: &[f64], consts: &LemmaConstants<f64>) -> EllSequence {
    let k = consts;
    let (values, flags) = ell_values(forward, k.d1, k.d2, k.alpha, k.c);
    let (bvalues, bflags) = ell_values(backward, k.d2, k.d1, k.beta, k.c);
    EllSequence {
        constants: *k,
        two_sided: true,
        all_flags_hold: flags.iter().chain(&bflags).all(|&b| b),
        values,
        flags,
        backward_values: Some(bvalues),
        backward_flags: Some(bflags),
        ell_inf_proxy: ell_inf_proxy(forward, k.alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::full_orbit;
    use crate::dynamics::tests::zoo;
    use crate::heights::AffinePoint;

    fn aff(c: &[i64]) -> Point {
        Point::Affine(AffinePoint::from_i64(c))
    }

    #[test]
    fn henon_ratios_approach_two() {
        let z = zoo("henon", &[]);
        let rec = forward_orbit("henon", &z.map, &aff(&[1, 2]), 14, 1_000_000).unwrap();
        let est = estimate_arith_degree(&rec, 5).unwrap();
        assert!(est.ratio_lower.unwrap() >= 1.9 && est.ratio_upper.unwrap() <= 2.1, "{est:?}");
        assert_eq!(est.roots.len(), 14);
        assert!(est.alpha_exact.is_none());
    }

    #[test]
    fn shift_roots_tend_to_one() {
        let z = zoo("shift", &[]);
        let rec = forward_orbit("shift", &z.map, &aff(&[0]), 60, 1000).unwrap();
        let est = estimate_arith_degree(&rec, 20).unwrap();
        assert!(est.upper_report < 1.05 && est.lower_report >= 1.0);
        assert_eq!(est.ratios[0], None);
    }

    #[test]
    fn fixed_point_alpha_one() {
        let z = zoo("henon", &[("a", "1"), ("b", "-1")]);
        let rec = forward_orbit("henon", &z.map, &aff(&[1, 1]), 6, 1000).unwrap();
        let est = estimate_arith_degree(&rec, 2).unwrap();
        assert_eq!(est.alpha_exact, Some(1.0));
        assert_eq!(est.periodicity, Periodicity::Periodic { period: 1, preperiod: 0 });
    }

    #[test]
    fn short_orbit_rejected() {
        let z = zoo("henon", &[]);
        let rec = forward_orbit("henon", &z.map, &aff(&[1, 2]), 3, 1000).unwrap();
        assert!(matches!(estimate_arith_degree(&rec, 3), Err(DynamicsError::OrbitTooShort { needed: 5, found: 4 })));
    }

    #[test]
    fn power_consistency() {
        let z = zoo("henon", &[]);
        let r = power_consistency_check("henon", &z.map, &aff(&[1, 2]), 2, 12, 4, 1_000_000).unwrap();
        assert!(r.ratio_discrepancy.unwrap() <= 0.10, "{r:?}");
        assert_eq!(r.g_points, 7);
        let z = zoo("swap", &[]);
        let r = power_consistency_check("swap", &z.map, &aff(&[1, 2]), 2, 8, 2, 1000).unwrap();
        assert_eq!((r.root_discrepancy, r.ratio_discrepancy), (0.0, Some(0.0)));
        let z = zoo("shift", &[]);
        let r = power_consistency_check("shift", &z.map, &aff(&[0]), 3, 300, 100, 1000).unwrap();
        assert!(r.ratio_discrepancy.unwrap() < 0.05 && (r.g_root_lower - 1.0).abs() < 0.05, "{r:?}");
    }

    #[test]
    fn ell_constant_heights() {
        let k = LemmaConstants::new(3.0f64, 1.0, 1.0, 2.0).unwrap();
        let s = ell_sequence(&[0.0; 6], &k);
        let expected = -2.0 / (k.alpha - 1.0);
        assert!(s.values.iter().all(|&v| v == expected) && expected < 0.0);
        assert!(s.all_flags_hold);
    }

    #[test]
    fn ell_geometric_heights() {
        let k = LemmaConstants::new(3.0f64, 1.0, 1.0, 100.0).unwrap();
        let h: Vec<f64> = (0..12).map(|n| k.alpha.powi(n)).collect();
        let s = ell_sequence(&h, &k);
        assert!(s.all_flags_hold && s.flags.len() == 10);
        assert!((s.ell_inf_proxy.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ell_two_sided_on_henon() {
        let z = zoo("henon", &[("a", "1"), ("b", "1")]);
        let rec = full_orbit("henon", &z.map, z.inverse.as_ref().unwrap(), &aff(&[1, 2]), 6, 10_000).unwrap();
        let k = LemmaConstants::new(2.5f64, 2.0, 2.0, 5.0).unwrap();
        let s = ell_sequence_two_sided(&rec.forward_heights(), &rec.backward_heights(), &k);
        assert_eq!(s.values.len(), 6);
        assert_eq!(s.backward_values.as_ref().unwrap().len(), 6);
    }
}
