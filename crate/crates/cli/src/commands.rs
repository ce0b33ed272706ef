//! One function per subcommand; each returns a [`Report`].

use serde_json::{json, Value};

use arithdyn::algebra::parse_poly;
use arithdyn::degrees::{
    degree_sequence, estimate_delta1, hyperbolicity_report, topological_degree, LemmaConstants, TopDegreeMethod,
    TopDegreeOptions,
};
use arithdyn::dynamics::{
    detect_periodicity, ell_sequence, ell_sequence_two_sided, estimate_arith_degree, forward_orbit, full_orbit,
    invariant_curve_search, periodic_point_survey, power_consistency_check, return_set, CurveSearchOptions,
    DynamicsError, OrbitRecord, SurveyOptions,
};
use arithdyn::heights::{HeightBound, Point};
use arithdyn::maps::{zoo_list, SelfMap};
use arithdyn::Poly;

use crate::config::RunConfig;
use crate::document::LoadedMap;
use crate::error::CliError;
use crate::report::{to_value, Report};

fn top_options(cfg: &RunConfig, method: Option<TopDegreeMethod>) -> TopDegreeOptions {
    TopDegreeOptions {
        prime_count: cfg.prime_count,
        samples_per_prime: cfg.samples_per_prime,
        seed: cfg.seed,
        method,
        ..Default::default()
    }
}

fn inverse_of(m: &LoadedMap) -> Result<&SelfMap, CliError> {
    m.inverse.as_ref().ok_or_else(|| CliError::invalid(format!("{} has no inverse", m.id)))
}

pub fn parse_point(text: &str, m: &LoadedMap) -> Result<Point, CliError> {
    let p = Point::parse(text)?;
    if p.dimension() != m.map.dimension() {
        return Err(CliError::invalid(format!(
            "point {p} has dimension {}, the map {} has dimension {}",
            p.dimension(),
            m.id,
            m.map.dimension()
        )));
    }
    Ok(p)
}

fn orbit(m: &LoadedMap, p: &Point, cfg: &RunConfig, full: bool) -> Result<OrbitRecord, CliError> {
    let n = cfg.n_max as usize;
    let rec = if full {
        full_orbit(&m.id, &m.map, inverse_of(m)?, p, n, cfg.coordinate_digit_cap)?
    } else {
        forward_orbit(&m.id, &m.map, p, n, cfg.coordinate_digit_cap)?
    };
    Ok(rec)
}

/// Errors from an orbit cut short by the digit cap name that cap.
fn blame_cap(rec: &OrbitRecord, e: DynamicsError) -> CliError {
    match e {
        DynamicsError::OrbitTooShort { needed, found } if rec.truncated => CliError::cap(
            "coordinate_digit_cap",
            format!("the orbit stopped after {found} points at the coordinate digit cap; {needed} are needed"),
        ),
        other => other.into(),
    }
}

fn with_truncation(r: Report, truncated: bool, cap: &str) -> Report {
    if truncated {
        r.field("truncated_by", cap)
    } else {
        r
    }
}

pub fn zoo() -> Report {
    let mut r = Report::new("zoo", "built-in map families").columns(&["name", "parameters", "inverse", "description"]);
    for f in zoo_list() {
        let params: Vec<String> = f.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        r.row(vec![json!(f.name), json!(params.join(" ")), json!(f.inverse), json!(f.summary)]);
    }
    let families: Vec<Value> = zoo_list()
        .iter()
        .map(|f| {
            let params: Vec<Value> = f
                .params
                .iter()
                .map(|p| json!({ "name": p.name, "default": p.default, "description": p.description }))
                .collect();
            json!({ "name": f.name, "summary": f.summary, "inverse": f.inverse, "params": params })
        })
        .collect();
    r.detail(families)
}

pub fn degseq(m: &LoadedMap, cfg: &RunConfig, inverse: bool) -> Result<Report, CliError> {
    let (id, f) = if inverse { (format!("{}^-1", m.id), inverse_of(m)?) } else { (m.id.clone(), &m.map) };
    let seq = degree_sequence(&id, &f.to_projective()?, cfg.n_max, cfg.term_count_cap);
    let mut r = Report::new("degseq", format!("degree sequence of {id}"))
        .field("map", &id)
        .field("truncated", seq.truncated)
        .columns(&["n", "degree"]);
    r = with_truncation(r, seq.truncated, "term_count_cap");
    if let Some(reason) = &seq.truncation_reason {
        r = r.field("truncation_reason", reason);
    }
    for &(n, d) in &seq.entries {
        r.row(vec![json!(n), json!(d)]);
    }
    Ok(r.detail(&seq))
}

pub fn dyndeg(m: &LoadedMap, cfg: &RunConfig) -> Result<Report, CliError> {
    let n_max = cfg.n_max.max(2);
    let seq = degree_sequence(&m.id, &m.map.to_projective()?, n_max, cfg.term_count_cap);
    let est = estimate_delta1(&seq)?;
    let mut r = Report::new("dyndeg", format!("dynamical degrees of {}", m.id))
        .field("map", &m.id)
        .field("stable", est.stable)
        .field("delta1_exact", est.delta1_exact)
        .field("delta1", est.best_value())
        .columns(&["n", "degree", "root", "ratio"]);
    r = with_truncation(r, seq.truncated, "term_count_cap");
    let dim = m.map.dimension();
    let hyper = if dim == 2 || (dim == 3 && m.inverse.is_some()) {
        let h = hyperbolicity_report(&m.id, &m.map, m.inverse.as_ref(), n_max, cfg.term_count_cap, &top_options(cfg, None))?;
        r = r
            .field("delta2", h.delta2_value)
            .field("delta2_source", &h.delta2_source)
            .field("delta1_dominates", h.delta1_dominates)
            .field("cohomologically_hyperbolic", h.cohomologically_hyperbolic)
            .field("confidence", h.confidence);
        Some(h)
    } else {
        None
    };
    for (k, &(n, d)) in seq.entries.iter().enumerate() {
        let ratio = k.checked_sub(1).map(|j| est.ratios[j]);
        r.row(vec![json!(n), json!(d), json!(est.roots[k]), json!(ratio)]);
    }
    Ok(r.detail(json!({ "sequence": seq, "estimate": est, "hyperbolicity": hyper })))
}

pub fn topdeg(m: &LoadedMap, cfg: &RunConfig, method: Option<TopDegreeMethod>) -> Result<Report, CliError> {
    let est = topological_degree(&m.map, m.inverse.as_ref(), &top_options(cfg, method))?;
    let mut r = Report::new("topdeg", format!("topological degree of {}", m.id))
        .field("map", &m.id)
        .field("value", est.value)
        .field("method", est.method)
        .field("heuristic", est.heuristic)
        .field("discarded", est.discarded)
        .columns(&["prime", "target", "count"]);
    for s in &est.samples {
        r.row(vec![json!(s.prime), to_value(&s.target), json!(s.count)]);
    }
    Ok(r.detail(&est))
}

pub fn orbit_cmd(m: &LoadedMap, point: &str, cfg: &RunConfig, full: bool) -> Result<Report, CliError> {
    let p = parse_point(point, m)?;
    let rec = orbit(m, &p, cfg, full)?;
    let mut r = Report::new("orbit", format!("orbit of {p} under {}", m.id))
        .field("map", &m.id)
        .field("start", &p)
        .field("periodicity", detect_periodicity(&rec))
        .field("indeterminacy_index", rec.indeterminacy_index)
        .field("truncated", rec.truncated)
        .columns(&["n", "point", "max_coordinate", "log_height"]);
    r = with_truncation(r, rec.truncated, "coordinate_digit_cap");
    for ((i, q), h) in rec.indices.iter().zip(&rec.points).zip(&rec.heights) {
        let h = to_value(h);
        r.row(vec![json!(i), to_value(q), h["max_coordinate"].clone(), h["log"].clone()]);
    }
    Ok(r.detail(&rec))
}

pub fn arithdeg(m: &LoadedMap, point: &str, cfg: &RunConfig, power: Option<u32>) -> Result<Report, CliError> {
    let p = parse_point(point, m)?;
    let rec = orbit(m, &p, cfg, false)?;
    let window = cfg.window_for(rec.points.len().saturating_sub(1));
    let est = estimate_arith_degree(&rec, window).map_err(|e| blame_cap(&rec, e))?;
    let mut r = Report::new("arithdeg", format!("arithmetic degree of {p} under {}", m.id))
        .field("map", &m.id)
        .field("start", &p)
        .field("tail_window", est.tail_window)
        .field("root_lower", est.lower_report)
        .field("root_upper", est.upper_report)
        .field("ratio_lower", est.ratio_lower)
        .field("ratio_upper", est.ratio_upper)
        .field("alpha_exact", est.alpha_exact)
        .field("periodicity", est.periodicity)
        .columns(&["n", "log_height", "root", "ratio"]);
    r = with_truncation(r, rec.truncated, "coordinate_digit_cap");
    let power_report = match power {
        Some(n) => {
            let rep = power_consistency_check(&m.id, &m.map, &p, n, cfg.n_max as usize, window, cfg.coordinate_digit_cap)
                .map_err(|e| blame_cap(&rec, e))?;
            r = r
                .field("power", n)
                .field("power_root_discrepancy", rep.root_discrepancy)
                .field("power_ratio_discrepancy", rep.ratio_discrepancy);
            Some(rep)
        }
        None => None,
    };
    for (n, h) in rec.heights.iter().enumerate() {
        let root = n.checked_sub(1).map(|k| est.roots[k]);
        let ratio = est.ratios.get(n).copied().flatten();
        r.row(vec![json!(n), to_value(h)["log"].clone(), json!(root), json!(ratio)]);
    }
    Ok(r.detail(json!({ "estimate": est, "power_consistency": power_report })))
}

pub fn periodic(m: &LoadedMap, cfg: &RunConfig, enumeration_cap: u64) -> Result<Report, CliError> {
    let opts = SurveyOptions { enumeration_cap, ..Default::default() };
    let bound = HeightBound::from_log(cfg.height_bound);
    let s = periodic_point_survey(&m.id, &m.map, m.inverse.as_ref(), bound, cfg.period_bound, &opts)?;
    let c = &s.counts;
    let max_height = s.max_periodic_height.as_ref().map(to_value);
    let mut r = Report::new("periodic", format!("periodic points of {} of height <= {}", m.id, cfg.height_bound))
        .field("map", &m.id)
        .field("height_bound", s.height_bound)
        .field("max_coordinate", s.max_coordinate)
        .field("period_bound", s.period_bound)
        .field("escape_height", s.escape_height)
        .field("enumerated", c.enumerated)
        .field("periodic", c.periodic)
        .field("preperiodic", c.preperiodic)
        .field("escaping", c.escaping)
        .field("indeterminate", c.indeterminate)
        .field("wandering", c.wandering)
        .field("max_periodic_height", max_height.as_ref().map(|h| h["log"].clone()))
        .columns(&["point", "period", "max_coordinate", "log_height", "inverse_confirms"]);
    for e in &s.periodic {
        let h = to_value(&e.height);
        r.row(vec![to_value(&e.point), json!(e.period), h["max_coordinate"].clone(), h["log"].clone(), json!(e.inverse_confirms)]);
    }
    Ok(r.detail(&s))
}

pub fn dml(m: &LoadedMap, point: &str, polys: &[String], cfg: &RunConfig) -> Result<Report, CliError> {
    let p = parse_point(point, m)?;
    let vars = m.map.vars();
    let y = polys
        .iter()
        .map(|s| parse_poly(s, vars).map_err(|e| CliError::invalid(format!("--poly `{s}`: {e}"))))
        .collect::<Result<Vec<Poly>, _>>()?;
    let rs = return_set(&m.id, &m.map, &p, &y, cfg.n_max as u64, cfg.coordinate_digit_cap)?;
    let mut r = Report::new("dml", format!("return set of {p} under {}", m.id))
        .field("map", &m.id)
        .field("start", &p)
        .field("n_max", rs.n_max)
        .field("scanned_to", rs.scanned_to)
        .field("partial", rs.partial)
        .field("indices", &rs.indices)
        .field("decomposed", rs.decomposition.is_some())
        .columns(&["kind", "start", "difference"]);
    if let Some(d) = &rs.decomposition {
        for pr in &d.progressions {
            r.row(vec![json!("progression"), json!(pr.start), json!(pr.difference)]);
        }
        for n in &d.residual {
            r.row(vec![json!("residual"), json!(n), Value::Null]);
        }
    }
    Ok(r.detail(&rs))
}

pub fn density(m: &LoadedMap, point: &str, degree: u32, cfg: &RunConfig) -> Result<Report, CliError> {
    let p = parse_point(point, m)?;
    let rec = orbit(m, &p, cfg, false)?;
    let opts = CurveSearchOptions { prime_count: cfg.prime_count, ..Default::default() };
    let s = invariant_curve_search(&rec.points, m.map.vars(), degree, &opts)?;
    let mut r = Report::new("density", format!("curves of degree <= {degree} through the orbit of {p} under {}", m.id))
        .field("map", &m.id)
        .field("start", &p)
        .field("status", s.status)
        .field("degree", s.degree)
        .field("points", s.points)
        .field("monomials", s.monomials)
        .field("curve", &s.curve_text)
        .field("certificate", &s.certificate);
    r = with_truncation(r, rec.truncated, "coordinate_digit_cap");
    Ok(r.detail(&s))
}

pub fn lemma(
    zeta: f64,
    d1: f64,
    d2: f64,
    c: f64,
    orbit_of: Option<(&LoadedMap, &str)>,
    full: bool,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let k = LemmaConstants::new(zeta, d1, d2, c)?;
    let res = k.residuals();
    let mut r = Report::new("lemma", format!("lemma constants for zeta = {zeta}, d1 = {d1}, d2 = {d2}, C = {c}"))
        .field("zeta", k.zeta)
        .field("d1", k.d1)
        .field("d2", k.d2)
        .field("c", k.c)
        .field("alpha", k.alpha)
        .field("beta", k.beta)
        .field("alpha_identity_residual", res.alpha_identity)
        .field("beta_identity_residual", res.beta_identity)
        .field("cross_residual", res.cross)
        .field("alpha_lower_bound_holds", k.alpha_lower_bound_holds());
    let Some((m, point)) = orbit_of else {
        return Ok(r.detail(json!({ "constants": k, "residuals": res })));
    };
    let p = parse_point(point, m)?;
    let rec = orbit(m, &p, cfg, full)?;
    let seq = if full {
        ell_sequence_two_sided(&rec.forward_heights(), &rec.backward_heights(), &k)
    } else {
        ell_sequence(&rec.forward_heights(), &k)
    };
    r = r
        .field("map", &m.id)
        .field("start", &p)
        .field("ell_inf_proxy", seq.ell_inf_proxy)
        .field("all_flags_hold", seq.all_flags_hold)
        .columns(&["side", "n", "ell", "grows"]);
    r = with_truncation(r, rec.truncated, "coordinate_digit_cap");
    let sides = [("forward", Some((&seq.values, &seq.flags))), ("backward", seq.backward_values.as_ref().zip(seq.backward_flags.as_ref()))];
    for (side, data) in sides {
        let Some((values, flags)) = data else { continue };
        for (n, v) in values.iter().enumerate() {
            r.row(vec![json!(side), json!(n), json!(v), json!(flags.get(n))]);
        }
    }
    Ok(r.detail(json!({ "constants": k, "residuals": res, "ell": seq })))
}
