use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::DegreeError;
use crate::algebra::modp::{inv_mod, is_prime};
use crate::algebra::{poly_mod_p, PolyModP};
use crate::maps::{determinant, inverse_check, SelfMap};
use crate::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopDegreeMethod {
    ExactMonomial,
    BirationalUnit,
    FiberSampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopDegreeOptions {
    pub prime_count: usize,
    pub samples_per_prime: usize,
    pub seed: u64,
    /// Primes are drawn from `(prime_cap / 2, prime_cap]`.
    pub prime_cap: u64,
    /// Largest source space (in points) scanned exhaustively per prime.
    pub max_scan: u64,
    /// Forces a method instead of picking the strongest applicable one.
    pub method: Option<TopDegreeMethod>,
}

impl Default for TopDegreeOptions {
    fn default() -> Self {
        TopDegreeOptions {
            prime_count: 3,
            samples_per_prime: 16,
            seed: 0,
            prime_cap: 257,
            max_scan: 1 << 20,
            method: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberSample {
    pub prime: u64,
    pub target: Vec<u64>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopDegreeEstimate {
    pub value: u64,
    pub method: TopDegreeMethod,
    /// True for the sampling estimator, which can only undercount.
    pub heuristic: bool,
    pub samples: Vec<FiberSample>,
    /// Sampled targets whose fiber had more than `d^N` points (so is not a finite, generic
    /// fiber: it lies in the image of a contracted subvariety). They are not counted.
    pub discarded: usize,
}

/// Topological degree: `|det|` of the exponent matrix for monomial maps, 1 for maps with a
/// verified inverse, otherwise the largest fiber seen over small prime fields.
pub fn topological_degree(
    f: &SelfMap,
    inverse: Option<&SelfMap>,
    opts: &TopDegreeOptions,
) -> Result<TopDegreeEstimate, DegreeError> {
    let exact = |value, method| TopDegreeEstimate { value, method, heuristic: false, samples: vec![], discarded: 0 };
    let method = match opts.method {
        Some(m) => m,
        None if f.exponent_matrix().is_some() => TopDegreeMethod::ExactMonomial,
        None if inverse.is_some_and(|g| inverse_check(f, g)) => TopDegreeMethod::BirationalUnit,
        None => TopDegreeMethod::FiberSampling,
    };
    match method {
        TopDegreeMethod::ExactMonomial => {
            let m = f.exponent_matrix().ok_or(DegreeError::NotMonomial)?;
            let m: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&e| e as i64).collect()).collect();
            Ok(exact(determinant(&m).unsigned_abs() as u64, method))
        }
        TopDegreeMethod::BirationalUnit => match inverse {
            Some(g) if inverse_check(f, g) => Ok(exact(1, method)),
            _ => Err(DegreeError::NoVerifiedInverse),
        },
        TopDegreeMethod::FiberSampling => fiber_sampling(f, opts),
    }
}

struct Reduced {
    comps: Vec<PolyModP>,
    projective: bool,
}

fn reduce(f: &SelfMap, comps: &[Poly], p: u64) -> Option<Reduced> {
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let r = poly_mod_p(c, p).ok()?;
        // a good prime keeps every top-degree part alive
        let top = c.degree().finite().unwrap_or(0);
        let top_alive = r.terms().any(|(m, _)| m.degree() == top);
        if !c.is_zero() && !top_alive {
            return None;
        }
        out.push(r);
    }
    Some(Reduced { comps: out, projective: !f.is_affine() })
}

impl Reduced {
    fn image(&self, x: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut v: Vec<u64> = self.comps.iter().map(|c| c.eval(x)).collect();
        if self.projective {
            let first = v.iter().copied().find(|&a| a != 0)?;
            let inv = inv_mod(first, p);
            v.iter_mut().for_each(|a| *a = crate::algebra::modp::mul_mod(*a, inv, p));
        }
        Some(v)
    }
}

/// Source points: `F_p^N`, or `P^N(F_p)` as vectors whose first nonzero entry is 1.
fn for_each_source(n_coords: usize, projective: bool, p: u64, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; n_coords];
    if !projective {
        loop {
            visit(&x);
            if !odometer(&mut x, p) {
                return;
            }
        }
    }
    for lead in 0..n_coords {
        x.iter_mut().for_each(|a| *a = 0);
        x[lead] = 1;
        loop {
            visit(&x);
            if !odometer(&mut x[lead + 1..], p) {
                break;
            }
        }
    }
}

fn odometer(x: &mut [u64], p: u64) -> bool {
    for a in x.iter_mut().rev() {
        *a += 1;
        if *a < p {
            return true;
        }
        *a = 0;
    }
    false
}

fn random_source(n_coords: usize, projective: bool, p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    loop {
        let x: Vec<u64> = (0..n_coords).map(|_| rng.gen_range(0..p)).collect();
        if !projective {
            return x;
        }
        if let Some(first) = x.iter().copied().find(|&a| a != 0) {
            let inv = inv_mod(first, p);
            return x.iter().map(|&a| crate::algebra::modp::mul_mod(a, inv, p)).collect();
        }
    }
}

fn fiber_sampling(f: &SelfMap, opts: &TopDegreeOptions) -> Result<TopDegreeEstimate, DegreeError> {
    let comps: Vec<Poly> = match f {
        SelfMap::Affine(a) => a.components().to_vec(),
        SelfMap::Projective(g) => g.rational_components(),
    };
    let projective = !f.is_affine();
    let n_coords = comps.len();
    let n = f.dimension() as i32;
    // largest prime allowed by the scan budget: p^N <= max_scan
    let budget_cap = (opts.max_scan as f64).powf(1.0 / n as f64).floor() as u64;
    let cap = opts.prime_cap.min(budget_cap);
    if cap < 5 {
        return Err(DegreeError::ScanTooLarge { dimension: f.dimension(), max_scan: opts.max_scan });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut primes: Vec<(u64, Reduced)> = Vec::new();
    let candidates: Vec<u64> = (cap / 2 + 1..=cap).filter(|&q| is_prime(q)).collect();
    let mut attempts = 0;
    while primes.len() < opts.prime_count && attempts < 200 && !candidates.is_empty() {
        attempts += 1;
        let p = candidates[rng.gen_range(0..candidates.len())];
        if primes.iter().any(|(q, _)| *q == p) {
            if primes.len() == candidates.len() {
                break;
            }
            continue;
        }
        if let Some(r) = reduce(f, &comps, p) {
            primes.push((p, r));
        }
    }
    if primes.is_empty() {
        return Err(DegreeError::NoGoodPrime { attempts });
    }

    let bezout = (f.degree() as u64).saturating_pow(n as u32);
    let per_prime: Vec<(Vec<FiberSample>, usize)> = primes
        .par_iter()
        .map(|(p, red)| {
            let p = *p;
            let mut fibers: HashMap<Vec<u64>, u64> = HashMap::new();
            for_each_source(n_coords, projective, p, |x| {
                if let Some(y) = red.image(x, p) {
                    *fibers.entry(y).or_insert(0) += 1;
                }
            });
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut samples = Vec::with_capacity(opts.samples_per_prime);
            let mut discarded = 0;
            let mut tries = 0;
            while samples.len() < opts.samples_per_prime && tries < 64 * opts.samples_per_prime.max(1) {
                tries += 1;
                let x = random_source(n_coords, projective, p, &mut rng);
                if let Some(y) = red.image(&x, p) {
                    let count = fibers[&y];
                    if count > bezout {
                        discarded += 1;
                    } else {
                        samples.push(FiberSample { prime: p, target: y, count });
                    }
                }
            }
            (samples, discarded)
        })
        .collect();
    let discarded = per_prime.iter().map(|(_, d)| d).sum();
    let samples: Vec<FiberSample> = per_prime.into_iter().flat_map(|(s, _)| s).collect();
    let value = samples.iter().map(|s| s.count).max().unwrap_or(0);
    Ok(TopDegreeEstimate { value, method: TopDegreeMethod::FiberSampling, heuristic: true, samples, discarded })
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
    fn squares_sampled() {
        let z = zoo("power", &[("n", "2"), ("d", "2")]);
        let opts = TopDegreeOptions { method: Some(TopDegreeMethod::FiberSampling), ..Default::default() };
        let est = topological_degree(&z.map, None, &opts).unwrap();
        assert_eq!(est.value, 4);
        assert!(est.samples.iter().all(|s| s.count <= 4));
        let auto = topological_degree(&z.map, None, &TopDegreeOptions::default()).unwrap();
        assert_eq!((auto.value, auto.method), (4, TopDegreeMethod::ExactMonomial));
    }

    #[test]
    fn henon_is_birational() {
        let z = zoo("henon", &[]);
        let est = topological_degree(&z.map, z.inverse.as_ref(), &TopDegreeOptions::default()).unwrap();
        assert_eq!((est.value, est.method), (1, TopDegreeMethod::BirationalUnit));
    }

    #[test]
    fn monomial_determinant() {
        let z = zoo("monomial", &[("m", "[[1,1],[1,0]]")]);
        let est = topological_degree(&z.map, None, &TopDegreeOptions::default()).unwrap();
        assert_eq!((est.value, est.method), (1, TopDegreeMethod::ExactMonomial));
    }

    #[test]
    fn projective_sampling() {
        let z = zoo("cremona", &[]);
        let opts = TopDegreeOptions { method: Some(TopDegreeMethod::FiberSampling), prime_cap: 61, ..Default::default() };
        let est = topological_degree(&z.map, None, &opts).unwrap();
        assert_eq!(est.value, 1);
    }

    #[test]
    fn seed_determines_result() {
        let z = zoo("power", &[("n", "1"), ("d", "3")]);
        let opts = TopDegreeOptions { method: Some(TopDegreeMethod::FiberSampling), seed: 7, ..Default::default() };
        let a = topological_degree(&z.map, None, &opts).unwrap();
        let b = topological_degree(&z.map, None, &opts).unwrap();
        assert_eq!(a, b);
    }
}
