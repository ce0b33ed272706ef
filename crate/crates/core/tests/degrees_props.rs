use std::collections::BTreeMap;

use arithdyn::algebra::var_list;
use arithdyn::degrees::{
    degree_sequence, estimate_delta1, topological_degree, LemmaConstants, TopDegreeMethod, TopDegreeOptions,
};
use arithdyn::maps::{determinant, monomial, zoo_get, AffinePolyMap, SelfMap};
use proptest::prelude::*;

fn zoo(name: &str, params: &[(&str, &str)]) -> SelfMap {
    let p: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    zoo_get(name, &p).unwrap().map
}

fn depth(name: &str) -> u32 {
    if name == "gs02" {
        4
    } else {
        6
    }
}

fn sample_maps() -> Vec<(&'static str, SelfMap)> {
    vec![
        ("henon", zoo("henon", &[])),
        ("gs02", zoo("gs02", &[("d", "2")])),
        ("monomial", zoo("monomial", &[("m", "[[2,1],[1,1]]")])),
        ("power", zoo("power", &[("n", "2"), ("d", "3")])),
        ("cremona", zoo("cremona", &[])),
        ("swap", zoo("swap", &[])),
    ]
}

#[test]
fn degree_sequences_are_submultiplicative() {
    for (name, f) in sample_maps() {
        let seq = degree_sequence(name, &f.to_projective().unwrap(), depth(name), 200_000);
        assert!(seq.entries.len() >= 3, "{name}");
        assert!(seq.is_submultiplicative(), "{name}: {:?}", seq.entries);
        let d = seq.degrees();
        for m in 1..=d.len() {
            for n in 1..=d.len() - m {
                assert!(d[m + n - 1] <= d[m - 1] * d[n - 1], "{name}: m = {m}, n = {n}");
            }
        }
    }
}

#[test]
fn stable_sequences_square() {
    for (name, f) in sample_maps() {
        let seq = degree_sequence(name, &f.to_projective().unwrap(), depth(name), 200_000);
        let est = estimate_delta1(&seq).unwrap();
        if !est.stable {
            // degree drops (cremona) or growth by a non-integer δ1 (hyperbolic monomial matrix)
            assert!(["cremona", "monomial"].contains(&name), "{name}");
            continue;
        }
        for n in 1..=3u32 {
            if let (Some(a), Some(b)) = (seq.degree_at(n), seq.degree_at(2 * n)) {
                assert_eq!(b, a * a, "{name} at n = {n}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn alpha_lower_bound(d1 in 0.5f64..30.0, d2 in 0.5f64..30.0, gap in 1e-6f64..40.0, c in 0.1f64..10.0) {
        let zeta = 1.0 / d1 + 1.0 / d2 + gap;
        let k = LemmaConstants::new(zeta, d1, d2, c).unwrap();
        prop_assert!(k.alpha >= zeta * d1 / 2.0 * (1.0 - 1e-9));
        prop_assert!(k.alpha_lower_bound_holds());
        prop_assert!(k.residuals().max() < 1e-9);
    }

    #[test]
    fn monomial_topdeg_is_multiplicative(
        a in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 2),
        b in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 2),
    ) {
        let (Ok(f), Ok(g)) = (monomial(&a), monomial(&b)) else { return Ok(()) };
        let opts = TopDegreeOptions::default();
        let tf = topological_degree(&f, None, &opts).unwrap().value;
        let tg = topological_degree(&g, None, &opts).unwrap().value;
        let tgf = topological_degree(&g.compose(&f).unwrap(), None, &opts).unwrap();
        prop_assert_eq!(tgf.method, TopDegreeMethod::ExactMonomial);
        prop_assert_eq!(tgf.value, tf * tg);
        prop_assert_eq!(tf as i128, determinant(&a).abs());
    }
}

#[test]
fn fiber_counts_respect_bezout() {
    let v = var_list(&["x", "y"]);
    let maps = vec![
        zoo("power", &[("n", "2"), ("d", "2")]),
        zoo("power", &[("n", "2"), ("d", "3")]),
        zoo("henon", &[]),
        SelfMap::Affine(AffinePolyMap::parse(&v, &["x^2 + y", "y^2 - x"]).unwrap()),
        SelfMap::Affine(AffinePolyMap::parse(&v, &["x^3 + y", "y^2"]).unwrap()),
    ];
    for (i, f) in maps.iter().enumerate() {
        let opts = TopDegreeOptions {
            method: Some(TopDegreeMethod::FiberSampling),
            seed: i as u64,
            prime_cap: 131,
            ..Default::default()
        };
        let est = topological_degree(f, None, &opts).unwrap();
        let bezout = (f.degree() as u64).pow(2);
        assert_eq!(est.discarded, 0, "{f}");
        assert!(est.samples.iter().all(|s| s.count >= 1 && s.count <= bezout), "{f}");
    }
}
