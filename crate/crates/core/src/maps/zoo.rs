//! Built-in families of example maps.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AffinePolyMap, MapError, ProjRationalMap, SelfMap};
use crate::algebra::rational::parse_rational;
use crate::algebra::{var_list, Monomial, MultiPoly, VarList};
use crate::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZooFamily {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub inverse: &'static str,
}

/// A constructed zoo map with its parameters and, when known, its inverse.
#[derive(Debug, Clone)]
pub struct ZooMap {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub map: SelfMap,
    pub inverse: Option<SelfMap>,
}

const FAMILIES: &[ZooFamily] = &[
    ZooFamily {
        name: "henon",
        summary: "(x, y) -> (y, y^2 + a*x + b)",
        params: &[
            ParamSpec { name: "a", default: "1", description: "nonzero rational" },
            ParamSpec { name: "b", default: "0", description: "rational" },
        ],
        inverse: "((y - x^2 - b)/a, x)",
    },
    ZooFamily {
        name: "gs02",
        summary: "(x, y, z) -> (y*x^d + z, y^(d+1) + x, y)",
        params: &[ParamSpec { name: "d", default: "2", description: "integer >= 1" }],
        inverse: "(y - z^(d+1), z, x - z*(y - z^(d+1))^d)",
    },
    ZooFamily {
        name: "monomial",
        summary: "x_i -> prod_j x_j^m[i][j]",
        params: &[ParamSpec {
            name: "m",
            default: "[[1,1],[1,0]]",
            description: "square nonnegative integer matrix, nonzero determinant",
        }],
        inverse: "none",
    },
    ZooFamily {
        name: "shift",
        summary: "x_i -> x_i + c",
        params: &[
            ParamSpec { name: "n", default: "1", description: "dimension >= 1" },
            ParamSpec { name: "c", default: "1", description: "rational" },
        ],
        inverse: "x_i -> x_i - c",
    },
    ZooFamily {
        name: "swap",
        summary: "(x, y) -> (y, x)",
        params: &[],
        inverse: "itself",
    },
    ZooFamily {
        name: "identity",
        summary: "x_i -> x_i",
        params: &[ParamSpec { name: "n", default: "2", description: "dimension >= 1" }],
        inverse: "itself",
    },
    ZooFamily {
        name: "power",
        summary: "x_i -> x_i^d",
        params: &[
            ParamSpec { name: "n", default: "2", description: "dimension >= 1" },
            ParamSpec { name: "d", default: "2", description: "integer >= 1" },
        ],
        inverse: "itself when d = 1",
    },
    ZooFamily {
        name: "cremona",
        summary: "[X : Y : Z] -> [Y*Z : X*Z : X*Y] on P^2",
        params: &[],
        inverse: "itself",
    },
];

pub fn zoo_list() -> &'static [ZooFamily] {
    FAMILIES
}

/// Variable names for dimension `n`: `x`, `x y`, `x y z`, then `x1 ... xn`.
pub fn default_vars(n: usize) -> VarList {
    match n {
        1 => var_list(&["x"]),
        2 => var_list(&["x", "y"]),
        3 => var_list(&["x", "y", "z"]),
        _ => var_list(&(1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>()),
    }
}

fn invalid(family: &str, message: impl Into<String>) -> MapError {
    MapError::InvalidParameter { family: family.into(), message: message.into() }
}

struct Params<'a> {
    family: &'static ZooFamily,
    given: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn raw(&self, name: &str) -> &str {
        let spec = self.family.params.iter().find(|p| p.name == name).unwrap();
        self.given.get(name).map(String::as_str).unwrap_or(spec.default)
    }

    fn rational(&self, name: &str) -> Result<BigRational, MapError> {
        let raw = self.raw(name);
        parse_rational(raw).ok_or_else(|| invalid(self.family.name, format!("{name} = `{raw}` is not a rational number")))
    }

    fn integer(&self, name: &str, min: u32) -> Result<u32, MapError> {
        let raw = self.raw(name);
        match raw.trim().parse::<u32>() {
            Ok(v) if v >= min => Ok(v),
            _ => Err(invalid(self.family.name, format!("{name} = `{raw}` must be an integer >= {min}"))),
        }
    }

    fn resolved(&self) -> BTreeMap<String, String> {
        self.family.params.iter().map(|p| (p.name.to_string(), self.raw(p.name).trim().to_string())).collect()
    }
}

/// Builds a zoo map. Unknown families and unknown or invalid parameters are rejected.
pub fn zoo_get(name: &str, params: &BTreeMap<String, String>) -> Result<ZooMap, MapError> {
    let family = FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| MapError::UnknownFamily(name.to_string()))?;
    if let Some(extra) = params.keys().find(|k| !family.params.iter().any(|p| p.name == k.as_str())) {
        return Err(invalid(name, format!("unknown parameter `{extra}`")));
    }
    let p = Params { family, given: params };
    let (map, inverse) = match name {
        "henon" => {
            let a = p.rational("a")?;
            if a.is_zero() {
                return Err(invalid(name, "a must be nonzero"));
            }
            henon(&a, &p.rational("b")?)
        }
        "gs02" => gs02(p.integer("d", 1)?),
        "monomial" => {
            let m = parse_matrix(p.raw("m")).ok_or_else(|| invalid(name, "m must look like [[1,1],[1,0]]"))?;
            (monomial(&m).map_err(|e| invalid(name, e))?, None)
        }
        "shift" => shift(p.integer("n", 1)? as usize, &p.rational("c")?),
        "swap" => {
            let v = default_vars(2);
            let f = affine(&v, vec![var(&v, 1), var(&v, 0)]);
            (f.clone(), Some(f))
        }
        "identity" => {
            let f = SelfMap::Affine(AffinePolyMap::identity(default_vars(p.integer("n", 1)? as usize)));
            (f.clone(), Some(f))
        }
        "power" => {
            let n = p.integer("n", 1)? as usize;
            let d = p.integer("d", 1)?;
            let v = default_vars(n);
            let f = affine(&v, (0..n).map(|i| var(&v, i).pow(d)).collect());
            let inv = (d == 1).then(|| f.clone());
            (f, inv)
        }
        "cremona" => {
            let f = SelfMap::Projective(cremona());
            (f.clone(), Some(f))
        }
        _ => unreachable!("family table and constructors out of sync"),
    };
    Ok(ZooMap { name: name.to_string(), params: p.resolved(), map, inverse })
}

fn var(v: &VarList, i: usize) -> Poly {
    MultiPoly::var(v.clone(), i)
}

fn affine(v: &VarList, comps: Vec<Poly>) -> SelfMap {
    debug_assert_eq!(v.len(), comps.len());
    SelfMap::Affine(AffinePolyMap::new(comps).expect("zoo components are well formed"))
}

fn henon(a: &BigRational, b: &BigRational) -> (SelfMap, Option<SelfMap>) {
    let v = default_vars(2);
    let (x, y) = (var(&v, 0), var(&v, 1));
    let c = |r: &BigRational| Poly::constant(v.clone(), r.clone());
    let f = affine(&v, vec![y.clone(), &(&y.pow(2) + &x.scale(a)) + &c(b)]);
    let g = affine(&v, vec![(&(&y - &x.pow(2)) - &c(b)).scale(&a.recip()), x]);
    (f, Some(g))
}

fn gs02(d: u32) -> (SelfMap, Option<SelfMap>) {
    let v = default_vars(3);
    let (x, y, z) = (var(&v, 0), var(&v, 1), var(&v, 2));
    let f = affine(&v, vec![&(&y * &x.pow(d)) + &z, &y.pow(d + 1) + &x, y.clone()]);
    let t = &y - &z.pow(d + 1);
    let g = affine(&v, vec![t.clone(), z.clone(), &x - &(&z * &t.pow(d))]);
    (f, Some(g))
}

fn shift(n: usize, c: &BigRational) -> (SelfMap, Option<SelfMap>) {
    let v = default_vars(n);
    let k = Poly::constant(v.clone(), c.clone());
    let f = affine(&v, (0..n).map(|i| &var(&v, i) + &k).collect());
    let g = affine(&v, (0..n).map(|i| &var(&v, i) - &k).collect());
    (f, Some(g))
}

/// Monomial map with exponent matrix `m` (row `i` gives the exponents of component `i`).
pub fn monomial(m: &[Vec<i64>]) -> Result<SelfMap, String> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err("matrix must be square and nonempty".into());
    }
    if m.iter().flatten().any(|&e| e < 0) {
        return Err("negative exponents are not polynomial".into());
    }
    if determinant(m) == 0 {
        return Err("matrix must have nonzero determinant".into());
    }
    let v = default_vars(n);
    let comps = m
        .iter()
        .map(|row| Poly::term(v.clone(), Monomial::new(row.iter().map(|&e| e as u32).collect()), One::one()))
        .collect();
    Ok(affine(&v, comps))
}

/// `[YZ : XZ : XY]`.
pub fn cremona() -> ProjRationalMap {
    let v = var_list(&["X", "Y", "Z"]);
    let (x, y, z) = (var(&v, 0), var(&v, 1), var(&v, 2));
    ProjRationalMap::saturate(&[&y * &z, &x * &z, &x * &y]).expect("cremona is saturated")
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Parses `[[a,b],[c,d]]`.
pub fn parse_matrix(text: &str) -> Option<Vec<Vec<i64>>> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t.strip_prefix("[[")?.strip_suffix("]]")?;
    inner
        .split("],[")
        .map(|row| row.split(',').map(|e| e.parse::<i64>().ok()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::inverse_check;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn henon_entry() {
        let z = zoo_get("henon", &params(&[("a", "1"), ("b", "0")])).unwrap();
        assert_eq!(z.map.to_string(), "(y, y^2 + x)");
        let inv = z.inverse.unwrap();
        assert_eq!(inv.to_string(), "(-x^2 + y, x)");
        assert!(inverse_check(&z.map, &inv));
    }

    #[test]
    fn henon_rational_parameters() {
        let z = zoo_get("henon", &params(&[("a", "-2/3"), ("b", "5")])).unwrap();
        assert!(inverse_check(&z.map, z.inverse.as_ref().unwrap()));
        assert!(zoo_get("henon", &params(&[("a", "0")])).is_err());
    }

    #[test]
    fn gs02_entry() {
        let z = zoo_get("gs02", &params(&[("d", "2")])).unwrap();
        assert_eq!(z.map.to_string(), "(x^2*y + z, y^3 + x, y)");
        assert!(inverse_check(&z.map, z.inverse.as_ref().unwrap()));
        assert!(zoo_get("gs02", &params(&[("d", "0")])).is_err());
    }

    #[test]
    fn monomial_entry() {
        let z = zoo_get("monomial", &params(&[("m", "[[1,1],[1,0]]")])).unwrap();
        assert_eq!(z.map.to_string(), "(x*y, x)");
        assert!(zoo_get("monomial", &params(&[("m", "[[1,1],[1,1]]")])).is_err());
        assert!(zoo_get("monomial", &params(&[("m", "[[1,-1],[1,0]]")])).is_err());
        assert!(zoo_get("monomial", &params(&[("m", "[[1,1]]")])).is_err());
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(matches!(zoo_get("nope", &BTreeMap::new()), Err(MapError::UnknownFamily(_))));
        assert!(matches!(zoo_get("swap", &params(&[("q", "1")])), Err(MapError::InvalidParameter { .. })));
    }

    #[test]
    fn every_inverse_checks() {
        for fam in zoo_list() {
            let z = zoo_get(fam.name, &BTreeMap::new()).unwrap();
            if let Some(inv) = &z.inverse {
                assert!(inverse_check(&z.map, inv), "{}", fam.name);
            }
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![1, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
    }
}
