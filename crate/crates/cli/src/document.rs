//! Map-definition files: TOML documents holding polynomial strings or a zoo reference.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use arithdyn::algebra::{parse_poly, var_list, AlgebraError, VarList};
use arithdyn::maps::{inverse_check, zoo_get, AffinePolyMap, MapError, ProjRationalMap, SelfMap, ZooMap};
use arithdyn::Poly;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZooReference {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

/// A self-map as written in a map file. Either `components` (with `variables` and
/// `dimension`) or a `zoo` reference, never both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_components: Option<Vec<String>>,
    /// Components are homogeneous in `dimension + 1` variables.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub projective: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zoo: Option<ZooReference>,
}

/// A parsed map ready for experiments.
#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub id: String,
    pub map: SelfMap,
    pub inverse: Option<SelfMap>,
    pub document: MapDocument,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: Option<String>,
    dimension: Option<Spanned<usize>>,
    variables: Option<Spanned<Vec<String>>>,
    components: Option<Spanned<Vec<Spanned<String>>>>,
    inverse_components: Option<Spanned<Vec<Spanned<String>>>>,
    #[serde(default)]
    projective: Option<Spanned<bool>>,
    zoo: Option<Spanned<RawZoo>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawZoo {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, Spanned<toml::Value>>,
}

struct Source<'a> {
    name: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn error(&self, offset: usize, message: impl Into<String>) -> CliError {
        CliError::parse_at(self.name, self.text, offset, message)
    }

    /// Maps a 1-based column inside a quoted string value back to the file.
    fn error_in_string(&self, span: &Range<usize>, column: usize, message: impl Into<String>) -> CliError {
        let body = self.text.get(span.start + 1..span.end).unwrap_or("");
        let inner = body.char_indices().nth(column.saturating_sub(1)).map_or(body.len(), |(i, _)| i);
        self.error(span.start + 1 + inner, message)
    }
}

impl MapDocument {
    /// Explicit-component document for a zoo map.
    pub fn from_zoo(z: &ZooMap) -> MapDocument {
        let (components, inverse_components) = (components_of(&z.map), z.inverse.as_ref().map(components_of));
        MapDocument {
            name: zoo_id(z),
            dimension: Some(z.map.dimension()),
            variables: z.map.vars().iter().cloned().collect(),
            components,
            inverse_components,
            projective: !z.map.is_affine(),
            zoo: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("map documents always serialize")
    }

    pub fn parse(text: &str, source_name: &str) -> Result<LoadedMap, CliError> {
        let src = Source { name: source_name, text };
        let raw: RawDocument = toml::from_str(text).map_err(|e| src.error(e.span().map_or(0, |s| s.start), e.message()))?;
        match raw.zoo {
            Some(z) => from_reference(&src, raw.name, raw.dimension, raw.variables, raw.components, raw.inverse_components, raw.projective, z),
            None => from_components(&src, raw),
        }
    }

    pub fn load(path: &Path) -> Result<LoadedMap, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: format!("{}: {e}", path.display()) })?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// `name(k=v,...)` with every resolved parameter, or the bare name.
pub fn zoo_id(z: &ZooMap) -> String {
    if z.params.is_empty() {
        return z.name.clone();
    }
    let ps: Vec<String> = z.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}({})", z.name, ps.join(","))
}

pub fn load_zoo(name: &str, params: &BTreeMap<String, String>) -> Result<LoadedMap, CliError> {
    let z = zoo_get(name, params)?;
    let document = MapDocument {
        name: zoo_id(&z),
        dimension: None,
        variables: vec![],
        components: vec![],
        inverse_components: None,
        projective: false,
        zoo: Some(ZooReference { name: z.name.clone(), params: z.params.clone() }),
    };
    Ok(LoadedMap { id: zoo_id(&z), map: z.map, inverse: z.inverse, document })
}

fn components_of(f: &SelfMap) -> Vec<String> {
    match f {
        SelfMap::Affine(a) => a.components().iter().map(ToString::to_string).collect(),
        SelfMap::Projective(p) => p.components().iter().map(ToString::to_string).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn from_reference(
    src: &Source,
    name: Option<String>,
    dimension: Option<Spanned<usize>>,
    variables: Option<Spanned<Vec<String>>>,
    components: Option<Spanned<Vec<Spanned<String>>>>,
    inverse: Option<Spanned<Vec<Spanned<String>>>>,
    projective: Option<Spanned<bool>>,
    zoo: Spanned<RawZoo>,
) -> Result<LoadedMap, CliError> {
    let clash = [
        variables.map(|v| v.span()),
        components.map(|v| v.span()),
        inverse.map(|v| v.span()),
        projective.map(|v| v.span()),
    ];
    if let Some(span) = clash.into_iter().flatten().next() {
        return Err(src.error(span.start, "a zoo reference and explicit components are mutually exclusive"));
    }
    let zoo_span = zoo.span();
    let raw = zoo.into_inner();
    let mut params = BTreeMap::new();
    for (k, v) in raw.params {
        let span = v.span();
        let text = param_text(v.get_ref()).ok_or_else(|| src.error(span.start, format!("parameter `{k}` must be a number, string or matrix")))?;
        params.insert(k, text);
    }
    let mut loaded = load_zoo(&raw.name, &params).map_err(|e| match e {
        CliError::Invalid { message } => src.error(zoo_span.start, message),
        other => other,
    })?;
    if let Some(d) = &dimension {
        if *d.get_ref() != loaded.map.dimension() {
            return Err(src.error(d.span().start, format!("dimension {} does not match the zoo map ({})", d.get_ref(), loaded.map.dimension())));
        }
    }
    if let Some(n) = name {
        loaded.id = n.clone();
        loaded.document.name = n;
    }
    loaded.document.dimension = dimension.map(Spanned::into_inner);
    Ok(loaded)
}

fn param_text(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(f.to_string()),
        toml::Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(param_text).collect();
            Some(format!("[{}]", parts?.join(",")))
        }
        _ => None,
    }
}

fn from_components(src: &Source, raw: RawDocument) -> Result<LoadedMap, CliError> {
    let end = src.text.len();
    let components = raw.components.ok_or_else(|| src.error(end, "missing `components` (or a [zoo] reference)"))?;
    let variables = raw.variables.ok_or_else(|| src.error(end, "missing `variables`"))?;
    let dimension = raw.dimension.ok_or_else(|| src.error(end, "missing `dimension`"))?;
    let projective = raw.projective.map_or(false, Spanned::into_inner);
    let (n, var_span) = (*dimension.get_ref(), variables.span());
    let names = variables.into_inner();
    if n == 0 {
        return Err(src.error(dimension.span().start, "dimension must be positive"));
    }
    let expected = if projective { n + 1 } else { n };
    if names.len() != expected {
        return Err(src.error(var_span.start, format!("expected {expected} variables for dimension {n}, found {}", names.len())));
    }
    if let Some(bad) = names.iter().find(|v| !is_identifier(v)) {
        return Err(src.error(var_span.start, format!("`{bad}` is not a variable name")));
    }
    if names.iter().collect::<BTreeSet<_>>().len() != names.len() {
        return Err(src.error(var_span.start, "variable names must be distinct"));
    }
    let vars = var_list(&names);
    let build = |comps: Spanned<Vec<Spanned<String>>>| -> Result<SelfMap, CliError> {
        let span = comps.span();
        let comps = comps.into_inner();
        if comps.len() != expected {
            return Err(src.error(span.start, format!("expected {expected} components, found {}", comps.len())));
        }
        let polys = comps.iter().map(|c| parse_component(src, c, &vars)).collect::<Result<Vec<Poly>, _>>()?;
        let at = |i: usize| comps.get(i).map_or(span.start, |c| c.span().start);
        let map_err = |e: MapError| match e {
            MapError::NotHomogeneous { index } => src.error(at(index), format!("component {} is not homogeneous", index + 1)),
            MapError::DegreeMismatch { index, expected, found } => src.error(
                at(index),
                format!("component {} has degree {found}, expected {expected}", index + 1),
            ),
            other => src.error(span.start, other.to_string()),
        };
        if projective {
            ProjRationalMap::saturate(&polys).map(SelfMap::Projective).map_err(map_err)
        } else {
            AffinePolyMap::new(polys).map(SelfMap::Affine).map_err(map_err)
        }
    };
    let map = build(components)?;
    let inverse = match raw.inverse_components {
        Some(inv) => {
            let start = inv.span().start;
            let g = build(inv)?;
            if !inverse_check(&map, &g) {
                return Err(src.error(start, "inverse_components do not invert the map"));
            }
            Some(g)
        }
        None => None,
    };
    let name = raw.name.unwrap_or_else(|| "map".into());
    let document = MapDocument {
        name: name.clone(),
        dimension: Some(n),
        variables: names,
        components: components_of(&map),
        inverse_components: inverse.as_ref().map(components_of),
        projective,
        zoo: None,
    };
    Ok(LoadedMap { id: name, map, inverse, document })
}

fn parse_component(src: &Source, c: &Spanned<String>, vars: &VarList) -> Result<Poly, CliError> {
    parse_poly(c.get_ref(), vars).map_err(|e| match e {
        AlgebraError::Parse { column, message } => src.error_in_string(&c.span(), column, message),
        other => src.error(c.span().start, other.to_string()),
    })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}
