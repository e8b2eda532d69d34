//! JSON problem files: geometric problems and stratification data.
//!
//! Rationals are written as strings (`"3/4"`) or JSON integers; floating point
//! tokens are rejected everywhere.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::conormal::VarietyPresentation;
use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, parse_rational, Point, Polynomial, Rational, VariableContext};
use crate::strat::{ConstructibleFunction, LinkData, MilnorData, StratifiedSpace, Stratum};

#[derive(Clone, Debug)]
pub struct GeometricProblem {
    pub context: Arc<VariableContext>,
    pub variety: VarietyPresentation,
    pub function: Polynomial,
    pub point: Point,
    pub seed: Option<u64>,
    /// Stratification used when the function is constant near the point.
    pub stratification: Option<StratificationFile>,
    pub point_stratum: Option<String>,
}

#[derive(Clone, Debug)]
pub struct StratificationFile {
    pub space: StratifiedSpace,
    pub links: LinkData,
    pub milnor: Option<MilnorData>,
}

#[derive(Clone, Debug, Default)]
pub struct Query {
    pub point_stratum: Option<String>,
    pub function: Option<ConstructibleFunction>,
    pub shift: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct StratifiedProblem {
    pub stratification: StratificationFile,
    pub query: Query,
}

#[derive(Clone, Debug)]
pub enum ProblemFile {
    Geometric(GeometricProblem),
    Stratified(StratifiedProblem),
}

fn err(msg: impl Into<String>) -> Error {
    Error::Problem(msg.into())
}

pub fn load_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    reject_floats(&v, "$")?;
    let obj = as_object(&v, "top level")?;
    match get_str(obj, "kind")? {
        "geometric" => Ok(ProblemFile::Geometric(parse_geometric(obj)?)),
        "stratified" => {
            let strat = obj.get("stratification").ok_or_else(|| err("missing field 'stratification'"))?;
            let stratification = parse_stratification_value(strat)?;
            let query = match obj.get("query") {
                None => Query::default(),
                Some(q) => parse_query(q, &stratification.space)?,
            };
            Ok(ProblemFile::Stratified(StratifiedProblem { stratification, query }))
        }
        other => Err(err(format!("unknown kind '{other}' (expected 'geometric' or 'stratified')"))),
    }
}

fn reject_floats(v: &Value, at: &str) -> Result<()> {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
            Err(err(format!("{at}: non-integer number {n}; write exact values as strings such as \"3/4\"")))
        }
        Value::Array(a) => a.iter().enumerate().try_for_each(|(i, x)| reject_floats(x, &format!("{at}[{i}]"))),
        Value::Object(o) => o.iter().try_for_each(|(k, x)| reject_floats(x, &format!("{at}.{k}"))),
        _ => Ok(()),
    }
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(format!("{what} must be an object")))
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    obj.get(key)
        .ok_or_else(|| err(format!("missing field '{key}'")))?
        .as_str()
        .ok_or_else(|| err(format!("field '{key}' must be a string")))
}

fn get_array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    obj.get(key)
        .ok_or_else(|| err(format!("missing field '{key}'")))?
        .as_array()
        .ok_or_else(|| err(format!("field '{key}' must be an array")))
}

fn string_list(obj: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    get_array(obj, key)?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| err(format!("entries of '{key}' must be strings"))))
        .collect()
}

fn rational_value(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| err(format!("{what}: {e}"))),
        Value::Number(n) => Ok(Rational::from_integer(BigInt::from(
            n.as_i64().ok_or_else(|| err(format!("{what}: integer out of range; use a string")))?,
        ))),
        _ => Err(err(format!("{what} must be a rational string or an integer"))),
    }
}

fn integer_value(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| err(format!("{what}: not an integer"))),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| err(format!("{what}: '{s}' is not an integer"))),
        _ => Err(err(format!("{what} must be an integer"))),
    }
}

fn parse_geometric(obj: &Map<String, Value>) -> Result<GeometricProblem> {
    let names = string_list(obj, "variables")?;
    let ctx = VariableContext::new(&names)?;
    let gens = string_list(obj, "generators")?
        .iter()
        .enumerate()
        .map(|(i, s)| parse_polynomial(&ctx, s).map_err(|e| err(format!("generator {i} \"{s}\": {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let fs = get_str(obj, "function")?;
    let function = parse_polynomial(&ctx, fs).map_err(|e| err(format!("function \"{fs}\": {e}")))?;
    let point = get_array(obj, "point")?
        .iter()
        .enumerate()
        .map(|(i, v)| rational_value(v, &format!("point[{i}]")))
        .collect::<Result<Point>>()?;
    if point.len() != names.len() {
        return Err(err(format!("point has {} coordinates but there are {} variables", point.len(), names.len())));
    }
    let seed = match obj.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| err("seed must be a non-negative integer"))?),
    };
    let variety = VarietyPresentation::new(&ctx, gens).map_err(|e| err(format!("generators: {e}")))?;
    let stratification = obj.get("stratification").map(parse_stratification_value).transpose()?;
    let point_stratum = obj.get("point_stratum").map(|v| v.as_str().map(str::to_string)).unwrap_or(None);
    if let (Some(s), Some(p)) = (&stratification, &point_stratum) {
        s.space.index_of(p)?;
    }
    Ok(GeometricProblem { context: ctx, variety, function, point, seed, stratification, point_stratum })
}

/// Parses a stratification file on its own.
pub fn parse_stratification(text: &str) -> Result<StratificationFile> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    reject_floats(&v, "$")?;
    parse_stratification_value(&v)
}

fn parse_stratification_value(v: &Value) -> Result<StratificationFile> {
    let obj = as_object(v, "stratification")?;
    let mut strata = Vec::new();
    for (i, s) in get_array(obj, "strata")?.iter().enumerate() {
        let so = as_object(s, &format!("strata[{i}]"))?;
        let name = get_str(so, "name")?.to_string();
        let dim = so
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| err(format!("stratum '{name}': 'dim' must be a non-negative integer")))? as usize;
        let open = match so.get("component_open") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| err(format!("stratum '{name}': 'component_open' must be a boolean")))?,
        };
        let component_dim = match so.get("component_dim") {
            None | Some(Value::Null) => None,
            Some(d) => Some(d.as_u64().ok_or_else(|| err(format!("stratum '{name}': bad 'component_dim'")))? as usize),
        };
        if component_dim.is_some() && !open {
            return Err(err(format!("stratum '{name}': 'component_dim' given but not component_open")));
        }
        strata.push(Stratum { name, dim, component_dim: if open { Some(component_dim.unwrap_or(dim)) } else { None } });
    }
    let mut closure = Vec::new();
    if let Some(c) = obj.get("closure") {
        for (i, pair) in c.as_array().ok_or_else(|| err("'closure' must be an array"))?.iter().enumerate() {
            let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| err(format!("closure[{i}] must be a pair")))?;
            let a = p[0].as_str().ok_or_else(|| err(format!("closure[{i}][0] must be a string")))?;
            let b = p[1].as_str().ok_or_else(|| err(format!("closure[{i}][1] must be a string")))?;
            closure.push((a.to_string(), b.to_string()));
        }
    }
    let space = StratifiedSpace::new(strata, &closure)?;
    let mut chi = BTreeMap::new();
    if let Some(l) = obj.get("link_chi") {
        for (a, row) in as_object(l, "link_chi")? {
            let ia = space.index_of(a)?;
            for (b, val) in as_object(row, &format!("link_chi.{a}"))? {
                chi.insert((ia, space.index_of(b)?), integer_value(val, &format!("link_chi.{a}.{b}"))?);
            }
        }
    }
    let links = LinkData::new(&space, chi)?;
    let milnor = match obj.get("milnor_chi") {
        None | Some(Value::Null) => None,
        Some(m) => {
            let mo = as_object(m, "milnor_chi")?;
            let p = space.index_of(get_str(mo, "point_stratum")?)?;
            let mut values = BTreeMap::new();
            if let Some(vals) = mo.get("values") {
                for (s, val) in as_object(vals, "milnor_chi.values")? {
                    values.insert(space.index_of(s)?, integer_value(val, &format!("milnor_chi.values.{s}"))?);
                }
            }
            Some(MilnorData::new(&space, p, values)?)
        }
    };
    Ok(StratificationFile { space, links, milnor })
}

fn parse_query(v: &Value, space: &StratifiedSpace) -> Result<Query> {
    let q = as_object(v, "query")?;
    let point_stratum = match q.get("point_stratum") {
        None | Some(Value::Null) => None,
        Some(p) => {
            let p = p.as_str().ok_or_else(|| err("query.point_stratum must be a string"))?;
            space.index_of(p)?;
            Some(p.to_string())
        }
    };
    let function = match q.get("function") {
        None | Some(Value::Null) => None,
        Some(f) => {
            let fo = as_object(f, "query.function")?;
            let mut values = vec![None; space.len()];
            for (s, val) in fo {
                values[space.index_of(s)?] = Some(integer_value(val, &format!("query.function.{s}"))?);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| err(format!("query.function has no value for '{}'", space.stratum(i).name))))
                .collect::<Result<Vec<_>>>()?;
            Some(ConstructibleFunction { values })
        }
    };
    let shift = match q.get("shift") {
        None | Some(Value::Null) => None,
        Some(s) => Some(s.as_i64().ok_or_else(|| err("query.shift must be an integer"))?),
    };
    Ok(Query { point_stratum, function, shift })
}
