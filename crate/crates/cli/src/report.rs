//! Command dispatch and report assembly.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use eulob::conormal::{cnr_critical_locus, conormal_cycle, FunctionGerm};
use eulob::cycles::ComponentCycle;
use eulob::levogel::{
    build_tower, isolated_cnr_euler, levogel_numbers, prepolar_check_restricted, relative_euler_obstruction_geometric,
    LeVogelNumbers, LeVogelTower,
};
use eulob::poly::format_rational;
use eulob::primes::local_dimension;
use eulob::problem::{GeometricProblem, ProblemFile, StratificationFile, StratifiedProblem};
use eulob::strat::{
    cc_of_function, characteristic_function, euler_obstruction_links, function_from_cc, nearby_vanishing_chi,
    relative_euler_obstruction_chi, shift, ConstructibleFunction, StratifiedSpace,
};
use eulob::{Error, Ideal, MonomialOrder, Result};

use crate::Command;

pub struct Options {
    pub seed: Option<u64>,
    pub order: MonomialOrder,
    pub input: String,
}

pub struct Report {
    pub body: Value,
    /// No "coordinates unverified" or "decomposition incomplete" flag.
    pub verified: bool,
}

fn int_json(n: &impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn ideal_json(i: &Ideal, ord: MonomialOrder) -> Value {
    json!(i.groebner_basis(ord).iter().map(|g| g.to_string()).collect::<Vec<_>>())
}

fn cycle_json(c: &ComponentCycle, ord: MonomialOrder) -> Value {
    serde_json::to_value(c.to_serial(ord)).expect("cycle serializes")
}

fn tower_json(t: &LeVogelTower, ord: MonomialOrder) -> Value {
    let levels: Vec<Value> = (0..=t.top_dim)
        .rev()
        .map(|k| {
            json!({
                "k": k,
                "gamma_hat": cycle_json(&t.gamma[&k], ord),
                "lambda_hat": cycle_json(&t.lambda_hat[&k], ord),
                "lambda": cycle_json(&t.lambda[&k], ord),
            })
        })
        .collect();
    json!({
        "top_dim": t.top_dim,
        "cotangent_variables": t.conormal.context().names(),
        "levels": levels,
    })
}

fn numbers_json(n: &LeVogelNumbers) -> Value {
    let values: Map<String, Value> = n.values.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({ "values": values, "s": n.s })
}

fn header(cmd: Command, opts: &Options, seed: u64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(cmd.name()));
    m.insert("input".into(), json!(opts.input));
    m.insert("seed".into(), json!(seed));
    m.insert(
        "order".into(),
        json!(match opts.order {
            MonomialOrder::Lex => "lex",
            _ => "grevlex",
        }),
    );
    m
}

fn finish(mut body: Map<String, Value>, verified: bool) -> Report {
    body.insert("status".into(), json!(if verified { "verified" } else { "unverified" }));
    Report { body: Value::Object(body), verified }
}

pub fn run(cmd: Command, problem: &ProblemFile, opts: &Options) -> Result<Report> {
    match (cmd, problem) {
        (Command::StratEu | Command::StratEuRel | Command::Cc, ProblemFile::Stratified(p)) => run_strat(cmd, p, opts),
        (Command::StratEu | Command::StratEuRel | Command::Cc, ProblemFile::Geometric(_)) => {
            Err(Error::Problem(format!("command '{}' needs a stratified problem file", cmd.name())))
        }
        (_, ProblemFile::Geometric(p)) => run_geometric(cmd, p, opts),
        (_, ProblemFile::Stratified(_)) => {
            Err(Error::Problem(format!("command '{}' needs a geometric problem file", cmd.name())))
        }
    }
}

fn run_geometric(cmd: Command, p: &GeometricProblem, opts: &Options) -> Result<Report> {
    let seed = opts.seed.or(p.seed).unwrap_or(0);
    let ord = opts.order;
    let mut body = header(cmd, opts, seed);
    body.insert("variables".into(), json!(p.context.names()));
    body.insert("generators".into(), json!(p.variety.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>()));
    body.insert("function".into(), json!(p.function.to_string()));
    body.insert("point".into(), json!(p.point.iter().map(format_rational).collect::<Vec<_>>()));
    let x = &p.variety;
    let comps = x.components(seed)?;
    body.insert(
        "components".into(),
        json!(comps.components().iter().map(|c| json!({"ideal": ideal_json(&c.prime, ord), "dim": c.dim})).collect::<Vec<_>>()),
    );
    match cmd {
        Command::Conormal => {
            let c = conormal_cycle(x, seed)?;
            body.insert("cotangent_variables".into(), json!(c.context().names()));
            body.insert("conormal".into(), cycle_json(&c, ord));
            let ok = !c.is_unverified();
            Ok(finish(body, ok))
        }
        Command::SigmaCnr => {
            let locus = cnr_critical_locus(x, &p.function, seed)?;
            let s = local_dimension(&locus.union, &p.point)?;
            body.insert(
                "sigma_cnr".into(),
                json!({
                    "per_component": locus.per_component.iter().map(|i| ideal_json(i, ord)).collect::<Vec<_>>(),
                    "union": ideal_json(&locus.union, ord),
                    "dimension_at_point": s,
                }),
            );
            Ok(finish(body, !comps.is_unverified()))
        }
        Command::Levogel => {
            let germ = FunctionGerm::new(p.function.clone(), p.point.clone())?;
            if p.function.is_constant() {
                return Err(Error::ConstantFunction);
            }
            let g = germ.normalized();
            let tower = build_tower(x, &g, seed)?;
            let numbers = levogel_numbers(&tower, &p.point)?;
            let verdict = prepolar_check_restricted(x, &g, &p.point, seed)?;
            let verified = verdict == eulob::levogel::Verdict::Verified && !tower.is_unverified();
            body.insert("tower".into(), tower_json(&tower, ord));
            body.insert("levogel_numbers".into(), numbers_json(&numbers));
            body.insert("prepolarity".into(), serde_json::to_value(&verdict).expect("verdict serializes"));
            Ok(finish(body, verified))
        }
        Command::EuRel => match relative_euler_obstruction_geometric(x, &p.function, &p.point, seed) {
            Ok(r) => {
                let comps: Vec<Value> = r
                    .components
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("ideal".into(), ideal_json(&c.prime, ord));
                        m.insert("dim".into(), json!(c.dim));
                        m.insert("s".into(), json!(c.s));
                        m.insert("method".into(), serde_json::to_value(c.method).expect("method serializes"));
                        m.insert("value".into(), json!(c.value));
                        if let Some(t) = &c.tower {
                            m.insert("tower".into(), tower_json(t, ord));
                        }
                        if let Some(n) = &c.numbers {
                            m.insert("levogel_numbers".into(), numbers_json(n));
                        }
                        Value::Object(m)
                    })
                    .collect();
                body.insert("eu".into(), json!(r.value));
                body.insert("contributions".into(), json!(comps));
                body.insert("prepolarity".into(), serde_json::to_value(&r.prepolarity).expect("verdict serializes"));
                body.insert(
                    "flags".into(),
                    json!({
                        "coordinates_verified": r.coordinates_verified,
                        "decomposition_verified": r.decomposition_verified,
                    }),
                );
                Ok(finish(body, r.coordinates_verified && r.decomposition_verified))
            }
            Err(Error::ConstantFunction) => {
                let (Some(strat), Some(ps)) = (&p.stratification, &p.point_stratum) else {
                    return Err(Error::Problem(
                        "the function is constant; supply 'stratification' and 'point_stratum' to compute Eu_p X".into(),
                    ));
                };
                let eu = euler_obstruction_links(&strat.space, &strat.links)?;
                let i = strat.space.index_of(ps)?;
                body.insert("eu".into(), int_json(&eu.values[i]));
                body.insert("method".into(), json!("constant function: Eu of the variety from stratification data"));
                body.insert("point_stratum".into(), json!(ps));
                Ok(finish(body, true))
            }
            Err(e) => Err(e),
        },
        Command::EuRelIsolated => {
            let v = isolated_cnr_euler(x, &p.function, &p.point, seed)?;
            body.insert("eu".into(), json!(v));
            Ok(finish(body, !comps.is_unverified()))
        }
        Command::StratEu | Command::StratEuRel | Command::Cc => unreachable!("dispatched to the stratified runner"),
    }
}

fn function_json(space: &StratifiedSpace, f: &[eulob::strat::BigInt]) -> Value {
    let m: Map<String, Value> = space.strata().iter().zip(f).map(|(s, v)| (s.name.clone(), int_json(v))).collect();
    Value::Object(m)
}

fn run_strat(cmd: Command, p: &StratifiedProblem, opts: &Options) -> Result<Report> {
    let StratificationFile { space, links, milnor } = &p.stratification;
    let mut body = header(cmd, opts, opts.seed.unwrap_or(0));
    body.insert("strata".into(), json!(space.strata().iter().map(|s| s.name.clone()).collect::<Vec<_>>()));
    let eu = euler_obstruction_links(space, links)?;
    match cmd {
        Command::StratEu => {
            let k = characteristic_function(space, links)?;
            if k != eu {
                return Err(Error::Invariant("characteristic function differs from the link recursion".into()));
            }
            body.insert("eu".into(), function_json(space, &eu.values));
            if let Some(ps) = &p.query.point_stratum {
                body.insert("eu_point".into(), int_json(&eu.values[space.index_of(ps)?]));
            }
            Ok(finish(body, true))
        }
        Command::StratEuRel => {
            let m = milnor.as_ref().ok_or_else(|| Error::Problem("strat-eu-rel needs 'milnor_chi'".into()))?;
            let v = relative_euler_obstruction_chi(space, links, m)?;
            let (psi, phi) = nearby_vanishing_chi(space, &eu, m)?;
            body.insert("point_stratum".into(), json!(space.stratum(m.point_stratum).name));
            body.insert("eu_rel".into(), int_json(&v));
            body.insert("eu".into(), function_json(space, &eu.values));
            body.insert("nearby_chi_of_eu".into(), int_json(&psi));
            body.insert("vanishing_chi_of_eu".into(), int_json(&phi));
            Ok(finish(body, true))
        }
        Command::Cc => {
            let alpha = p.query.function.clone().unwrap_or_else(|| ConstructibleFunction::constant(space, 1));
            let c = cc_of_function(space, links, &alpha)?;
            if function_from_cc(space, links, &c)? != alpha {
                return Err(Error::Invariant("BDK transform does not invert the coefficient map".into()));
            }
            body.insert("function".into(), function_json(space, &alpha.values));
            body.insert("cc".into(), function_json(space, &c.coeffs));
            if let Some(j) = p.query.shift {
                body.insert("shift".into(), json!(j));
                body.insert("cc_shifted".into(), function_json(space, &shift(&c, j).coeffs));
            }
            Ok(finish(body, true))
        }
        _ => unreachable!("dispatched to the geometric runner"),
    }
}

/// One `key: value` line per top-level field.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k}: {s}");
        }
    }
    out
}
