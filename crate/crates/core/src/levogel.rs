//! Lê–Vogel cycles and numbers, and the relative local Euler obstruction
//! assembled from them.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::conormal::{
    cnr_of_conormal, conormal_cycle, conormal_of_component, jacobian, lifted_point, minors, singular_ideal,
    VarietyPresentation,
};
use crate::cycles::{
    im_df_generators, intersect_hypersurface, local_intersection_number, pushforward_section, split_by_subvariety,
    ComponentCycle,
};
use crate::error::{Error, Result};
use crate::poly::{Ideal, Point, Polynomial, Rational};
use crate::primes::{local_dimension, minimal_primes};

#[derive(Clone, Debug)]
pub struct LeVogelTower {
    /// The function the tower was built for.
    pub f: Polynomial,
    pub conormal: ComponentCycle,
    pub gamma: BTreeMap<usize, ComponentCycle>,
    pub lambda_hat: BTreeMap<usize, ComponentCycle>,
    pub lambda: BTreeMap<usize, ComponentCycle>,
    pub top_dim: usize,
}

impl LeVogelTower {
    pub fn is_unverified(&self) -> bool {
        self.conormal.is_unverified()
            || self.gamma.values().chain(self.lambda_hat.values()).any(|c| c.is_unverified())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeVogelNumbers {
    pub values: BTreeMap<usize, u64>,
    pub point: Point,
    /// `dim_p Σ_cnr f`, absent when `p ∉ Σ_cnr f`.
    pub s: Option<usize>,
}

impl LeVogelNumbers {
    /// `Σ_k (-1)^k λ^k`.
    pub fn alternating_sum(&self) -> i64 {
        self.values.iter().map(|(k, v)| sign(*k) * *v as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted(String),
    Inapplicable(String),
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn build_tower(x: &VarietyPresentation, f: &Polynomial, seed: u64) -> Result<LeVogelTower> {
    if **f.context() != **x.context() {
        return Err(Error::ContextMismatch);
    }
    build_tower_from_conormal(&conormal_cycle(x, seed)?, f, seed)
}

/// Runs the downward induction starting from a given conormal cycle. The
/// step from level `k+1` to `k` cuts with `V(w_k - ∂f̃/∂z_k)`.
pub fn build_tower_from_conormal(conormal: &ComponentCycle, f: &Polynomial, seed: u64) -> Result<LeVogelTower> {
    let cot = conormal.context();
    if !cot.is_cotangent() || cot.base() != *f.context() {
        return Err(Error::ContextMismatch);
    }
    let n1 = cot.base_len();
    let gens = im_df_generators(cot, f);
    let imdf = Ideal::new(cot, gens.clone());
    let mut gamma = BTreeMap::new();
    let mut lambda_hat = BTreeMap::new();
    let mut lambda = BTreeMap::new();
    let (inside, outside) = split_by_subvariety(conormal, &imdf);
    lambda.insert(n1, pushforward_section(&inside, f)?);
    lambda_hat.insert(n1, inside);
    gamma.insert(n1, outside);
    for k in (0..n1).rev() {
        let cut = intersect_hypersurface(&gamma[&(k + 1)], &gens[k], seed)?;
        let (inside, outside) = split_by_subvariety(&cut, &imdf);
        lambda.insert(k, pushforward_section(&inside, f)?);
        lambda_hat.insert(k, inside);
        gamma.insert(k, outside);
    }
    Ok(LeVogelTower { f: f.clone(), conormal: conormal.clone(), gamma, lambda_hat, lambda, top_dim: n1 })
}

/// Σ_cnr of the tower's function on the tower's conormal cycle.
fn cnr_union(conormal: &ComponentCycle, f: &Polynomial) -> Ideal {
    let parts: Vec<Ideal> = conormal.components().iter().map(|c| cnr_of_conormal(&c.prime, f)).collect();
    crate::conormal::CnrLocus::from_parts(f.context(), parts).union
}

pub fn levogel_numbers(tower: &LeVogelTower, p: &[Rational]) -> Result<LeVogelNumbers> {
    let base = tower.f.context();
    if p.len() != base.arity() {
        return Err(Error::PointArity { expected: base.arity(), got: p.len() });
    }
    let s = local_dimension(&cnr_union(&tower.conormal, &tower.f), p)?;
    let mut values = BTreeMap::new();
    for (&k, cyc) in &tower.lambda {
        let slices: Vec<Polynomial> = (0..k.min(base.arity()))
            .map(|i| &Polynomial::var(base, i) - &Polynomial::constant(base, p[i].clone()))
            .collect();
        let v = local_intersection_number(cyc, &slices, p)?;
        if v < 0 {
            return Err(Error::Invariant(format!("negative Lê–Vogel number in dimension {k}")));
        }
        values.insert(k, v as u64);
    }
    if let Some((k, v)) = values.iter().find(|(k, v)| **v != 0 && s.is_none_or(|s| **k > s)) {
        return Err(Error::Invariant(format!("λ^{k} = {v} exceeds the dimension of Σ_cnr at the point")));
    }
    Ok(LeVogelNumbers { values, point: p.to_vec(), s })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `p` is not in Σ_cnr of the component.
    OutsideLocus,
    /// Intersection multiplicity of the conormal with `im d f̃` at the lifted point.
    Isolated,
    Tower,
}

#[derive(Clone, Debug)]
pub struct ComponentContribution {
    pub prime: Ideal,
    pub dim: usize,
    pub s: Option<usize>,
    pub method: Method,
    pub tower: Option<LeVogelTower>,
    pub numbers: Option<LeVogelNumbers>,
    pub value: i64,
}

#[derive(Clone, Debug)]
pub struct RelativeEu {
    pub value: i64,
    pub components: Vec<ComponentContribution>,
    pub prepolarity: Verdict,
    pub coordinates_verified: bool,
    pub decomposition_verified: bool,
}

fn check_inputs(x: &VarietyPresentation, f: &Polynomial, p: &[Rational]) -> Result<Polynomial> {
    let ctx = x.context();
    if **f.context() != **ctx {
        return Err(Error::ContextMismatch);
    }
    if p.len() != ctx.arity() {
        return Err(Error::PointArity { expected: ctx.arity(), got: p.len() });
    }
    if let Some(g) = x.generators().iter().find(|g| !g.eval(p).is_zero()) {
        return Err(Error::PointNotOnVariety(g.to_string()));
    }
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    Ok(f - &Polynomial::constant(ctx, f.eval(p)))
}

/// `(C · im d f̃)` at `(p, d_p f̃)` for one conormal component.
fn isolated_number(conormal: &Ideal, f: &Polynomial, p: &[Rational]) -> Result<u64> {
    let cot = conormal.context();
    let lifted = lifted_point(f, p);
    let j = conormal.with(&im_df_generators(cot, f));
    if !j.vanishes_at(&lifted) {
        return Ok(0);
    }
    j.local_colength(&lifted)
}

pub fn isolated_cnr_euler(x: &VarietyPresentation, f: &Polynomial, p: &[Rational], seed: u64) -> Result<i64> {
    let g = check_inputs(x, f, p)?;
    let mut total = 0;
    for comp in x.components(seed)?.components() {
        if !comp.prime.vanishes_at(p) {
            continue;
        }
        let c = conormal_of_component(&comp.prime, seed)?;
        total += sign(comp.dim) * isolated_number(&c.prime, &g, p)? as i64;
    }
    Ok(total)
}

pub fn relative_euler_obstruction_geometric(
    x: &VarietyPresentation,
    f: &Polynomial,
    p: &[Rational],
    seed: u64,
) -> Result<RelativeEu> {
    let g = check_inputs(x, f, p)?;
    let comps = x.components(seed)?;
    let prepolarity = prepolar_check_restricted(x, &g, p, seed)?;
    let mut decomposition_verified = !comps.is_unverified();
    let mut contributions = Vec::new();
    for comp in comps.components() {
        if !comp.prime.vanishes_at(p) {
            continue;
        }
        let c = conormal_of_component(&comp.prime, seed)?;
        decomposition_verified &= c.certified;
        let s = local_dimension(&cnr_of_conormal(&c.prime, &g), p)?;
        let mut entry = ComponentContribution {
            prime: comp.prime.clone(),
            dim: comp.dim,
            s,
            method: Method::OutsideLocus,
            tower: None,
            numbers: None,
            value: 0,
        };
        if s.is_some() {
            let conormal = ComponentCycle::from_component(c.clone());
            let tower = if s == Some(0) && prepolarity != Verdict::Verified {
                None
            } else {
                match build_tower_from_conormal(&conormal, &g, seed) {
                    Ok(t) => Some(t),
                    Err(Error::ImproperIntersection { .. }) if s == Some(0) => None,
                    Err(e) => return Err(e),
                }
            };
            match tower {
                Some(t) => {
                    let numbers = levogel_numbers(&t, p)?;
                    decomposition_verified &= !t.is_unverified();
                    entry.value = sign(comp.dim) * numbers.alternating_sum();
                    entry.method = Method::Tower;
                    entry.numbers = Some(numbers);
                    entry.tower = Some(t);
                }
                None => {
                    entry.value = sign(comp.dim) * isolated_number(&c.prime, &g, p)? as i64;
                    entry.method = Method::Isolated;
                }
            }
        }
        contributions.push(entry);
    }
    let coordinates_verified = prepolarity == Verdict::Verified || contributions.iter().all(|c| c.s.is_none_or(|s| s == 0));
    Ok(RelativeEu {
        value: contributions.iter().map(|c| c.value).sum(),
        components: contributions,
        prepolarity,
        coordinates_verified,
        decomposition_verified,
    })
}

fn punctured_empty(i: &Ideal, p: &[Rational]) -> Result<bool> {
    Ok(matches!(local_dimension(i, p)?, None | Some(0)))
}

fn saturate_unless_unit(i: Ideal, by: &Ideal) -> Ideal {
    if by.is_unit() {
        i
    } else {
        i.saturate(by)
    }
}

fn intersect_all(base: &std::sync::Arc<crate::poly::VariableContext>, parts: &[Ideal]) -> Ideal {
    parts.iter().filter(|p| !p.is_unit()).fold(Ideal::unit(base), |acc, p| if acc.is_unit() { p.clone() } else { acc.intersect(p) })
}

/// The prepolarity conditions near `p` when `dim_p Σ ≤ 1`, where `Σ` is the
/// singular locus of X together with the critical locus of `f̃` on the
/// regular part.
pub fn prepolar_check_restricted(x: &VarietyPresentation, f: &Polynomial, p: &[Rational], seed: u64) -> Result<Verdict> {
    let base = x.context();
    let n = base.arity();
    if p.len() != n {
        return Err(Error::PointArity { expected: n, got: p.len() });
    }
    let comps = x.components(seed)?;
    let through: Vec<_> = comps.components().iter().filter(|c| c.prime.vanishes_at(p)).collect();
    let codims: Vec<usize> = through.iter().map(|c| n - c.dim).collect();
    let sings: Vec<Ideal> = through.iter().zip(&codims).map(|(c, &k)| singular_ideal(&c.prime, k).reduced()).collect();

    let mut sx_parts: Vec<Ideal> = sings.clone();
    for i in 0..through.len() {
        for j in i + 1..through.len() {
            sx_parts.push(through[i].prime.sum(&through[j].prime));
        }
    }
    let sigma_x = intersect_all(base, &sx_parts);

    let grad: Vec<Polynomial> = f.gradient();
    let mut crit_parts = Vec::new();
    for (k, c) in through.iter().enumerate() {
        let mut rows = jacobian(&c.prime.gb());
        rows.push(grad.clone());
        let mut crit = c.prime.with(&minors(&rows, codims[k] + 1, true));
        crit = saturate_unless_unit(crit, &sings[k]);
        for (j, o) in through.iter().enumerate() {
            if j != k {
                crit = crit.saturate(&o.prime);
            }
        }
        crit_parts.push(crit);
    }
    let mut all = sx_parts.clone();
    all.extend(crit_parts.iter().cloned());
    let sigma = intersect_all(base, &all);

    let ld = local_dimension(&sigma, p)?;
    if ld.is_some_and(|d| d > 1) {
        return Ok(Verdict::Inapplicable(format!("Σ has dimension {} at the point", ld.unwrap_or(0))));
    }

    let lin: Vec<Polynomial> =
        (0..n).map(|i| &Polynomial::var(base, i) - &Polynomial::constant(base, p[i].clone())).collect();
    if !sigma.is_unit() {
        for q in minimal_primes(&sigma)?.primes {
            if q.ideal.vanishes_at(p) && q.ideal.krull_dimension()? >= 1 && q.ideal.contains(&lin[0]) {
                return Ok(Verdict::Refuted(format!("V({}) contains the component V{} of Σ", lin[0], q.ideal)));
            }
        }
    }

    for (k, c) in through.iter().enumerate() {
        for i in 0..c.dim {
            let slice = &lin[..=i];
            let sliced = c.prime.with(slice);
            let expected = c.dim - i - 1;
            let got = local_dimension(&sliced, p)?;
            if got != Some(expected) {
                return Ok(Verdict::Refuted(format!(
                    "V({}) meets V{} in dimension {:?} instead of {expected}",
                    slice.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "),
                    c.prime,
                    got
                )));
            }
            let cs = codims[k] + i + 1;
            let mut gens = c.prime.gb().to_vec();
            gens.extend(slice.iter().cloned());
            let jac = jacobian(&gens);
            let sing_slice = sliced.with(&minors(&jac, cs, false));
            let bad = saturate_unless_unit(sing_slice, &sigma_x.with(slice));
            if !punctured_empty(&bad, p)? {
                return Ok(Verdict::Refuted(format!(
                    "the slice by the first {} coordinates is not transverse to the regular part of V{}",
                    i + 1,
                    c.prime
                )));
            }
            let mut rows = jac;
            rows.push(grad.clone());
            let mut crit = saturate_unless_unit(sliced.with(&minors(&rows, cs + 1, true)), &sings[k]);
            for (j, o) in through.iter().enumerate() {
                if j != k {
                    crit = crit.saturate(&o.prime);
                }
            }
            if !punctured_empty(&crit, p)? {
                return Ok(Verdict::Refuted(format!(
                    "the function has critical points on the regular part of V{} sliced by the first {} coordinates",
                    c.prime,
                    i + 1
                )));
            }
        }
    }
    Ok(Verdict::Verified)
}
