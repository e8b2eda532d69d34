//! Minimal primes by a splitting loop, with primality certificates given by
//! triangular charts.
//!
//! A chart certifies that an ideal `P` is prime: `P` contains `c·v + r` with
//! `v` absent from `c` and `r`, `c` is not in `P' = P ∩ k[x ∖ v]`,
//! `P = (P' + (c·v + r)) : c^∞`, and `P'` is certified recursively. The
//! recursion ends at the zero ideal or at a principal ideal with an
//! irreducible generator. Charts also produce rational points of `V(P)`.

use std::collections::HashSet;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::{factor, is_irreducible, rational_roots};
use crate::poly::{Ideal, MonomialOrder, Point, Polynomial, Rational};

#[derive(Clone, Debug)]
pub struct ChartStep {
    pub var: usize,
    pub coeff: Polynomial,
    pub rest: Polynomial,
}

#[derive(Clone, Debug)]
pub enum ChartBase {
    Free,
    Hypersurface(Polynomial),
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub arity: usize,
    pub steps: Vec<ChartStep>,
    pub base: ChartBase,
}

const POINT_ATTEMPTS: u32 = 300;
const SPLIT_BUDGET: usize = 400;
const MAX_CANDIDATES: usize = 16;

impl Chart {
    /// A random rational point of `V(P)` with all step coefficients nonzero.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Option<Point> {
        let n = self.arity;
        let step_vars: Vec<usize> = self.steps.iter().map(|s| s.var).collect();
        'attempt: for attempt in 0..POINT_ATTEMPTS {
            let range = 4 + (attempt / 8) as i64;
            let draw = |rng: &mut ChaCha8Rng| Rational::from_integer(rng.gen_range(-range..=range).into());
            let mut pt: Vec<Option<Rational>> = vec![None; n];
            match &self.base {
                ChartBase::Free => {
                    for (i, slot) in pt.iter_mut().enumerate() {
                        if !step_vars.contains(&i) {
                            *slot = Some(draw(rng));
                        }
                    }
                }
                ChartBase::Hypersurface(h) => {
                    let hv = h.variables();
                    let u = hv[attempt as usize % hv.len()];
                    for (i, slot) in pt.iter_mut().enumerate() {
                        if !step_vars.contains(&i) && i != u {
                            *slot = Some(draw(rng));
                        }
                    }
                    let mut spec = h.clone();
                    for &v in &hv {
                        if v != u {
                            spec = spec.specialize(v, pt[v].as_ref().unwrap());
                        }
                    }
                    let roots = rational_roots(&spec, u);
                    if roots.is_empty() {
                        continue;
                    }
                    pt[u] = Some(roots[rng.gen_range(0..roots.len())].clone());
                    let full = fill(&pt);
                    if h.gradient().iter().all(|g| g.eval(&full).is_zero()) {
                        continue;
                    }
                }
            }
            for step in self.steps.iter().rev() {
                let full = fill(&pt);
                let c = step.coeff.eval(&full);
                if c.is_zero() {
                    continue 'attempt;
                }
                pt[step.var] = Some(-step.rest.eval(&full) / c);
            }
            return Some(fill(&pt));
        }
        None
    }
}

fn fill(pt: &[Option<Rational>]) -> Point {
    pt.iter().map(|v| v.clone().unwrap_or_else(Rational::zero)).collect()
}

struct Candidate {
    g: Polynomial,
    var: usize,
    coeff: Polynomial,
    rest: Polynomial,
}

/// A primality certificate for `p`, if the chart rule finds one.
pub fn certify_prime(p: &Ideal) -> Option<Chart> {
    let n = p.context().arity();
    if p.is_unit() {
        return None;
    }
    let gb = p.gb();
    if gb.is_empty() {
        return Some(Chart { arity: n, steps: Vec::new(), base: ChartBase::Free });
    }
    if gb.len() == 1 {
        return match is_irreducible(&gb[0]) {
            Some(true) => Some(Chart { arity: n, steps: Vec::new(), base: ChartBase::Hypersurface(gb[0].clone()) }),
            _ => None,
        };
    }
    let mut cands: Vec<Candidate> = Vec::new();
    let mut seen: HashSet<(String, usize)> = HashSet::new();
    for ord in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
        let basis = if ord == MonomialOrder::Lex && cands.iter().any(|c| c.coeff.is_constant()) {
            continue;
        } else {
            p.groebner_basis(ord)
        };
        for g in basis.iter() {
            for v in g.variables() {
                if g.degree_in(v) != 1 {
                    continue;
                }
                if !seen.insert((g.to_string(), v)) {
                    continue;
                }
                let cs = g.coefficients_in(v);
                cands.push(Candidate { g: g.clone(), var: v, coeff: cs[1].clone(), rest: cs[0].clone() });
            }
        }
    }
    cands.sort_by_key(|c| (!c.coeff.is_constant(), c.coeff.num_terms(), c.coeff.total_degree(), c.g.num_terms()));
    for c in cands.into_iter().take(MAX_CANDIDATES) {
        let sub = if c.coeff.is_constant() {
            let inv = -c.coeff.constant_term().recip();
            let image = c.rest.scale(&inv);
            let gens = gb.iter().map(|h| h.substitute(c.var, &image)).collect();
            Ideal::new(p.context(), gens).reduced()
        } else {
            let sub = p.eliminate(&[c.var]);
            if sub.contains(&c.coeff) {
                continue;
            }
            if !sub.with(&[c.g.clone()]).saturate_by(&c.coeff).equals(p) {
                continue;
            }
            sub
        };
        if let Some(mut chart) = certify_prime(&sub) {
            chart.steps.insert(0, ChartStep { var: c.var, coeff: c.coeff, rest: c.rest });
            return Some(chart);
        }
    }
    None
}

pub struct PrimeLeaf {
    pub ideal: Ideal,
    pub chart: Option<Chart>,
}

pub struct MinimalPrimes {
    pub primes: Vec<PrimeLeaf>,
    /// False when some leaf could not be certified prime.
    pub complete: bool,
}

fn split(j: &Ideal) -> Option<Vec<Ideal>> {
    for ord in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
        for g in j.groebner_basis(ord).iter() {
            let fz = factor(g);
            if fz.factors.len() == 1 && fz.factors[0].1 == 1 {
                continue;
            }
            for (f, _) in &fz.factors {
                let b1 = j.with(&[f.clone()]).reduced();
                if b1.equals(j) {
                    continue;
                }
                let b2 = j.saturate_by(f);
                if b2.equals(j) {
                    continue;
                }
                return Some(vec![b1, b2]);
            }
        }
    }
    for g in j.gb().iter() {
        for v in g.variables() {
            let c = g.coefficients_in(v).pop().expect("nonempty");
            if c.is_constant() {
                continue;
            }
            let b1 = j.with(&[c.clone()]).reduced();
            if b1.equals(j) {
                continue;
            }
            let b2 = j.saturate_by(&c);
            if b2.equals(j) {
                continue;
            }
            return Some(vec![b1, b2]);
        }
    }
    None
}

/// Minimal primes of `i`, sorted canonically.
pub fn minimal_primes(i: &Ideal) -> Result<MinimalPrimes> {
    if i.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let mut stack = vec![i.reduced()];
    let mut visited: HashSet<String> = HashSet::new();
    let mut leaves: Vec<PrimeLeaf> = Vec::new();
    let mut complete = true;
    let mut budget = SPLIT_BUDGET;
    while let Some(j) = stack.pop() {
        if j.is_unit() || !visited.insert(j.canonical_key()) {
            continue;
        }
        if budget == 0 {
            complete = false;
            leaves.push(PrimeLeaf { ideal: j, chart: None });
            continue;
        }
        budget -= 1;
        if let Some(chart) = certify_prime(&j) {
            leaves.push(PrimeLeaf { ideal: j, chart: Some(chart) });
            continue;
        }
        match split(&j) {
            Some(branches) => stack.extend(branches),
            None => {
                complete = false;
                leaves.push(PrimeLeaf { ideal: j, chart: None });
            }
        }
    }
    let mut keep = vec![true; leaves.len()];
    for a in 0..leaves.len() {
        for b in 0..leaves.len() {
            if a == b || !keep[b] || !keep[a] {
                continue;
            }
            if leaves[a].ideal.contains_ideal(&leaves[b].ideal) {
                keep[a] = false;
            }
        }
    }
    let mut primes: Vec<PrimeLeaf> = leaves.into_iter().zip(keep).filter(|(_, k)| *k).map(|(l, _)| l).collect();
    primes.sort_by_key(|l| l.ideal.canonical_key());
    Ok(MinimalPrimes { primes, complete })
}

/// `dim_p V(I)`, or `None` when `p ∉ V(I)`.
pub fn local_dimension(i: &Ideal, p: &[Rational]) -> Result<Option<usize>> {
    if i.is_unit() || !i.vanishes_at(p) {
        return Ok(None);
    }
    let mp = minimal_primes(i)?;
    let mut best = None;
    for leaf in mp.primes.iter().filter(|l| l.ideal.vanishes_at(p)) {
        let d = leaf.ideal.krull_dimension()?;
        best = Some(best.map_or(d, |b: usize| b.max(d)));
    }
    Ok(best)
}
