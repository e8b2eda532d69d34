//! Conormal cycles of the regular part of an affine variety, the image of
//! `d f̃`, and the conormal-regular critical locus.

use std::sync::Arc;

use num_traits::Zero;

use crate::cycles::{decompose_ideal, im_df_generators, ComponentCycle, CycleComponent};
use crate::error::{Error, Result};
use crate::factor::univariate::subsets;
use crate::poly::{Ideal, Point, Polynomial, Rational, VariableContext};

/// `X = V(generators)` together with an optional precomputed decomposition.
#[derive(Clone, Debug)]
pub struct VarietyPresentation {
    ctx: Arc<VariableContext>,
    generators: Vec<Polynomial>,
    components: Option<ComponentCycle>,
}

impl VarietyPresentation {
    pub fn new(ctx: &Arc<VariableContext>, generators: Vec<Polynomial>) -> Result<Self> {
        if ctx.is_cotangent() {
            return Err(Error::InvalidContext("a variety lives in the base block".into()));
        }
        if generators.iter().any(|g| g.is_zero()) {
            return Err(Error::Problem("variety generators must be nonzero".into()));
        }
        if generators.iter().any(|g| *g.context() != *ctx) {
            return Err(Error::ContextMismatch);
        }
        let x = VarietyPresentation { ctx: ctx.clone(), generators, components: None };
        if x.ideal().is_unit() {
            return Err(Error::UnitIdeal);
        }
        Ok(x)
    }

    pub fn parse<S: AsRef<str>>(ctx: &Arc<VariableContext>, gens: &[S]) -> Result<Self> {
        let gens = Ideal::parse(ctx, gens)?.generators().to_vec();
        Self::new(ctx, gens)
    }

    /// Attaches a decomposition; the primes must cut out the same set as the
    /// generators.
    pub fn with_components(mut self, comps: ComponentCycle) -> Result<Self> {
        if **comps.context() != *self.ctx {
            return Err(Error::ContextMismatch);
        }
        let i = self.ideal();
        let primes: Vec<&Ideal> = comps.components().iter().map(|c| &c.prime).collect();
        let Some(first) = primes.first() else {
            return Err(Error::Problem("empty component list".into()));
        };
        let inter = primes[1..].iter().fold((*first).clone(), |acc, p| acc.intersect(p));
        if !primes.iter().all(|p| p.contains_ideal(&i)) || !i.radical_contains_ideal(&inter) {
            return Err(Error::Problem("components do not match the variety".into()));
        }
        self.components = Some(comps);
        Ok(self)
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ctx, self.generators.clone())
    }

    /// Irreducible components, each with multiplicity one.
    pub fn components(&self, seed: u64) -> Result<ComponentCycle> {
        let c = match &self.components {
            Some(c) => c.clone(),
            None => decompose_ideal(&self.ideal(), seed)?,
        };
        Ok(c.with_unit_multiplicities())
    }

    pub fn vanishes_at(&self, p: &[Rational]) -> bool {
        self.generators.iter().all(|g| g.eval(p).is_zero())
    }
}

/// A function germ `f̃` at a base point.
#[derive(Clone, Debug)]
pub struct FunctionGerm {
    pub f: Polynomial,
    pub base_point: Point,
}

impl FunctionGerm {
    pub fn new(f: Polynomial, base_point: Point) -> Result<Self> {
        let n = f.context().arity();
        if base_point.len() != n {
            return Err(Error::PointArity { expected: n, got: base_point.len() });
        }
        Ok(FunctionGerm { f, base_point })
    }

    /// `f̃ - f̃(p)`.
    pub fn normalized(&self) -> Polynomial {
        let v = self.f.eval(&self.base_point);
        &self.f - &Polynomial::constant(self.f.context(), v)
    }
}

pub(crate) fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => unreachable!("empty matrix"),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let ctx = m[0][0].context();
            let mut acc = Polynomial::zero(ctx);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&sub);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// All nonzero `size × size` minors of `rows`. When `fixed_last` is set the
/// last row is used in every minor.
pub(crate) fn minors(rows: &[Vec<Polynomial>], size: usize, fixed_last: bool) -> Vec<Polynomial> {
    if rows.is_empty() || size == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let (pool, extra) = if fixed_last { (rows.len() - 1, 1) } else { (rows.len(), 0) };
    if size > ncols || size - extra > pool {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rs in subsets(pool, size - extra) {
        let mut chosen: Vec<&Vec<Polynomial>> = rs.iter().map(|&r| &rows[r]).collect();
        if fixed_last {
            chosen.push(&rows[rows.len() - 1]);
        }
        for cs in subsets(ncols, size) {
            let m: Vec<Vec<Polynomial>> = chosen.iter().map(|row| cs.iter().map(|&c| row[c].clone()).collect()).collect();
            let d = determinant(&m);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

pub(crate) fn jacobian(gens: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    gens.iter().map(|g| g.gradient()).collect()
}

/// `P + (c × c minors of the Jacobian of P)`, the classical singular ideal of
/// a prime of codimension `c`.
pub fn singular_ideal(prime: &Ideal, codim: usize) -> Ideal {
    if codim == 0 {
        return Ideal::unit(prime.context());
    }
    let gens = prime.gb().to_vec();
    prime.with(&minors(&jacobian(&gens), codim, false))
}

fn up_map(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).collect()
}

/// Conormal of the regular part of one irreducible component.
pub fn conormal_of_component(prime: &Ideal, seed: u64) -> Result<CycleComponent> {
    let base = prime.context();
    let cot = VariableContext::cotangent(base)?;
    let n = base.arity();
    let dim = prime.krull_dimension()?;
    let codim = n - dim;
    let up = up_map(n);
    let lifted = prime.remap(&cot, &up);
    let ideal = if codim == 0 {
        lifted.with(&(0..n).map(|i| Polynomial::var(&cot, cot.w(i))).collect::<Vec<_>>())
    } else {
        let gens: Vec<Polynomial> = prime.gb().iter().map(|g| g.remap(&cot, &up)).collect();
        let mut rows: Vec<Vec<Polynomial>> = gens.iter().map(|g| (0..n).map(|i| g.derivative(i)).collect()).collect();
        rows.push((0..n).map(|i| Polynomial::var(&cot, cot.w(i))).collect());
        let mut sing = lifted.with(&minors(&rows[..rows.len() - 1], codim, false));
        sing = sing.reduced();
        lifted.with(&minors(&rows, codim + 1, true)).saturate(&sing)
    };
    let d = decompose_ideal(&ideal, seed)?;
    let top: Vec<&CycleComponent> = d.components().iter().filter(|c| c.dim == n).collect();
    if top.len() != 1 || d.components().iter().any(|c| c.dim > n) {
        let dims: Vec<usize> = d.components().iter().map(|c| c.dim).collect();
        return Err(Error::Dimension(format!("conormal of {prime} has component dimensions {dims:?}, expected one of dimension {n}")));
    }
    let mut comp = top[0].clone();
    if comp.multiplicity != 1 {
        return Err(Error::Invariant(format!("conormal of {prime} carries multiplicity {}", comp.multiplicity)));
    }
    comp.certified &= !d.is_unverified();
    Ok(comp)
}

/// `Σ_i [closure of T*_{(X_i)_reg} U]` over the irreducible components of X.
pub fn conormal_cycle(x: &VarietyPresentation, seed: u64) -> Result<ComponentCycle> {
    let comps = x.components(seed)?;
    let cot = VariableContext::cotangent(x.context())?;
    let mut out = ComponentCycle::zero(&cot);
    if comps.is_unverified() {
        out.mark_incomplete();
    }
    for c in comps.components() {
        out = out.add(&ComponentCycle::from_component(conormal_of_component(&c.prime, seed)?));
    }
    Ok(out)
}

/// `(w_0 - ∂f̃/∂z_0, …, w_n - ∂f̃/∂z_n)` in the cotangent context of `f̃`.
pub fn im_df_ideal(f: &Polynomial) -> Result<Ideal> {
    let cot = VariableContext::cotangent(f.context())?;
    Ok(Ideal::new(&cot, im_df_generators(&cot, f)))
}

/// The point `(p, d_p f̃)`.
pub fn lifted_point(f: &Polynomial, p: &[Rational]) -> Point {
    let mut q: Point = p.to_vec();
    q.extend(f.gradient().iter().map(|g| g.eval(p)));
    q
}

/// `π(C ∩ im d f̃)` for a single conormal component, as an ideal in the base.
pub fn cnr_of_conormal(conormal: &Ideal, f: &Polynomial) -> Ideal {
    let cot = conormal.context();
    let base = f.context();
    let n = base.arity();
    let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(base, i)).collect();
    images.extend((0..n).map(|i| f.derivative(i)));
    debug_assert_eq!(cot.arity(), 2 * n);
    Ideal::new(base, conormal.generators().iter().map(|g| g.compose(base, &images)).collect()).reduced()
}

/// Σ_cnr as per-component ideals plus their intersection.
#[derive(Clone, Debug)]
pub struct CnrLocus {
    pub per_component: Vec<Ideal>,
    pub union: Ideal,
}

impl CnrLocus {
    pub fn from_parts(base: &Arc<VariableContext>, per_component: Vec<Ideal>) -> CnrLocus {
        let union = per_component.iter().fold(Ideal::unit(base), |acc, p| {
            if acc.is_unit() {
                p.clone()
            } else if p.is_unit() {
                acc
            } else {
                acc.intersect(p)
            }
        });
        CnrLocus { per_component, union: union.reduced() }
    }
}

pub fn cnr_critical_locus(x: &VarietyPresentation, f: &Polynomial, seed: u64) -> Result<CnrLocus> {
    if **f.context() != **x.context() {
        return Err(Error::ContextMismatch);
    }
    let conormal = conormal_cycle(x, seed)?;
    Ok(CnrLocus::from_parts(
        x.context(),
        conormal.components().iter().map(|c| cnr_of_conormal(&c.prime, f)).collect(),
    ))
}
