//! Formal integer combinations of irreducible subvarieties.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::poly::{parse_polynomial, Ideal, MonomialOrder, Point, Polynomial, Rational, VariableContext};
use crate::primes::{certify_prime, minimal_primes, Chart, PrimeLeaf};

/// Second seed derived from the user seed for the genericity double-check.
pub fn companion_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

#[derive(Clone, Debug)]
pub struct CycleComponent {
    pub prime: Ideal,
    pub multiplicity: i64,
    pub dim: usize,
    /// The prime carries a primality certificate.
    pub certified: bool,
    pub chart: Option<Chart>,
}

#[derive(Clone, Debug)]
pub struct ComponentCycle {
    ctx: Arc<VariableContext>,
    components: Vec<CycleComponent>,
    incomplete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialComponent {
    pub generators: Vec<String>,
    pub multiplicity: i64,
}

impl ComponentCycle {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        ComponentCycle { ctx: ctx.clone(), components: Vec::new(), incomplete: false }
    }

    /// A single prime with the given multiplicity. The prime is certified on
    /// the spot when possible.
    pub fn from_prime(prime: Ideal, multiplicity: i64) -> Result<Self> {
        let ctx = prime.context().clone();
        let prime = prime.reduced();
        let dim = prime.krull_dimension()?;
        let chart = certify_prime(&prime);
        let mut c = ComponentCycle::zero(&ctx);
        c.push(CycleComponent { prime, multiplicity, dim, certified: chart.is_some(), chart });
        Ok(c)
    }

    pub fn from_component(comp: CycleComponent) -> Self {
        let mut c = ComponentCycle::zero(comp.prime.context());
        c.push(comp);
        c
    }

    /// Same components, all with multiplicity one.
    pub fn with_unit_multiplicities(&self) -> ComponentCycle {
        let mut out = self.clone();
        for c in out.components.iter_mut() {
            c.multiplicity = 1;
        }
        out
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn components(&self) -> &[CycleComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Decomposition could not certify every component.
    pub fn is_unverified(&self) -> bool {
        self.incomplete || self.components.iter().any(|c| !c.certified)
    }

    pub(crate) fn mark_incomplete(&mut self) {
        self.incomplete = true;
    }

    /// Common dimension of the components, if any and if pure.
    pub fn pure_dim(&self) -> Option<usize> {
        let d = self.components.first()?.dim;
        self.components.iter().all(|c| c.dim == d).then_some(d)
    }

    fn push(&mut self, comp: CycleComponent) {
        if comp.multiplicity == 0 {
            return;
        }
        if let Some(existing) = self.components.iter_mut().find(|c| c.prime.equals(&comp.prime)) {
            existing.multiplicity += comp.multiplicity;
            existing.certified &= comp.certified;
            self.components.retain(|c| c.multiplicity != 0);
            return;
        }
        self.components.push(comp);
        self.components.sort_by_key(|c| c.prime.canonical_key());
    }

    pub fn add(&self, other: &ComponentCycle) -> ComponentCycle {
        let mut out = self.clone();
        out.incomplete |= other.incomplete;
        for c in &other.components {
            out.push(c.clone());
        }
        out
    }

    pub fn scaled(&self, m: i64) -> ComponentCycle {
        let mut out = self.clone();
        if m == 0 {
            out.components.clear();
        }
        for c in out.components.iter_mut() {
            c.multiplicity *= m;
        }
        out
    }

    /// Componentwise equality up to reduced-basis equality of primes.
    pub fn same_as(&self, other: &ComponentCycle) -> bool {
        *self.ctx == *other.ctx
            && self.components.len() == other.components.len()
            && self.components.iter().all(|c| {
                other.components.iter().any(|d| d.multiplicity == c.multiplicity && d.prime.equals(&c.prime))
            })
    }

    pub fn to_serial(&self, ord: MonomialOrder) -> Vec<SerialComponent> {
        self.components
            .iter()
            .map(|c| SerialComponent {
                generators: c.prime.groebner_basis(ord).iter().map(|g| g.to_string()).collect(),
                multiplicity: c.multiplicity,
            })
            .collect()
    }

    pub fn from_serial(ctx: &Arc<VariableContext>, items: &[SerialComponent]) -> Result<ComponentCycle> {
        let mut out = ComponentCycle::zero(ctx);
        for it in items {
            let gens = it.generators.iter().map(|s| parse_polynomial(ctx, s)).collect::<Result<Vec<_>>>()?;
            out = out.add(&ComponentCycle::from_prime(Ideal::new(ctx, gens), it.multiplicity)?);
        }
        Ok(out)
    }
}

impl fmt::Display for ComponentCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·V{}", c.multiplicity, c.prime)?;
        }
        Ok(())
    }
}

fn random_affine_slices(pt: &[Rational], count: usize, ctx: &Arc<VariableContext>, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    (0..count)
        .map(|_| {
            let mut l = Polynomial::zero(ctx);
            for (i, x) in pt.iter().enumerate() {
                let a = Rational::from_integer(rng.gen_range(-9i64..=9).into());
                let term = &Polynomial::var(ctx, i) - &Polynomial::constant(ctx, x.clone());
                l = &l + &term.scale(&a);
            }
            l
        })
        .collect()
}

/// Multiplicity of `i` along `p` by generic slicing at a random point of `p`.
fn slice_multiplicity(i: &Ideal, p: &Ideal, dim: usize, chart: &Chart, others: &[&Ideal], seed: u64) -> Option<Result<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..6 {
        let pt: Point = chart.random_point(&mut rng)?;
        if !p.vanishes_at(&pt) || others.iter().any(|o| o.vanishes_at(&pt)) {
            continue;
        }
        let slices = random_affine_slices(&pt, dim, i.context(), &mut rng);
        match i.with(&slices).local_colength(&pt) {
            Ok(v) => return Some(Ok(v)),
            Err(Error::NotIsolated) => continue,
            Err(e) => return Some(Err(e)),
        }
    }
    None
}

/// Multiplicity of `i` along `p` as a ratio of Hilbert degrees after
/// removing the other minimal primes by saturation.
pub fn degree_multiplicity(i: &Ideal, p: &Ideal, others: &[&Ideal]) -> Result<u64> {
    let ctx = i.context();
    let mut g = Polynomial::one(ctx);
    for o in others {
        let h = o
            .gb()
            .iter()
            .find(|h| !p.contains(h))
            .cloned()
            .ok_or_else(|| Error::Invariant(format!("prime {o} contains {p}")))?;
        g = &g * &h;
    }
    let q = if g.is_constant() { i.clone() } else { i.saturate_by(&g) };
    let hq = q.hilbert()?;
    let hp = p.hilbert()?;
    if hq.dim != hp.dim {
        return Err(Error::Invariant(format!("saturation left dimension {} for a prime of dimension {}", hq.dim, hp.dim)));
    }
    let (m, r) = hq.degree.div_rem(&hp.degree);
    if !r.is_zero() || m <= BigInt::zero() {
        return Err(Error::Invariant("degree ratio is not a positive integer".into()));
    }
    m.to_u64().ok_or_else(|| Error::Limit("multiplicity too large".into()))
}

fn multiplicity(i: &Ideal, leaf: &PrimeLeaf, dim: usize, others: &[&Ideal], seed: u64) -> Result<u64> {
    if i.equals(&leaf.ideal) {
        return Ok(1);
    }
    if let Some(chart) = &leaf.chart {
        let a = slice_multiplicity(i, &leaf.ideal, dim, chart, others, seed);
        let b = slice_multiplicity(i, &leaf.ideal, dim, chart, others, companion_seed(seed));
        match (a, b) {
            (Some(a), Some(b)) => {
                let (a, b) = (a?, b?);
                if a != b {
                    return Err(Error::MultiplicityMismatch {
                        component: leaf.ideal.to_string(),
                        first: a.to_string(),
                        second: b.to_string(),
                    });
                }
                return Ok(a);
            }
            (Some(a), None) | (None, Some(a)) => return a,
            (None, None) => {}
        }
    }
    degree_multiplicity(i, &leaf.ideal, others)
}

/// The cycle `Σ mult_P(I)·[P]` over the minimal primes `P` of `I`.
pub fn decompose_ideal(i: &Ideal, seed: u64) -> Result<ComponentCycle> {
    let ctx = i.context().clone();
    let mp = minimal_primes(i)?;
    let gb = i.gb();
    let principal = if gb.len() == 1 { Some(factor(&gb[0])) } else { None };
    let mut out = ComponentCycle::zero(&ctx);
    if !mp.complete {
        out.mark_incomplete();
    }
    for (k, leaf) in mp.primes.iter().enumerate() {
        let dim = leaf.ideal.krull_dimension()?;
        let others: Vec<&Ideal> = mp.primes.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, l)| &l.ideal).collect();
        let from_factor = principal.as_ref().and_then(|fz| {
            fz.factors
                .iter()
                .find(|(f, _)| Ideal::new(&ctx, vec![f.clone()]).equals(&leaf.ideal))
                .map(|(_, e)| *e as u64)
        });
        let m = match from_factor {
            Some(e) => e,
            None => multiplicity(i, leaf, dim, &others, seed)?,
        };
        out.push(CycleComponent {
            prime: leaf.ideal.clone(),
            multiplicity: m as i64,
            dim,
            certified: leaf.chart.is_some(),
            chart: leaf.chart.clone(),
        });
    }
    Ok(out)
}

/// `C · V(h)` for a hypersurface meeting every component properly.
pub fn intersect_hypersurface(c: &ComponentCycle, h: &Polynomial, seed: u64) -> Result<ComponentCycle> {
    let mut out = ComponentCycle::zero(c.context());
    out.incomplete = c.incomplete;
    for comp in &c.components {
        if comp.prime.contains(h) {
            return Err(Error::ImproperIntersection { component: comp.prime.to_string(), hypersurface: h.to_string() });
        }
        let j = comp.prime.with(&[h.clone()]);
        if j.is_unit() {
            continue;
        }
        let d = decompose_ideal(&j, seed)?;
        if let Some(bad) = d.components.iter().find(|x| x.dim + 1 != comp.dim) {
            return Err(Error::Invariant(format!(
                "component {} of the intersection has dimension {}, expected {}",
                bad.prime,
                bad.dim,
                comp.dim - 1
            )));
        }
        out = out.add(&d.scaled(comp.multiplicity));
    }
    Ok(out)
}

/// Splits `C` into the components containing `V(J)`'s ideal (`J ⊆ P`) and
/// the rest.
pub fn split_by_subvariety(c: &ComponentCycle, j: &Ideal) -> (ComponentCycle, ComponentCycle) {
    let mut inside = ComponentCycle::zero(c.context());
    let mut outside = ComponentCycle::zero(c.context());
    inside.incomplete = c.incomplete;
    outside.incomplete = c.incomplete;
    for comp in &c.components {
        if comp.prime.contains_ideal(j) {
            inside.components.push(comp.clone());
        } else {
            outside.components.push(comp.clone());
        }
    }
    (inside, outside)
}

/// Generators `w_i - ∂f/∂z_i` in the cotangent context.
pub(crate) fn im_df_generators(ctx: &Arc<VariableContext>, f: &Polynomial) -> Vec<Polynomial> {
    let n = ctx.base_len();
    let up: Vec<Option<usize>> = (0..n).map(Some).collect();
    (0..n)
        .map(|i| &Polynomial::var(ctx, ctx.w(i)) - &f.derivative(i).remap(ctx, &up))
        .collect()
}

/// `π_*` of a cycle lying in `im(d f)`.
pub fn pushforward_section(c: &ComponentCycle, f: &Polynomial) -> Result<ComponentCycle> {
    let ctx = c.context();
    if !ctx.is_cotangent() {
        return Err(Error::InvalidContext("pushforward needs a cotangent context".into()));
    }
    let base = ctx.base();
    let n = ctx.base_len();
    let imdf = Ideal::new(ctx, im_df_generators(ctx, f));
    let up: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(ctx, i)).collect();
    images.extend((0..n).map(|i| f.derivative(i).remap(ctx, &up)));
    let down: Vec<Option<usize>> = (0..2 * n).map(|i| (i < n).then_some(i)).collect();
    let wvars: Vec<usize> = (n..2 * n).collect();
    let mut out = ComponentCycle::zero(&base);
    out.incomplete = c.incomplete;
    for comp in &c.components {
        if !comp.prime.contains_ideal(&imdf) {
            return Err(Error::NotInImage(comp.prime.to_string()));
        }
        let subst: Vec<Polynomial> = comp.prime.generators().iter().map(|g| g.compose(ctx, &images)).collect();
        let proj = Ideal::new(ctx, subst).eliminate(&wvars).remap(&base, &down).reduced();
        let dim = proj.krull_dimension()?;
        if dim != comp.dim {
            return Err(Error::Invariant(format!("projection of {} changed dimension", comp.prime)));
        }
        out.push(CycleComponent { prime: proj, multiplicity: comp.multiplicity, dim, certified: comp.certified, chart: None });
    }
    Ok(out)
}

/// `Σ m · local_colength(P + slices, p)` over components through `p`.
pub fn local_intersection_number(c: &ComponentCycle, slices: &[Polynomial], p: &[Rational]) -> Result<i64> {
    if let Some(s) = slices.iter().find(|s| s.total_degree() > 1) {
        return Err(Error::Invariant(format!("slice {s} is not affine-linear")));
    }
    let mut total = 0i64;
    for comp in &c.components {
        if !comp.prime.vanishes_at(p) {
            continue;
        }
        match comp.prime.with(slices).local_colength(p) {
            Ok(v) => total += comp.multiplicity * v as i64,
            Err(Error::NotIsolated) => return Err(Error::ImproperSlice(comp.prime.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}
