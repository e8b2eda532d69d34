use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::context::VariableContext;
use super::groebner::{from_terms, normal_form_terms, reduced_groebner_basis};
use super::hilbert::{hilbert_numerator, HilbertData};
use super::monomial::{Monomial, MonomialOrder};
use super::parse::parse_polynomial;
use super::polynomial::Polynomial;
use super::{Point, Rational};
use crate::error::{Error, Result};

/// A finitely generated ideal with lazily computed, cached reduced Gröbner
/// bases (one per monomial order).
pub struct Ideal {
    ctx: Arc<VariableContext>,
    generators: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ctx: self.ctx.clone(),
            generators: self.generators.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

const MAX_LOCAL_POWER: usize = 400;

impl Ideal {
    pub fn new(ctx: &Arc<VariableContext>, generators: Vec<Polynomial>) -> Ideal {
        for g in &generators {
            assert!(**g.context() == **ctx, "generator context mismatch");
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ctx: ctx.clone(), generators, cache: Mutex::new(HashMap::new()) }
    }

    pub fn parse<S: AsRef<str>>(ctx: &Arc<VariableContext>, gens: &[S]) -> Result<Ideal> {
        let g = gens.iter().map(|s| parse_polynomial(ctx, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ctx, g))
    }

    pub fn zero(ctx: &Arc<VariableContext>) -> Ideal {
        Ideal::new(ctx, Vec::new())
    }

    pub fn unit(ctx: &Arc<VariableContext>) -> Ideal {
        Ideal::new(ctx, vec![Polynomial::one(ctx)])
    }

    /// The maximal ideal of the origin.
    pub fn maximal_at_origin(ctx: &Arc<VariableContext>) -> Ideal {
        Ideal::new(ctx, (0..ctx.arity()).map(|i| Polynomial::var(ctx, i)).collect())
    }

    /// The maximal ideal of a rational point.
    pub fn maximal_at(ctx: &Arc<VariableContext>, p: &[Rational]) -> Ideal {
        Ideal::new(
            ctx,
            (0..ctx.arity())
                .map(|i| &Polynomial::var(ctx, i) - &Polynomial::constant(ctx, p[i].clone()))
                .collect(),
        )
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner_basis(&self, ord: MonomialOrder) -> Arc<Vec<Polynomial>> {
        if let Some(b) = self.cache.lock().expect("cache lock").get(&ord) {
            return b.clone();
        }
        let b = Arc::new(reduced_groebner_basis(&self.ctx, &self.generators, ord));
        self.cache.lock().expect("cache lock").insert(ord, b.clone());
        b
    }

    /// Reduced grevlex basis.
    pub fn gb(&self) -> Arc<Vec<Polynomial>> {
        self.groebner_basis(MonomialOrder::GrevLex)
    }

    /// The same ideal, generated by its reduced grevlex basis.
    pub fn reduced(&self) -> Ideal {
        let b = self.gb();
        let out = Ideal::new(&self.ctx, b.as_ref().clone());
        out.cache.lock().expect("cache lock").insert(MonomialOrder::GrevLex, b);
        out
    }

    pub fn normal_form(&self, p: &Polynomial, ord: MonomialOrder) -> Polynomial {
        assert!(**p.context() == *self.ctx, "context mismatch");
        let b = self.groebner_basis(ord);
        from_terms(&self.ctx, normal_form_terms(p, &b, ord))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p, MonomialOrder::GrevLex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        *self.ctx == *other.ctx && *self.gb() == *other.gb()
    }

    pub fn is_unit(&self) -> bool {
        let b = self.gb();
        b.len() == 1 && b[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// A string determined by the ideal alone; used for deduplication.
    pub fn canonical_key(&self) -> String {
        self.gb().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
    }

    pub fn vanishes_at(&self, p: &[Rational]) -> bool {
        self.generators.iter().all(|g| g.eval(p).is_zero())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ideal::new(&self.ctx, g)
    }

    pub fn with(&self, extra: &[Polynomial]) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        Ideal::new(&self.ctx, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a * b);
            }
        }
        Ideal::new(&self.ctx, g)
    }

    pub fn power(&self, n: u32) -> Ideal {
        let mut out = Ideal::unit(&self.ctx);
        for _ in 0..n {
            out = out.product(self).reduced();
        }
        out
    }

    pub fn translate(&self, p: &[Rational]) -> Ideal {
        Ideal::new(&self.ctx, self.generators.iter().map(|g| g.translate(p)).collect())
    }

    /// Moves the ideal to `target` along a variable map.
    pub fn remap(&self, target: &Arc<VariableContext>, map: &[Option<usize>]) -> Ideal {
        Ideal::new(target, self.generators.iter().map(|g| g.remap(target, map)).collect())
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ideal::zero(&self.ctx);
        }
        let ext = self.ctx.with_front(&["_t"]);
        let n = self.ctx.arity();
        let up: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let t = Polynomial::var(&ext, 0);
        let one_minus_t = &Polynomial::one(&ext) - &t;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(&t * &g.remap(&ext, &up));
        }
        for h in &other.generators {
            gens.push(&one_minus_t * &h.remap(&ext, &up));
        }
        let gb = reduced_groebner_basis(&ext, &gens, MonomialOrder::Block(1));
        let down: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
        let kept = gb.into_iter().filter(|g| !g.uses_var(0)).map(|g| g.remap(&self.ctx, &down)).collect();
        Ideal::new(&self.ctx, kept).reduced()
    }

    /// `I : (f)`.
    pub fn quotient_by(&self, f: &Polynomial) -> Ideal {
        if f.is_zero() || self.contains(f) {
            return Ideal::unit(&self.ctx);
        }
        let k = self.intersect(&Ideal::new(&self.ctx, vec![f.clone()]));
        let gens = k
            .generators
            .iter()
            .map(|g| g.exact_div(f).expect("generator of I ∩ (f) is divisible by f"))
            .collect();
        Ideal::new(&self.ctx, gens).reduced()
    }

    /// `I : J`, as the intersection of the quotients by the generators of `J`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        let mut acc: Option<Ideal> = None;
        for g in &other.generators {
            let q = self.quotient_by(g);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        acc.unwrap_or_else(|| Ideal::unit(&self.ctx))
    }

    /// `I : f^∞`, by iterated quotients.
    pub fn saturate_by(&self, f: &Polynomial) -> Ideal {
        let mut cur = self.reduced();
        loop {
            let next = cur.quotient_by(f);
            if next.equals(&cur) {
                return cur;
            }
            cur = next;
        }
    }

    /// `I : J^∞`, by iterated quotients.
    pub fn saturate(&self, other: &Ideal) -> Ideal {
        let mut cur = self.reduced();
        loop {
            let next = cur.quotient(other);
            if next.equals(&cur) {
                return cur;
            }
            cur = next;
        }
    }

    /// `I ∩ k[remaining variables]`, kept in the same context.
    pub fn eliminate(&self, vars: &[usize]) -> Ideal {
        let n = self.ctx.arity();
        let mut perm: Vec<usize> = vars.to_vec();
        perm.sort_unstable();
        perm.dedup();
        let k = perm.len();
        perm.extend((0..n).filter(|i| !vars.contains(i)));
        let pctx = self.ctx.permuted(&perm);
        let mut fwd = vec![None; n];
        for (j, &i) in perm.iter().enumerate() {
            fwd[i] = Some(j);
        }
        let gens: Vec<Polynomial> = self.generators.iter().map(|g| g.remap(&pctx, &fwd)).collect();
        let gb = reduced_groebner_basis(&pctx, &gens, MonomialOrder::Block(k));
        let back: Vec<Option<usize>> = perm.iter().map(|&i| Some(i)).collect();
        let kept = gb
            .into_iter()
            .filter(|g| (0..k).all(|j| !g.uses_var(j)))
            .map(|g| g.remap(&self.ctx, &back))
            .collect();
        Ideal::new(&self.ctx, kept).reduced()
    }

    pub fn leading_monomials(&self, ord: MonomialOrder) -> Vec<Monomial> {
        self.groebner_basis(ord).iter().filter_map(|g| g.leading_monomial(ord)).collect()
    }

    /// Dimension of `V(I)` from maximal independent sets modulo the leading
    /// term ideal.
    pub fn krull_dimension(&self) -> Result<usize> {
        if self.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let n = self.ctx.arity();
        assert!(n < 64, "too many variables");
        let supports: Vec<u64> = self
            .leading_monomials(MonomialOrder::GrevLex)
            .iter()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0usize;
        let mut mask: u64 = 0;
        loop {
            let size = mask.count_ones() as usize;
            if size > best && supports.iter().all(|s| s & !mask != 0) {
                best = size;
            }
            if mask == full {
                break;
            }
            mask += 1;
        }
        Ok(best)
    }

    /// Dimension and degree from the Hilbert series of the grevlex leading
    /// term ideal.
    pub fn hilbert(&self) -> Result<HilbertData> {
        let lts = self.leading_monomials(MonomialOrder::GrevLex);
        HilbertData::from_numerator(&hilbert_numerator(&lts), self.ctx.arity()).ok_or(Error::UnitIdeal)
    }

    /// Number of standard monomials of a zero-dimensional ideal.
    pub fn colength(&self) -> Result<u64> {
        if self.is_unit() {
            return Ok(0);
        }
        let d = self.krull_dimension()?;
        if d > 0 {
            return Err(Error::NotZeroDimensional(d));
        }
        let lts = self.leading_monomials(MonomialOrder::GrevLex);
        let n = self.ctx.arity();
        let mut cur = Monomial::one(n);
        Ok(count_standard(&lts, &mut cur, 0))
    }

    /// Local intersection multiplicity of `V(I)` at an isolated point.
    pub fn local_colength(&self, p: &[Rational]) -> Result<u64> {
        let n = self.ctx.arity();
        if p.len() != n {
            return Err(Error::PointArity { expected: n, got: p.len() });
        }
        if let Some(g) = self.generators.iter().find(|g| !g.eval(p).is_zero()) {
            return Err(Error::PointNotOnVariety(g.to_string()));
        }
        let (ctx, gens) = eliminate_linear(&self.translate(p));
        if ctx.arity() == 0 {
            return Ok(1);
        }
        let j = Ideal::new(&ctx, gens);
        if j.krull_dimension()? > 0 {
            let m = Ideal::maximal_at_origin(&ctx);
            let s = j.saturate(&m);
            if s.generators.iter().all(|g| g.constant_term().is_zero()) {
                return Err(Error::NotIsolated);
            }
        }
        let m = Ideal::maximal_at_origin(&ctx);
        let mut mpow = m.clone();
        let mut prev = j.sum(&mpow).colength()?;
        for _ in 1..MAX_LOCAL_POWER {
            mpow = mpow.product(&m).reduced();
            let next = j.sum(&mpow).colength()?;
            if next == prev {
                return Ok(prev);
            }
            prev = next;
        }
        Err(Error::Limit("local colength did not stabilize".into()))
    }

    /// Rabinowitsch test for `f ∈ √I`.
    pub fn radical_contains(&self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        let ext = self.ctx.with_front(&["_y"]);
        let n = self.ctx.arity();
        let up: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let mut gens: Vec<Polynomial> = self.generators.iter().map(|g| g.remap(&ext, &up)).collect();
        let y = Polynomial::var(&ext, 0);
        gens.push(&Polynomial::one(&ext) - &(&y * &f.remap(&ext, &up)));
        let gb = reduced_groebner_basis(&ext, &gens, MonomialOrder::GrevLex);
        gb.len() == 1 && gb[0].is_constant()
    }

    pub fn radical_contains_ideal(&self, other: &Ideal) -> bool {
        other.generators.iter().all(|g| self.radical_contains(g))
    }

    /// Same radical.
    pub fn radical_equals(&self, other: &Ideal) -> bool {
        self.radical_contains_ideal(other) && other.radical_contains_ideal(self)
    }
}

fn count_standard(lts: &[Monomial], cur: &mut Monomial, i: usize) -> u64 {
    let n = cur.arity();
    if i == n {
        return 1;
    }
    let mut total = 0;
    loop {
        if lts.iter().any(|m| m.divides(cur)) {
            break;
        }
        total += count_standard(lts, cur, i + 1);
        cur.0[i] += 1;
    }
    cur.0[i] = 0;
    total
}

/// Removes variables solved by linear basis elements of an ideal through the
/// origin. Returns the smaller context and the transformed generators.
pub(crate) fn eliminate_linear(ideal: &Ideal) -> (Arc<VariableContext>, Vec<Polynomial>) {
    let mut ctx = ideal.context().clone();
    let mut gens: Vec<Polynomial> = ideal.gb().as_ref().clone();
    loop {
        let lin = gens.iter().find(|g| g.total_degree() == 1 && g.constant_term().is_zero()).cloned();
        let Some(g) = lin else {
            return (ctx, gens);
        };
        let v = g.leading_monomial(MonomialOrder::GrevLex).unwrap().support().next().unwrap();
        let g = g.monic(MonomialOrder::GrevLex);
        let rest = &Polynomial::var(&ctx, v) - &g;
        let keep: Vec<usize> = (0..ctx.arity()).filter(|&i| i != v).collect();
        let small = ctx.restricted(&keep);
        let mut map = vec![None; ctx.arity()];
        for (j, &i) in keep.iter().enumerate() {
            map[i] = Some(j);
        }
        let subst: Vec<Polynomial> = gens
            .iter()
            .map(|h| h.substitute(v, &rest))
            .filter(|h| !h.is_zero())
            .map(|h| h.remap(&small, &map))
            .collect();
        ctx = small;
        gens = if ctx.arity() == 0 {
            subst
        } else {
            reduced_groebner_basis(&ctx, &subst, MonomialOrder::GrevLex)
        };
    }
}

/// Point helper: the rational point as a vector of the given integers.
pub fn int_point(v: &[i64]) -> Point {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}
