use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::context::VariableContext;
use super::monomial::{Monomial, MonomialOrder};
use super::{format_rational, Rational};

/// Sparse polynomial with rational coefficients. No stored coefficient is zero.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Polynomial { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.arity()), c);
        }
        p
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn var(ctx: &Arc<VariableContext>, i: usize) -> Self {
        Self::monomial(ctx, Monomial::var(ctx.arity(), i), Rational::one())
    }

    pub fn monomial(ctx: &Arc<VariableContext>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.arity(), ctx.arity(), "monomial arity");
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(ctx: &Arc<VariableContext>, it: I) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.arity(), self.ctx.arity());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.ctx.arity()))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ctx.arity()).filter(|&i| self.uses_var(i)).collect()
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<Monomial> {
        self.leading(order).map(|(m, _)| m.clone())
    }

    pub fn leading_coefficient(&self, order: MonomialOrder) -> Rational {
        self.leading(order).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Terms sorted by `order`, largest first.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    /// Scaled so the leading coefficient under `order` is one.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Scaled to coprime integer coefficients with positive grevlex leading
    /// coefficient. Zero stays zero.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm_den = BigInt::one();
        for c in self.terms.values() {
            lcm_den = lcm_den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&lcm_den / c.denom());
            g = g.gcd(&n);
        }
        let mut factor = Rational::new(lcm_den, g);
        if self.leading_coefficient(MonomialOrder::GrevLex).is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                p.add_term(m2, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        p
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.ctx.arity()).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ctx.arity(), "point arity");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Replaces variable `i` by the polynomial `q` (same context).
    pub fn substitute(&self, i: usize, q: &Polynomial) -> Polynomial {
        assert!(self.same_context(q), "context mismatch");
        let deg = self.degree_in(i);
        let mut powers = vec![Self::one(&self.ctx)];
        for k in 1..=deg as usize {
            let next = &powers[k - 1] * q;
            powers.push(next);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut rest = m.clone();
            rest.0[i] = 0;
            let t = powers[e].mul_monomial(&rest, c);
            out = &out + &t;
        }
        out
    }

    /// Sets variable `i` to the value `v`.
    pub fn specialize(&self, i: usize, v: &Rational) -> Polynomial {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut rest = m.clone();
            rest.0[i] = 0;
            out.add_term(rest, c * num_traits::pow(v.clone(), e as usize));
        }
        out
    }

    /// Replaces every variable `x_i` by `images[i]`, producing a polynomial in
    /// the images' context.
    pub fn compose(&self, target: &Arc<VariableContext>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ctx.arity());
        let mut cache: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e];
            }
            out = &out + &t;
        }
        out
    }

    /// Moves variable `i` to `map[i]` in `target`. Panics if a used variable
    /// has no image.
    pub fn remap(&self, target: &Arc<VariableContext>, map: &[Option<usize>]) -> Polynomial {
        let n = target.arity();
        let mut p = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(n);
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let j = map[i].expect("remap of a used variable without image");
                    e.0[j] += x;
                }
            }
            p.add_term(e, c.clone());
        }
        p
    }

    /// `p(x + point)`.
    pub fn translate(&self, point: &[Rational]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.ctx.arity())
            .map(|i| &Polynomial::var(&self.ctx, i) + &Polynomial::constant(&self.ctx, point[i].clone()))
            .collect();
        self.compose(&self.ctx.clone(), &images)
    }

    /// Coefficients of powers of variable `i`; entry `k` multiplies `x_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(&self.ctx); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut rest = m.clone();
            rest.0[i] = 0;
            out[e].add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(self.same_context(d), "context mismatch");
        if d.is_zero() {
            return None;
        }
        let order = MonomialOrder::GrevLex;
        let (dm, dc) = d.leading(order).map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.ctx);
        while let Some((m, c)) = rem.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
            let t = m.div(&dm)?;
            let coef = c / &dc;
            rem = &rem - &d.mul_monomial(&t, &coef);
            q.add_term(t, coef);
        }
        Some(q)
    }

    /// Homogeneous in the listed variables (all terms share one degree there).
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: u64 = vars.iter().map(|&i| m.0[i] as u64).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return false,
                _ => {}
            }
        }
        true
    }

    /// Terms of degree at most `max` in the listed variables.
    pub fn truncate_degree_in(&self, vars: &[usize], max: u64) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|&i| m.0[i] as u64).sum::<u64>() <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn from_map(ctx: &Arc<VariableContext>, terms: BTreeMap<Monomial, Rational>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial { ctx: ctx.clone(), terms }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.same_context(rhs), "context mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.same_context(rhs), "context mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.same_context(rhs), "context mismatch");
        let mut out = Polynomial::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ctx: &VariableContext, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ctx.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms(MonomialOrder::GrevLex).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rational(&a))?;
                }
                write_monomial(f, &self.ctx, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
