//! Buchberger's algorithm with normal pair selection and the Gebauer–Möller
//! form of both criteria.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::context::VariableContext;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::Rational;

/// Terms in ascending order; the leading term is last.
pub(crate) type Terms = Vec<(Monomial, Rational)>;

pub(crate) fn to_terms(p: &Polynomial, ord: MonomialOrder) -> Terms {
    let mut v: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.sort_by(|a, b| ord.cmp(&a.0, &b.0));
    v
}

pub(crate) fn from_terms(ctx: &Arc<VariableContext>, t: Terms) -> Polynomial {
    Polynomial::from_map(ctx, t.into_iter().collect())
}

/// `p - c * m * g[..g.len()-1]`, with `g` ascending and its leading term
/// skipped (the caller has already cancelled it).
fn sub_multiple(p: Terms, g: &Terms, m: &Monomial, c: &Rational, ord: MonomialOrder) -> Terms {
    let tail = &g[..g.len() - 1];
    let mut out = Vec::with_capacity(p.len() + tail.len());
    let mut pi = p.into_iter().peekable();
    let mut gi = tail.iter().map(|(gm, gc)| (gm.mul(m), gc * c)).peekable();
    loop {
        let step = match (pi.peek(), gi.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some(a), Some(b)) => ord.cmp(&a.0, &b.0),
        };
        match step {
            Ordering::Less => out.push(pi.next().unwrap()),
            Ordering::Greater => {
                let (bm, bc) = gi.next().unwrap();
                out.push((bm, -bc));
            }
            Ordering::Equal => {
                let (am, ac) = pi.next().unwrap();
                let (_, bc) = gi.next().unwrap();
                let s = ac - bc;
                if !s.is_zero() {
                    out.push((am, s));
                }
            }
        }
    }
    out
}

/// Complete reduction of `p` by the basis elements listed in `active`.
pub(crate) fn reduce(mut p: Terms, basis: &[Terms], active: &[usize], ord: MonomialOrder) -> Terms {
    let mut rem: Terms = Vec::new();
    while let Some((m, c)) = p.pop() {
        let mut hit = None;
        for &k in active {
            let g = &basis[k];
            let lt = &g[g.len() - 1].0;
            if let Some(q) = m.div(lt) {
                hit = Some((k, q));
                break;
            }
        }
        match hit {
            Some((k, q)) => {
                let g = &basis[k];
                let coef = &c / &g[g.len() - 1].1;
                p = sub_multiple(p, g, &q, &coef, ord);
            }
            None => rem.push((m, c)),
        }
    }
    rem.reverse();
    rem
}

fn make_monic(mut p: Terms) -> Terms {
    if let Some((_, lc)) = p.last() {
        if !lc.is_one() {
            let inv = lc.recip();
            for t in p.iter_mut() {
                t.1 *= &inv;
            }
        }
    }
    p
}

fn spoly(f: &Terms, g: &Terms, lcm: &Monomial, ord: MonomialOrder) -> Terms {
    let (fl, gl) = (&f[f.len() - 1].0, &g[g.len() - 1].0);
    let mf = lcm.div(fl).expect("lcm");
    let mg = lcm.div(gl).expect("lcm");
    let a: Terms = f[..f.len() - 1].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let gg: Terms = g.iter().map(|(m, c)| (m.mul(&mg), c.clone())).collect();
    // Both are monic, so the leading terms cancel.
    sub_multiple(a, &gg, &Monomial::one(lcm.arity()), &Rational::one(), ord)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State {
    ord: MonomialOrder,
    polys: Vec<Terms>,
    lts: Vec<Monomial>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl State {
    fn update(&mut self, h: usize) {
        let lh = self.lts[h].clone();
        let cands: Vec<usize> = self.active.clone();
        let lcms: Vec<Monomial> = cands.iter().map(|&g| lh.lcm(&self.lts[g])).collect();
        let mut kept: Vec<usize> = Vec::new();
        for k in 0..cands.len() {
            let g1 = cands[k];
            if lh.is_coprime(&self.lts[g1]) {
                kept.push(k);
                continue;
            }
            let l1 = &lcms[k];
            let dominated = (k + 1..cands.len()).any(|k2| lcms[k2].divides(l1))
                || kept.iter().any(|&k2| lcms[k2].divides(l1));
            if !dominated {
                kept.push(k);
            }
        }
        let lts = &self.lts;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && lts[p.i].lcm(&lh) != p.lcm && lh.lcm(&lts[p.j]) != p.lcm)
        });
        for k in kept {
            let g = cands[k];
            if !lh.is_coprime(&self.lts[g]) {
                self.pairs.push(Pair { i: g, j: h, lcm: lcms[k].clone() });
            }
        }
        let lts = &self.lts;
        self.active.retain(|&g| !lh.divides(&lts[g]));
        self.active.push(h);
    }

    fn add(&mut self, p: Terms) {
        let p = make_monic(p);
        self.lts.push(p[p.len() - 1].0.clone());
        self.polys.push(p);
        let h = self.polys.len() - 1;
        self.update(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ord;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = ord.cmp(&a.lcm, &b.lcm).then((a.i, a.j).cmp(&(b.i, b.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// The reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// leading monomial, largest first. The zero ideal gives an empty basis.
pub fn reduced_groebner_basis(ctx: &Arc<VariableContext>, gens: &[Polynomial], ord: MonomialOrder) -> Vec<Polynomial> {
    let mut st = State { ord, polys: Vec::new(), lts: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    let mut input: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_terms(g, ord)).collect();
    input.sort_by(|a, b| ord.cmp(&a[a.len() - 1].0, &b[b.len() - 1].0));
    for g in input {
        let r = reduce(g, &st.polys, &st.active, ord);
        if !r.is_empty() {
            if r.len() == 1 && r[0].0.is_one() {
                return vec![Polynomial::one(ctx)];
            }
            st.add(r);
        }
    }
    while let Some(pair) = st.next_pair() {
        let s = spoly(&st.polys[pair.i], &st.polys[pair.j], &pair.lcm, ord);
        let r = reduce(s, &st.polys, &st.active, ord);
        if !r.is_empty() {
            if r[r.len() - 1].0.is_one() {
                return vec![Polynomial::one(ctx)];
            }
            st.add(r);
        }
    }
    let active = st.active.clone();
    let mut out: Vec<Terms> = Vec::with_capacity(active.len());
    for (k, &i) in active.iter().enumerate() {
        let others: Vec<usize> = active.iter().enumerate().filter(|&(k2, _)| k2 != k).map(|(_, &j)| j).collect();
        let mut g = st.polys[i].clone();
        let lead = g.pop().expect("nonzero");
        let mut tail = reduce(g, &st.polys, &others, ord);
        tail.push(lead);
        out.push(tail);
    }
    out.sort_by(|a, b| ord.cmp(&b[b.len() - 1].0, &a[a.len() - 1].0));
    out.into_iter().map(|t| from_terms(ctx, t)).collect()
}

/// Remainder of `p` against a reduced basis (all monic).
pub(crate) fn normal_form_terms(p: &Polynomial, basis: &[Polynomial], ord: MonomialOrder) -> Terms {
    let polys: Vec<Terms> = basis.iter().map(|g| to_terms(g, ord)).collect();
    let active: Vec<usize> = (0..polys.len()).collect();
    reduce(to_terms(p, ord), &polys, &active, ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn linear_system() {
        let ctx = VariableContext::new(&["x", "y"]).unwrap();
        let g = vec![parse_polynomial(&ctx, "x+y").unwrap(), parse_polynomial(&ctx, "x-y").unwrap()];
        let gb = reduced_groebner_basis(&ctx, &g, MonomialOrder::GrevLex);
        let s: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["x", "y"]);
    }

    #[test]
    fn twisted_cubic_lex() {
        let ctx = VariableContext::new(&["x", "y", "z"]).unwrap();
        let g = vec![parse_polynomial(&ctx, "y-x^2").unwrap(), parse_polynomial(&ctx, "z-x^3").unwrap()];
        let gb = reduced_groebner_basis(&ctx, &g, MonomialOrder::Lex);
        let target = parse_polynomial(&ctx, "y^3-z^2").unwrap();
        assert!(gb.iter().any(|p| *p == target || *p == -&target));
    }
}
