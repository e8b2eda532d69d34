//! Factorization of multivariate polynomials over ℚ.
//!
//! Univariate polynomials go through Zassenhaus (Cantor–Zassenhaus modulo a
//! prime, Hensel lifting, exhaustive recombination). Multivariate ones are
//! made monic in a main variable, specialized at a point where they stay
//! square-free, and the univariate factorization is lifted back with a
//! multivariate Hensel construction. Recombination is exact trial division,
//! so a returned factorization is a certified one.

pub(crate) mod univariate;
mod zp;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Ideal, Monomial, Polynomial, Rational, VariableContext};
use univariate::{factor_q, q_divrem, q_ext_gcd, q_is_squarefree, q_mul, subsets, QPoly};

/// `f = unit * Π factors[i].0 ^ factors[i].1`. Factors are primitive with
/// integer coefficients. `complete` is false when some factor could not be
/// certified irreducible.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Polynomial, u32)>,
    pub complete: bool,
}

pub fn factor(f: &Polynomial) -> Factorization {
    let ctx = f.context().clone();
    if f.is_constant() {
        return Factorization { unit: f.constant_term(), factors: Vec::new(), complete: true };
    }
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for i in 0..ctx.arity() {
        let e = rest.terms().map(|(m, _)| m.exponents()[i]).min().unwrap_or(0);
        if e > 0 {
            let v = Polynomial::var(&ctx, i);
            rest = rest.exact_div(&v.pow(e)).expect("monomial content divides");
            factors.push((v, e));
        }
    }
    let mut complete = true;
    if !rest.is_constant() {
        let mut g = rest.clone();
        for i in rest.variables() {
            g = gcd(&g, &rest.derivative(i));
            if g.is_constant() {
                break;
            }
        }
        let rad = rest.exact_div(&g).expect("gcd divides");
        let (irr, ok) = factor_squarefree(&rad);
        complete &= ok;
        for q in irr {
            let q = q.primitive();
            let mut e = 0;
            while let Some(d) = rest.exact_div(&q) {
                rest = d;
                e += 1;
            }
            factors.push((q, e));
        }
    }
    factors.sort_by_key(|(p, _)| p.to_string());
    Factorization { unit: rest.constant_term(), factors, complete }
}

/// Whether `f` is irreducible over ℚ; `None` when undecided.
pub fn is_irreducible(f: &Polynomial) -> Option<bool> {
    if f.is_constant() {
        return Some(false);
    }
    let fz = factor(f);
    let single = fz.factors.len() == 1 && fz.factors[0].1 == 1;
    if !single {
        return Some(false);
    }
    fz.complete.then_some(true)
}

/// Greatest common divisor, primitive with positive leading coefficient.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let ctx = a.context();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(ctx);
    }
    if b.exact_div(a).is_some() {
        return a.primitive();
    }
    if a.exact_div(b).is_some() {
        return b.primitive();
    }
    let va = a.variables();
    if va.len() == 1 && b.variables() == va {
        let x = va[0];
        let g = univariate::q_gcd(&to_univariate(a, x), &to_univariate(b, x));
        return from_univariate(ctx, x, &g).primitive();
    }
    let l = Ideal::new(ctx, vec![a.clone()]).intersect(&Ideal::new(ctx, vec![b.clone()]));
    let lcm = l.generators()[0].clone();
    (a * b).exact_div(&lcm).expect("lcm divides the product").primitive()
}

/// Rational roots of a polynomial in the single variable `x`.
pub fn rational_roots(p: &Polynomial, x: usize) -> Vec<Rational> {
    let q = to_univariate(p, x);
    if q.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<Rational> = factor_q(&q)
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| -g[0].clone() / g[1].clone())
        .collect();
    out.sort();
    out
}

fn to_univariate(p: &Polynomial, x: usize) -> QPoly {
    let mut out = vec![Rational::from_integer(0.into()); p.degree_in(x) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[x] as usize] = c.clone();
    }
    univariate::q_trim(out)
}

fn from_univariate(ctx: &Arc<VariableContext>, x: usize, q: &QPoly) -> Polynomial {
    let n = ctx.arity();
    Polynomial::from_terms(
        ctx,
        q.iter().enumerate().map(|(k, c)| {
            let mut m = Monomial::one(n);
            m.0[x] = k as u32;
            (m, c.clone())
        }),
    )
}

/// Irreducible factors of a square-free polynomial.
fn factor_squarefree(f: &Polynomial) -> (Vec<Polynomial>, bool) {
    if f.is_constant() {
        return (Vec::new(), true);
    }
    let ctx = f.context().clone();
    let vars = f.variables();
    if f.total_degree() == 1 {
        return (vec![f.clone()], true);
    }
    if vars.len() == 1 {
        let x = vars[0];
        let fs = factor_q(&to_univariate(f, x));
        return (fs.into_iter().map(|(q, _)| from_univariate(&ctx, x, &q)).collect(), true);
    }
    let x = *vars.iter().min_by_key(|&&i| (f.degree_in(i), i)).unwrap();
    let mut cont = Polynomial::zero(&ctx);
    for c in f.coefficients_in(x) {
        if !c.is_zero() {
            cont = gcd(&cont, &c);
            if cont.is_constant() {
                break;
            }
        }
    }
    if !cont.is_constant() {
        let (mut a, ok1) = factor_squarefree(&cont);
        let (b, ok2) = factor_squarefree(&f.exact_div(&cont).expect("content divides"));
        a.extend(b);
        return (a, ok1 && ok2);
    }
    if f.degree_in(x) == 1 {
        return (vec![f.clone()], true);
    }
    match lift_factor(f, x) {
        Some(v) => (v, true),
        None => (vec![f.clone()], false),
    }
}

fn y_degree(m: &Monomial, ys: &[usize]) -> u64 {
    ys.iter().map(|&i| m.exponents()[i] as u64).sum()
}

fn lift_factor(f: &Polynomial, x: usize) -> Option<Vec<Polynomial>> {
    let ctx = f.context().clone();
    let d = f.degree_in(x) as usize;
    let coeffs = f.coefficients_in(x);
    let c = coeffs[d].clone();
    let xv = Polynomial::var(&ctx, x);
    let mut big = xv.pow(d as u32);
    let mut cpow = Polynomial::one(&ctx);
    for i in (0..d).rev() {
        big = &big + &(&(&coeffs[i] * &cpow) * &xv.pow(i as u32));
        cpow = &cpow * &c;
    }
    let ys: Vec<usize> = f.variables().into_iter().filter(|&i| i != x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7_0123);
    for attempt in 0..64u32 {
        let a: Vec<Rational> = ys
            .iter()
            .map(|_| {
                if attempt == 0 {
                    Rational::from_integer(0.into())
                } else {
                    let r = 2 + attempt as i64;
                    Rational::from_integer(rng.gen_range(-r..=r).into())
                }
            })
            .collect();
        let mut spec = big.clone();
        for (k, &y) in ys.iter().enumerate() {
            spec = spec.specialize(y, &a[k]);
        }
        let ua = to_univariate(&spec, x);
        if !q_is_squarefree(&ua) {
            continue;
        }
        let us: Vec<QPoly> = factor_q(&ua).into_iter().map(|(q, _)| q).collect();
        if us.len() == 1 {
            return Some(vec![f.clone()]);
        }
        let shift = |sign: i64| -> Vec<Polynomial> {
            (0..ctx.arity())
                .map(|i| match ys.iter().position(|&y| y == i) {
                    Some(k) => &Polynomial::var(&ctx, i) + &Polynomial::constant(&ctx, a[k].clone() * Rational::from_integer(sign.into())),
                    None => Polynomial::var(&ctx, i),
                })
                .collect()
        };
        let fs = big.compose(&ctx, &shift(1));
        let dmax = fs.total_degree();
        let lifted = hensel_lift(&fs, x, &ys, &us, dmax);
        let big_factors = recombine(&fs, &lifted, &ys, dmax);
        let cx = &c * &xv;
        let mut out = Vec::new();
        let back = shift(-1);
        for g in big_factors {
            let gu = g.compose(&ctx, &back).substitute(x, &cx);
            let mut cont = Polynomial::zero(&ctx);
            for k in gu.coefficients_in(x) {
                if !k.is_zero() {
                    cont = gcd(&cont, &k);
                }
            }
            out.push(gu.exact_div(&cont)?.primitive());
        }
        let mut prod = Polynomial::one(&ctx);
        for g in &out {
            prod = &prod * g;
        }
        let ratio = f.exact_div(&prod)?;
        if !ratio.is_constant() {
            return None;
        }
        return Some(out);
    }
    None
}

fn hensel_lift(fs: &Polynomial, x: usize, ys: &[usize], us: &[QPoly], dmax: u64) -> Vec<Polynomial> {
    let ctx = fs.context().clone();
    let r = us.len();
    let inverses: Vec<QPoly> = (0..r)
        .map(|i| {
            let mut p: QPoly = vec![Rational::from_integer(1.into())];
            for (j, u) in us.iter().enumerate() {
                if j != i {
                    p = q_mul(&p, u);
                }
            }
            let (_, s, _) = q_ext_gcd(&q_divrem(&p, &us[i]).1, &us[i]);
            s
        })
        .collect();
    let mut lifted: Vec<Polynomial> = us.iter().map(|u| from_univariate(&ctx, x, u)).collect();
    for k in 1..=dmax {
        let mut prod = lifted[0].truncate_degree_in(ys, k);
        for g in &lifted[1..] {
            prod = (&prod * g).truncate_degree_in(ys, k);
        }
        let err = fs - &prod;
        let mut groups: BTreeMap<Vec<u32>, QPoly> = BTreeMap::new();
        for (m, c) in err.terms() {
            if y_degree(m, ys) != k {
                continue;
            }
            let key: Vec<u32> = ys.iter().map(|&i| m.exponents()[i]).collect();
            let e = groups.entry(key).or_default();
            let deg = m.exponents()[x] as usize;
            if e.len() <= deg {
                e.resize(deg + 1, Rational::from_integer(0.into()));
            }
            e[deg] = c.clone();
        }
        for (beta, e) in groups {
            let e = univariate::q_trim(e);
            let mut ym = Monomial::one(ctx.arity());
            for (k2, &y) in ys.iter().enumerate() {
                ym.0[y] = beta[k2];
            }
            for i in 0..r {
                let delta = q_divrem(&q_mul(&e, &inverses[i]), &us[i]).1;
                let dp = from_univariate(&ctx, x, &delta).mul_monomial(&ym, &Rational::from_integer(1.into()));
                lifted[i] = &lifted[i] + &dp;
            }
        }
    }
    lifted
}

fn recombine(fs: &Polynomial, lifted: &[Polynomial], ys: &[usize], dmax: u64) -> Vec<Polynomial> {
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = fs.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for combo in subsets(remaining.len(), s) {
            let mut g = lifted[remaining[combo[0]]].clone();
            for &ci in &combo[1..] {
                g = (&g * &lifted[remaining[ci]]).truncate_degree_in(ys, dmax);
            }
            let g = g.truncate_degree_in(ys, dmax);
            if let Some(q) = cur.exact_div(&g) {
                found = Some((combo, g, q));
                break;
            }
        }
        match found {
            Some((combo, g, q)) => {
                out.push(g);
                cur = q;
                let drop: Vec<usize> = combo.iter().map(|&ci| remaining[ci]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => s += 1,
        }
    }
    out.push(cur);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::new(&["x", "y", "z"]).unwrap()
    }

    fn check(s: &str, expect: usize) {
        let c = ctx();
        let f = parse_polynomial(&c, s).unwrap();
        let fz = factor(&f);
        assert!(fz.complete, "{s}");
        let mut prod = Polynomial::constant(&c, fz.unit.clone());
        for (g, e) in &fz.factors {
            prod = &prod * &g.pow(*e);
        }
        assert_eq!(prod, f, "{s}");
        assert_eq!(fz.factors.len(), expect, "{s}: {:?}", fz.factors);
    }

    #[test]
    fn multivariate_factorizations() {
        check("x*y", 2);
        check("x^2", 1);
        check("y^2-x^3", 1);
        check("x*y*(x+y)", 3);
        check("(x^2-y^3)*(x+y+z)", 2);
        check("x^2-y^2", 2);
        check("(x*y+1)*(x^2*z-y)", 2);
        check("6*(x+y)^2*(x-2*z)^3*x", 3);
        check("x^4*y^2 - 2*x^2*y + 1 - z^2", 2);
        check("4*z^2-9*x*y^2", 1);
        check("(x-y^2)*(x-2*y^2)*(x+y^2+1)", 3);
    }

    #[test]
    fn gcd_examples() {
        let c = ctx();
        let a = parse_polynomial(&c, "(x+y)*(x-z)").unwrap();
        let b = parse_polynomial(&c, "(x+y)*(y-z^2)").unwrap();
        assert_eq!(gcd(&a, &b), parse_polynomial(&c, "x+y").unwrap());
    }
}
