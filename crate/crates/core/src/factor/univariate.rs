//! Univariate polynomials over ℚ and ℤ, and Zassenhaus factorization over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::zp::{Field, Zp};
use crate::poly::Rational;

/// Coefficients low degree first, no trailing zeros.
pub(crate) type QPoly = Vec<Rational>;
pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn q_trim(mut a: QPoly) -> QPoly {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    q_trim((0..n).map(|i| a.get(i).cloned().unwrap_or_else(Rational::zero) - b.get(i).cloned().unwrap_or_else(Rational::zero)).collect())
}

pub(crate) fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

pub(crate) fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let lc = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut q = vec![Rational::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + b.len() - 1] / &lc;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    (q_trim(q), q_trim(r))
}

pub(crate) fn q_monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = lc.recip();
            a.iter().map(|c| c * &inv).collect()
        }
    }
}

pub(crate) fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = q_divrem(&a, &b).1;
        a = b;
        b = q_monic(&r);
    }
    q_monic(&a)
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
pub(crate) fn q_ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = q_divrem(&r0, &r1);
        let s2 = q_sub(&s0, &q_mul(&q, &s1));
        let t2 = q_sub(&t0, &q_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = r0.last().expect("nonzero gcd").recip();
    let sc = |v: &QPoly| q_trim(v.iter().map(|c| c * &inv).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

pub(crate) fn q_derivative(a: &QPoly) -> QPoly {
    q_trim(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

pub(crate) fn q_is_squarefree(a: &QPoly) -> bool {
    q_gcd(a, &q_derivative(a)).len() == 1
}

/// Primitive integer polynomial proportional to `a` with positive leading
/// coefficient, and the factor `a = c * result`.
pub(crate) fn q_to_primitive(a: &QPoly) -> (Rational, ZPoly) {
    let mut den = BigInt::one();
    for c in a {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = a.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return (Rational::zero(), Vec::new());
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    let prim = ints.iter().map(|c| c / &g).collect();
    (Rational::new(g, den), prim)
}

pub(crate) fn z_to_q(a: &ZPoly) -> QPoly {
    a.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_content(a: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    g
}

fn z_primitive(a: &ZPoly) -> ZPoly {
    let mut g = z_content(a);
    if g.is_zero() {
        return a.clone();
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Exact quotient over ℤ.
fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lc = b.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &r[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn to_zp(a: &ZPoly, fp: &Field) -> Zp {
    let p = BigInt::from(fp.p);
    fp.reduce(a.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

fn from_zp(a: &Zp) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Lifts `f ≡ g h (mod p)` to `f ≡ G H (mod p^k)`, with `g` monic and
/// `lc(h) ≡ lc(f)`.
fn hensel_pair(f: &ZPoly, g: &Zp, h: &Zp, fp: &Field, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = fp.ext_gcd(g, h);
    assert_eq!(one, vec![1], "factors not coprime");
    let p = BigInt::from(fp.p);
    let mut gg = from_zp(g);
    let mut hh = from_zp(h);
    *hh.last_mut().unwrap() = f.last().unwrap().clone();
    let mut pk = p.clone();
    for _ in 1..k {
        let prod = z_mul(&gg, &hh);
        let n = f.len().max(prod.len());
        let e: ZPoly = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_else(BigInt::zero) - prod.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        let e: ZPoly = e.iter().map(|c| {
            debug_assert!((c % &pk).is_zero());
            c / &pk
        }).collect();
        let ep = to_zp(&e, fp);
        if !ep.is_empty() {
            let (q, sigma) = fp.divrem(&fp.mul(&t, &ep), g);
            let tau = fp.add(&fp.mul(&s, &ep), &fp.mul(&q, h));
            for (i, c) in sigma.iter().enumerate() {
                gg[i] += &pk * BigInt::from(*c);
            }
            for (i, c) in tau.iter().enumerate() {
                if i >= hh.len() {
                    hh.push(BigInt::zero());
                }
                hh[i] += &pk * BigInt::from(*c);
            }
        }
        pk *= &p;
    }
    (z_mod(&gg, &pk), z_mod(&hh, &pk))
}

fn hensel_all(f: &ZPoly, us: &[Zp], fp: &Field, k: u32, pk: &BigInt) -> Vec<ZPoly> {
    if us.len() == 1 {
        let inv = mod_inverse(f.last().unwrap(), pk);
        return vec![z_mod(&f.iter().map(|c| c * &inv).collect(), pk)];
    }
    let lcp = to_zp(&vec![f.last().unwrap().clone()], fp);
    let mut h = lcp;
    for u in &us[1..] {
        h = fp.mul(&h, u);
    }
    let (g, hh) = hensel_pair(f, &us[0], &h, fp, k);
    let mut out = vec![g];
    out.extend(hensel_all(&hh, &us[1..], fp, k, pk));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors of a primitive square-free polynomial over ℤ with
/// positive leading coefficient.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a55_e2ba);
    let mut best: Option<(Field, Vec<Zp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        let fp = Field::new(p);
        let lc = f.last().unwrap().mod_floor(&BigInt::from(p));
        if lc.is_zero() {
            continue;
        }
        let fz = to_zp(f, &fp);
        if fp.gcd(&fz, &fp.derivative(&fz)).len() != 1 {
            continue;
        }
        let facs = fp.factor_squarefree(&fp.monic(&fz), &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((fp, facs));
        }
        tried += 1;
        if tried >= 4 {
            break;
        }
    }
    let (fp, us) = best.expect("a good prime exists");
    let lc = f.last().unwrap().clone();
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm2;
    let p = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
        k += 1;
    }
    let lifted = hensel_all(f, &us, &fp, k, &pk);
    let half = &pk / 2;
    let sym = |c: BigInt| if c > half { c - &pk } else { c };
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut fcur = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for combo in combinations(remaining.len(), s) {
            let mut g: ZPoly = vec![fcur.last().unwrap().clone()];
            for &ci in &combo {
                g = z_mod(&z_mul(&g, &lifted[remaining[ci]]), &pk);
            }
            let g = z_primitive(&z_trim(g.into_iter().map(sym).collect()));
            if g.len() < 2 {
                continue;
            }
            if let Some(q) = z_exact_div(&fcur, &g) {
                found = Some((combo, g, q));
                break;
            }
        }
        match found {
            Some((combo, g, q)) => {
                out.push(g);
                fcur = q;
                let drop: Vec<usize> = combo.iter().map(|&ci| remaining[ci]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => s += 1,
        }
    }
    out.push(z_primitive(&fcur));
    out
}

/// Square-free decomposition over ℚ by Yun's algorithm: `a` is, up to a
/// constant, the product of `parts[i].0 ^ parts[i].1`.
pub(crate) fn q_squarefree(a: &QPoly) -> Vec<(QPoly, u32)> {
    let a = q_monic(a);
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let da = q_derivative(&a);
    let g = q_gcd(&a, &da);
    let mut b = q_divrem(&a, &g).0;
    let c = q_divrem(&da, &g).0;
    let mut d = q_sub(&c, &q_derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let ai = q_gcd(&b, &d);
        let bn = q_divrem(&b, &ai).0;
        let cn = q_divrem(&d, &ai).0;
        d = q_sub(&cn, &q_derivative(&bn));
        if ai.len() > 1 {
            out.push((ai, i));
        }
        b = bn;
        i += 1;
    }
    out
}

/// Monic irreducible factors over ℚ with multiplicities.
pub(crate) fn factor_q(a: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    for (part, e) in q_squarefree(a) {
        let (_, z) = q_to_primitive(&part);
        for g in zassenhaus(&z) {
            out.push((q_monic(&z_to_q(&g)), e));
        }
    }
    out
}
