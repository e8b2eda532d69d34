use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::new();
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

fn poly_sub_shifted(a: &mut Vec<BigInt>, b: &[BigInt], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigInt::zero());
    }
    for (i, c) in b.iter().enumerate() {
        a[i + shift] -= c;
    }
}

/// Numerator `N(t)` of the Hilbert series `N(t) / (1-t)^n` of the quotient
/// by the monomial ideal generated by `gens`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<BigInt> {
    numerator(minimalize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> Vec<BigInt> {
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut n = vec![BigInt::one()];
        for m in &gens {
            let d = m.degree() as usize;
            let prev = n.clone();
            poly_sub_shifted(&mut n, &prev, d);
        }
        return n;
    }
    let mut rest = gens;
    let pivot_idx = (0..rest.len()).max_by_key(|&i| rest[i].degree()).unwrap();
    let m = rest.swap_remove(pivot_idx);
    let colon: Vec<Monomial> = rest.iter().map(|g| g.div(&g.gcd(&m)).unwrap()).collect();
    let mut n = numerator(minimalize(rest));
    let q = numerator(minimalize(colon));
    poly_sub_shifted(&mut n, &q, m.degree() as usize);
    while n.len() > 1 && n.last().map_or(false, |c| c.is_zero()) {
        n.pop();
    }
    n
}

/// Dimension and degree read off a Hilbert series numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub dim: usize,
    pub degree: BigInt,
}

impl HilbertData {
    /// `nvars` is the number of ring variables. Returns `None` for the unit
    /// ideal (zero numerator).
    pub fn from_numerator(num: &[BigInt], nvars: usize) -> Option<HilbertData> {
        let mut n: Vec<BigInt> = num.to_vec();
        if n.iter().all(|c| c.is_zero()) {
            return None;
        }
        let mut k = 0usize;
        loop {
            let at_one: BigInt = n.iter().sum();
            if !at_one.is_zero() {
                return Some(HilbertData { dim: nvars - k, degree: at_one });
            }
            // Divide by (1 - t): q_i = sum_{j<=i} n_j.
            let mut q = Vec::with_capacity(n.len() - 1);
            let mut acc = BigInt::zero();
            for c in &n[..n.len() - 1] {
                acc += c;
                q.push(acc.clone());
            }
            n = q;
            k += 1;
        }
    }
}
