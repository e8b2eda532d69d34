use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub(crate) type Exponents = SmallVec<[u32; 8]>;

/// Exponent vector, one entry per context variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) Exponents);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Exponents::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Monomial orders. `Block(k)` compares the first `k` variables by grevlex
/// and breaks ties by grevlex on the rest, so it eliminates the front block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block(usize),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::GrevLex
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.0.as_slice().cmp(b.0.as_slice()),
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::Block(k) => {
                let k = k.min(a.0.len());
                grevlex(&a.0[..k], &b.0[..k]).then_with(|| grevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::GrevLex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let xy = Monomial::from_exponents(&[1, 1, 0]);
        let xz = Monomial::from_exponents(&[1, 0, 1]);
        let y2 = Monomial::from_exponents(&[0, 2, 0]);
        let o = MonomialOrder::GrevLex;
        assert_eq!(o.cmp(&xy, &xz), Ordering::Greater);
        assert_eq!(o.cmp(&y2, &xz), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &y2), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_front() {
        let t = Monomial::from_exponents(&[1, 0, 0]);
        let big = Monomial::from_exponents(&[0, 5, 5]);
        assert_eq!(MonomialOrder::Block(1).cmp(&t, &big), Ordering::Greater);
    }
}
