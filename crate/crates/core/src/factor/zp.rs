//! Dense univariate polynomials over a small prime field, coefficients low
//! degree first.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(crate) type Zp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        assert!(p >= 3 && p < (1 << 31));
        Field { p }
    }

    fn trim(mut a: Zp) -> Zp {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce(&self, a: Zp) -> Zp {
        Self::trim(a.into_iter().map(|c| c % self.p).collect())
    }

    pub fn add(&self, a: &Zp, b: &Zp) -> Zp {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
            out[i] = x % self.p;
        }
        Self::trim(out)
    }

    pub fn sub(&self, a: &Zp, b: &Zp) -> Zp {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0);
            out[i] = x % self.p;
        }
        Self::trim(out)
    }

    pub fn mul(&self, a: &Zp, b: &Zp) -> Zp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        Self::trim(out)
    }

    pub fn scale(&self, a: &Zp, c: u64) -> Zp {
        Self::trim(a.iter().map(|&x| x * (c % self.p) % self.p).collect())
    }

    pub fn pow_scalar(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow_scalar(a, self.p - 2)
    }

    pub fn monic(&self, a: &Zp) -> Zp {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    pub fn divrem(&self, a: &Zp, b: &Zp) -> (Zp, Zp) {
        assert!(!b.is_empty(), "division by zero polynomial");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let inv = self.inv(*b.last().unwrap());
        let mut r = a.clone();
        let mut q = vec![0u64; a.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + b.len() - 1] * inv % self.p;
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - c * y % self.p) % self.p;
            }
        }
        (Self::trim(q), Self::trim(r))
    }

    pub fn rem(&self, a: &Zp, b: &Zp) -> Zp {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &Zp, b: &Zp) -> Zp {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &Zp, b: &Zp) -> (Zp, Zp, Zp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let lc = *r0.last().expect("nonzero gcd");
        let inv = self.inv(lc);
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn derivative(&self, a: &Zp) -> Zp {
        Self::trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % self.p) * c % self.p).collect())
    }

    pub fn powmod(&self, base: &Zp, e: &BigUint, m: &Zp) -> Zp {
        let mut result = vec![1u64];
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if e.bit(i) {
                result = self.rem(&self.mul(&result, &b), m);
            }
        }
        result
    }

    /// Irreducible monic factors of a monic square-free polynomial.
    pub fn factor_squarefree(&self, f: &Zp, rng: &mut ChaCha8Rng) -> Vec<Zp> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, rng, &mut out);
        }
        out
    }

    fn distinct_degree(&self, f: &Zp) -> Vec<(Zp, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 1;
        while f.len() - 1 >= 2 * d {
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    fn equal_degree(&self, g: &Zp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Zp>) {
        let n = g.len() - 1;
        if n == d {
            out.push(g.clone());
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Zp = Self::trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &vec![1]);
            let h = self.gcd(&b, g);
            if h.len() > 1 && h.len() < g.len() {
                let other = self.divrem(g, &h).0;
                self.equal_degree(&h, d, rng, out);
                self.equal_degree(&self.monic(&other), d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn splits_product_of_linears() {
        let fp = Field::new(7);
        let f = fp.mul(&fp.mul(&vec![1, 1], &vec![2, 1]), &vec![3, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fs = fp.factor_squarefree(&fp.monic(&f), &mut rng);
        let mut prod = vec![1u64];
        for g in &fs {
            prod = fp.mul(&prod, g);
        }
        assert_eq!(prod, fp.monic(&f));
        assert!(fs.len() >= 3);
    }
}
