//! Polynomials over a prime field, just enough to split a cyclotomic
//! polynomial modulo `p` and pick one irreducible factor.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficients low degree first, no trailing zeros (zero is empty).
pub(crate) type Poly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    fn inv(self, a: u64) -> u64 {
        crate::numbers::pow_mod(a, self.p - 2, self.p)
    }

    pub fn reduce(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }

    fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn poly(self, c: &[BigInt]) -> Poly {
        Fp::trim(c.iter().map(|x| self.reduce(x)).collect())
    }

    fn sub(self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + self.p - y) % self.p;
        }
        Fp::trim(out)
    }

    fn mul_poly(self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul(x, y)) % self.p;
            }
        }
        Fp::trim(out)
    }

    pub fn rem(self, a: &[u64], m: &[u64]) -> Poly {
        self.div_rem(a, m).1
    }

    fn div_rem(self, a: &[u64], m: &[u64]) -> (Poly, Poly) {
        assert!(!m.is_empty(), "division by zero polynomial");
        let mut r = Fp::trim(a.to_vec());
        if r.len() < m.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - m.len() + 1];
        let lead_inv = self.inv(*m.last().unwrap());
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = self.mul(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            for (i, &mi) in m.iter().enumerate() {
                let t = self.mul(c, mi);
                r[shift + i] = (r[shift + i] + self.p - t) % self.p;
            }
            r = Fp::trim(r);
        }
        (Fp::trim(q), r)
    }

    fn monic(self, a: Poly) -> Poly {
        match a.last() {
            None => a,
            Some(&l) => {
                let inv = self.inv(l);
                a.into_iter().map(|x| self.mul(x, inv)).collect()
            }
        }
    }

    fn gcd(self, a: &[u64], b: &[u64]) -> Poly {
        let mut a = Fp::trim(a.to_vec());
        let mut b = Fp::trim(b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(a)
    }

    fn pow_mod(self, base: &[u64], exp: &BigUint, m: &[u64]) -> Poly {
        let mut result: Poly = self.rem(&[1], m);
        let base = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            result = self.rem(&self.mul_poly(&result, &result), m);
            if exp.bit(i) {
                result = self.rem(&self.mul_poly(&result, &base), m);
            }
        }
        result
    }

    /// One monic irreducible factor of `f`, assuming `f` is squarefree with
    /// every irreducible factor of degree `deg`.
    pub fn equal_degree_factor(self, f: &[u64], deg: usize) -> Poly {
        let mut f = self.monic(Fp::trim(f.to_vec()));
        let exp: BigUint = (BigUint::from(self.p).pow(deg as u32) - BigUint::one()) / 2u32;
        let mut seed: u64 = self.p;
        while f.len() - 1 > deg {
            // deterministic sequence of trial polynomials, written in base p
            let mut a = Vec::new();
            let mut s = seed;
            while s > 0 {
                a.push(s % self.p);
                s /= self.p;
            }
            seed += 1;
            let a = Fp::trim(a);
            if a.len() >= f.len() || a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.pow_mod(&a, &exp, &f), &[1]);
            let g = self.gcd(&f, &b);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < f.len() - 1 {
                let other = self.monic(self.div_rem(&f, &g).0);
                f = if g.len() <= other.len() { g } else { other };
            }
        }
        f
    }
}

/// Whether `x` is zero modulo `p` and the polynomial `g`.
pub(crate) fn vanishes_mod(fp: Fp, x: &[BigInt], g: &[u64]) -> bool {
    let r = fp.rem(&fp.poly(x), g);
    r.iter().all(Zero::is_zero)
}
