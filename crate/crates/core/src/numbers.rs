//! Exact rationals and the elementary number theory used everywhere else.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary precision rational in lowest terms with positive denominator.
///
/// `Display` prints `a/b`, or `a` when the denominator is one, which is also
/// the accepted `FromStr` syntax.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A valuation that may be infinite (the valuation of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedValuation {
    Finite(Rational),
    Infinity,
}

impl ExtendedValuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedValuation::Finite(v) => Some(v),
            ExtendedValuation::Infinity => None,
        }
    }
}

impl PartialOrd for ExtendedValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedValuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Denominator of `x` as a machine integer.
pub fn denom(x: &Rational) -> Result<u64> {
    x.denom().to_u64().ok_or(Error::Overflow("denominator"))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn require_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// Exponent of the prime `q` in a nonzero integer.
pub fn val_int(q: u64, n: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let q = BigInt::from(q);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (d, r) = n.div_rem(&q);
        if !r.is_zero() {
            return k;
        }
        n = d;
        k += 1;
    }
}

/// Exponent of `q` in a positive machine integer.
pub fn val_u64(q: u64, mut n: u64) -> u32 {
    debug_assert!(n > 0 && q > 1);
    let mut k = 0;
    while n.is_multiple_of(q) {
        n /= q;
        k += 1;
    }
    k
}

/// `q`-adic valuation of a rational number.
pub fn v_q(q: u64, x: &Rational) -> Result<ExtendedValuation> {
    require_prime(q)?;
    if x.is_zero() {
        return Ok(ExtendedValuation::Infinity);
    }
    let v = i64::from(val_int(q, x.numer())) - i64::from(val_int(q, x.denom()));
    Ok(ExtendedValuation::Finite(int(v)))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

pub fn lcm_all(xs: &[u64]) -> Result<u64> {
    if xs.is_empty() {
        return Err(Error::EmptyLcm);
    }
    xs.iter().try_fold(1u64, |acc, &x| lcm(acc, x))
}

/// The part of `n` supported on the primes dividing `d`, i.e. the smallest
/// divisor `g` of `n` with `gcd(n / g, d) = 1`.
pub fn gcd_inf(n: u64, d: u64) -> u64 {
    let mut rest = n;
    loop {
        let h = gcd(rest, d);
        if h <= 1 {
            return n / rest;
        }
        rest /= h;
    }
}

/// `n` with all factors of `p` removed.
pub fn prime_to_part(n: u64, p: u64) -> u64 {
    if n == 0 || p < 2 {
        return n;
    }
    n / gcd_inf(n, p)
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(q, _)| q).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, k) in factorize(n) {
        let len = out.len();
        let mut pw = 1u64;
        for _ in 0..k {
            pw *= q;
            for i in 0..len {
                out.push(out[i] * pw);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r = 1u128 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Multiplicative order of `a` modulo `m`, for `gcd(a, m) = 1`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut k = 1;
    let mut x = a;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

/// Legendre symbol `(a / q)` for an odd prime `q`.
pub fn legendre(a: &BigInt, q: u64) -> Result<i8> {
    if q == 2 || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let r = a.mod_floor(&BigInt::from(q)).to_u64().unwrap_or(0);
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (q - 1) / 2, q) == 1 { 1 } else { -1 })
}

pub fn legendre_i64(a: i64, q: u64) -> Result<i8> {
    legendre(&BigInt::from(a), q)
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Integer part of a rational known to be integral.
pub fn as_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_gcd_inf(n: u64, d: u64) -> u64 {
        (1..=n)
            .filter(|g| n.is_multiple_of(*g) && gcd(n / g, d) == 1)
            .min()
            .unwrap()
    }

    #[test]
    fn gcd_inf_matches_minimal_divisor() {
        assert_eq!(gcd_inf(12, 2), 4);
        for n in 1..200 {
            for d in 1..40 {
                assert_eq!(gcd_inf(n, d), brute_gcd_inf(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn legendre_small_cases() {
        assert_eq!(legendre_i64(-1, 19).unwrap(), -1);
        assert_eq!(legendre_i64(-2, 7).unwrap(), -1);
        assert_eq!(legendre_i64(2, 7).unwrap(), 1);
        assert!(matches!(legendre_i64(3, 9), Err(Error::NotOddPrime(9))));
        assert!(matches!(legendre_i64(3, 2), Err(Error::NotOddPrime(2))));
    }

    #[test]
    fn legendre_against_squares() {
        for q in [3u64, 5, 7, 11, 13, 97] {
            for a in -30i64..30 {
                let r = a.rem_euclid(q as i64) as u64;
                let expected = if r == 0 {
                    0
                } else if (1..q).any(|x| x * x % q == r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_i64(a, q).unwrap(), expected, "({a}/{q})");
            }
        }
    }

    #[test]
    fn lcm_all_cases() {
        assert_eq!(lcm_all(&[9, 2, 3]).unwrap(), 18);
        assert_eq!(lcm_all(&[]), Err(Error::EmptyLcm));
    }

    #[test]
    fn valuations() {
        assert_eq!(v_q(3, &rat(18, 5)).unwrap(), ExtendedValuation::Finite(int(2)));
        assert_eq!(v_q(5, &rat(18, 25)).unwrap(), ExtendedValuation::Finite(int(-2)));
        assert_eq!(v_q(5, &int(0)).unwrap(), ExtendedValuation::Infinity);
        assert_eq!(v_q(6, &int(1)), Err(Error::NotPrime(6)));
        assert!(ExtendedValuation::Infinity > ExtendedValuation::Finite(int(1_000_000)));
    }

    #[test]
    fn rational_display() {
        assert_eq!(alloc::format!("{}", rat(4, 9)), "4/9");
        assert_eq!(alloc::format!("{}", rat(6, 3)), "2");
        assert_eq!(alloc::format!("{}", rat(-1, 2)), "-1/2");
        assert_eq!(denom(&rat(6, 4)).unwrap(), 2);
    }

    #[test]
    fn phi_and_divisors() {
        let brute = |n: u64| (1..=n).filter(|k| gcd(*k, n) == 1).count() as u64;
        for n in 1..300 {
            assert_eq!(euler_phi(n), brute(n));
            let ds = divisors(n);
            assert_eq!(ds, (1..=n).filter(|d| n % d == 0).collect::<Vec<_>>());
        }
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(19, 18), 1);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(prime_to_part(12, 2), 3);
        assert_eq!(prime_to_part(12, 5), 12);
    }
}
