//! The part of the local root number visible from the inertia action.

use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cluster::ClusterPicture;
use crate::inertia::TameAction;
use crate::numbers::{euler_phi, factorize, is_prime, legendre_i64, v_q, ExtendedValuation};
use crate::repn::{epsilon, Epsilon, InertiaRep};
use crate::{Error, Result};

/// `W_{q,e}` for an odd prime `q` not dividing `e`.
pub fn w_factor(q: u64, e: u64) -> Result<i8> {
    if q == 2 || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let f = factorize(e);
    let sym = |a: i64, m: u64| legendre_i64(a, m);
    let value = match f.as_slice() {
        [(2, 1)] => sym(-1, q)?,
        [(2, 2)] => sym(-2, q)?,
        [(2, k)] if *k >= 3 => sym(2, q)?,
        [(l, _)] => sym(q as i64, *l)?,
        [(2, 1), (l, _)] if l % 4 == 3 => sym(-1, q)?,
        _ => 1,
    };
    if value == 0 {
        return Err(Error::Wild { p: q, e });
    }
    Ok(value)
}

/// `m_T mod 2` from the even non-ubereven clusters.
pub fn m_t(pic: &ClusterPicture, action: &TameAction) -> u8 {
    let mut total = 0u64;
    for s in action.orbit_reps(pic.topology()) {
        if !pic.is_even(s) || pic.is_ubereven(s) {
            continue;
        }
        let n = action.stab_index(s);
        let x = pic.mu(s) * crate::numbers::int(n as i64);
        let deep = match v_q(2, &x).expect("2 is prime") {
            ExtendedValuation::Infinity => true,
            ExtendedValuation::Finite(v) => v >= crate::numbers::int(1),
        };
        total += u64::from(deep) + n;
    }
    (total % 2) as u8
}

/// `m_T` read off from the toric part directly, via the same per-cluster
/// case split as [`m_t`].
pub fn m_t_from_epsilons(pic: &ClusterPicture, action: &TameAction) -> u8 {
    let mut total = 0u64;
    for s in action.orbit_reps(pic.topology()) {
        if !pic.is_even(s) || pic.is_ubereven(s) {
            continue;
        }
        let n = action.stab_index(s);
        total += match epsilon(pic, s, n) {
            Epsilon::Zero => 0,
            Epsilon::Trivial => u64::from(n.is_multiple_of(2)),
            Epsilon::OrderTwo => n % 2,
        };
    }
    (total % 2) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFactor {
    pub e: u64,
    pub value: i8,
    pub mult: u64,
    /// The `W_{q,2}^{m_T}` factor from the toric part.
    pub toric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootNumberResult {
    pub sign: i8,
    /// `H^1_t` has inertia invariants, so the sign `(-1)^<rho_T, 1>` depends
    /// on Frobenius and is not determined by the picture.
    pub ambiguous: bool,
    pub factors: Vec<RootFactor>,
}

/// `m_d` for each `rho_d` in `H^1_ab`, pairing each character with its
/// inverse.
pub fn m_values(rep: &InertiaRep) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for (d, a) in rep.h1_ab.iter() {
        let count = (a * crate::numbers::int(euler_phi(d) as i64))
            .to_integer()
            .to_u64()
            .filter(|_| a.is_integer() && !a.is_negative())
            .ok_or_else(|| Error::Integrity(alloc::format!("multiplicity {a} of rho{d} is not a natural number")))?;
        if count % 2 == 1 {
            return Err(Error::Integrity(alloc::format!(
                "odd number {count} of self-dual characters of order {d}"
            )));
        }
        out.push((d, count / 2));
    }
    Ok(out)
}

pub fn root_number(rep: &InertiaRep, q: u64, m_t: u8) -> Result<RootNumberResult> {
    let mut factors = Vec::new();
    let mut sign = 1i8;
    for (d, m) in m_values(rep)? {
        let value = w_factor(q, d)?;
        if m % 2 == 1 {
            sign *= value;
        }
        factors.push(RootFactor { e: d, value, mult: m, toric: false });
    }
    if m_t % 2 == 1 {
        let value = w_factor(q, 2)?;
        sign *= value;
        factors.push(RootFactor { e: 2, value, mult: 1, toric: true });
    }
    Ok(RootNumberResult { sign, ambiguous: !rep.h1_t.get(1).is_zero(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::find_action;
    use crate::numbers::is_prime;
    use crate::repn::{assemble_h1, RhoSum};

    fn rep(ab: &str) -> InertiaRep {
        InertiaRep { h1_ab: ab.parse().unwrap(), h1_t: RhoSum::zero(), order: 1, clusters: Vec::new() }
    }

    #[test]
    fn w_cases() {
        for q in (5..200).filter(|&q| is_prime(q)) {
            let l = |a: i64, m: u64| legendre_i64(a, m).unwrap();
            assert_eq!(w_factor(q, 4).unwrap(), l(-2, q));
            assert_eq!(w_factor(q, 6).unwrap(), l(-1, q));
            assert_eq!(w_factor(q, 2).unwrap(), l(-1, q));
            assert_eq!(w_factor(q, 8).unwrap(), l(2, q));
            assert_eq!(w_factor(q, 9).unwrap(), l(q as i64, 3));
            assert_eq!(w_factor(q, 15).unwrap(), 1);
            assert_eq!(w_factor(q, 10).unwrap(), 1);
            assert_eq!(w_factor(q, 1).unwrap(), 1);
        }
        assert!(matches!(w_factor(3, 3), Err(Error::Wild { .. })));
        assert!(matches!(w_factor(9, 3), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn reciprocity_for_three() {
        for q in (5..1000).filter(|&q| is_prime(q)) {
            assert_eq!(legendre_i64(q as i64, 3).unwrap(), legendre_i64(-3, q).unwrap());
        }
    }

    #[test]
    fn elliptic_signs() {
        for q in [5u64, 7, 11, 13, 97] {
            let l = |a: i64| legendre_i64(a, q).unwrap();
            assert_eq!(root_number(&rep("2rho2"), q, 0).unwrap().sign, l(-1));
            assert_eq!(root_number(&rep("rho4"), q, 0).unwrap().sign, l(-2));
            assert_eq!(root_number(&rep("rho3"), q, 0).unwrap().sign, l(-3));
            assert_eq!(root_number(&rep("rho6"), q, 0).unwrap().sign, l(-1));
            assert_eq!(root_number(&rep("2rho1"), q, 0).unwrap().sign, 1);
        }
        let r = root_number(&rep("0"), 5, 0).unwrap();
        assert_eq!((r.sign, r.ambiguous), (1, false));
        assert!(matches!(root_number(&rep("rho2"), 5, 0), Err(Error::Integrity(_))));
    }

    #[test]
    fn toric_counts() {
        let pic = ClusterPicture::parse("((r r r r)4/9 (r r r r)4/9 (r r r r)4/9 (r r r r)1/2)1/3").unwrap();
        let action = find_action(&pic).unwrap();
        assert_eq!(m_t(&pic, &action), 0);
        let pic = ClusterPicture::parse("((r r)1 r)0").unwrap();
        let action = find_action(&pic).unwrap();
        assert_eq!(m_t(&pic, &action), 0);
        let pic = ClusterPicture::parse("((r r)3 r)1").unwrap();
        let action = find_action(&pic).unwrap();
        assert_eq!(m_t(&pic, &action), 1);
        let h = assemble_h1(&pic, &action, None).unwrap();
        let r = root_number(&h, 7, 1).unwrap();
        assert_eq!(h.h1_t, RhoSum::rho(2));
        assert!(!r.ambiguous);
        assert_eq!(r.sign, -1);
        let pic = ClusterPicture::parse("((r r)1 r)0").unwrap();
        let h = assemble_h1(&pic, &find_action(&pic).unwrap(), None).unwrap();
        assert!(root_number(&h, 7, 0).unwrap().ambiguous);
    }
}
