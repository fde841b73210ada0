//! Independent route to `Ind V_s`: character multiplicities on the cyclic
//! group, computed straight from the permutation with no closed formulas.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cluster::{ClusterId, ClusterPicture};
use crate::inertia::Permutation;
use crate::numbers::{denom, gcd, int, lcm, prime_to_part, Rational};
use crate::{Error, Result};

use super::RhoSum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub ind_v: RhoSum,
    /// Multiplicity of each character `j` of the cyclic quotient `Z/E`.
    pub characters: Vec<i64>,
    /// Whether multiplicities are constant on each Galois orbit.
    pub uniform: bool,
}

fn image_set(perm: &Permutation, leaves: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = leaves.iter().map(|&r| perm.apply(r)).collect();
    out.sort_unstable();
    out
}

/// `Ind V_s` evaluated in a cyclic quotient `C_E` of inertia, with `E` a
/// multiple of the order of the permutation large enough to carry the
/// characters `gamma_s` and `epsilon_s`.
pub fn oracle_ind_v(pic: &ClusterPicture, perm: &Permutation, s: ClusterId, p: Option<u64>) -> Result<OracleResult> {
    let topo = pic.topology();
    let e = perm.order()?;
    let own: Vec<usize> = topo.leaves(s).to_vec();
    let mut n = 1u64;
    let mut cur = image_set(perm, &own);
    while cur != own {
        cur = image_set(perm, &cur);
        n += 1;
    }
    let g = perm.power(n);

    // orbit lengths of c^n on the odd children
    let odd: Vec<Vec<usize>> = topo
        .children(s)
        .iter()
        .filter(|&&c| topo.size(c) % 2 == 1)
        .map(|&c| topo.leaves(c).to_vec())
        .collect();
    let mut seen = vec![false; odd.len()];
    let mut orbits = Vec::new();
    for start in 0..odd.len() {
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            let img = image_set(&g, &odd[x]);
            x = odd
                .iter()
                .position(|c| *c == img)
                .ok_or_else(|| Error::Integrity("stabiliser does not permute the odd children".into()))?;
        }
        if len > 0 {
            orbits.push(len);
        }
    }

    // mu by walking up from s
    let mut mu = Rational::zero();
    for r in 0..pic.leaf_count() {
        if own.contains(&r) {
            continue;
        }
        let a = topo
            .ancestors(s)
            .into_iter()
            .find(|&a| topo.leaves(a).contains(&r))
            .expect("the top cluster contains every root");
        mu += pic.d(a);
    }
    let lambda = int(n as i64) * (mu.clone() + pic.d(s) * int(odd.len() as i64)) / int(2);
    let t = if lambda.is_zero() {
        1
    } else {
        let b = denom(&lambda)?;
        p.map_or(b, |p| prime_to_part(b, p))
    };
    // None: s odd; Some(true): trivial; Some(false): order two
    let eps = own.len().is_multiple_of(2).then(|| {
        let x = mu * int(n as i64);
        x.is_zero() || (x.numer() % BigInt::from(2)).is_zero()
    });

    let mut big = lcm(e, n * t)?;
    if eps == Some(false) {
        big = lcm(big, 2 * n)?;
    }
    // characters of I_s = <g^n>, of order m, indexed by Z/m
    let m = big / n;
    let mut chars = vec![0i64; m as usize];
    for len in orbits {
        if !m.is_multiple_of(len) {
            return Err(Error::Integrity(format!("orbit of length {len} in a group of order {m}")));
        }
        for k in 0..len {
            chars[(k * (m / len)) as usize] += 1;
        }
    }
    chars[0] -= 1;
    let mut twisted = vec![0i64; m as usize];
    for (j, &a) in chars.iter().enumerate() {
        twisted[(j + (m / t) as usize) % m as usize] = a;
    }
    match eps {
        None => {}
        Some(true) => twisted[0] -= 1,
        Some(false) => twisted[(m / 2) as usize] -= 1,
    }

    let characters: Vec<i64> = (0..big).map(|j| twisted[(j % m) as usize]).collect();
    let mut by_order: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for (j, &a) in characters.iter().enumerate() {
        by_order.entry(big / gcd(j as u64, big)).or_default().push(a);
    }
    let mut ind_v = RhoSum::zero();
    let mut uniform = true;
    for (d, ms) in by_order {
        if ms.iter().any(|&a| a != ms[0]) {
            uniform = false;
        }
        let total: i64 = ms.iter().sum();
        ind_v.add_term(d, Rational::new(total.into(), (ms.len() as i64).into()));
    }
    Ok(OracleResult { ind_v, characters, uniform })
}
