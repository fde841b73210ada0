//! The inertia representation on H^1 as a sum of `rho_d`, where `rho_d` is
//! the sum of all characters of order `d` of the cyclic inertia image.

pub mod oracle;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::cluster::{ClusterId, ClusterPicture};
use crate::inertia::TameAction;
use crate::numbers::{
    denom, divisors, euler_phi, gcd_inf, int, prime_divisors, prime_to_part, rat, v_q, val_u64, ExtendedValuation,
    Rational,
};
use crate::{Error, Result};

/// Formal sum `sum a_d rho_d` with rational multiplicities; zero terms are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RhoSum(BTreeMap<u64, Rational>);

impl RhoSum {
    pub fn zero() -> RhoSum {
        RhoSum(BTreeMap::new())
    }

    pub fn rho(d: u64) -> RhoSum {
        RhoSum::term(d, int(1))
    }

    pub fn term(d: u64, a: Rational) -> RhoSum {
        let mut r = RhoSum::zero();
        r.add_term(d, a);
        r
    }

    pub fn add_term(&mut self, d: u64, a: Rational) {
        assert!(d > 0, "rho_0 does not exist");
        let entry = self.0.entry(d).or_insert_with(Rational::zero);
        *entry += a;
        if entry.is_zero() {
            self.0.remove(&d);
        }
    }

    pub fn get(&self, d: u64) -> Rational {
        self.0.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.0.iter().map(|(&d, a)| (d, a))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> RhoSum {
        let mut out = RhoSum::zero();
        for (d, a) in self.iter() {
            out.add_term(d, a * c);
        }
        out
    }

    /// `sum a_d phi(d)`.
    pub fn dim(&self) -> Rational {
        self.iter().map(|(d, a)| a * int(euler_phi(d) as i64)).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|a| a.is_integer())
    }

    pub fn has_negative(&self) -> bool {
        self.0.values().any(|a| a.is_negative())
    }
}

impl Add for RhoSum {
    type Output = RhoSum;
    fn add(mut self, rhs: RhoSum) -> RhoSum {
        self += rhs;
        self
    }
}

impl AddAssign for RhoSum {
    fn add_assign(&mut self, rhs: RhoSum) {
        for (d, a) in rhs.0 {
            self.add_term(d, a);
        }
    }
}

impl Sub for RhoSum {
    type Output = RhoSum;
    fn sub(mut self, rhs: RhoSum) -> RhoSum {
        self -= rhs;
        self
    }
}

impl SubAssign for RhoSum {
    fn sub_assign(&mut self, rhs: RhoSum) {
        for (d, a) in rhs.0 {
            self.add_term(d, -a);
        }
    }
}

impl Neg for RhoSum {
    type Output = RhoSum;
    fn neg(self) -> RhoSum {
        self.scaled(&int(-1))
    }
}

/// Written as `2rho2+rho9`, `1/2rho9`, `-rho1` or `0`.
impl fmt::Display for RhoSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, a)) in self.iter().enumerate() {
            let (sign, mag) = if a.is_negative() { ("-", -a.clone()) } else { ("+", a.clone()) };
            if i > 0 || sign == "-" {
                f.write_str(sign)?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "rho{d}")?;
        }
        Ok(())
    }
}

impl FromStr for RhoSum {
    type Err = Error;

    fn from_str(text: &str) -> Result<RhoSum> {
        let bad = || Error::Invalid(format!("cannot read rho sum {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = RhoSum::zero();
        if compact == "0" {
            return Ok(out);
        }
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let neg = rest.starts_with('-');
            if rest.starts_with('+') || neg {
                rest = &rest[1..];
            }
            let at = rest.find("rho").ok_or_else(bad)?;
            let coeff = if at == 0 { int(1) } else { Rational::from_str(&rest[..at]).map_err(|_| bad())? };
            rest = &rest[at + 3..];
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let d: u64 = rest[..end].parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            rest = &rest[end..];
            out.add_term(d, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

/// `gamma_t (x) rho_d` for a character `gamma_t` of order `t`.
pub fn twist(t: u64, d: u64) -> RhoSum {
    let l = d / crate::numbers::gcd(d, t) * t;
    let special: Vec<u64> = prime_divisors(t)
        .into_iter()
        .filter(|&q| val_u64(q, d) == val_u64(q, t))
        .collect();
    let base = rat(euler_phi(d) as i64, euler_phi(l) as i64);
    let mut out = RhoSum::zero();
    // every s = l / prod q_i^{m_i} with 0 <= m_i <= v_{q_i}(t)
    let mut exps = alloc::vec![0u32; special.len()];
    loop {
        let mut s = l;
        for (q, &m) in special.iter().zip(&exps) {
            s /= q.pow(m);
        }
        let mut alpha = base.clone();
        for &q in &special {
            if val_u64(q, s) == val_u64(q, t) {
                alpha *= rat(q as i64 - 2, q as i64 - 1);
            }
        }
        out.add_term(s, alpha);
        let mut k = 0;
        loop {
            if k == special.len() {
                return out;
            }
            exps[k] += 1;
            if exps[k] <= val_u64(special[k], t) {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

/// `gcd(n, s^inf) phi(s) / phi(s gcd(n, s^inf))`.
pub fn beta(n: u64, s: u64) -> Rational {
    let g = gcd_inf(n, s);
    rat((g * euler_phi(s)) as i64, euler_phi(s * g) as i64)
}

/// Induction from the subgroup of index `n`.
pub fn induce(r: &RhoSum, n: u64) -> RhoSum {
    let mut out = RhoSum::zero();
    for (d, a) in r.iter() {
        let g = gcd_inf(n, d);
        let coeff = a * beta(n, d);
        for n1 in divisors(n / g) {
            out.add_term(d * g * n1, coeff.clone());
        }
    }
    out
}

/// The character `epsilon_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Epsilon {
    /// `s` is odd.
    Zero,
    Trivial,
    OrderTwo,
}

impl Epsilon {
    pub fn order(self) -> u64 {
        match self {
            Epsilon::Zero | Epsilon::Trivial => 1,
            Epsilon::OrderTwo => 2,
        }
    }
}

pub fn ind_epsilon(eps: Epsilon, n: u64) -> RhoSum {
    let mut out = RhoSum::zero();
    match eps {
        Epsilon::Zero => {}
        Epsilon::Trivial => {
            for m in divisors(n) {
                out.add_term(m, int(1));
            }
        }
        Epsilon::OrderTwo => {
            for m in divisors(2 * n).into_iter().filter(|m| !n.is_multiple_of(*m)) {
                out.add_term(m, int(1));
            }
        }
    }
    out
}

/// Closed form of `Ind V_s` from the orbit data of `s`: stabiliser index
/// `n`, child orbit length `n_prime`, number of odd children `odd`, order
/// `t` of the twisting character and `epsilon_s`.
pub fn ind_v(n: u64, n_prime: u64, odd: u64, t: u64, eps: Epsilon) -> RhoSum {
    let floor = odd / n_prime;
    let mut out = RhoSum::zero();
    for d in divisors(n_prime) {
        for (s, alpha) in twist(t, d).iter() {
            let g = gcd_inf(n, s);
            let coeff = alpha * beta(n, s) * int(floor as i64);
            for n1 in divisors(n / g) {
                out.add_term(s * g * n1, coeff.clone());
            }
        }
    }
    let rest = odd as i64 - (n_prime * floor) as i64 - 1;
    if rest != 0 {
        let g = gcd_inf(n, t);
        let coeff = int(rest) * beta(n, t) / int(euler_phi(t) as i64);
        for n2 in divisors(n / g) {
            out.add_term(t * n2 * g, coeff.clone());
        }
    }
    out - ind_epsilon(eps, n)
}

/// The per-cluster quantities entering `Ind V_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterRepData {
    pub cluster: ClusterId,
    pub n: u64,
    pub n_prime: u64,
    pub odd_children: u64,
    pub floor: u64,
    /// The orphan exists and is odd.
    pub odd_orphan: bool,
    pub mu: Rational,
    pub lambda: Rational,
    pub gamma_order: u64,
    pub epsilon: Epsilon,
    pub ind_v: RhoSum,
    pub ind_epsilon: RhoSum,
}

/// `lambda_s = n_s (mu_s + d_s |s^odd|) / 2`.
pub fn lambda(pic: &ClusterPicture, s: ClusterId, n: u64) -> Rational {
    let odd = pic.odd_children(s).len() as i64;
    int(n as i64) * (pic.mu(s) + pic.d(s) * int(odd)) / int(2)
}

pub fn epsilon(pic: &ClusterPicture, s: ClusterId, n: u64) -> Epsilon {
    if !pic.is_even(s) {
        return Epsilon::Zero;
    }
    let x = pic.mu(s) * int(n as i64);
    match v_q(2, &x).expect("2 is prime") {
        ExtendedValuation::Infinity => Epsilon::Trivial,
        ExtendedValuation::Finite(v) if v >= int(1) => Epsilon::Trivial,
        ExtendedValuation::Finite(_) => Epsilon::OrderTwo,
    }
}

/// `t`: the prime-to-`p` part of the denominator of `lambda` (no prime
/// removed when `p` is `None`).
pub fn gamma_order(lambda: &Rational, p: Option<u64>) -> Result<u64> {
    if lambda.is_zero() {
        return Ok(1);
    }
    let b = denom(lambda)?;
    Ok(match p {
        Some(p) => prime_to_part(b, p),
        None => b,
    })
}

pub fn cluster_rep_data(pic: &ClusterPicture, action: &TameAction, s: ClusterId, p: Option<u64>) -> Result<ClusterRepData> {
    let topo = pic.topology();
    if !topo.is_proper(s) {
        return Err(Error::Invalid(format!("{} is not a proper cluster", topo.name(s))));
    }
    let n = action.stab_index(s);
    let n_prime = action.child_orbit(s);
    let odd_kids = pic.odd_children(s);
    let odd = odd_kids.len() as u64;
    let orphan = action.orphan(s);
    let lam = lambda(pic, s, n);
    let t = gamma_order(&lam, p)?;
    let eps = epsilon(pic, s, n);
    let iv = ind_v(n, n_prime, odd, t, eps);
    if iv.has_negative() {
        return Err(Error::Integrity(format!("negative multiplicity in Ind V of {}: {iv}", topo.name(s))));
    }
    Ok(ClusterRepData {
        cluster: s,
        n,
        n_prime,
        odd_children: odd,
        floor: odd / n_prime,
        odd_orphan: orphan.is_some_and(|o| odd_kids.contains(&o)),
        mu: pic.mu(s),
        lambda: lam,
        gamma_order: t,
        epsilon: eps,
        ind_v: iv,
        ind_epsilon: ind_epsilon(eps, n),
    })
}

/// `H^1 = H^1_ab (+) H^1_t (x) sp(2)` as representations of inertia.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaRep {
    pub h1_ab: RhoSum,
    pub h1_t: RhoSum,
    /// Order of the inertia image on the roots; `epsilon` and `gamma` may
    /// need a larger quotient of inertia.
    pub order: u64,
    /// Data of one proper non-ubereven cluster per orbit.
    pub clusters: Vec<ClusterRepData>,
}

impl InertiaRep {
    /// `dim H^1_ab + 2 dim H^1_t`.
    pub fn total_dim(&self) -> Rational {
        self.h1_ab.dim() + self.h1_t.dim() * int(2)
    }
}

pub fn assemble_h1(pic: &ClusterPicture, action: &TameAction, p: Option<u64>) -> Result<InertiaRep> {
    if pic.leaf_count() < 3 {
        return Err(Error::Invalid("need at least three roots".into()));
    }
    let topo = pic.topology();
    let mut h1_ab = RhoSum::zero();
    let mut h1_t = RhoSum::zero();
    let mut clusters = Vec::new();
    for s in action.orbit_reps(topo) {
        if pic.is_ubereven(s) {
            continue;
        }
        let data = cluster_rep_data(pic, action, s, p)?;
        h1_ab += data.ind_v.clone();
        h1_t += data.ind_epsilon.clone();
        clusters.push(data);
    }
    if pic.is_even(topo.root()) {
        h1_t -= RhoSum::rho(1);
    }
    for (name, part) in [("H^1_ab", &h1_ab), ("H^1_t", &h1_t)] {
        if part.has_negative() || !part.is_integral() {
            return Err(Error::Integrity(format!("{name} = {part} is not a genuine representation")));
        }
    }
    let rep = InertiaRep { h1_ab, h1_t, order: action.order, clusters };
    let expected = int(2 * pic.genus() as i64);
    if rep.total_dim() != expected {
        return Err(Error::Integrity(format!(
            "dimension {} differs from twice the genus {}",
            rep.total_dim(),
            expected
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::find_action;

    const WORKED: &str = "((r r r r)4/9 (r r r r)4/9 (r r r r)4/9 (r r r r)1/2)1/3";

    fn rs(text: &str) -> RhoSum {
        text.parse().unwrap()
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist(3, 1), rs("1/2rho3"));
        assert_eq!(twist(3, 3), rs("rho1+1/2rho3"));
        assert_eq!(twist(1, 7), rs("rho7"));
        assert_eq!(twist(2, 2), rs("rho1"));
        assert_eq!(twist(9, 9), rs("rho1+rho3+1/2rho9"));
    }

    #[test]
    fn twist_dimension() {
        for t in 1..40 {
            for d in 1..40 {
                let r = twist(t, d);
                assert_eq!(r.dim(), int(euler_phi(d) as i64), "t={t} d={d}");
            }
        }
    }

    #[test]
    fn induce_dimension() {
        for n in 1..30 {
            for d in 1..30 {
                let r = induce(&RhoSum::rho(d), n);
                assert_eq!(r.dim(), int((n * euler_phi(d)) as i64));
            }
        }
    }

    #[test]
    fn worked_example_clusters() {
        let pic = ClusterPicture::parse(WORKED).unwrap();
        let action = find_action(&pic).unwrap();
        let t = pic.topology();
        let s1 = t.find(&[0, 1, 2, 3]).unwrap();
        let s4 = t.find(&[12, 13, 14, 15]).unwrap();
        let d1 = cluster_rep_data(&pic, &action, s1, None).unwrap();
        assert_eq!((d1.n, d1.n_prime, d1.odd_children, d1.floor), (3, 3, 4, 1));
        assert!(d1.odd_orphan);
        assert_eq!(d1.lambda, rat(26, 3));
        assert_eq!(d1.gamma_order, 3);
        assert_eq!(d1.epsilon, Epsilon::Trivial);
        assert_eq!(d1.ind_v, rs("rho9"));
        let d4 = cluster_rep_data(&pic, &action, s4, None).unwrap();
        assert_eq!((d4.n, d4.n_prime, d4.odd_children, d4.floor), (1, 2, 4, 2));
        assert!(!d4.odd_orphan);
        assert_eq!(d4.gamma_order, 1);
        assert_eq!(d4.ind_v, rs("2rho2"));
        let rep = assemble_h1(&pic, &action, None).unwrap();
        assert_eq!(rep.h1_ab, rs("2rho2+rho9"));
        assert_eq!(rep.h1_t, rs("rho1+rho3"));
        assert_eq!(rep.total_dim(), int(14));
    }

    #[test]
    fn alpha_beta_table() {
        // (d, t, s) -> alpha, and beta(3, s)
        assert_eq!(twist(3, 1).get(3), rat(1, 2));
        assert_eq!(beta(3, 3), int(1));
        assert_eq!(twist(3, 3).get(1), int(1));
        assert_eq!(beta(3, 1), int(1));
        assert_eq!(twist(3, 3).get(3), rat(1, 2));
        assert_eq!(twist(1, 1).get(1), int(1));
        assert_eq!(beta(1, 1), int(1));
        assert_eq!(twist(1, 2).get(2), int(1));
        assert_eq!(beta(1, 2), int(1));
    }

    #[test]
    fn rho_sum_text() {
        for text in ["0", "rho1", "2rho2+rho9", "1/2rho9", "-rho1+3rho4"] {
            assert_eq!(alloc::format!("{}", rs(text)), text);
        }
        assert!("2rho0".parse::<RhoSum>().is_err());
        assert!("rho".parse::<RhoSum>().is_err());
    }
}
