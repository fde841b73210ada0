//! Explicit polynomials realising a picture of polynomial type.
//!
//! Roots are modelled exactly as `sum c_m u^m` with `u^e = p` and `c_m` in
//! `Z[zeta_e]`; conjugation by the inertia generator is `u -> zeta_e u`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cluster::{ClusterId, ClusterPicture};
use crate::fp::{vanishes_mod, Fp, Poly};
use crate::inertia::{find_action_for_prime, TameAction};
use crate::numbers::{ceil, denom, divisors, gcd, int, lcm, mult_order, pow_mod, rat, Rational};
use crate::{Error, Result};

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree
/// first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact quotient by a monic polynomial.
fn div_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for i in (0..q.len()).rev() {
        let c = r[i + dm].clone();
        if c.is_zero() {
            continue;
        }
        for (j, mj) in m.iter().enumerate() {
            r[i + j] -= &c * mj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// Element of `Z[zeta_e]` in the power basis `1, zeta, ..., zeta^{phi(e)-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInt(Vec<BigInt>);

impl CyclotomicInt {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.0[1..].iter().all(Zero::is_zero).then(|| self.0[0].clone())
    }
}

/// `Z[zeta_e]`, with `zeta_e` a root of the cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    e: u64,
    modulus: Vec<BigInt>,
}

impl CyclotomicRing {
    pub fn new(e: u64) -> CyclotomicRing {
        assert!(e > 0);
        CyclotomicRing { e, modulus: cyclotomic_polynomial(e) }
    }

    pub fn order(&self) -> u64 {
        self.e
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> CyclotomicInt {
        let deg = self.degree();
        for i in (deg..v.len()).rev() {
            let c = core::mem::take(&mut v[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..deg {
                v[i - deg + j] -= &c * &self.modulus[j];
            }
        }
        v.resize(deg, BigInt::zero());
        CyclotomicInt(v)
    }

    pub fn zero(&self) -> CyclotomicInt {
        CyclotomicInt(vec![BigInt::zero(); self.degree()])
    }

    pub fn from_int(&self, c: BigInt) -> CyclotomicInt {
        let mut v = self.zero();
        v.0[0] = c;
        v
    }

    /// `zeta_e^k`.
    pub fn zeta_pow(&self, k: u64) -> CyclotomicInt {
        let k = (k % self.e) as usize;
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::one();
        self.reduce(v)
    }

    pub fn add(&self, a: &CyclotomicInt, b: &CyclotomicInt) -> CyclotomicInt {
        CyclotomicInt(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CyclotomicInt, b: &CyclotomicInt) -> CyclotomicInt {
        CyclotomicInt(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn mul(&self, a: &CyclotomicInt, b: &CyclotomicInt) -> CyclotomicInt {
        let mut out = vec![BigInt::zero(); 2 * self.degree()];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    /// Image under `zeta -> zeta^a`.
    pub fn galois(&self, x: &CyclotomicInt, a: u64) -> CyclotomicInt {
        let mut out = self.zero();
        for (i, c) in x.0.iter().enumerate() {
            if !c.is_zero() {
                let term = self.zeta_pow(a * i as u64);
                out = self.add(&out, &self.mul(&term, &self.from_int(c.clone())));
            }
        }
        out
    }
}

/// `sum c_m u^m` with `u^e = p`; exponents are kept unreduced so the leading
/// term carries the valuation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiAdicElement {
    terms: BTreeMap<u64, CyclotomicInt>,
}

impl PiAdicElement {
    pub fn zero() -> PiAdicElement {
        PiAdicElement::default()
    }

    pub fn monomial(m: u64, c: CyclotomicInt) -> PiAdicElement {
        let mut out = PiAdicElement::zero();
        if !c.is_zero() {
            out.terms.insert(m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &CyclotomicInt)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, ring: &CyclotomicRing, m: u64, c: CyclotomicInt) {
        let sum = match self.terms.remove(&m) {
            Some(old) => ring.add(&old, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &PiAdicElement, ring: &CyclotomicRing) -> PiAdicElement {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.insert_add(ring, m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PiAdicElement, ring: &CyclotomicRing) -> PiAdicElement {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.insert_add(ring, m, ring.sub(&ring.zero(), c));
        }
        out
    }

    pub fn mul(&self, other: &PiAdicElement, ring: &CyclotomicRing) -> PiAdicElement {
        let mut out = PiAdicElement::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.insert_add(ring, m1 + m2, ring.mul(c1, c2));
            }
        }
        out
    }

    /// Image under `u -> zeta_e^k u`.
    pub fn conjugate(&self, k: u64, ring: &CyclotomicRing) -> PiAdicElement {
        let mut out = PiAdicElement::zero();
        for (m, c) in self.terms() {
            out.insert_add(ring, m, ring.mul(c, &ring.zeta_pow(k * m)));
        }
        out
    }

    /// The value in `Z` when this is fixed by all conjugations: every
    /// exponent divisible by `e` and every coefficient a rational integer.
    pub fn descend(&self, p: u64, ring: &CyclotomicRing) -> Option<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in self.terms() {
            if m % ring.order() != 0 {
                return None;
            }
            let k = u32::try_from(m / ring.order()).ok()?;
            total += c.as_integer()? * BigInt::from(p).pow(k);
        }
        Some(total)
    }
}

/// The residue field of `Z[zeta_e]` at one fixed prime above `p`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    fp: Fp,
    g: Poly,
}

impl ResidueField {
    pub fn new(p: u64, e: u64) -> Result<ResidueField> {
        if e.is_multiple_of(p) {
            return Err(Error::Wild { p, e });
        }
        let fp = Fp { p };
        let phi = fp.poly(&cyclotomic_polynomial(e));
        let f = mult_order(p % e.max(1), e) as usize;
        let g = fp.equal_degree_factor(&phi, f);
        Ok(ResidueField { fp, g })
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn is_unit(&self, c: &CyclotomicInt) -> bool {
        !vanishes_mod(self.fp, c.coeffs(), &self.g)
    }
}

/// Result of comparing two distinct roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffValuation {
    Unit(Rational),
    /// The first nonzero coefficient of the difference, at `u^exponent`,
    /// vanishes in the residue field.
    NonUnit { exponent: u64 },
}

pub fn valuation_of_difference(
    a: &PiAdicElement,
    b: &PiAdicElement,
    ring: &CyclotomicRing,
    residue: &ResidueField,
) -> Result<DiffValuation> {
    let diff = a.sub(b, ring);
    let (m, c) = diff
        .terms()
        .next()
        .ok_or_else(|| Error::Invalid("the two roots are equal".into()))?;
    Ok(if residue.is_unit(c) {
        DiffValuation::Unit(rat(m as i64, ring.order() as i64))
    } else {
        DiffValuation::NonUnit { exponent: m }
    })
}

/// Smallest integer `m >= 0` making every depth nonnegative, and the shifted
/// picture.
pub fn shift_depths(pic: &ClusterPicture) -> (ClusterPicture, i64) {
    let low = pic.min_depth();
    let m = if low.is_negative() { ceil(&-low).to_i64().expect("small shift") } else { 0 };
    (pic.shifted(&int(m)), m)
}

/// One leaf per inertia orbit, chosen so that no two distinct conjugate
/// clusters both meet the set.
pub fn choose_representatives(pic: &ClusterPicture, action: &TameAction) -> Vec<usize> {
    let topo = pic.topology();
    let mut out = Vec::new();
    let mut stack = vec![topo.root()];
    while let Some(s) = stack.pop() {
        if !topo.is_proper(s) {
            out.push(topo.leaves(s)[0]);
            continue;
        }
        let step = action.generator.power(action.stab_index(s));
        let mut covered: Vec<ClusterId> = Vec::new();
        for &c in topo.children(s) {
            if covered.contains(&c) {
                continue;
            }
            stack.push(c);
            let mut x = c;
            loop {
                covered.push(x);
                x = topo.image(step.images(), x).expect("automorphism");
                if x == c {
                    break;
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The integers `a(y, s)`; absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientTable {
    values: BTreeMap<(usize, ClusterId), u64>,
}

impl CoefficientTable {
    pub fn get(&self, y: usize, s: ClusterId) -> u64 {
        self.values.get(&(y, s)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, ClusterId), u64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

pub fn assign_coefficients(pic: &ClusterPicture, action: &TameAction, ys: &[usize], p: u64) -> Result<CoefficientTable> {
    assign_from(pic, action, ys, p, 1)
}

/// As [`assign_coefficients`], trying values from `start` upwards.
fn assign_from(pic: &ClusterPicture, action: &TameAction, ys: &[usize], p: u64, start: u64) -> Result<CoefficientTable> {
    let topo = pic.topology();
    let mut table = CoefficientTable::default();
    for s in topo.proper() {
        let kids: Vec<ClusterId> = topo
            .children(s)
            .iter()
            .copied()
            .filter(|&c| ys.iter().any(|&y| topo.contains(c, y)))
            .collect();
        if kids.is_empty() {
            continue;
        }
        let n = action.stab_index(s);
        let l = denom(&(pic.d(s) * int(n as i64)))?;
        // roots of unity that can occur among the conjugates inside s and lie in F_p
        let g = gcd(l, p - 1);
        let mut chosen: Vec<u64> = Vec::new();
        for &kid in &kids {
            let value = if action.orphan(s) == Some(kid) {
                0
            } else {
                let v = (start..p)
                    .find(|&v| {
                        chosen.iter().all(|&w| {
                            let ratio = v * pow_mod(w, p - 2, p) % p;
                            pow_mod(ratio, g, p) != 1
                        })
                    })
                    .ok_or_else(|| {
                        let needed = kids.iter().filter(|&&k| action.orphan(s) != Some(k)).count();
                        Error::PrimeTooSmall(format!(
                            "cluster {} needs {needed} coefficients in distinct classes of F_{p}^*/mu_{g}, which has {}",
                            topo.name(s),
                            (p - 1) / g
                        ))
                    })?;
                chosen.push(v);
                v
            };
            if value != 0 {
                for &y in ys.iter().filter(|&&y| topo.contains(kid, y)) {
                    table.values.insert((y, s), value);
                }
            }
        }
    }
    Ok(table)
}

/// `alpha(y) = sum_s a(y, s) w^{n d_s}` in the ring with `w^n = p`.
fn alpha(pic: &ClusterPicture, table: &CoefficientTable, y: usize, n: u64, ring: &CyclotomicRing) -> Result<PiAdicElement> {
    let topo = pic.topology();
    let mut out = PiAdicElement::zero();
    let mut s = topo.parent(topo.leaf(y));
    while let Some(c) = s {
        let a = table.get(y, c);
        if a != 0 {
            let x = pic.d(c) * int(n as i64);
            if x.is_negative() {
                return Err(Error::Invalid("depths must be nonnegative; shift the picture first".into()));
            }
            let m = x
                .is_integer()
                .then(|| x.to_integer().to_u64())
                .flatten()
                .ok_or_else(|| Error::Integrity(format!("depth {} has denominator not dividing {n}", pic.d(c))))?;
            out = out.add(&PiAdicElement::monomial(m, ring.from_int(BigInt::from(a))), ring);
        }
        s = topo.parent(c);
    }
    Ok(out)
}

/// Every root, indexed by leaf, in the ring with `u^e = p`.
pub fn build_roots(
    pic: &ClusterPicture,
    action: &TameAction,
    ys: &[usize],
    table: &CoefficientTable,
    ring: &CyclotomicRing,
) -> Result<Vec<PiAdicElement>> {
    let mut roots: Vec<Option<PiAdicElement>> = vec![None; pic.leaf_count()];
    for &y in ys {
        let base = alpha(pic, table, y, ring.order(), ring)?;
        let len = action.generator.orbit_len(y);
        if base.conjugate(len, ring) != base {
            return Err(Error::Integrity(format!("root of r{} is not fixed by its stabiliser", y + 1)));
        }
        let mut leaf = y;
        for k in 0..len {
            roots[leaf] = Some(base.conjugate(k, ring));
            leaf = action.generator.apply(leaf);
        }
    }
    roots
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::Integrity(format!("root r{} lies in no chosen orbit", i + 1))))
        .collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `prod_k (x - sigma^k alpha)` over the `n` conjugates, descended to `Z[x]`.
pub fn expand_orbit(root: &PiAdicElement, n: u64, p: u64, ring: &CyclotomicRing) -> Result<Vec<BigInt>> {
    let one = PiAdicElement::monomial(0, ring.from_int(BigInt::one()));
    let mut coeffs: Vec<PiAdicElement> = vec![one];
    for k in 0..n {
        let r = root.conjugate(k, ring);
        let mut next = vec![PiAdicElement::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c, ring);
            next[i] = next[i].sub(&c.mul(&r, ring), ring);
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.descend(p, ring)
                .ok_or_else(|| Error::Integrity(format!("coefficient of x^{i} does not descend to Z: {c:?}")))
        })
        .collect()
}

/// Clusters of a root set, from the balls of pairwise valuations.
pub fn recover_picture(roots: &[PiAdicElement], ring: &CyclotomicRing, residue: &ResidueField) -> Result<ClusterPicture> {
    let n = roots.len();
    let mut v = vec![vec![None::<Rational>; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match valuation_of_difference(&roots[i], &roots[j], ring, residue)? {
                DiffValuation::Unit(x) => {
                    v[i][j] = Some(x.clone());
                    v[j][i] = Some(x);
                }
                DiffValuation::NonUnit { exponent } => {
                    return Err(Error::Integrity(format!(
                        "roots r{} and r{} differ by a non-unit at u^{exponent}",
                        i + 1,
                        j + 1
                    )))
                }
            }
        }
    }
    let mut clusters: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for i in 0..n {
        for t in v[i].iter().flatten() {
            let ball: Vec<usize> = (0..n).filter(|&j| j == i || v[i][j].as_ref().is_some_and(|x| x >= t)).collect();
            let depth = ball
                .iter()
                .flat_map(|&a| ball.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
                .map(|(a, b)| v[a][b].clone().expect("distinct"))
                .min()
                .expect("ball has two roots");
            clusters.insert(ball, depth);
        }
    }
    let list: Vec<(Vec<usize>, Rational)> = clusters.into_iter().collect();
    ClusterPicture::from_clusters(n, &list)
}

/// Whether `pic` and `other` agree as pictures, depths included.
pub fn round_trip(pic: &ClusterPicture, other: &ClusterPicture) -> bool {
    pic.isomorphism(other).is_some()
}

/// A polynomial over `Q_p` whose picture matches the input.
#[derive(Clone, Debug)]
pub struct WitnessPolynomial {
    pub p: u64,
    pub e: u64,
    /// Depths were raised by `shift` for the construction; `f` already
    /// undoes it.
    pub shift: i64,
    pub representatives: Vec<usize>,
    pub table: CoefficientTable,
    /// Roots of the shifted polynomial, by leaf, with `u^e = p`.
    pub roots: Vec<PiAdicElement>,
    /// Minimal polynomial of each representative, in the order of
    /// `representatives`.
    pub factors: Vec<Vec<BigInt>>,
    /// Coefficients of `f`, constant term first.
    pub f: Vec<BigInt>,
    pub recovered: ClusterPicture,
    pub round_trip: bool,
    /// Assignments rejected because a difference had a non-unit leading
    /// coefficient.
    pub retries: u32,
    pub warnings: Vec<String>,
}

const MAX_RETRIES: u32 = 16;

/// `g(x) = f(p^m x)`, whose roots are those of `f` divided by `p^m`.
fn substitute_scale(f: &[BigInt], p: u64, m: i64) -> Vec<BigInt> {
    let step = BigInt::from(p).pow(m as u32);
    let mut scale = BigInt::one();
    f.iter()
        .map(|c| {
            let out = c * &scale;
            scale *= &step;
            out
        })
        .collect()
}

pub fn construct(pic: &ClusterPicture, p: u64) -> Result<WitnessPolynomial> {
    if p == 2 {
        return Err(Error::NotOddPrime(2));
    }
    let (action, warnings) = find_action_for_prime(pic, p)?;
    let e = action.order;
    let (shifted, m) = shift_depths(pic);
    let ring = CyclotomicRing::new(e);
    let residue = ResidueField::new(p, e)?;
    let ys = choose_representatives(&shifted, &action);
    let mut retries = 0;
    let (table, roots, recovered) = loop {
        let table = assign_from(&shifted, &action, &ys, p, 1 + u64::from(retries))?;
        let roots = build_roots(&shifted, &action, &ys, &table, &ring)?;
        match recover_picture(&roots, &ring, &residue) {
            Ok(rec) => break (table, roots, rec),
            Err(Error::Integrity(msg)) if msg.contains("non-unit") && retries < MAX_RETRIES => retries += 1,
            Err(err) => return Err(err),
        }
    };
    let mut factors = Vec::with_capacity(ys.len());
    let mut f = vec![BigInt::one()];
    for &y in &ys {
        let n = action.generator.orbit_len(y);
        let small = CyclotomicRing::new(n);
        let a = alpha(&shifted, &table, y, n, &small)?;
        let factor = substitute_scale(&expand_orbit(&a, n, p, &small)?, p, m);
        f = poly_mul(&f, &factor);
        factors.push(factor);
    }
    if f.len() != pic.leaf_count() + 1 {
        return Err(Error::Integrity(format!("degree {} differs from {} roots", f.len() - 1, pic.leaf_count())));
    }
    let recovered = recovered.shifted(&int(-m));
    let ok = round_trip(pic, &recovered);
    Ok(WitnessPolynomial {
        p,
        e,
        shift: m,
        representatives: ys,
        table,
        roots,
        factors,
        f,
        recovered,
        round_trip: ok,
        retries,
        warnings,
    })
}

/// Denominators of `v(r - sigma^k r)` for `0 < k < n`, where `n` is the
/// orbit length of `r`.
pub fn conjugate_difference_denominators(
    r: &PiAdicElement,
    ring: &CyclotomicRing,
    residue: &ResidueField,
) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for k in 1..ring.order() {
        let c = r.conjugate(k, ring);
        if c == *r {
            break;
        }
        match valuation_of_difference(r, &c, ring, residue)? {
            DiffValuation::Unit(v) => out.push(denom(&v)?),
            DiffValuation::NonUnit { exponent } => {
                return Err(Error::Integrity(format!("non-unit leading coefficient at u^{exponent}")))
            }
        }
    }
    Ok(out)
}

/// Orbit length of `r` under `u -> zeta u`.
pub fn orbit_length(r: &PiAdicElement, ring: &CyclotomicRing) -> u64 {
    (1..=ring.order()).find(|&k| r.conjugate(k, ring) == *r).expect("zeta^e = 1")
}

/// Least common multiple of a list, 1 when empty.
pub fn lcm_or_one(xs: &[u64]) -> Result<u64> {
    xs.iter().try_fold(1u64, |acc, &x| lcm(acc, x))
}

/// Renders an integer polynomial as `x^2 - 19`.
pub fn format_poly(f: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let show_coeff = !mag.is_one() || i == 0;
        if show_coeff {
            out.push_str(&format!("{mag}"));
        }
        match i {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
