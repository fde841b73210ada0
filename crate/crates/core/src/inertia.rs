//! Cyclic inertia actions on cluster pictures.
//!
//! An action is a permutation `c` of the roots generating the image of
//! inertia. It satisfies the polynomial-type hypothesis when it is an
//! automorphism of the picture and, for every proper cluster `s` with
//! stabiliser index `n_s`, every child of `s` other than the orphan lies in a
//! stabiliser orbit of length `denom(d_s n_s)`, while the stabiliser index of
//! each cluster is the lcm of `denom(d*)` over its strict ancestors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cluster::{Canonical, ClusterId, ClusterPicture, Topology};
use crate::numbers::{denom, divisors, gcd_inf, int, is_prime, lcm, lcm_all, Rational};
use crate::{Error, Result};

/// A permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based cycle notation such as `(1,5,9)(2,6)` on `n` points.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let bad = |msg: &str| Error::Invalid(format!("cycle notation: {msg}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
            let cycle: Vec<usize> = if body[..close].is_empty() {
                Vec::new()
            } else {
                body[..close]
                    .split(',')
                    .map(|t| t.parse::<usize>().ok().filter(|&v| v >= 1 && v <= n).map(|v| v - 1))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad(&format!("expected comma-separated points in 1..={n}")))?
            };
            for (i, &a) in cycle.iter().enumerate() {
                if seen[a] {
                    return Err(bad("point repeated"));
                }
                seen[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
            rest = &body[close + 1..];
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn power(&self, k: u64) -> Permutation {
        let mut out: Vec<usize> = (0..self.0.len()).collect();
        for cycle in self.cycles() {
            let len = cycle.len() as u64;
            let shift = (k % len) as usize;
            for (i, &a) in cycle.iter().enumerate() {
                out[a] = cycle[(i + shift) % cycle.len()];
            }
        }
        Permutation(out)
    }

    /// All cycles, fixed points included, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> Result<u64> {
        self.cycles().iter().try_fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Length of the orbit of point `i`.
    pub fn orbit_len(&self, i: usize) -> u64 {
        let mut k = 1;
        let mut x = self.0[i];
        while x != i {
            x = self.0[x];
            k += 1;
        }
        k
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (i, a) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a + 1)?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Orbit data of one cluster under a tame action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAction {
    /// `c(s)`.
    pub image: ClusterId,
    /// `n_s = [C : Stab(s)]`.
    pub stab_index: u64,
    /// Length of the stabiliser orbits of the non-orphan children (1 on
    /// singletons).
    pub child_orbit: u64,
    pub orphan: Option<ClusterId>,
}

/// A cyclic action of polynomial type, with its orbit data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameAction {
    pub generator: Permutation,
    pub order: u64,
    pub clusters: Vec<ClusterAction>,
}

impl TameAction {
    /// Orbit data of `perm` on a shape, requiring the stabiliser of each
    /// cluster to move its children in equal orbits apart from at most one
    /// fixed child.
    pub fn from_generator(topo: &Topology, perm: Permutation) -> Result<TameAction> {
        if !topo.is_automorphism(perm.images()) {
            return Err(Error::Invalid("permutation is not an automorphism of the clusters".into()));
        }
        let raw = raw_orbits(topo, &perm);
        let mut clusters = Vec::with_capacity(raw.len());
        for (i, r) in raw.iter().enumerate() {
            let s = ClusterId(i);
            let (child_orbit, orphan) = split_children(r).ok_or_else(|| {
                Error::Invalid(format!("stabiliser of {} moves its children in unequal orbits", topo.name(s)))
            })?;
            clusters.push(ClusterAction { image: r.image, stab_index: r.stab_index, child_orbit, orphan });
        }
        let order = perm.order()?;
        Ok(TameAction { generator: perm, order, clusters })
    }

    pub fn stab_index(&self, s: ClusterId) -> u64 {
        self.clusters[s.0].stab_index
    }

    pub fn child_orbit(&self, s: ClusterId) -> u64 {
        self.clusters[s.0].child_orbit
    }

    pub fn orphan(&self, s: ClusterId) -> Option<ClusterId> {
        self.clusters[s.0].orphan
    }

    /// The orbit of `s` under the generator, starting at `s`.
    pub fn orbit(&self, s: ClusterId) -> Vec<ClusterId> {
        let mut out = vec![s];
        let mut x = self.clusters[s.0].image;
        while x != s {
            out.push(x);
            x = self.clusters[x.0].image;
        }
        out
    }

    /// Whether `s` has the smallest id in its orbit.
    pub fn is_orbit_rep(&self, s: ClusterId) -> bool {
        self.orbit(s).iter().all(|&t| t >= s)
    }

    /// One proper cluster from every orbit, in pre-order.
    pub fn orbit_reps(&self, topo: &Topology) -> Vec<ClusterId> {
        topo.proper().into_iter().filter(|&s| self.is_orbit_rep(s)).collect()
    }
}

struct RawOrbit {
    image: ClusterId,
    stab_index: u64,
    /// (child, orbit length under the stabiliser)
    children: Vec<(ClusterId, u64)>,
}

fn raw_orbits(topo: &Topology, perm: &Permutation) -> Vec<RawOrbit> {
    let image: Vec<ClusterId> = topo
        .ids()
        .map(|s| topo.image(perm.images(), s).expect("automorphism"))
        .collect();
    let orbit_len = |s: ClusterId, step: u64| -> u64 {
        let apply = |mut x: ClusterId| {
            for _ in 0..step {
                x = image[x.0];
            }
            x
        };
        let mut k = 1;
        let mut x = apply(s);
        while x != s {
            x = apply(x);
            k += 1;
        }
        k
    };
    topo.ids()
        .map(|s| {
            let n = orbit_len(s, 1);
            let children = topo.children(s).iter().map(|&c| (c, orbit_len(c, n))).collect();
            RawOrbit { image: image[s.0], stab_index: n, children }
        })
        .collect()
}

fn split_children(r: &RawOrbit) -> Option<(u64, Option<ClusterId>)> {
    let moving: Vec<u64> = r.children.iter().map(|c| c.1).filter(|&l| l > 1).collect();
    let fixed: Vec<ClusterId> = r.children.iter().filter(|c| c.1 == 1).map(|c| c.0).collect();
    match moving.first() {
        None => Some((1, None)),
        Some(&l) if moving.iter().all(|&m| m == l) && fixed.len() <= 1 => Some((l, fixed.first().copied())),
        _ => None,
    }
}

/// Which depth the orbit conditions read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthMode {
    Absolute,
    /// `d_s - d_P(s)` in place of `d_s`; not a valid criterion, kept to
    /// exhibit where it breaks.
    Relative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterCheck {
    pub cluster: ClusterId,
    pub stab_index: u64,
    pub expected_stab_index: u64,
    pub orphan: Option<ClusterId>,
    /// Stabiliser orbit lengths of the non-orphan children.
    pub child_orbit_lengths: Vec<u64>,
    /// `denom(d_s n_s)`; `None` on singletons.
    pub expected_orbit_length: Option<u64>,
    pub orbit_ok: bool,
    pub index_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub automorphism: bool,
    pub order: u64,
    pub required_order: u64,
    pub order_ok: bool,
    pub clusters: Vec<ClusterCheck>,
    pub ok: bool,
}

impl ActionReport {
    pub fn failures(&self) -> Vec<&ClusterCheck> {
        self.clusters.iter().filter(|c| !(c.orbit_ok && c.index_ok)).collect()
    }
}

/// `lcm` of the depth denominators of all proper clusters.
pub fn required_order(pic: &ClusterPicture) -> Result<u64> {
    let dens = pic
        .topology()
        .proper()
        .into_iter()
        .map(|s| denom(pic.d(s)))
        .collect::<Result<Vec<_>>>()?;
    lcm_all(&dens)
}

fn mode_depth(pic: &ClusterPicture, s: ClusterId, mode: DepthMode) -> Rational {
    match mode {
        DepthMode::Absolute => pic.d(s).clone(),
        DepthMode::Relative => pic.relative_depth(s),
    }
}

/// Checks every condition of the polynomial-type hypothesis for `perm`.
pub fn check_action(pic: &ClusterPicture, perm: &Permutation) -> Result<ActionReport> {
    check_action_with(pic, perm, DepthMode::Absolute)
}

pub fn check_action_with(pic: &ClusterPicture, perm: &Permutation, mode: DepthMode) -> Result<ActionReport> {
    let topo = pic.topology();
    let required = required_order(pic)?;
    if perm.len() != pic.leaf_count() || !pic.is_automorphism(perm.images()) {
        return Ok(ActionReport {
            automorphism: false,
            order: if perm.len() == pic.leaf_count() { perm.order()? } else { 0 },
            required_order: required,
            order_ok: false,
            clusters: Vec::new(),
            ok: false,
        });
    }
    let order = perm.order()?;
    let raw = raw_orbits(topo, perm);
    let orphans: Vec<Option<ClusterId>> = raw
        .iter()
        .map(|r| {
            let fixed: Vec<ClusterId> = r.children.iter().filter(|c| c.1 == 1).map(|c| c.0).collect();
            (fixed.len() == 1).then(|| fixed[0])
        })
        .collect();
    let mut clusters = Vec::with_capacity(raw.len());
    for s in topo.ids() {
        let r = &raw[s.0];
        let orphan = orphans[s.0];
        let mut expected = 1u64;
        let mut child = s;
        for a in topo.ancestors(s) {
            let star = if orphans[a.0] == Some(child) { int(1) } else { mode_depth(pic, a, mode) };
            expected = lcm(expected, denom(&star)?)?;
            child = a;
        }
        let lengths: Vec<u64> = r.children.iter().filter(|c| Some(c.0) != orphan).map(|c| c.1).collect();
        let expected_len = if topo.is_proper(s) {
            Some(denom(&(mode_depth(pic, s, mode) * int(r.stab_index as i64)))?)
        } else {
            None
        };
        let orbit_ok = match expected_len {
            Some(l) => lengths.iter().all(|&x| x == l),
            None => true,
        };
        clusters.push(ClusterCheck {
            cluster: s,
            stab_index: r.stab_index,
            expected_stab_index: expected,
            orphan,
            child_orbit_lengths: lengths,
            expected_orbit_length: expected_len,
            orbit_ok,
            index_ok: expected == r.stab_index,
        });
    }
    let order_ok = order == required;
    let ok = order_ok && clusters.iter().all(|c| c.orbit_ok && c.index_ok);
    Ok(ActionReport { automorphism: true, order, required_order: required, order_ok, clusters, ok })
}

/// Finds an action of polynomial type on `pic`, or explains why none exists.
///
/// At each cluster the stabiliser orbit length `L = denom(d_s n_s)` is
/// forced, and so is the isomorphism class supplying the orphan (the only
/// class whose size is not a multiple of `L`); the action is assembled from
/// the children outwards.
pub fn find_action(pic: &ClusterPicture) -> Result<TameAction> {
    let builder = Builder { topo: pic.topology(), canon: pic.canonical(), pic: Some(pic) };
    let mut perms = builder.options(pic.root(), 1)?;
    let perm = Permutation(perms.pop().expect("one forced action"));
    let report = check_action(pic, &perm)?;
    if !report.ok {
        return Err(Error::Integrity("constructed action fails the orbit conditions".into()));
    }
    let action = TameAction::from_generator(pic.topology(), perm)?;
    Ok(action)
}

/// [`find_action`] for a concrete residue characteristic `p`: rejects wild
/// inertia and warns when `p` is not larger than the number of roots.
pub fn find_action_for_prime(pic: &ClusterPicture, p: u64) -> Result<(TameAction, Vec<String>)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let action = find_action(pic)?;
    if action.order % p == 0 {
        return Err(Error::Wild { p, e: action.order });
    }
    let mut warnings = Vec::new();
    if p as usize <= pic.leaf_count() {
        warnings.push(format!(
            "p = {p} does not exceed the number of roots {}; tameness is checked only through p not dividing {}",
            pic.leaf_count(),
            action.order
        ));
    }
    Ok((action, warnings))
}

/// All actions of polynomial type on a shape for which some choice of
/// depths exists, up to the choices of which isomorphic children form an
/// orbit and which of them is the orphan.
pub fn enumerate_actions(topo: &Topology) -> Vec<TameAction> {
    let builder = Builder { topo, canon: topo.canonical(), pic: None };
    builder
        .options(topo.root(), 1)
        .expect("shape enumeration never fails")
        .into_iter()
        .map(|p| TameAction::from_generator(topo, Permutation(p)).expect("constructed action is consistent"))
        .collect()
}

struct Builder<'a> {
    topo: &'a Topology,
    canon: Canonical,
    pic: Option<&'a ClusterPicture>,
}

type Local = Vec<usize>;

impl Builder<'_> {
    fn identity(&self) -> Local {
        (0..self.topo.leaf_count()).collect()
    }

    fn classes(&self, s: ClusterId) -> Vec<Vec<ClusterId>> {
        let mut classes: Vec<Vec<ClusterId>> = Vec::new();
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for &c in self.topo.children(s) {
            let key = self.canon.strings[c.0].as_str();
            match index.get(key) {
                Some(&i) => classes[i].push(c),
                None => {
                    index.insert(key, classes.len());
                    classes.push(vec![c]);
                }
            }
        }
        classes
    }

    /// Candidate orbit lengths of the children of `s`.
    fn orbit_lengths(&self, s: ClusterId, n: u64, classes: &[Vec<ClusterId>]) -> Result<Vec<u64>> {
        match self.pic {
            Some(pic) => Ok(vec![denom(&(pic.d(s) * int(n as i64)))?]),
            None => {
                let max = classes.iter().map(Vec::len).max().unwrap_or(1) as u64;
                Ok((1..=max).collect())
            }
        }
    }

    fn options(&self, s: ClusterId, n: u64) -> Result<Vec<Local>> {
        if !self.topo.is_proper(s) {
            return Ok(vec![self.identity()]);
        }
        let classes = self.classes(s);
        let mut out = Vec::new();
        for l in self.orbit_lengths(s, n, &classes)? {
            match self.plan(l, &classes) {
                Ok(plan) => out.extend(self.realise(&plan, n, l)?),
                Err(reason) if self.pic.is_some() => {
                    return Err(Error::NotPolynomialType(format!(
                        "cluster {} needs its children in stabiliser orbits of length {l}, but {reason}",
                        self.topo.name(s)
                    )))
                }
                Err(_) => {}
            }
        }
        Ok(out)
    }

    /// Splits the children into orbits of length `l` plus at most one
    /// orphan.
    fn plan(&self, l: u64, classes: &[Vec<ClusterId>]) -> core::result::Result<Plan, String> {
        let l_us = l as usize;
        if l == 1 {
            return Ok(Plan { orbits: classes.iter().flatten().map(|&c| vec![c]).collect(), orphan: None });
        }
        let mut orphan = None;
        let mut orbits = Vec::new();
        for class in classes {
            let mut members = class.clone();
            match members.len() % l_us {
                0 => {}
                1 if orphan.is_none() => orphan = members.pop(),
                1 => return Err("two isomorphism classes of children would each need an orphan".into()),
                r => {
                    return Err(format!(
                        "an isomorphism class of {} children leaves remainder {r}",
                        members.len()
                    ))
                }
            }
            for chunk in members.chunks(l_us) {
                orbits.push(chunk.to_vec());
            }
        }
        Ok(Plan { orbits, orphan })
    }

    fn realise(&self, plan: &Plan, n: u64, l: u64) -> Result<Vec<Local>> {
        // options for every orbit representative, then the cartesian product
        let mut parts: Vec<Vec<Local>> = Vec::new();
        for orbit in &plan.orbits {
            let sub_n = if orbit.len() > 1 { n * l } else { n };
            let reps = self.options(orbit[0], sub_n)?;
            parts.push(reps.into_iter().map(|r| self.spread(orbit, &r)).collect());
        }
        if let Some(o) = plan.orphan {
            parts.push(self.options(o, n)?);
        }
        let mut acc = vec![self.identity()];
        for part in parts {
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for a in &acc {
                for p in &part {
                    let mut merged = a.clone();
                    for (i, &x) in p.iter().enumerate() {
                        if x != i {
                            merged[i] = x;
                        }
                    }
                    next.push(merged);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Extends the action `rep` on the first cluster of an orbit to a cycle
    /// through the whole orbit, using canonical isomorphisms between them.
    fn spread(&self, orbit: &[ClusterId], rep: &Local) -> Local {
        let mut out = self.identity();
        if orbit.len() == 1 {
            for &x in self.topo.leaves(orbit[0]) {
                out[x] = rep[x];
            }
            return out;
        }
        let orders: Vec<Vec<usize>> = orbit.iter().map(|&u| self.canon.leaf_order(self.topo, u)).collect();
        let last = orbit.len() - 1;
        for j in 0..last {
            for (i, &x) in orders[j].iter().enumerate() {
                out[x] = orders[j + 1][i];
            }
        }
        for (i, &x) in orders[last].iter().enumerate() {
            out[x] = rep[orders[0][i]];
        }
        out
    }
}

struct Plan {
    orbits: Vec<Vec<ClusterId>>,
    orphan: Option<ClusterId>,
}

/// Denominators `b` with `b / gcd(b, n) = l`.
pub fn denominator_candidates(n: u64, l: u64) -> Vec<u64> {
    let g = gcd_inf(n, l);
    let mut out: Vec<u64> = divisors(n / g).into_iter().map(|m| l * g * m).collect();
    out.sort_unstable();
    out
}

/// Depth denominators compatible with a fixed action on a shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorSets {
    /// Proper clusters in pre-order; `candidates` and every tuple follow it.
    pub clusters: Vec<ClusterId>,
    pub candidates: Vec<Vec<u64>>,
    /// Joint choices, equal on conjugate clusters, whose lcm is the order of
    /// the action.
    pub tuples: Vec<Vec<u64>>,
}

pub fn enumerate_denominators(topo: &Topology, action: &TameAction) -> Result<DenominatorSets> {
    let clusters = topo.proper();
    let candidates: Vec<Vec<u64>> = clusters
        .iter()
        .map(|&s| denominator_candidates(action.stab_index(s), action.child_orbit(s)))
        .collect();
    let position: BTreeMap<ClusterId, usize> = clusters.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let reps: Vec<usize> = clusters
        .iter()
        .enumerate()
        .filter(|(_, &s)| action.is_orbit_rep(s))
        .map(|(i, _)| i)
        .collect();
    let rep_of: Vec<usize> = clusters
        .iter()
        .map(|&s| {
            let r = action.orbit(s).into_iter().min().expect("nonempty orbit");
            position[&r]
        })
        .collect();
    let mut tuples = Vec::new();
    let mut choice = vec![0usize; reps.len()];
    'outer: loop {
        let mut tuple = vec![0u64; clusters.len()];
        for (k, &i) in reps.iter().enumerate() {
            tuple[i] = candidates[i][choice[k]];
        }
        for i in 0..clusters.len() {
            tuple[i] = tuple[rep_of[i]];
        }
        if lcm_all(&tuple)? == action.order {
            tuples.push(tuple);
        }
        for k in (0..reps.len()).rev() {
            choice[k] += 1;
            if choice[k] < candidates[reps[k]].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    Ok(DenominatorSets { clusters, candidates, tuples })
}
