//! Genus-2 classification: every shape of polynomial type, its depth
//! denominator tuples, and the representation on each parity class of
//! depths.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::cluster::{ClusterId, ClusterPicture, Topology};
use crate::inertia::{enumerate_actions, enumerate_denominators, find_action, TameAction};
use crate::numbers::{gcd, int, rat, v_q, ExtendedValuation, Rational};
use crate::repn::{assemble_h1, RhoSum};
use crate::{Error, Result};

/// Rooted trees on `n` leaves in which every internal node has at least two
/// children, up to isomorphism. Ordered by number of proper clusters, then
/// by canonical string.
pub fn enumerate_shapes(n: usize) -> Vec<Topology> {
    if n < 2 {
        return Vec::new();
    }
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(), vec!["r".to_string()]];
    for k in 2..=n {
        let mut found = BTreeSet::new();
        let mut parts = Vec::new();
        multisets(&by_size, k, (k - 1, usize::MAX), &mut parts, &mut |parts| {
            let body: Vec<&str> = parts.iter().map(|&(s, i)| by_size[s][i].as_str()).collect();
            let text = format!("({})", body.join(" "));
            let topo = Topology::parse(&text).expect("generated shape parses");
            found.insert(topo.canonical_string());
        });
        by_size.push(found.into_iter().collect());
    }
    let mut shapes: Vec<Topology> = by_size[n]
        .iter()
        .map(|s| Topology::parse(s).expect("canonical shape parses"))
        .collect();
    shapes.sort_by_cached_key(|t| (t.proper().len(), t.canonical_string()));
    shapes
}

/// Multisets of at least two subtrees with `remaining` leaves in total,
/// listed as non-increasing `(size, index)` pairs bounded by `max`.
fn multisets(
    by_size: &[Vec<String>],
    remaining: usize,
    max: (usize, usize),
    parts: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if remaining == 0 {
        if parts.len() >= 2 {
            emit(parts);
        }
        return;
    }
    for size in (1..=remaining.min(max.0)).rev() {
        let count = by_size[size].len();
        let top = if size == max.0 { max.1.min(count.saturating_sub(1)) } else { count - 1 };
        for i in (0..=top).rev() {
            parts.push((size, i));
            multisets(by_size, remaining - size, (size, i), parts, emit);
            parts.pop();
        }
    }
}

/// Names of the proper clusters in pre-order: `R`, `s1`, `s2`, ...
pub fn cluster_names(topo: &Topology) -> Vec<String> {
    (0..topo.proper().len())
        .map(|i| if i == 0 { "R".to_string() } else { format!("s{i}") })
        .collect()
}

/// The shape with each proper cluster tagged by its name.
pub fn labeled_shape(topo: &Topology) -> String {
    let names = cluster_names(topo);
    let proper = topo.proper();
    let mut out = String::new();
    write_tagged(topo, topo.root(), &mut out, &|s| {
        proper.iter().position(|&x| x == s).map(|i| names[i].clone()).unwrap_or_default()
    });
    out
}

fn write_tagged(topo: &Topology, s: ClusterId, out: &mut String, tag: &dyn Fn(ClusterId) -> String) {
    if !topo.is_proper(s) {
        out.push('r');
        return;
    }
    out.push('(');
    for (i, &c) in topo.children(s).iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write_tagged(topo, c, out, tag);
    }
    out.push(')');
    out.push_str(&tag(s));
}

/// Isomorphism-invariant key of a shape with one denominator per proper
/// cluster (in pre-order).
pub fn tuple_key(topo: &Topology, tuple: &[u64]) -> String {
    let proper = topo.proper();
    let den = |s: ClusterId| proper.iter().position(|&x| x == s).map(|i| tuple[i]);
    topo.canonical_by(den, |s| den(s).map(|d| format!("/{d}")).unwrap_or_default()).strings[0].clone()
}

/// Every denominator tuple (one entry per proper cluster, in pre-order)
/// realised by some action of polynomial type, with one such action.
/// Sorted lexicographically.
pub fn enumerate_tuples(topo: &Topology) -> Result<Vec<(Vec<u64>, TameAction)>> {
    let mut seen: BTreeMap<Vec<u64>, TameAction> = BTreeMap::new();
    for action in enumerate_actions(topo) {
        for t in enumerate_denominators(topo, &action)?.tuples {
            seen.entry(t).or_insert_with(|| action.clone());
        }
    }
    Ok(seen.into_iter().collect())
}

/// One depth assignment and its representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    /// Depths of the proper clusters in pre-order.
    pub depths: Vec<Rational>,
    pub h1_ab: RhoSum,
    pub h1_t: RhoSum,
}

/// Depth assignments with the given denominators, one per numerator class
/// modulo twice the denominator (equal on conjugate clusters), lifted by even
/// integers so that depths increase strictly inwards. Assignments that admit
/// no action of polynomial type are dropped.
pub fn sample_tuple(topo: &Topology, action: &TameAction, tuple: &[u64]) -> Result<Vec<Sample>> {
    let proper = topo.proper();
    if tuple.len() != proper.len() {
        return Err(Error::Invalid(format!("{} denominators for {} proper clusters", tuple.len(), proper.len())));
    }
    let position = |s: ClusterId| proper.iter().position(|&x| x == s).expect("proper cluster");
    let rep_of: Vec<usize> = proper
        .iter()
        .map(|&s| position(action.orbit(s).into_iter().min().expect("nonempty orbit")))
        .collect();
    let reps: Vec<usize> = (0..proper.len()).filter(|&i| rep_of[i] == i).collect();
    let choices: Vec<Vec<i64>> = reps
        .iter()
        .map(|&i| {
            let b = tuple[i];
            (0..2 * b).filter(|&a| gcd(a, b) == 1).map(|a| a as i64).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; reps.len()];
    'outer: loop {
        let mut numer = vec![0i64; proper.len()];
        for (k, &i) in reps.iter().enumerate() {
            numer[i] = choices[k][pick[k]];
        }
        let mut depths: Vec<Option<Rational>> = vec![None; topo.node_count()];
        for (i, &s) in proper.iter().enumerate() {
            let mut d = rat(numer[rep_of[i]], tuple[i] as i64);
            if let Some(parent) = topo.parent(s) {
                let floor = depths[parent.0].clone().expect("parents precede children");
                while d <= floor {
                    d += int(2);
                }
            }
            depths[s.0] = Some(d);
        }
        let pic = ClusterPicture::new(topo.clone(), depths)?;
        match find_action(&pic) {
            Ok(found) => {
                let rep = assemble_h1(&pic, &found, None).map_err(|e| {
                    Error::Integrity(format!("{pic} with denominators {tuple:?}: {e}"))
                })?;
                out.push(Sample {
                    depths: proper.iter().map(|&s| pic.d(s).clone()).collect(),
                    h1_ab: rep.h1_ab,
                    h1_t: rep.h1_t,
                });
            }
            Err(Error::NotPolynomialType(_)) => {}
            Err(e) => return Err(e),
        }
        for k in (0..reps.len()).rev() {
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                continue 'outer;
            }
            pick[k] = 0;
        }
        break;
    }
    Ok(out)
}

/// Samples of one tuple sharing a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCase {
    pub h1_ab: RhoSum,
    pub h1_t: RhoSum,
    pub samples: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Index into [`enumerate_shapes`].
    pub shape: usize,
    pub topology: Topology,
    /// Denominators of `d_R, d_s1, ...` in the order of [`cluster_names`].
    pub tuple: Vec<u64>,
    pub cases: Vec<TableCase>,
}

impl TableRow {
    pub fn key(&self) -> String {
        tuple_key(&self.topology, &self.tuple)
    }
}

pub fn classify_shape(shape: usize, topo: &Topology) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (tuple, action) in enumerate_tuples(topo)? {
        let samples = sample_tuple(topo, &action, &tuple)?;
        if samples.is_empty() {
            return Err(Error::Integrity(format!(
                "denominators {tuple:?} on {} admit no depths of polynomial type",
                labeled_shape(topo)
            )));
        }
        let mut cases: Vec<TableCase> = Vec::new();
        for s in samples {
            match cases.iter_mut().find(|c| c.h1_ab == s.h1_ab && c.h1_t == s.h1_t) {
                Some(c) => c.samples.push(s.depths),
                None => cases.push(TableCase { h1_ab: s.h1_ab, h1_t: s.h1_t, samples: vec![s.depths] }),
            }
        }
        rows.push(TableRow { shape, topology: topo.clone(), tuple, cases });
    }
    Ok(rows)
}

/// [`classify_shape`] over every shape on `n` leaves.
pub fn classify_all(n: usize) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (i, topo) in enumerate_shapes(n).iter().enumerate() {
        rows.extend(classify_shape(i, topo)?);
    }
    Ok(rows)
}

/// `coeff * d_{vars[0]} * d_{vars[1]} * ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub vars: Vec<String>,
}

/// `2 | expr` or, negated, `2 ∤ expr`, with divisibility meaning
/// `v_2(expr) >= 1` (so 0 is divisible).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub divisible: bool,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Always,
    Else,
    All(Vec<Atom>),
}

impl Atom {
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<bool> {
        let mut x = Rational::zero();
        for t in &self.terms {
            let mut v = int(t.coeff);
            for name in &t.vars {
                v *= values
                    .get(name)
                    .ok_or_else(|| Error::Invalid(format!("condition mentions unknown cluster {name}")))?;
            }
            x += v;
        }
        let even = match v_q(2, &x)? {
            ExtendedValuation::Infinity => true,
            ExtendedValuation::Finite(v) => v >= int(1),
        };
        Ok(even == self.divisible)
    }
}

impl Condition {
    pub fn parse(text: &str) -> Result<Condition> {
        let text = text.trim();
        match text {
            "-" => return Ok(Condition::Always),
            "else" => return Ok(Condition::Else),
            _ => {}
        }
        let atoms = text.split(',').map(|a| parse_atom(a.trim())).collect::<Result<Vec<_>>>()?;
        Ok(Condition::All(atoms))
    }

    /// Whether the condition holds; `Else` is decided by the caller.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<bool> {
        match self {
            Condition::Always => Ok(true),
            Condition::Else => Ok(false),
            Condition::All(atoms) => {
                for a in atoms {
                    if !a.eval(values)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn parse_atom(text: &str) -> Result<Atom> {
    let bad = |msg: &str| Error::Invalid(format!("condition {text:?}: {msg}"));
    let (divisible, body) = if let Some(b) = text.strip_prefix("2|") {
        (true, b)
    } else if let Some(b) = text.strip_prefix("2!") {
        (false, b)
    } else {
        return Err(bad("expected 2| or 2!"));
    };
    let body = match body.strip_prefix('(') {
        Some(inner) => inner.strip_suffix(')').ok_or_else(|| bad("unbalanced parenthesis"))?,
        None => body,
    };
    let terms = body.split('+').map(|t| parse_term(t).ok_or_else(|| bad("malformed term"))).collect::<Result<Vec<_>>>()?;
    Ok(Atom { divisible, terms })
}

fn parse_term(text: &str) -> Option<Term> {
    let digits = text.bytes().take_while(u8::is_ascii_digit).count();
    let coeff = if digits == 0 { 1 } else { text[..digits].parse().ok()? };
    let mut rest = &text[digits..];
    let mut vars = Vec::new();
    while let Some(r) = rest.strip_prefix("d_") {
        let len = match r.as_bytes().first()? {
            b'R' => 1,
            b's' => 1 + r[1..].bytes().take_while(u8::is_ascii_digit).count(),
            _ => return None,
        };
        if len == 1 && r.starts_with('s') {
            return None;
        }
        vars.push(r[..len].to_string());
        rest = &r[len..];
    }
    (rest.is_empty() && !vars.is_empty()).then_some(Term { coeff, vars })
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.divisible { "2|" } else { "2!" })?;
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let vars: String = t.vars.iter().map(|v| format!("d_{v}")).collect();
                if t.coeff == 1 { vars } else { format!("{}{vars}", t.coeff) }
            })
            .collect();
        if terms.len() == 1 {
            f.write_str(&terms[0])
        } else {
            write!(f, "({})", terms.join("+"))
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Always => f.write_str("-"),
            Condition::Else => f.write_str("else"),
            Condition::All(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCase {
    pub condition: Condition,
    pub h1_ab: RhoSum,
    pub h1_t: RhoSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenTuple {
    pub tuple: Vec<u64>,
    pub cases: Vec<GoldenCase>,
    /// 1-based line in the source text.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenShape {
    pub labeled: String,
    pub topology: Topology,
    /// `R`, `s1`, ... in tuple order.
    pub names: Vec<String>,
    pub clusters: Vec<ClusterId>,
    pub tuples: Vec<GoldenTuple>,
}

impl GoldenShape {
    /// The tuple re-indexed by the pre-order of the proper clusters.
    pub fn preorder_tuple(&self, tuple: &[u64]) -> Vec<u64> {
        let proper = self.topology.proper();
        proper
            .iter()
            .map(|s| tuple[self.clusters.iter().position(|c| c == s).expect("every proper cluster is named")])
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Golden {
    pub shapes: Vec<GoldenShape>,
}

impl Golden {
    /// Reads the line format `shape ...` / `tuple ...` / `case cond : ab ; t`,
    /// ignoring blank lines and `#` comments.
    pub fn parse(text: &str) -> Result<Golden> {
        let mut shapes: Vec<GoldenShape> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let no = i + 1;
            let bad = |msg: String| Error::Invalid(format!("golden line {no}: {msg}"));
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (kind, rest) = line.split_once(' ').ok_or_else(|| bad("missing fields".into()))?;
            match kind {
                "shape" => {
                    let (topology, named) = Topology::parse_labeled(rest).map_err(|e| bad(e.to_string()))?;
                    let k = topology.proper().len();
                    let names: Vec<String> =
                        (0..k).map(|j| if j == 0 { "R".to_string() } else { format!("s{j}") }).collect();
                    let clusters = names
                        .iter()
                        .map(|n| named.get(n).copied().ok_or_else(|| bad(format!("no cluster named {n}"))))
                        .collect::<Result<Vec<_>>>()?;
                    if named.len() != k || clusters[0] != topology.root() {
                        return Err(bad("clusters must be named R, s1, s2, ... with R on top".into()));
                    }
                    shapes.push(GoldenShape { labeled: rest.to_string(), topology, names, clusters, tuples: Vec::new() });
                }
                "tuple" => {
                    let shape = shapes.last_mut().ok_or_else(|| bad("tuple before any shape".into()))?;
                    let tuple = rest
                        .split_whitespace()
                        .map(|x| x.parse::<u64>().ok().filter(|&d| d > 0))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| bad(format!("bad denominators {rest:?}")))?;
                    if tuple.len() != shape.names.len() {
                        return Err(bad(format!("{} denominators for {} clusters", tuple.len(), shape.names.len())));
                    }
                    shape.tuples.push(GoldenTuple { tuple, cases: Vec::new(), line: no });
                }
                "case" => {
                    let tuple = shapes
                        .last_mut()
                        .and_then(|s| s.tuples.last_mut())
                        .ok_or_else(|| bad("case before any tuple".into()))?;
                    let (cond, reps) = rest.split_once(" : ").ok_or_else(|| bad("expected ' : '".into()))?;
                    let (ab, t) = reps.split_once(" ; ").ok_or_else(|| bad("expected ' ; '".into()))?;
                    tuple.cases.push(GoldenCase {
                        condition: Condition::parse(cond).map_err(|e| bad(e.to_string()))?,
                        h1_ab: ab.trim().parse().map_err(|e: Error| bad(e.to_string()))?,
                        h1_t: t.trim().parse().map_err(|e: Error| bad(e.to_string()))?,
                    });
                }
                other => return Err(bad(format!("unknown record {other:?}"))),
            }
        }
        Ok(Golden { shapes })
    }

    pub fn tuple_count(&self) -> usize {
        self.shapes.iter().map(|s| s.tuples.len()).sum()
    }

    /// The shapes with `n` leaves.
    pub fn with_leaves(&self, n: usize) -> Golden {
        Golden { shapes: self.shapes.iter().filter(|s| s.topology.leaf_count() == n).cloned().collect() }
    }
}

/// One golden case (or the lack of one) disagreeing with the computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub shape: String,
    pub tuple: Vec<u64>,
    pub line: usize,
    /// `None` when no case of the tuple applies.
    pub case: Option<usize>,
    pub expected: Option<(RhoSum, RhoSum)>,
    pub computed: (RhoSum, RhoSum),
    /// Number of samples affected and the first of them, as `d_R=..` pairs.
    pub count: usize,
    pub example: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenDiff {
    pub missing_shapes: Vec<String>,
    pub extra_shapes: Vec<String>,
    /// Golden tuples with no computed counterpart.
    pub missing_tuples: Vec<String>,
    /// Computed tuples absent from the golden data.
    pub extra_tuples: Vec<String>,
    pub mismatches: Vec<Mismatch>,
    /// Cases that no sample selects.
    pub unused_cases: Vec<String>,
}

impl GoldenDiff {
    pub fn is_empty(&self) -> bool {
        self.lines().is_empty()
    }

    /// One line per discrepancy.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.missing_shapes.iter().map(|s| format!("missing shape {s}")));
        out.extend(self.extra_shapes.iter().map(|s| format!("extra shape {s}")));
        out.extend(self.missing_tuples.iter().map(|s| format!("missing tuple {s}")));
        out.extend(self.extra_tuples.iter().map(|s| format!("extra tuple {s}")));
        for m in &self.mismatches {
            let tuple: Vec<String> = m.tuple.iter().map(|d| d.to_string()).collect();
            let expected = match &m.expected {
                Some((ab, t)) => format!("{ab} ; {t}"),
                None => "no case".into(),
            };
            let case = m.case.map(|c| format!(" case {}", c + 1)).unwrap_or_default();
            out.push(format!(
                "mismatch line {} {} ({}){case}: expected {expected}, computed {} ; {} on {} sample(s), e.g. {}",
                m.line,
                m.shape,
                tuple.join(","),
                m.computed.0,
                m.computed.1,
                m.count,
                m.example
            ));
        }
        out.extend(self.unused_cases.iter().map(|s| format!("unused case {s}")));
        out
    }
}

impl fmt::Display for GoldenDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All leaf permutations preserving the clusters of a shape.
pub fn automorphisms(topo: &Topology) -> Vec<Vec<usize>> {
    let n = topo.leaf_count();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend_automorphism(topo, &mut perm, &mut used, &mut out);
    out
}

fn extend_automorphism(topo: &Topology, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let i = perm.len();
    if i == used.len() {
        if topo.is_automorphism(perm) {
            out.push(perm.clone());
        }
        return;
    }
    for j in 0..used.len() {
        // leaves at different tree levels can never correspond
        if used[j] || topo.level(topo.leaf(i)) != topo.level(topo.leaf(j)) {
            continue;
        }
        used[j] = true;
        perm.push(j);
        extend_automorphism(topo, perm, used, out);
        perm.pop();
        used[j] = false;
    }
}

/// Compares computed rows with golden data: shapes and tuples as multisets
/// of isomorphism-invariant keys, then every sampled depth assignment
/// against the first golden case whose condition holds.
pub fn compare_golden(rows: &[TableRow], golden: &Golden) -> Result<GoldenDiff> {
    let mut diff = GoldenDiff::default();

    let computed_shapes: BTreeSet<String> = rows.iter().map(|r| r.topology.canonical_string()).collect();
    let golden_shapes: BTreeSet<String> = golden.shapes.iter().map(|s| s.topology.canonical_string()).collect();
    diff.missing_shapes = golden_shapes.difference(&computed_shapes).cloned().collect();
    diff.extra_shapes = computed_shapes.difference(&golden_shapes).cloned().collect();

    let mut pool: BTreeMap<String, Vec<&TableRow>> = BTreeMap::new();
    for r in rows {
        pool.entry(r.key()).or_default().push(r);
    }
    for shape in &golden.shapes {
        for gt in &shape.tuples {
            let pre = shape.preorder_tuple(&gt.tuple);
            let key = tuple_key(&shape.topology, &pre);
            let row = match pool.get_mut(&key).and_then(|v| (!v.is_empty()).then(|| v.remove(0))) {
                Some(r) => r,
                None => {
                    diff.missing_tuples.push(format!("line {} {} {:?}", gt.line, shape.labeled, gt.tuple));
                    continue;
                }
            };
            compare_tuple(shape, gt, &pre, row, &mut diff)?;
        }
    }
    for rest in pool.values() {
        for r in rest {
            diff.extra_tuples.push(format!("{} {:?}", labeled_shape(&r.topology), r.tuple));
        }
    }
    Ok(diff)
}

fn compare_tuple(shape: &GoldenShape, gt: &GoldenTuple, pre: &[u64], row: &TableRow, diff: &mut GoldenDiff) -> Result<()> {
    // leaf map from the golden shape onto the computed one that carries the
    // golden denominators onto the row's
    let base = shape
        .topology
        .isomorphism(&row.topology)
        .ok_or_else(|| Error::Integrity("rows with equal keys have different shapes".into()))?;
    let golden_proper = shape.topology.proper();
    let row_proper = row.topology.proper();
    let mut chosen = None;
    for auto in automorphisms(&row.topology) {
        let phi: Vec<usize> = base.iter().map(|&x| auto[x]).collect();
        let images: Vec<usize> = golden_proper
            .iter()
            .map(|&s| {
                let mut leaves: Vec<usize> = shape.topology.leaves(s).iter().map(|&l| phi[l]).collect();
                leaves.sort_unstable();
                let img = row.topology.find(&leaves).expect("isomorphism");
                row_proper.iter().position(|&x| x == img).expect("proper image")
            })
            .collect();
        if images.iter().enumerate().all(|(i, &j)| pre[i] == row.tuple[j]) {
            chosen = Some(images);
            break;
        }
    }
    let images = chosen.ok_or_else(|| Error::Integrity("no isomorphism matches the denominators".into()))?;

    let mut used = vec![false; gt.cases.len()];
    let mut found: BTreeMap<(Option<usize>, String), Mismatch> = BTreeMap::new();
    for case in &row.cases {
        for sample in &case.samples {
            let mut values = BTreeMap::new();
            for (name, cluster) in shape.names.iter().zip(&shape.clusters) {
                let gi = golden_proper.iter().position(|s| s == cluster).expect("named proper cluster");
                values.insert(name.clone(), sample[images[gi]].clone());
            }
            let mut selected = None;
            for (k, c) in gt.cases.iter().enumerate() {
                if c.condition == Condition::Else || c.condition.eval(&values)? {
                    selected = Some(k);
                    break;
                }
            }
            if let Some(k) = selected {
                used[k] = true;
                let c = &gt.cases[k];
                if c.h1_ab == case.h1_ab && c.h1_t == case.h1_t {
                    continue;
                }
            }
            let computed = (case.h1_ab.clone(), case.h1_t.clone());
            let entry = found
                .entry((selected, format!("{} ; {}", computed.0, computed.1)))
                .or_insert_with(|| Mismatch {
                    shape: shape.labeled.clone(),
                    tuple: gt.tuple.clone(),
                    line: gt.line,
                    case: selected,
                    expected: selected.map(|k| (gt.cases[k].h1_ab.clone(), gt.cases[k].h1_t.clone())),
                    computed,
                    count: 0,
                    example: shape
                        .names
                        .iter()
                        .map(|n| format!("d_{n}={}", values[n]))
                        .collect::<Vec<_>>()
                        .join(" "),
                });
            entry.count += 1;
        }
    }
    diff.mismatches.extend(found.into_values());
    for (k, c) in gt.cases.iter().enumerate() {
        if !used[k] {
            diff.unused_cases.push(format!("line {} {} {:?} case {} [{}]", gt.line, shape.labeled, gt.tuple, k + 1, c.condition));
        }
    }
    Ok(())
}
