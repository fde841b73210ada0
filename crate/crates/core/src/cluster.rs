//! Cluster pictures: laminar families of root subsets with depths.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::numbers::Rational;
use crate::{Error, Result};

/// Index of a cluster (proper or singleton) inside a [`Topology`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    parent: Option<ClusterId>,
    children: Vec<ClusterId>,
    leaves: Vec<usize>,
    level: usize,
}

/// The tree of clusters without depths (a "shape").
///
/// Nodes are stored in pre-order with children sorted by smallest leaf, so
/// `ClusterId(0)` is the top cluster and parents precede children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    nodes: Vec<Node>,
    leaf_nodes: Vec<ClusterId>,
    index: BTreeMap<Vec<usize>, ClusterId>,
}

/// Result of a canonical labelling: the canonical string of every node and
/// the canonical order of its children.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub strings: Vec<String>,
    pub child_order: Vec<Vec<ClusterId>>,
}

impl Canonical {
    /// Leaves of `s` in canonical order.
    pub fn leaf_order(&self, topo: &Topology, s: ClusterId) -> Vec<usize> {
        let mut out = Vec::with_capacity(topo.size(s));
        self.push_leaves(topo, s, &mut out);
        out
    }

    fn push_leaves(&self, topo: &Topology, s: ClusterId, out: &mut Vec<usize>) {
        if !topo.is_proper(s) {
            out.push(topo.leaves(s)[0]);
            return;
        }
        for &c in &self.child_order[s.0] {
            self.push_leaves(topo, c, out);
        }
    }
}

pub(crate) fn leaf_set_name(leaves: &[usize]) -> String {
    let names: Vec<String> = leaves.iter().map(|l| format!("r{}", l + 1)).collect();
    format!("{{{}}}", names.join(","))
}

impl Topology {
    /// Builds the tree from the proper clusters given as leaf sets over
    /// `0..leaves`. Returns the topology and the id of each input set.
    pub fn from_sets(leaves: usize, sets: &[Vec<usize>]) -> Result<(Topology, Vec<ClusterId>)> {
        if leaves < 2 {
            return Err(Error::Invalid("a cluster picture needs at least two roots".into()));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for set in sets {
            let mut s = set.clone();
            s.sort_unstable();
            let before = s.len();
            s.dedup();
            if s.len() != before {
                return Err(Error::Invalid(format!("repeated root in {}", leaf_set_name(&s))));
            }
            if let Some(&l) = s.iter().find(|&&l| l >= leaves) {
                return Err(Error::Invalid(format!("root index {l} out of range")));
            }
            if s.len() < 2 {
                return Err(Error::Invalid(format!(
                    "cluster {} has fewer than two roots",
                    leaf_set_name(&s)
                )));
            }
            normalized.push(s);
        }
        let mut order: Vec<usize> = (0..normalized.len()).collect();
        order.sort_by(|&a, &b| {
            normalized[b]
                .len()
                .cmp(&normalized[a].len())
                .then_with(|| normalized[a].cmp(&normalized[b]))
        });
        if order.is_empty() || normalized[order[0]].len() != leaves {
            return Err(Error::Axiom {
                axiom: "i",
                cluster: leaf_set_name(&(0..leaves).collect::<Vec<_>>()),
                msg: "the set of all roots must be a cluster".into(),
            });
        }
        // provisional tree over input sets, parents by containment
        let mut parent: Vec<Option<usize>> = vec![None; normalized.len()];
        let mut deepest: Vec<usize> = vec![order[0]; leaves];
        for &i in &order[1..] {
            let set = &normalized[i];
            let p = deepest[set[0]];
            if set.iter().any(|&l| deepest[l] != p) || normalized[p].len() == set.len() {
                let msg = if normalized[p] == *set {
                    "duplicate cluster".to_string()
                } else {
                    "overlaps another cluster without nesting".to_string()
                };
                return Err(Error::Axiom { axiom: "ii", cluster: leaf_set_name(set), msg });
            }
            parent[i] = Some(p);
            for &l in set {
                deepest[l] = i;
            }
        }
        // children lists keyed by smallest leaf, then renumber in pre-order
        #[derive(Clone, Copy)]
        enum Item {
            Set(usize),
            Leaf(usize),
        }
        let mut kids: Vec<Vec<(usize, Item)>> = vec![Vec::new(); normalized.len()];
        for &i in &order[1..] {
            kids[parent[i].expect("non-root set has a parent")].push((normalized[i][0], Item::Set(i)));
        }
        for (l, &d) in deepest.iter().enumerate() {
            kids[d].push((l, Item::Leaf(l)));
        }
        for k in &mut kids {
            k.sort_by_key(|(m, _)| *m);
        }
        let mut topo = Topology { nodes: Vec::new(), leaf_nodes: vec![ClusterId(0); leaves], index: BTreeMap::new() };
        let mut ids = vec![ClusterId(0); normalized.len()];
        let mut stack = vec![(Item::Set(order[0]), None::<ClusterId>, 0usize)];
        while let Some((item, par, level)) = stack.pop() {
            let id = ClusterId(topo.nodes.len());
            let leaves_of = match item {
                Item::Set(i) => {
                    ids[i] = id;
                    normalized[i].clone()
                }
                Item::Leaf(l) => {
                    topo.leaf_nodes[l] = id;
                    vec![l]
                }
            };
            topo.nodes.push(Node { parent: par, children: Vec::new(), leaves: leaves_of, level });
            if let Some(p) = par {
                topo.nodes[p.0].children.push(id);
            }
            if let Item::Set(i) = item {
                for &(_, k) in kids[i].iter().rev() {
                    stack.push((k, Some(id), level + 1));
                }
            }
        }
        for (i, n) in topo.nodes.iter().enumerate() {
            topo.index.insert(n.leaves.clone(), ClusterId(i));
        }
        Ok((topo, ids))
    }

    /// Parses a shape: the picture grammar with depths optional and ignored.
    pub fn parse(text: &str) -> Result<Topology> {
        let parsed = parse_tree(text)?;
        let (topo, _) = Topology::from_sets(parsed.leaves, &parsed.sets())?;
        Ok(topo)
    }

    /// Parses a shape whose proper clusters carry names instead of depths,
    /// e.g. `((r r)s1 r r r)R`.
    pub fn parse_labeled(text: &str) -> Result<(Topology, BTreeMap<String, ClusterId>)> {
        let parsed = parse_tree(text)?;
        let (topo, ids) = Topology::from_sets(parsed.leaves, &parsed.sets())?;
        let mut names = BTreeMap::new();
        for (c, id) in parsed.clusters.iter().zip(ids) {
            match &c.slot {
                Slot::Name(n) => {
                    if names.insert(n.clone(), id).is_some() {
                        return Err(Error::Syntax { pos: c.pos, msg: format!("duplicate cluster name {n}") });
                    }
                }
                _ => return Err(Error::Syntax { pos: c.pos, msg: "expected a cluster name".into() }),
            }
        }
        Ok((topo, names))
    }

    pub fn root(&self) -> ClusterId {
        ClusterId(0)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = ClusterId> + '_ {
        (0..self.nodes.len()).map(ClusterId)
    }

    /// Proper clusters in pre-order.
    pub fn proper(&self) -> Vec<ClusterId> {
        self.ids().filter(|&s| self.is_proper(s)).collect()
    }

    pub fn children(&self, s: ClusterId) -> &[ClusterId] {
        &self.nodes[s.0].children
    }

    pub fn parent(&self, s: ClusterId) -> Option<ClusterId> {
        self.nodes[s.0].parent
    }

    pub fn leaves(&self, s: ClusterId) -> &[usize] {
        &self.nodes[s.0].leaves
    }

    pub fn size(&self, s: ClusterId) -> usize {
        self.nodes[s.0].leaves.len()
    }

    pub fn level(&self, s: ClusterId) -> usize {
        self.nodes[s.0].level
    }

    pub fn is_proper(&self, s: ClusterId) -> bool {
        self.size(s) > 1
    }

    pub fn leaf(&self, i: usize) -> ClusterId {
        self.leaf_nodes[i]
    }

    pub fn find(&self, leaves: &[usize]) -> Option<ClusterId> {
        self.index.get(leaves).copied()
    }

    pub fn contains(&self, s: ClusterId, leaf: usize) -> bool {
        self.leaves(s).binary_search(&leaf).is_ok()
    }

    /// `a` contains `b` (not necessarily strictly).
    pub fn is_ancestor(&self, a: ClusterId, b: ClusterId) -> bool {
        let mut x = b;
        loop {
            if x == a {
                return true;
            }
            match self.parent(x) {
                Some(p) if self.level(p) >= self.level(a) => x = p,
                _ => return false,
            }
        }
    }

    /// Strict ancestors of `s`, nearest first.
    pub fn ancestors(&self, s: ClusterId) -> Vec<ClusterId> {
        let mut out = Vec::new();
        let mut x = s;
        while let Some(p) = self.parent(x) {
            out.push(p);
            x = p;
        }
        out
    }

    /// Smallest cluster containing both `a` and `b`.
    pub fn wedge(&self, a: ClusterId, b: ClusterId) -> ClusterId {
        let (mut a, mut b) = (a, b);
        while self.level(a) > self.level(b) {
            a = self.parent(a).expect("deeper node has a parent");
        }
        while self.level(b) > self.level(a) {
            b = self.parent(b).expect("deeper node has a parent");
        }
        while a != b {
            a = self.parent(a).expect("distinct nodes below the root");
            b = self.parent(b).expect("distinct nodes below the root");
        }
        a
    }

    /// The child of `s` that contains `leaf`.
    pub fn child_containing(&self, s: ClusterId, leaf: usize) -> Option<ClusterId> {
        self.children(s).iter().copied().find(|&c| self.contains(c, leaf))
    }

    pub fn name(&self, s: ClusterId) -> String {
        leaf_set_name(self.leaves(s))
    }

    /// Canonical labelling, sorting children by `(size, key, string)` and
    /// appending `tag` after the closing parenthesis of each proper cluster.
    pub fn canonical_by<K: Ord>(
        &self,
        key: impl Fn(ClusterId) -> K,
        tag: impl Fn(ClusterId) -> String,
    ) -> Canonical {
        let n = self.nodes.len();
        let mut strings = vec![String::new(); n];
        let mut child_order = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let s = ClusterId(i);
            if !self.is_proper(s) {
                strings[i] = "r".into();
                continue;
            }
            let mut kids: Vec<(usize, K, ClusterId)> =
                self.children(s).iter().map(|&c| (self.size(c), key(c), c)).collect();
            kids.sort_by(|a, b| {
                a.0.cmp(&b.0)
                    .then_with(|| a.1.cmp(&b.1))
                    .then_with(|| strings[a.2 .0].cmp(&strings[b.2 .0]))
            });
            let parts: Vec<&str> = kids.iter().map(|k| strings[k.2 .0].as_str()).collect();
            strings[i] = format!("({}){}", parts.join(" "), tag(s));
            child_order[i] = kids.into_iter().map(|k| k.2).collect();
        }
        Canonical { strings, child_order }
    }

    pub fn canonical(&self) -> Canonical {
        self.canonical_by(|_| (), |_| String::new())
    }

    pub fn canonical_string(&self) -> String {
        self.canonical().strings[0].clone()
    }

    /// Leaf bijection onto an isomorphic shape, if one exists.
    pub fn isomorphism(&self, other: &Topology) -> Option<Vec<usize>> {
        let a = self.canonical();
        let b = other.canonical();
        if a.strings[0] != b.strings[0] {
            return None;
        }
        Some(bijection(&a.leaf_order(self, self.root()), &b.leaf_order(other, other.root())))
    }

    /// Whether `perm` maps clusters onto clusters.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.leaf_count()
            && self.ids().all(|s| self.image(perm, s).is_some())
    }

    /// Image of `s` under a leaf permutation, if it is a cluster.
    pub fn image(&self, perm: &[usize], s: ClusterId) -> Option<ClusterId> {
        let mut img: Vec<usize> = self.leaves(s).iter().map(|&l| perm[l]).collect();
        img.sort_unstable();
        self.find(&img)
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, s: ClusterId, leaf: &dyn Fn(usize) -> String, tag: &dyn Fn(ClusterId) -> String) -> fmt::Result {
        if !self.is_proper(s) {
            return f.write_str(&leaf(self.leaves(s)[0]));
        }
        f.write_str("(")?;
        for (i, &c) in self.children(s).iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            self.write_with(f, c, leaf, tag)?;
        }
        write!(f, "){}", tag(s))
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, self.root(), &|_| "r".into(), &|_| String::new())
    }
}

fn bijection(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut map = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        map[a] = b;
    }
    map
}

/// A cluster picture: a [`Topology`] with a depth on every proper cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPicture {
    topo: Topology,
    depths: Vec<Option<Rational>>,
    labels: Vec<Option<String>>,
}

impl ClusterPicture {
    /// Attaches depths (indexed by [`ClusterId`], `None` on singletons) and
    /// checks that depths strictly increase inwards.
    pub fn new(topo: Topology, depths: Vec<Option<Rational>>) -> Result<ClusterPicture> {
        let labels = vec![None; topo.leaf_count()];
        ClusterPicture::with_labels(topo, depths, labels)
    }

    fn with_labels(topo: Topology, depths: Vec<Option<Rational>>, labels: Vec<Option<String>>) -> Result<ClusterPicture> {
        if depths.len() != topo.node_count() {
            return Err(Error::Invalid("depth vector does not match the clusters".into()));
        }
        for s in topo.ids() {
            if topo.is_proper(s) != depths[s.0].is_some() {
                return Err(Error::Invalid(format!("depth missing or misplaced on {}", topo.name(s))));
            }
        }
        for s in topo.proper() {
            if let Some(p) = topo.parent(s) {
                if depths[s.0] <= depths[p.0] {
                    return Err(Error::Axiom {
                        axiom: "iii",
                        cluster: topo.name(s),
                        msg: format!(
                            "depth {} is not greater than the depth {} of its parent",
                            depths[s.0].as_ref().unwrap(),
                            depths[p.0].as_ref().unwrap()
                        ),
                    });
                }
            }
        }
        Ok(ClusterPicture { topo, depths, labels })
    }

    /// Builds a picture from proper clusters given as (leaf set, depth) over
    /// `0..leaves`.
    pub fn from_clusters(leaves: usize, clusters: &[(Vec<usize>, Rational)]) -> Result<ClusterPicture> {
        let sets: Vec<Vec<usize>> = clusters.iter().map(|c| c.0.clone()).collect();
        let (topo, ids) = Topology::from_sets(leaves, &sets)?;
        let mut depths = vec![None; topo.node_count()];
        for ((_, d), id) in clusters.iter().zip(ids) {
            depths[id.0] = Some(d.clone());
        }
        ClusterPicture::new(topo, depths)
    }

    pub fn parse(text: &str) -> Result<ClusterPicture> {
        let parsed = parse_tree(text)?;
        let (topo, ids) = Topology::from_sets(parsed.leaves, &parsed.sets())?;
        let mut depths = vec![None; topo.node_count()];
        for (c, id) in parsed.clusters.iter().zip(ids) {
            match &c.slot {
                Slot::Depth(d) => depths[id.0] = Some(d.clone()),
                _ => return Err(Error::Syntax { pos: c.pos, msg: "expected a depth after ')'".into() }),
            }
        }
        ClusterPicture::with_labels(topo, depths, parsed.labels)
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn leaf_count(&self) -> usize {
        self.topo.leaf_count()
    }

    pub fn root(&self) -> ClusterId {
        self.topo.root()
    }

    pub fn depth(&self, s: ClusterId) -> Option<&Rational> {
        self.depths[s.0].as_ref()
    }

    /// Depth of a proper cluster.
    ///
    /// Panics on a singleton.
    pub fn d(&self, s: ClusterId) -> &Rational {
        self.depths[s.0].as_ref().expect("depth of a proper cluster")
    }

    pub fn depths(&self) -> &[Option<Rational>] {
        &self.depths
    }

    pub fn label(&self, leaf: usize) -> Option<&str> {
        self.labels[leaf].as_deref()
    }

    /// `d_s - d_P(s)`, and `d_R` for the top cluster.
    pub fn relative_depth(&self, s: ClusterId) -> Rational {
        match self.topo.parent(s) {
            Some(p) => self.d(s) - self.d(p),
            None => self.d(s).clone(),
        }
    }

    /// Sum over roots outside `s` of the depth of the smallest cluster
    /// containing both the root and `s`.
    pub fn mu(&self, s: ClusterId) -> Rational {
        let mut total = Rational::zero();
        for r in 0..self.leaf_count() {
            if !self.topo.contains(s, r) {
                total += self.d(self.topo.wedge(self.topo.leaf(r), s));
            }
        }
        total
    }

    pub fn is_even(&self, s: ClusterId) -> bool {
        self.topo.size(s).is_multiple_of(2)
    }

    pub fn odd_children(&self, s: ClusterId) -> Vec<ClusterId> {
        self.topo.children(s).iter().copied().filter(|&c| !self.is_even(c)).collect()
    }

    /// Even with only even children.
    pub fn is_ubereven(&self, s: ClusterId) -> bool {
        self.topo.is_proper(s) && self.is_even(s) && self.odd_children(s).is_empty()
    }

    /// Genus of the hyperelliptic curve with this picture.
    pub fn genus(&self) -> usize {
        (self.leaf_count() - 1) / 2
    }

    pub fn min_depth(&self) -> Rational {
        self.topo
            .proper()
            .into_iter()
            .map(|s| self.d(s).clone())
            .min()
            .expect("at least one proper cluster")
    }

    /// Adds `m` to every depth.
    pub fn shifted(&self, m: &Rational) -> ClusterPicture {
        let depths = self.depths.iter().map(|d| d.as_ref().map(|d| d + m)).collect();
        ClusterPicture { topo: self.topo.clone(), depths, labels: self.labels.clone() }
    }

    pub fn canonical(&self) -> Canonical {
        self.topo.canonical_by(|s| self.depths[s.0].clone(), |s| format!("{}", self.d(s)))
    }

    pub fn canonical_string(&self) -> String {
        self.canonical().strings[0].clone()
    }

    /// A leaf bijection carrying this picture onto `other`, if isomorphic.
    pub fn isomorphism(&self, other: &ClusterPicture) -> Option<Vec<usize>> {
        let a = self.canonical();
        let b = other.canonical();
        if a.strings[0] != b.strings[0] {
            return None;
        }
        Some(bijection(
            &a.leaf_order(&self.topo, self.root()),
            &b.leaf_order(&other.topo, other.root()),
        ))
    }

    /// Whether `perm` maps clusters to clusters of the same depth.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.leaf_count()
            && self.topo.ids().all(|s| match self.topo.image(perm, s) {
                Some(t) => self.depths[t.0] == self.depths[s.0],
                None => false,
            })
    }

    /// Whether `perm` (a leaf map onto `other`) preserves clusters and depths.
    pub fn maps_onto(&self, other: &ClusterPicture, perm: &[usize]) -> bool {
        perm.len() == self.leaf_count()
            && other.leaf_count() == self.leaf_count()
            && self.topo.node_count() == other.topo.node_count()
            && self.topo.ids().all(|s| {
                let mut img: Vec<usize> = self.topo.leaves(s).iter().map(|&l| perm[l]).collect();
                img.sort_unstable();
                match other.topo.find(&img) {
                    Some(t) => other.depths[t.0] == self.depths[s.0],
                    None => false,
                }
            })
    }
}

impl fmt::Display for ClusterPicture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let leaf = |l: usize| match &self.labels[l] {
            Some(lbl) => format!("r{lbl}"),
            None => "r".into(),
        };
        self.topo.write_with(f, self.root(), &leaf, &|s| format!("{}", self.d(s)))
    }
}

impl FromStr for ClusterPicture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClusterPicture::parse(s)
    }
}

#[derive(Debug)]
enum Slot {
    Depth(Rational),
    Name(String),
    Empty,
}

#[derive(Debug)]
struct ParsedCluster {
    leaves: Vec<usize>,
    slot: Slot,
    pos: usize,
}

#[derive(Debug)]
struct ParsedTree {
    leaves: usize,
    labels: Vec<Option<String>>,
    clusters: Vec<ParsedCluster>,
}

impl ParsedTree {
    fn sets(&self) -> Vec<Vec<usize>> {
        self.clusters.iter().map(|c| c.leaves.clone()).collect()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    out: ParsedTree,
}

fn parse_tree(text: &str) -> Result<ParsedTree> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        out: ParsedTree { leaves: 0, labels: Vec::new(), clusters: Vec::new() },
    };
    p.skip_ws();
    if p.peek() != Some(b'(') {
        return Err(p.err("expected '('"));
    }
    p.cluster()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(p.out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn cluster(&mut self) -> Result<Vec<usize>> {
        let start = self.pos;
        self.pos += 1;
        self.skip_ws();
        let mut leaves = Vec::new();
        let slot_index = self.out.clusters.len();
        self.out.clusters.push(ParsedCluster { leaves: Vec::new(), slot: Slot::Empty, pos: start });
        loop {
            match self.peek() {
                Some(b'(') => leaves.extend(self.cluster()?),
                Some(b'r') => leaves.push(self.leaf()),
                Some(b')') if !leaves.is_empty() => break,
                None => return Err(self.err("unexpected end of input")),
                _ => return Err(self.err("expected 'r' or '('")),
            }
            let spaced = self.skip_ws();
            match self.peek() {
                Some(b')') => break,
                Some(_) if spaced => {}
                Some(b'(') => {}
                Some(_) => return Err(self.err("expected a space between items")),
                None => return Err(self.err("unexpected end of input")),
            }
        }
        self.pos += 1;
        let slot = self.slot()?;
        self.out.clusters[slot_index].leaves = leaves.clone();
        self.out.clusters[slot_index].slot = slot;
        Ok(leaves)
    }

    fn leaf(&mut self) -> usize {
        self.pos += 1;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'') {
            self.pos += 1;
        }
        let label = (self.pos > start)
            .then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned());
        let id = self.out.leaves;
        self.out.leaves += 1;
        self.out.labels.push(label);
        id
    }

    fn slot(&mut self) -> Result<Slot> {
        match self.peek() {
            Some(c) if c == b'-' || c.is_ascii_digit() => self.rational().map(Slot::Depth),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                Ok(Slot::Name(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            _ => Ok(Slot::Empty),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        BigInt::from_str(s).map_err(|_| self.err("bad integer"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let mut num = self.digits()?;
        if neg {
            num = -num;
        }
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        Ok(Rational::new(num, den))
    }
}
