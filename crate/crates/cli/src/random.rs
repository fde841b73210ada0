//! Seeded random pictures of polynomial type.
//!
//! Pictures are built top-down together with the stabiliser index of each
//! cluster: a cluster with index `n` gets a depth denominator `b` with
//! `b / gcd(b, n) = L`, and its children are laid out as orbits of length
//! `L` (each orbit copies one subtree generated with index `n L`) plus at
//! most one orphan generated with index `n`.

use clusterpic::inertia::denominator_candidates;
use clusterpic::numbers::{gcd, lcm_all, rat};
use clusterpic::{ClusterPicture, Rational};
use num_traits::ToPrimitive;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug)]
enum Node {
    Leaf,
    Cluster { depth: Rational, den: u64, children: Vec<Node> },
}

impl Node {
    fn write(&self, out: &mut String) {
        match self {
            Node::Leaf => out.push('r'),
            Node::Cluster { depth, children, .. } => {
                out.push('(');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    c.write(out);
                }
                out.push(')');
                out.push_str(&depth.to_string());
            }
        }
    }

    fn denominators(&self, out: &mut Vec<u64>) {
        if let Node::Cluster { den, children, .. } = self {
            out.push(*den);
            for c in children {
                c.denominators(out);
            }
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    max_roots: usize,
    max_order: u64,
}

impl Generator {
    pub fn new(seed: u64, max_roots: usize, max_order: u64) -> Generator {
        assert!(max_roots >= 3, "need room for three roots");
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), max_roots, max_order }
    }

    /// A picture with at least three roots whose inertia order is at most
    /// `max_order`.
    pub fn picture(&mut self) -> ClusterPicture {
        loop {
            let size = self.rng.random_range(3..=self.max_roots);
            let floor = rat(self.rng.random_range(-2..=2), 1);
            let Some(node) = self.cluster(size, 1, &floor, true) else { continue };
            let mut dens = Vec::new();
            node.denominators(&mut dens);
            if lcm_all(&dens).map_or(true, |e| e > self.max_order) {
                continue;
            }
            let mut text = String::new();
            node.write(&mut text);
            return ClusterPicture::parse(&text).expect("generated pictures satisfy the axioms");
        }
    }

    fn cluster(&mut self, size: usize, n: u64, floor: &Rational, top: bool) -> Option<Node> {
        let top_len = (size as u64).min(6);
        let l = if top_len >= 2 && self.rng.random_bool(0.8) { self.rng.random_range(2..=top_len) } else { 1 };
        let dens: Vec<u64> = denominator_candidates(n, l).into_iter().filter(|&b| b <= self.max_order).collect();
        let den = *dens.choose(&mut self.rng)?;
        let depth = self.depth_above(floor, den, top);
        let mut children = Vec::new();
        let mut left = size;
        let mut orphan = false;
        while left > 0 {
            let room = if children.is_empty() { left.min(size - 1) } else { left };
            let orbit = l as usize;
            if l == 1 {
                let c = self.rng.random_range(1..=room);
                children.push(self.child(c, n, &depth)?);
                left -= c;
            } else if left >= orbit && (orphan || self.rng.random_bool(0.75)) {
                let c = self.rng.random_range(1..=left / orbit);
                let child = self.child(c, n * l, &depth)?;
                children.extend(std::iter::repeat_n(child, orbit));
                left -= c * orbit;
            } else if !orphan {
                let c = self.rng.random_range(1..=room.min(left));
                children.push(self.child(c, n, &depth)?);
                orphan = true;
                left -= c;
            } else {
                return None;
            }
        }
        if children.len() < 2 {
            return None;
        }
        Some(Node::Cluster { depth, den, children })
    }

    fn child(&mut self, size: usize, n: u64, parent: &Rational) -> Option<Node> {
        if size == 1 {
            Some(Node::Leaf)
        } else {
            self.cluster(size, n, parent, false)
        }
    }

    /// A depth `a / den` in lowest terms, strictly above `floor` unless this
    /// is the top cluster, where it lies within 3 of `floor`.
    fn depth_above(&mut self, floor: &Rational, den: u64, top: bool) -> Rational {
        let d = den as i64;
        let base = (floor * rat(d, 1)).floor().to_integer().to_i64().expect("small depths");
        let start = if top { base - 3 * d } else { base + 1 };
        let mut a = start + self.rng.random_range(0..3 * d);
        while gcd(a.unsigned_abs(), den) != 1 {
            a += 1;
        }
        rat(a, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clusterpic::inertia::find_action;

    #[test]
    fn generated_pictures_have_actions() {
        let mut g = Generator::new(DEFAULT_SEED, 10, 60);
        for _ in 0..200 {
            let pic = g.picture();
            assert!((3..=10).contains(&pic.leaf_count()));
            let action = find_action(&pic).unwrap_or_else(|e| panic!("{pic}: {e}"));
            assert!(action.order <= 60, "{pic}");
        }
    }

    #[test]
    fn orders_spread_out() {
        let mut g = Generator::new(DEFAULT_SEED, 12, 60);
        let orders: std::collections::BTreeSet<u64> =
            (0..300).map(|_| find_action(&g.picture()).unwrap().order).collect();
        assert!(orders.len() >= 8, "{orders:?}");
        assert!(orders.iter().any(|&e| e >= 20), "{orders:?}");
    }

    #[test]
    fn seeded() {
        let a: Vec<String> = {
            let mut g = Generator::new(7, 12, 60);
            (0..20).map(|_| g.picture().to_string()).collect()
        };
        let mut g = Generator::new(7, 12, 60);
        let b: Vec<String> = (0..20).map(|_| g.picture().to_string()).collect();
        assert_eq!(a, b);
    }
}

