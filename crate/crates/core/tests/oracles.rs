//! Closed formulas checked against brute-force counts.

use clusterpic::numbers::{euler_phi, gcd, int, rat};
use clusterpic::repn::{induce, twist, RhoSum};
use clusterpic::tables::enumerate_shapes;

/// Order of `j` in `Z/n`.
fn order(j: u64, n: u64) -> u64 {
    n / gcd(j % n, n)
}

/// `rho_m` multiplicities of a multiset of characters of `Z/n`, each
/// character given by its order.
fn from_orders(orders: impl IntoIterator<Item = u64>) -> RhoSum {
    let mut out = RhoSum::zero();
    for m in orders {
        out.add_term(m, rat(1, euler_phi(m) as i64));
    }
    out
}

#[test]
fn twist_matches_character_count() {
    for t in 1..=36u64 {
        for d in 1..=36u64 {
            let n = d / gcd(d, t) * t;
            let g = n / t;
            let brute = from_orders((0..n).filter(|&j| order(j, n) == d).map(|j| order(j + g, n)));
            assert_eq!(twist(t, d), brute, "t = {t}, d = {d}");
        }
    }
}

#[test]
fn induction_matches_character_count() {
    // characters of Z/(n s) restricting to a character of order s on the
    // subgroup of index n
    for s in 1..=30u64 {
        for n in 1..=30u64 {
            let big = n * s;
            let brute = from_orders((0..big).filter(|&j| order(j, s) == s).map(|j| order(j, big)));
            assert_eq!(induce(&RhoSum::rho(s), n), brute, "s = {s}, n = {n}");
        }
    }
}

#[test]
fn induction_scales_dimension() {
    for s in 1..=40u64 {
        for n in 1..=40u64 {
            assert_eq!(induce(&RhoSum::rho(s), n).dim(), int((n * euler_phi(s)) as i64));
        }
    }
}

/// Rooted trees with `n` unlabeled leaves and no node of out-degree one,
/// counted by choosing a multiset of at least two subtrees.
fn series_reduced(n: usize) -> Vec<u64> {
    // a[k]: trees with k leaves (a single leaf counts for k = 1)
    let mut a = vec![0u64; n + 1];
    a[1] = 1;
    for k in 2..=n {
        // f[m][j]: multisets of trees of sizes <= m with j leaves in total
        let mut f = vec![0u64; k + 1];
        f[0] = 1;
        for m in 1..k {
            let mut g = vec![0u64; k + 1];
            for (j, &fj) in f.iter().enumerate() {
                if fj == 0 {
                    continue;
                }
                // take c copies-with-repetition of the a[m] trees of size m
                let mut c = 0;
                while j + c * m <= k {
                    g[j + c * m] += fj * multichoose(a[m], c as u64);
                    c += 1;
                }
            }
            f = g;
        }
        a[k] = f[k];
    }
    a
}

fn multichoose(n: u64, k: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k {
        out = out * (n + i) / (i + 1);
    }
    out
}

#[test]
fn shape_counts_match_tree_count() {
    let a = series_reduced(7);
    for (n, &count) in a.iter().enumerate().skip(2) {
        assert_eq!(enumerate_shapes(n).len() as u64, count, "n = {n}");
    }
    assert_eq!(&a[2..], &[1, 2, 5, 12, 33, 90]);
}
