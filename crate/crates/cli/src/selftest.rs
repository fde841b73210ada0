//! The two routes to `Ind V_s` compared on a corpus and on random pictures.
//! `V_s` is only defined for clusters that are not übereven.

use clusterpic::inertia::{check_action, find_action};
use clusterpic::numbers::int;
use clusterpic::repn::oracle::oracle_ind_v;
use clusterpic::repn::{assemble_h1, cluster_rep_data};
use clusterpic::rootnum::{m_t, m_t_from_epsilons};
use clusterpic::{ClusterPicture, Result};

use crate::random::Generator;

pub const CORPUS: &str = include_str!("../data/pictures.txt");

/// `(name, picture)` pairs from the embedded corpus.
pub fn corpus() -> Result<Vec<(String, ClusterPicture)>> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, text) = l.split_once(':').unwrap_or(("", l));
            Ok((name.trim().to_string(), ClusterPicture::parse(text.trim())?))
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub pictures: usize,
    pub clusters: usize,
    /// Pictures with three or more roots whose H^1 was assembled.
    pub representations: usize,
    pub mismatches: Vec<String>,
    pub dimension_failures: Vec<String>,
    pub action_failures: Vec<String>,
    pub toric_failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
            && self.dimension_failures.is_empty()
            && self.action_failures.is_empty()
            && self.toric_failures.is_empty()
    }

    fn merge(&mut self, other: Report) {
        self.pictures += other.pictures;
        self.clusters += other.clusters;
        self.representations += other.representations;
        self.mismatches.extend(other.mismatches);
        self.dimension_failures.extend(other.dimension_failures);
        self.action_failures.extend(other.action_failures);
        self.toric_failures.extend(other.toric_failures);
    }
}

/// Runs every check on one picture. Domain errors from the core are
/// reported as failures, not propagated.
pub fn check_picture(pic: &ClusterPicture) -> Report {
    let mut r = Report { pictures: 1, ..Report::default() };
    let action = match find_action(pic) {
        Ok(a) => a,
        Err(e) => {
            r.action_failures.push(format!("{pic}: {e}"));
            return r;
        }
    };
    match check_action(pic, &action.generator) {
        Ok(rep) if rep.ok => {}
        Ok(_) => r.action_failures.push(format!("{pic}: found action fails the check")),
        Err(e) => r.action_failures.push(format!("{pic}: {e}")),
    }
    let topo = pic.topology();
    for s in topo.proper().into_iter().filter(|&s| !pic.is_ubereven(s)) {
        r.clusters += 1;
        let closed = cluster_rep_data(pic, &action, s, None).map(|d| d.ind_v);
        let oracle = oracle_ind_v(pic, &action.generator, s, None).map(|o| o.ind_v);
        match (closed, oracle) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => r.mismatches.push(format!("{pic} at {}: formula {a}, oracle {b}", topo.name(s))),
            (a, b) => r.mismatches.push(format!("{pic} at {}: {:?} / {:?}", topo.name(s), a.err(), b.err())),
        }
    }
    if pic.leaf_count() >= 3 {
        match assemble_h1(pic, &action, None) {
            Ok(rep) if rep.total_dim() == int(2 * pic.genus() as i64) => r.representations += 1,
            Ok(rep) => r.dimension_failures.push(format!("{pic}: dimension {}", rep.total_dim())),
            Err(e) => r.dimension_failures.push(format!("{pic}: {e}")),
        }
    }
    if m_t(pic, &action) != m_t_from_epsilons(pic, &action) {
        r.toric_failures.push(format!("{pic}: the two counts of m_T differ"));
    }
    r
}

pub fn run_corpus() -> Result<Report> {
    let mut r = Report::default();
    for (_, pic) in corpus()? {
        r.merge(check_picture(&pic));
    }
    Ok(r)
}

pub fn run_random(seed: u64, max_roots: usize, count: usize, max_order: u64) -> Report {
    let mut g = Generator::new(seed, max_roots, max_order);
    let mut r = Report::default();
    for _ in 0..count {
        r.merge(check_picture(&g.picture()));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_clean() {
        let r = run_corpus().unwrap();
        assert!(r.pictures >= 20);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn small_random_run() {
        let r = run_random(1, 8, 60, 60);
        assert_eq!(r.pictures, 60);
        assert!(r.ok(), "{r:?}");
    }
}
