//! The embedded genus-2 fixture, its errata and the table check.

use clusterpic::tables::{compare_golden, Golden, GoldenDiff, TableRow};
use clusterpic::{Error, Result};

pub const GOLDEN: &str = include_str!("../data/genus2.golden");
pub const ERRATA: &str = include_str!("../data/genus2.errata");

/// Replacement of one fixture line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    /// 1-based line in the fixture.
    pub line: usize,
    pub replacement: String,
}

/// Reads `<line>: <replacement>` records; blank lines and `#` comments are
/// skipped.
pub fn parse_errata(text: &str) -> Result<Vec<Erratum>> {
    let mut out: Vec<Erratum> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::Invalid(format!("errata line {}: {msg}", i + 1));
        let (no, rest) = line.split_once(':').ok_or_else(|| bad("expected '<line>: <text>'"))?;
        let no: usize = no.trim().parse().map_err(|_| bad("bad line number"))?;
        if no == 0 || out.iter().any(|e| e.line == no) {
            return Err(bad("line number zero or repeated"));
        }
        out.push(Erratum { line: no, replacement: rest.trim().to_string() });
    }
    Ok(out)
}

/// The fixture with the errata applied. Each erratum must change its line.
pub fn apply(text: &str, errata: &[Erratum]) -> Result<String> {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    for e in errata {
        let slot = lines
            .get_mut(e.line - 1)
            .ok_or_else(|| Error::Invalid(format!("erratum for line {} past the end", e.line)))?;
        if slot.trim() == e.replacement {
            return Err(Error::Invalid(format!("erratum for line {} changes nothing", e.line)));
        }
        *slot = e.replacement.clone();
    }
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out)
}

/// Outcome of comparing computed rows with the fixture, before and after
/// the errata.
#[derive(Clone, Debug)]
pub struct Check {
    pub roots: usize,
    pub raw: GoldenDiff,
    pub corrected: GoldenDiff,
    /// Errata touching these roots.
    pub errata: Vec<Erratum>,
    /// Errata whose removal still leaves a clean comparison.
    pub unneeded: Vec<usize>,
    pub golden_shapes: usize,
    pub golden_tuples: usize,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.corrected.is_empty() && self.unneeded.is_empty()
    }
}

/// Line numbers that belong to shapes with `roots` leaves.
fn lines_for(text: &str, roots: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = false;
    for (i, raw) in text.lines().enumerate() {
        if let Some(rest) = raw.trim().strip_prefix("shape ") {
            let (topo, _) = clusterpic::Topology::parse_labeled(rest)?;
            current = topo.leaf_count() == roots;
        }
        if current {
            out.push(i + 1);
        }
    }
    Ok(out)
}

pub fn check(rows: &[TableRow], roots: usize) -> Result<Check> {
    check_against(rows, roots, GOLDEN, ERRATA)
}

pub fn check_against(rows: &[TableRow], roots: usize, golden: &str, errata: &str) -> Result<Check> {
    let all = parse_errata(errata)?;
    let scope = lines_for(golden, roots)?;
    let errata: Vec<Erratum> = all.into_iter().filter(|e| scope.contains(&e.line)).collect();
    let diff = |errata: &[Erratum]| -> Result<GoldenDiff> {
        let text = apply(golden, errata)?;
        compare_golden(rows, &Golden::parse(&text)?.with_leaves(roots))
    };
    let raw = diff(&[])?;
    let corrected = diff(&errata)?;
    let mut unneeded = Vec::new();
    for i in 0..errata.len() {
        let mut rest = errata.clone();
        let dropped = rest.remove(i);
        if diff(&rest)?.is_empty() {
            unneeded.push(dropped.line);
        }
    }
    let fixed = Golden::parse(&apply(golden, &errata)?)?.with_leaves(roots);
    Ok(Check {
        roots,
        raw,
        corrected,
        errata,
        unneeded,
        golden_shapes: fixed.shapes.len(),
        golden_tuples: fixed.tuple_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errata_parse_and_apply() {
        let e = parse_errata("# note\n2: b2\n\n3: c2\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(apply("a\nb\nc\n", &e).unwrap(), "a\nb2\nc2\n");
        assert!(apply("a\nb2\n", &parse_errata("2: b2").unwrap()).is_err());
        assert!(apply("a\n", &parse_errata("5: x").unwrap()).is_err());
        assert!(parse_errata("x: y").is_err());
        assert!(parse_errata("1: a\n1: b").is_err());
    }

    #[test]
    fn embedded_fixture_parses() {
        let g = Golden::parse(GOLDEN).unwrap();
        assert_eq!(g.with_leaves(5).tuple_count(), 55);
        assert_eq!(g.tuple_count(), 276);
        let fixed = apply(GOLDEN, &parse_errata(ERRATA).unwrap()).unwrap();
        assert_eq!(Golden::parse(&fixed).unwrap().tuple_count(), 276);
    }
}
