//! Argument parsing and the subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clusterpic::inertia::{
    check_action_with, enumerate_actions, enumerate_denominators, find_action, find_action_for_prime, DepthMode,
};
use clusterpic::repn::assemble_h1;
use clusterpic::rootnum::{m_t, root_number};
use clusterpic::tables::{classify_all, enumerate_shapes, labeled_shape};
use clusterpic::witness::construct;
use clusterpic::{elliptic, ClusterPicture, Permutation, Topology};
use serde_json::{json, Value};

use crate::{golden, json as view, random, selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "clusterpic", version, about = "Cluster pictures of hyperelliptic curves with tame inertia")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Source {
    /// Picture text, e.g. "((r r)3/2 r)1/2".
    pub picture: Option<String>,
    /// Read the picture from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a picture.
    Validate(Source),
    /// Find the inertia action, or check a given one.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Residue characteristic, to reject wild inertia.
        #[arg(long)]
        p: Option<u64>,
        /// Check this generator in cycle notation instead of searching.
        #[arg(long)]
        cycles: Option<String>,
        /// Check the orbit conditions against relative depths.
        #[arg(long, requires = "cycles")]
        relative: bool,
    },
    /// Depth denominators admitted by the actions on a shape.
    Denoms {
        #[command(flatten)]
        source: Source,
        /// Fix the action, in cycle notation.
        #[arg(long)]
        cycles: Option<String>,
    },
    /// Build a witness polynomial over Q_p.
    Construct {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        p: u64,
    },
    /// The inertia representation on H^1.
    Repn {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        p: Option<u64>,
    },
    /// The inertia part of the local root number.
    Rootnumber {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q: u64,
    },
    /// Kodaira type, H^1 and root number of an elliptic curve.
    Kodaira {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q: u64,
    },
    /// Genus-2 tables, optionally checked against the embedded fixture.
    Gen2Tables {
        #[arg(long, value_parser = ["5", "6"])]
        roots: Option<String>,
        #[arg(long)]
        check: bool,
    },
    /// Compare the closed formula with the character oracle.
    Selftest {
        #[arg(long, default_value_t = random::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_roots: usize,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 60)]
        max_order: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(clusterpic::Error),
    /// Computed data disagrees with a reference.
    Check(String),
}

impl From<clusterpic::Error> for Failure {
    fn from(e: clusterpic::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(Value, String), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = cli.format;
    let (result, code) = match execute(cli.command) {
        Ok((value, text)) => (Ok((value, text)), EXIT_OK),
        Err(Failure::Usage(m)) => (Err(m), EXIT_USAGE),
        Err(Failure::Core(e)) => {
            let code = if e.is_integrity() { EXIT_INTEGRITY } else { EXIT_DOMAIN };
            (Err(e.to_string()), code)
        }
        Err(Failure::Check(m)) => (Err(m), EXIT_INTEGRITY),
    };
    match result {
        Ok((value, text)) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
                Format::Text => text.trim_end().to_string(),
            };
            let _ = writeln!(out, "{body}");
        }
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
        }
    }
    code
}

fn read_source(src: &Source) -> Result<String, Failure> {
    match (&src.picture, &src.file) {
        (Some(p), None) => Ok(p.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
        (Some(_), Some(_)) => Err(Failure::Usage("give the picture inline or with --file, not both".into())),
        (None, None) => Err(Failure::Usage("a picture is required, inline or with --file".into())),
    }
}

fn picture(src: &Source) -> Result<ClusterPicture, Failure> {
    Ok(ClusterPicture::parse(&read_source(src)?)?)
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate(src) => validate(&src),
        Command::Analyze { source, p, cycles, relative } => analyze(&picture(&source)?, p, cycles.as_deref(), relative),
        Command::Denoms { source, cycles } => denoms(&read_source(&source)?, cycles.as_deref()),
        Command::Construct { source, p } => {
            let pic = picture(&source)?;
            let w = construct(&pic, p)?;
            if !w.round_trip {
                return Err(Failure::Check(format!("recovered picture {} is not isomorphic to {pic}", w.recovered)));
            }
            let mut text = format!("f = {}\n", clusterpic::witness::format_poly(&w.f));
            for (y, f) in w.representatives.iter().zip(&w.factors) {
                text += &format!("r{}: {}\n", y + 1, clusterpic::witness::format_poly(f));
            }
            text += &format!("recovered {} (round trip ok)\n", w.recovered);
            for warning in &w.warnings {
                text += &format!("warning: {warning}\n");
            }
            Ok((view::witness(&pic, &w), text))
        }
        Command::Repn { source, p } => {
            let pic = picture(&source)?;
            let action = match p {
                Some(p) => find_action_for_prime(&pic, p)?.0,
                None => find_action(&pic)?,
            };
            let rep = assemble_h1(&pic, &action, p)?;
            let mut text = format!("H1_ab = {}\nH1_t = {}\n", rep.h1_ab, rep.h1_t);
            for c in &rep.clusters {
                text += &format!(
                    "{}: n={} n'={} odd={} floor={} orphan={} ord gamma={} ord eps={} Ind V={}\n",
                    pic.topology().name(c.cluster),
                    c.n,
                    c.n_prime,
                    c.odd_children,
                    c.floor,
                    c.odd_orphan,
                    c.gamma_order,
                    c.epsilon.order(),
                    c.ind_v
                );
            }
            Ok((view::rep(&pic, &rep), text))
        }
        Command::Rootnumber { source, q } => {
            let pic = picture(&source)?;
            let (action, warnings) = find_action_for_prime(&pic, q)?;
            let rep = assemble_h1(&pic, &action, Some(q))?;
            let mt = m_t(&pic, &action);
            let rn = root_number(&rep, q, mt)?;
            let mut value = view::root_number(&rn);
            value["m_t"] = json!(mt);
            value["warnings"] = json!(warnings);
            let text = format!(
                "W = {}{}\n",
                rn.sign,
                if rn.ambiguous { " times the sign of the toric part (not determined by the picture)" } else { "" }
            );
            Ok((value, text))
        }
        Command::Kodaira { source, q } => {
            let pic = picture(&source)?;
            let c = elliptic::classify(&pic, q)?;
            let text = format!(
                "{} reduction type {}, H1_ab = {}, H1_t = {}, W = {}{}\n",
                if c.multiplicative { "multiplicative" } else { "additive or good" },
                c.kodaira,
                c.rep.h1_ab,
                c.rep.h1_t,
                c.root_number.sign,
                if c.root_number.ambiguous { " up to the split/non-split sign" } else { "" }
            );
            Ok((view::elliptic(&c), text))
        }
        Command::Gen2Tables { roots, check } => gen2(roots.map(|r| r.parse().expect("validated by clap")), check),
        Command::Selftest { seed, max_roots, count, max_order } => {
            if max_roots < 3 {
                return Err(Failure::Usage("--max-roots must be at least 3".into()));
            }
            let corpus = selftest::run_corpus()?;
            let random = selftest::run_random(seed, max_roots, count, max_order);
            let summary = |r: &selftest::Report| {
                json!({
                    "pictures": r.pictures,
                    "clusters": r.clusters,
                    "representations": r.representations,
                    "mismatches": r.mismatches,
                    "dimension_failures": r.dimension_failures,
                    "action_failures": r.action_failures,
                    "toric_failures": r.toric_failures,
                })
            };
            let value = json!({ "seed": seed, "corpus": summary(&corpus), "random": summary(&random) });
            let text = format!(
                "corpus: {} pictures, {} clusters\nrandom (seed {seed}): {} pictures, {} clusters\n",
                corpus.pictures, corpus.clusters, random.pictures, random.clusters
            );
            if corpus.ok() && random.ok() {
                Ok((value, text))
            } else {
                Err(Failure::Check(serde_json::to_string(&value).expect("serializable")))
            }
        }
    }
}

fn validate(src: &Source) -> Outcome {
    let pic = picture(src)?;
    let topo = pic.topology();
    let mut value = view::picture(&pic);
    value["canonical"] = json!(pic.canonical_string());
    value["genus"] = json!(pic.genus());
    value["proper_clusters"] = json!(topo.proper().len());
    let text = format!("{pic}: {} roots, {} proper clusters, genus {}\n", pic.leaf_count(), topo.proper().len(), pic.genus());
    Ok((value, text))
}

fn analyze(pic: &ClusterPicture, p: Option<u64>, cycles: Option<&str>, relative: bool) -> Outcome {
    if let Some(c) = cycles {
        let perm = Permutation::parse_cycles(pic.leaf_count(), c)?;
        let mode = if relative { DepthMode::Relative } else { DepthMode::Absolute };
        let report = check_action_with(pic, &perm, mode)?;
        let text = format!(
            "{} (order {}, required {})\n",
            if report.ok { "action of polynomial type" } else { "not of polynomial type" },
            report.order,
            report.required_order
        );
        return Ok((view::report(pic, &report), text));
    }
    let (action, warnings) = match p {
        Some(p) => find_action_for_prime(pic, p)?,
        None => (find_action(pic)?, Vec::new()),
    };
    let mut value = view::action(pic, &action);
    value["warnings"] = json!(warnings);
    let topo = pic.topology();
    let mut text = format!("order {}\ncycles {}\npicture {}\n", action.order, action.generator, view::numbered(pic));
    for s in topo.proper() {
        let orphan = action.orphan(s).map(|o| topo.name(o)).unwrap_or_else(|| "-".into());
        text += &format!(
            "{} depth {} stab index {} orbit {} orphan {orphan}\n",
            topo.name(s),
            pic.d(s),
            action.stab_index(s),
            action.child_orbit(s)
        );
    }
    for w in warnings {
        text += &format!("warning: {w}\n");
    }
    Ok((value, text))
}

fn denoms(text: &str, cycles: Option<&str>) -> Outcome {
    let topo = match ClusterPicture::parse(text) {
        Ok(pic) => pic.topology().clone(),
        Err(_) => Topology::parse(text)?,
    };
    let actions = match cycles {
        Some(c) => {
            let perm = Permutation::parse_cycles(topo.leaf_count(), c)?;
            vec![clusterpic::TameAction::from_generator(&topo, perm)?]
        }
        None => enumerate_actions(&topo),
    };
    let mut values = Vec::new();
    let mut out = String::new();
    for action in &actions {
        let sets = enumerate_denominators(&topo, action)?;
        let mut v = view::denominators(&topo, &sets);
        v["cycles"] = json!(view::cycles(action));
        values.push(v);
        out += &format!("action {}\n", action.generator);
        for (s, c) in sets.clusters.iter().zip(&sets.candidates) {
            out += &format!("  {}: {:?}\n", topo.name(*s), c);
        }
        out += &format!("  {} tuples\n", sets.tuples.len());
    }
    Ok((json!({ "shape": labeled_shape(&topo), "actions": values }), out))
}

fn gen2(roots: Option<usize>, check: bool) -> Outcome {
    let all = match roots {
        Some(n) => vec![n],
        None => vec![5, 6],
    };
    let mut sections = Vec::new();
    let mut text = String::new();
    let mut failed = Vec::new();
    for n in all {
        let rows = classify_all(n)?;
        let shapes = enumerate_shapes(n).len();
        let mut section = json!({ "roots": n, "shapes": shapes, "tuples": rows.len() });
        text += &format!("{n} roots: {shapes} shapes, {} tuples\n", rows.len());
        if check {
            let c = golden::check(&rows, n)?;
            section["check"] = json!({
                "ok": c.ok(),
                "golden_shapes": c.golden_shapes,
                "golden_tuples": c.golden_tuples,
                "raw_diff": c.raw.lines(),
                "errata": c.errata.iter().map(|e| e.line).collect::<Vec<_>>(),
                "diff": c.corrected.lines(),
                "unneeded_errata": c.unneeded,
            });
            text += &format!(
                "  fixture: {} shapes, {} tuples; {} errata; {} differences before errata, {} after\n",
                c.golden_shapes,
                c.golden_tuples,
                c.errata.len(),
                c.raw.lines().len(),
                c.corrected.lines().len()
            );
            for l in c.corrected.lines() {
                text += &format!("  {l}\n");
            }
            for l in &c.unneeded {
                text += &format!("  erratum for line {l} is not needed\n");
            }
            if !c.ok() {
                failed.push(n);
            }
        } else {
            for r in &rows {
                let tuple: Vec<String> = r.tuple.iter().map(u64::to_string).collect();
                text += &format!("{} ({})\n", labeled_shape(&r.topology), tuple.join(","));
                for case in &r.cases {
                    text += &format!("  {} ; {}\n", case.h1_ab, case.h1_t);
                }
            }
            section["rows"] = view::table_rows(&rows);
        }
        sections.push(section);
    }
    let value = Value::Array(sections);
    if failed.is_empty() {
        Ok((value, text))
    } else {
        Err(Failure::Check(format!("genus-2 tables differ from the fixture for {failed:?} roots\n{text}")))
    }
}
