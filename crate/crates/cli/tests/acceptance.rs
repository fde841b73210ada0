//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Values are compared exactly. Each criterion also has a wall-clock limit.
//! A criterion listed in `EXPECTED_RED` is reported as FAIL but does not fail
//! the run, as long as it fails for exactly the recorded reason; if it starts
//! passing, the run fails so the list gets updated.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use clusterpic::inertia::{check_action_with, DepthMode};
use clusterpic::numbers::{is_prime, legendre_i64};
use clusterpic::witness::{conjugate_difference_denominators, lcm_or_one, orbit_length, CyclotomicRing, PiAdicElement, ResidueField};
use clusterpic::{ClusterPicture, Permutation};
use clusterpic_cli::app::run;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

const WORKED: &str = "((r r r r)4/9 (r r r r)4/9 (r r r r)4/9 (r r r r)1/2)1/3";
const WORKED_DEGREE_NINE: &str = "x^9 - 57x^6 - 6498x^4 + 1083x^3 - 61731x^2 - 61731x - 137180";

/// Criterion 8 fails on the five-root shape count only: there are 12
/// series-reduced rooted trees on five leaves (and 33 on six), against the
/// stated 11 (and 44 in total).
const EXPECTED_RED: &[(u8, &str)] = &[(8, "shape count")];

struct Verdict {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Verdict {
        Verdict { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("clusterpic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(v: &mut Verdict, args: &[&str]) -> Value {
    let (code, out, err) = cli(args);
    if code != 0 {
        v.failures.push(format!("{args:?} exited {code}: {}", err.trim()));
        return Value::Null;
    }
    serde_json::from_str(&out).expect("valid JSON")
}

fn names(v: &Value) -> BTreeSet<String> {
    v.as_array().into_iter().flatten().filter_map(|x| x.as_str().map(str::to_string)).collect()
}

fn rho(v: &Value) -> Vec<(String, i64)> {
    v.as_object().into_iter().flatten().map(|(k, x)| (k.clone(), x.as_i64().unwrap_or(-1))).collect()
}

fn rho_of(pairs: &[(&str, i64)]) -> Vec<(String, i64)> {
    pairs.iter().map(|(k, a)| (k.to_string(), *a)).collect()
}

fn criterion_1(v: &mut Verdict) {
    let a = cli_json(v, &["analyze", WORKED]);
    if a.is_null() {
        return;
    }
    v.eq(a["order"].as_u64(), Some(18), "order");
    v.eq(a["cycle_lengths"].clone(), serde_json::json!([2, 2, 3, 9]), "cycle lengths");
    let orphans = names(&a["orphans"]);
    let s4: String = "{r13,r14,r15,r16}".into();
    v.check(orphans.contains(&s4), "s4 is an orphan of the top cluster");
    for (k, range) in [(1, 1..5), (2, 5..9), (3, 9..13)] {
        let inside: Vec<&String> =
            orphans.iter().filter(|o| range.clone().any(|i| **o == format!("{{r{i}}}"))).collect();
        v.eq(inside.len(), 1, &format!("singleton orphans in s{k}"));
    }
    v.eq(orphans.len(), 4, "number of orphans");
    let index = |leaf: &str| {
        a["leaves"].as_array().unwrap().iter().find(|l| l["leaf"] == leaf).and_then(|l| l["stab_index"].as_u64())
    };
    v.eq((index("r1"), index("r4"), index("r13")), (Some(9), Some(3), Some(2)), "stabiliser indices");
    // the emitted picture and generator re-check identically
    let pic = a["picture"].as_str().unwrap().to_string();
    let cycles = a["cycles"].as_str().unwrap().to_string();
    let again = cli_json(v, &["analyze", &pic]);
    v.eq(again["orphans"].clone(), a["orphans"].clone(), "orphans after re-parsing");
    let checked = cli_json(v, &["analyze", &pic, "--cycles", &cycles]);
    v.eq(checked["ok"].as_bool(), Some(true), "emitted action re-checks");
    v.notes.push(format!("cycles {cycles}"));
}

fn criterion_2(v: &mut Verdict) {
    let r = cli_json(v, &["repn", WORKED]);
    if r.is_null() {
        return;
    }
    v.eq(rho(&r["h1_ab"]), rho_of(&[("2", 2), ("9", 1)]), "H1_ab");
    v.eq(rho(&r["h1_t"]), rho_of(&[("1", 1), ("3", 1)]), "H1_t");
    let cluster = |name: &str| r["clusters"].as_array().unwrap().iter().find(|c| c["cluster"] == name).cloned();
    let row = |c: &Value| {
        (
            c["n"].as_u64(),
            c["n_prime"].as_u64(),
            c["odd_children"].as_u64(),
            c["floor"].as_u64(),
            c["odd_orphan"].as_bool(),
            c["gamma_order"].as_u64(),
            c["epsilon_order"].as_u64(),
        )
    };
    let terms = |c: &Value| -> Vec<String> {
        c["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                format!(
                    "({},{},{}) {} {} {} {} {}",
                    t["d"], t["t"], t["s"], t["gcd"], t["alpha"].as_str().unwrap(), t["beta"].as_str().unwrap(), t["n1"], t["orders"]
                )
            })
            .collect()
    };
    match (cluster("{r1,r2,r3,r4}"), cluster("{r13,r14,r15,r16}")) {
        (Some(s1), Some(s4)) => {
            v.eq(row(&s1), (Some(3), Some(3), Some(4), Some(1), Some(true), Some(3), Some(1)), "s1 invariants");
            v.eq(row(&s4), (Some(1), Some(2), Some(4), Some(2), Some(false), Some(1), Some(1)), "s4 invariants");
            v.eq(
                terms(&s1),
                vec![
                    "(1,3,3) 3 1/2 1 [1] [9]".to_string(),
                    "(3,3,1) 1 1 1 [1,3] [1,3]".to_string(),
                    "(3,3,3) 3 1/2 1 [1] [9]".to_string(),
                ],
                "s1 twist table",
            );
            v.eq(
                terms(&s4),
                vec!["(1,1,1) 1 1 1 [1] [1]".to_string(), "(2,1,2) 1 1 1 [1] [2]".to_string()],
                "s4 twist table",
            );
            v.eq(rho(&s1["ind_v"]), rho_of(&[("9", 1)]), "Ind V of s1");
            v.eq(rho(&s4["ind_v"]), rho_of(&[("2", 2)]), "Ind V of s4");
            v.eq(rho(&s1["ind_epsilon"]), rho_of(&[("1", 1), ("3", 1)]), "Ind epsilon of s1");
            v.eq(rho(&s4["ind_epsilon"]), rho_of(&[("1", 1)]), "Ind epsilon of s4");
        }
        _ => v.failures.push("s1 or s4 missing from the cluster data".into()),
    }
    v.eq(r["clusters"].as_array().map(Vec::len), Some(2), "orbit representatives that are not übereven");
}

fn criterion_3(v: &mut Verdict) {
    let w = cli_json(v, &["construct", "--p", "19", WORKED]);
    if w.is_null() {
        return;
    }
    v.eq(w["degree"].as_u64(), Some(16), "degree");
    v.eq(w["round_trip"].as_bool(), Some(true), "round trip");
    let input = ClusterPicture::parse(WORKED).unwrap();
    let recovered = ClusterPicture::parse(w["recovered"].as_str().unwrap()).unwrap();
    v.check(input.isomorphism(&recovered).is_some(), "recovered picture isomorphic to the input");
    let factors: Vec<String> =
        w["factors"].as_array().unwrap().iter().map(|f| f["poly"].as_str().unwrap().to_string()).collect();
    for small in ["x^2 - 19", "x^2 - 76", "x^3 - 19"] {
        v.check(factors.iter().any(|f| f == small), format!("factor {small}"));
    }
    let nine: Vec<&String> = factors.iter().filter(|f| f.starts_with("x^9")).collect();
    match nine.as_slice() {
        [f] if f.as_str() == WORKED_DEGREE_NINE => v.notes.push("degree-9 factor matches the reference".into()),
        [f] => v.notes.push(format!("degree-9 factor {f} differs from the reference {WORKED_DEGREE_NINE}")),
        _ => v.failures.push("no single degree-9 factor".into()),
    }
}

fn criterion_4(v: &mut Verdict) -> Value {
    let s = cli_json(v, &["selftest", "--count", "500", "--max-roots", "12", "--max-order", "60"]);
    if s.is_null() {
        return s;
    }
    for part in ["corpus", "random"] {
        v.eq(s[part]["mismatches"].as_array().map(Vec::len), Some(0), &format!("{part} mismatches"));
        v.eq(s[part]["action_failures"].as_array().map(Vec::len), Some(0), &format!("{part} action failures"));
        v.eq(s[part]["toric_failures"].as_array().map(Vec::len), Some(0), &format!("{part} m_T failures"));
    }
    v.check(s["random"]["pictures"].as_u64() >= Some(500), "at least 500 random pictures");
    v.notes.push(format!(
        "corpus {} pictures / {} clusters, random {} pictures / {} clusters, seed {}",
        s["corpus"]["pictures"], s["corpus"]["clusters"], s["random"]["pictures"], s["random"]["clusters"], s["seed"]
    ));
    s
}

fn criterion_5(v: &mut Verdict, selftest: &Value) {
    let r = cli_json(v, &["repn", WORKED]);
    v.eq(r["dim"].as_str(), Some("14"), "worked example dimension");
    for part in ["corpus", "random"] {
        v.eq(selftest[part]["dimension_failures"].as_array().map(Vec::len), Some(0), &format!("{part} dimensions"));
        v.eq(
            selftest[part]["representations"].as_u64(),
            selftest[part]["pictures"].as_u64(),
            &format!("{part} representations assembled"),
        );
    }
    let mut cases = 0;
    for n in ["5", "6"] {
        let t = cli_json(v, &["gen2-tables", "--roots", n]);
        for row in t[0]["rows"].as_array().into_iter().flatten() {
            for case in row["cases"].as_array().unwrap() {
                cases += 1;
                let dim = |x: &Value| -> u64 {
                    x.as_object()
                        .unwrap()
                        .iter()
                        .map(|(d, a)| a.as_u64().unwrap() * euler_phi(d.parse().unwrap()))
                        .sum()
                };
                let total = dim(&case["h1_ab"]) + 2 * dim(&case["h1_t"]);
                v.check(total == 4, format!("{} {}: dimension {total}", row["picture"], row["tuple"]));
            }
        }
    }
    v.notes.push(format!("{cases} genus-2 cases"));
}

fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_6(v: &mut Verdict) {
    let d = cli_json(
        v,
        &["denoms", "(((r r r)(r r r))((r r r)(r r r)))", "--cycles", "(1,7,4,10,2,8,5,11,3,9,6,12)"],
    );
    if d.is_null() {
        return;
    }
    let action = &d["actions"][0];
    let by_size = |size: usize| -> BTreeSet<String> {
        action["clusters"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["cluster"].as_str().unwrap().matches('r').count() == size)
            .map(|c| c["candidates"].to_string())
            .collect()
    };
    v.eq(by_size(12), BTreeSet::from(["[2]".to_string()]), "top cluster");
    v.eq(by_size(6), BTreeSet::from(["[4]".to_string()]), "six-root clusters");
    v.eq(by_size(3), BTreeSet::from(["[3,6,12]".to_string()]), "three-root clusters");
    v.eq(action["tuples"].as_array().map(Vec::len), Some(3), "possibilities");
}

// ---- independent Weierstrass oracle for criterion 7 ----

fn val(q: u64, x: &BigInt) -> u32 {
    assert!(!x.is_zero());
    let q = BigInt::from(q);
    let mut x = x.clone();
    let mut k = 0;
    while (&x % &q).is_zero() {
        x /= &q;
        k += 1;
    }
    k
}

fn poly_from_roots(roots: &[BigInt]) -> [BigInt; 3] {
    // x^3 + a2 x^2 + a4 x + a6
    let (r1, r2, r3) = (&roots[0], &roots[1], &roots[2]);
    [-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 * r2 * r3)]
}

struct Tate {
    kodaira: String,
    multiplicative: bool,
    /// `None` when the sign depends on split or non-split reduction.
    sign: Option<i8>,
    h1_ab: Vec<(String, i64)>,
    h1_t: Vec<(String, i64)>,
}

/// Kodaira type and root number of `y^2 = x^3 + a2 x^2 + a4 x + a6` at a
/// prime `q >= 5`, via the minimal model's invariants.
fn tate(q: u64, a: &[BigInt; 3]) -> Tate {
    let [a2, a4, a6] = a;
    let (b2, b4, b6): (BigInt, BigInt, BigInt) = (a2 * 4, a4 * 2, a6 * 4);
    let b8: BigInt = a2 * a6 * 4 - a4 * a4;
    let c4: BigInt = &b2 * &b2 - &b4 * 24;
    let c6: BigInt = -(&b2 * &b2 * &b2) + &b2 * &b4 * 36 - &b6 * 216;
    let disc: BigInt = -(&b2 * &b2 * &b8) - &b4 * &b4 * &b4 * 8 - &b6 * &b6 * 27 + &b2 * &b4 * &b6 * 9;
    let big = 1000;
    let (mut v4, mut v6, mut vd) = (
        if c4.is_zero() { big } else { val(q, &c4) },
        if c6.is_zero() { big } else { val(q, &c6) },
        val(q, &disc),
    );
    while v4 >= 4 && v6 >= 6 && vd >= 12 {
        v4 = v4.saturating_sub(4);
        v6 = v6.saturating_sub(6);
        vd -= 12;
    }
    let l = |x: i64| legendre_i64(x, q).unwrap();
    let rho = |pairs: &[(&str, i64)]| rho_of(pairs);
    if vd > 0 && 3 * v4 < vd {
        return if v4 == 0 {
            Tate {
                kodaira: format!("I{vd}"),
                multiplicative: true,
                sign: None,
                h1_ab: Vec::new(),
                h1_t: rho(&[("1", 1)]),
            }
        } else {
            Tate {
                kodaira: format!("I{}*", vd - 6),
                multiplicative: false,
                sign: Some(l(-1)),
                h1_ab: Vec::new(),
                h1_t: rho(&[("2", 1)]),
            }
        };
    }
    let kodaira = match vd {
        0 => "I0",
        2 => "II",
        3 => "III",
        4 => "IV",
        6 => "I0*",
        8 => "IV*",
        9 => "III*",
        10 => "II*",
        _ => panic!("unexpected v(disc) = {vd}"),
    };
    let e = 12 / gcd(12, vd as u64);
    let (h1, sign) = match e {
        1 => (rho(&[("1", 2)]), 1),
        2 => (rho(&[("2", 2)]), l(-1)),
        3 => (rho(&[("3", 1)]), l(-3)),
        4 => (rho(&[("4", 1)]), l(-2)),
        6 => (rho(&[("6", 1)]), l(-1)),
        _ => unreachable!(),
    };
    Tate { kodaira: kodaira.into(), multiplicative: false, sign: Some(sign), h1_ab: h1, h1_t: Vec::new() }
}

fn power(q: u64, k: u32) -> BigInt {
    BigInt::from(q).pow(k)
}

/// Curves with a single proper cluster, as `(picture, [a2, a4, a6])`:
/// `x^3 - q^k` has `d_R = k/3`, `x(x^2 - q^m)` has `d_R = m/2`.
fn good_curves(q: u64) -> Vec<(String, [BigInt; 3])> {
    let mut out = Vec::new();
    for k in [0u32, 1, 2, 3, 4, 5, 6, 7, 11] {
        let d = clusterpic::numbers::rat(k as i64, 3);
        out.push((format!("(r r r){d}"), [BigInt::zero(), BigInt::zero(), -power(q, k)]));
    }
    for m in [1u32, 3, 5, 7] {
        let d = clusterpic::numbers::rat(m as i64, 2);
        out.push((format!("(r r r){d}"), [BigInt::zero(), -power(q, m), BigInt::zero()]));
    }
    out
}

fn compare(v: &mut Verdict, q: u64, pic: &str, oracle: &Tate) {
    let qs = q.to_string();
    let k = cli_json(v, &["kodaira", "--q", &qs, pic]);
    if k.is_null() {
        return;
    }
    let what = format!("{pic} at q = {q}");
    v.eq(k["kodaira"].as_str(), Some(oracle.kodaira.as_str()), &format!("{what}: Kodaira type"));
    v.eq(k["multiplicative"].as_bool(), Some(oracle.multiplicative), &format!("{what}: multiplicative"));
    v.eq(rho(&k["h1_ab"]), oracle.h1_ab.clone(), &format!("{what}: H1_ab"));
    v.eq(rho(&k["h1_t"]), oracle.h1_t.clone(), &format!("{what}: H1_t"));
    let rn = &k["root_number"];
    match oracle.sign {
        Some(s) => {
            v.eq(rn["ambiguous"].as_bool(), Some(false), &format!("{what}: sign determined"));
            v.eq(rn["sign"].as_i64(), Some(s as i64), &format!("{what}: root number"));
        }
        None => v.eq(rn["ambiguous"].as_bool(), Some(true), &format!("{what}: sign left open")),
    }
    if let Some(row) = k["row"].as_object() {
        // the table's own root number column
        let sign = match row["sign"].as_str().unwrap() {
            "1" => 1,
            s => {
                let a: i64 = s.trim_start_matches('(').split('/').next().unwrap().parse().unwrap();
                legendre_i64(a, q).unwrap() as i64
            }
        };
        v.eq(rn["sign"].as_i64(), Some(sign), &format!("{what}: table column"));
        v.eq(row["kodaira"].as_str(), Some(oracle.kodaira.as_str()), &format!("{what}: table row"));
    }
}

fn criterion_7(v: &mut Verdict) {
    let primes: Vec<u64> = (5..100).filter(|&q| is_prime(q)).collect();
    let mut rows = BTreeSet::new();
    let mut checks = 0;
    for &q in &primes {
        for (pic, coeffs) in good_curves(q) {
            let oracle = tate(q, &coeffs);
            compare(v, q, &pic, &oracle);
            let d = ClusterPicture::parse(&pic).unwrap();
            rows.insert(clusterpic::elliptic::mod_two(d.d(d.root())).to_string());
            checks += 1;
        }
    }
    v.eq(rows.len(), 8, "distinct rows covered");
    let (code, _, _) = cli(&["kodaira", "--q", "3", "(r r r)1/2"]);
    v.eq(code, 1, "q = 3 rejected for potentially good reduction");
    let mut mult = 0;
    for m in 0..4u32 {
        for delta in 1..=5u32 {
            let pic = format!("((r r){} r){m}", m + delta);
            for q in [3u64, 5, 7, 97] {
                let roots = [BigInt::zero(), power(q, m + delta), power(q, m)];
                let oracle = tate(q, &poly_from_roots(&roots));
                v.eq(oracle.multiplicative, m % 2 == 0, &format!("{pic}: oracle agrees with d_R in 2Z"));
                compare(v, q, &pic, &oracle);
            }
            mult += 1;
        }
    }
    v.eq(mult, 20, "two-cluster pictures");
    v.notes.push(format!("{checks} potentially good curves over {} primes, {mult} two-cluster pictures", primes.len()));
}

fn criterion_8(v: &mut Verdict) {
    let five = cli_json(v, &["gen2-tables", "--roots", "5", "--check"]);
    let six = cli_json(v, &["gen2-tables", "--roots", "6", "--check"]);
    if five.is_null() || six.is_null() {
        return;
    }
    let (f, s) = (&five[0], &six[0]);
    let shapes = (f["shapes"].as_u64().unwrap(), s["shapes"].as_u64().unwrap());
    let tuples = (f["tuples"].as_u64().unwrap(), s["tuples"].as_u64().unwrap());
    v.eq(tuples.0, 55, "five-root tuples");
    v.eq(tuples.0 + tuples.1, 276, "tuples in total");
    if shapes.0 != 11 || shapes.0 + shapes.1 != 44 {
        v.failures.push(format!(
            "shape count: {} five-root shapes (11 stated), {} in total (44 stated)",
            shapes.0,
            shapes.0 + shapes.1
        ));
    }
    for (n, c) in [(5, &f["check"]), (6, &s["check"])] {
        v.eq(c["ok"].as_bool(), Some(true), &format!("{n}-root fixture comparison"));
        v.eq(c["diff"].as_array().map(Vec::len), Some(0), &format!("{n}-root differences after errata"));
        v.eq(c["unneeded_errata"].as_array().map(Vec::len), Some(0), &format!("{n}-root unneeded errata"));
        v.notes.push(format!(
            "{n} roots: {} raw differences, {} errata",
            c["raw_diff"].as_array().map_or(0, Vec::len),
            c["errata"].as_array().map_or(0, Vec::len)
        ));
    }
    v.eq(f["check"]["golden_shapes"].as_u64(), Some(shapes.0), "fixture five-root shapes");
    v.eq(s["check"]["golden_shapes"].as_u64(), Some(shapes.1), "fixture six-root shapes");
}

fn criterion_9(v: &mut Verdict) {
    let text = "((r r r)2/3 r r)1/2";
    let a = cli_json(v, &["analyze", text]);
    let Some(cycles) = a["cycles"].as_str().map(str::to_string) else { return };
    let standard = cli_json(v, &["analyze", text, "--cycles", &cycles]);
    let relative = cli_json(v, &["analyze", text, "--cycles", &cycles, "--relative"]);
    v.eq(standard["ok"].as_bool(), Some(true), "standard depths pass");
    v.eq(relative["ok"].as_bool(), Some(false), "relative depths fail");
    // same check straight through the library
    let pic = ClusterPicture::parse(text).unwrap();
    let perm = Permutation::parse_cycles(5, &cycles).unwrap();
    v.check(check_action_with(&pic, &perm, DepthMode::Absolute).unwrap().ok, "library: standard");
    v.check(!check_action_with(&pic, &perm, DepthMode::Relative).unwrap().ok, "library: relative");

    let ring = CyclotomicRing::new(6);
    let residue = ResidueField::new(7, 6).unwrap();
    let one = || ring.from_int(BigInt::one());
    let r = PiAdicElement::monomial(3, one()).add(&PiAdicElement::monomial(4, one()), &ring);
    v.eq(orbit_length(&r, &ring), 6, "orbit of p^(1/2) + p^(2/3)");
    let dens = conjugate_difference_denominators(&r, &ring, &residue).unwrap();
    v.check(!dens.contains(&6), format!("no difference of denominator 6 among {dens:?}"));
    v.eq(lcm_or_one(&dens).unwrap(), 6, "lcm of the difference denominators");
    v.notes.push(format!("difference denominators {dens:?}"));
}

fn main() {
    let start = Instant::now();
    let mut selftest = Value::Null;
    let criteria: Vec<(u8, &str, Duration)> = vec![
        (1, "worked example action", Duration::from_secs(1)),
        (2, "worked example representation", Duration::from_secs(1)),
        (3, "witness polynomial round trip", Duration::from_secs(5)),
        (4, "closed formula equals character oracle", Duration::from_secs(60)),
        (5, "dimension conservation", Duration::from_secs(120)),
        (6, "denominator recovery", Duration::from_secs(1)),
        (7, "elliptic curves", Duration::from_secs(5)),
        (8, "genus-2 classification", Duration::from_secs(120)),
        (9, "regression fixtures", Duration::from_secs(1)),
    ];
    let mut unexpected = 0;
    for (id, title, limit) in criteria {
        let mut v = Verdict::new();
        let t = Instant::now();
        match id {
            1 => criterion_1(&mut v),
            2 => criterion_2(&mut v),
            3 => criterion_3(&mut v),
            4 => selftest = criterion_4(&mut v),
            5 => criterion_5(&mut v, &selftest),
            6 => criterion_6(&mut v),
            7 => criterion_7(&mut v),
            8 => criterion_8(&mut v),
            9 => criterion_9(&mut v),
            _ => unreachable!(),
        }
        let elapsed = t.elapsed();
        if elapsed > limit {
            v.failures.push(format!("took {:.2?}, limit {limit:?}", elapsed));
        }
        let status = if v.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {id} {title} ({elapsed:.2?}, limit {limit:?})");
        for n in &v.notes {
            println!("       {n}");
        }
        for f in &v.failures {
            println!("       - {f}");
        }
        let expected: Vec<&str> = EXPECTED_RED.iter().filter(|(i, _)| *i == id).map(|(_, r)| *r).collect();
        let explained = !v.failures.is_empty()
            && v.failures.iter().all(|f| expected.iter().any(|r| f.starts_with(r)));
        match (v.failures.is_empty(), expected.is_empty()) {
            (true, true) => {}
            (false, false) if explained => println!("       (known: the stated count disagrees with the enumeration and the listed tables)"),
            (true, false) => {
                println!("       criterion {id} was expected to fail but passed; update EXPECTED_RED");
                unexpected += 1;
            }
            _ => unexpected += 1,
        }
    }
    println!("acceptance: {:.2?} total, {unexpected} unexpected result(s)", start.elapsed());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
