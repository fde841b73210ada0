//! JSON views of the core types. Key order is fixed by construction, so
//! output is byte-identical for identical input.

use clusterpic::elliptic::EllipticClassification;
use clusterpic::inertia::{ActionReport, DenominatorSets};
use clusterpic::numbers::{divisors, gcd_inf};
use clusterpic::repn::{beta, twist, ClusterRepData, Epsilon};
use clusterpic::rootnum::RootNumberResult;
use clusterpic::tables::{labeled_shape, TableRow};
use clusterpic::witness::{format_poly, WitnessPolynomial};
use clusterpic::{ClusterId, ClusterPicture, InertiaRep, RhoSum, TameAction, Topology};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// `{"2": 2, "9": 1}` for `2rho2 + rho9`; a non-integral multiplicity is
/// written as a string `"a/b"`.
pub fn rho(r: &RhoSum) -> Value {
    let mut m = Map::new();
    for (d, a) in r.iter() {
        let v = match a.to_integer().to_i64() {
            Some(k) if a.is_integer() => json!(k),
            _ => Value::String(a.to_string()),
        };
        m.insert(d.to_string(), v);
    }
    Value::Object(m)
}

fn members(topo: &Topology, s: ClusterId) -> Value {
    json!(topo.leaves(s))
}

pub fn picture(pic: &ClusterPicture) -> Value {
    let topo = pic.topology();
    let clusters: Vec<Value> = topo
        .proper()
        .into_iter()
        .map(|s| json!({ "members": members(topo, s), "depth": pic.d(s).to_string() }))
        .collect();
    json!({ "leaves": pic.leaf_count(), "clusters": clusters })
}

/// Leaf `i` written `r{i+1}`, so the string re-parses to the same picture
/// with the same numbering.
pub fn numbered(pic: &ClusterPicture) -> String {
    let mut text = String::new();
    write_numbered(pic, pic.root(), &mut text);
    text
}

fn write_numbered(pic: &ClusterPicture, s: ClusterId, out: &mut String) {
    let topo = pic.topology();
    if !topo.is_proper(s) {
        out.push_str(&format!("r{}", topo.leaves(s)[0] + 1));
        return;
    }
    out.push('(');
    for (i, &c) in topo.children(s).iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write_numbered(pic, c, out);
    }
    out.push(')');
    out.push_str(&pic.d(s).to_string());
}

pub fn cycles(action: &TameAction) -> String {
    action.generator.to_string()
}

pub fn action(pic: &ClusterPicture, action: &TameAction) -> Value {
    let topo = pic.topology();
    let clusters: Vec<Value> = topo
        .proper()
        .into_iter()
        .map(|s| {
            let a = &action.clusters[s.0];
            json!({
                "cluster": topo.name(s),
                "members": members(topo, s),
                "depth": pic.d(s).to_string(),
                "image": topo.name(a.image),
                "stab_index": a.stab_index,
                "child_orbit": a.child_orbit,
                "orphan": a.orphan.map(|o| topo.name(o)),
            })
        })
        .collect();
    let leaves: Vec<Value> = (0..topo.leaf_count())
        .map(|i| json!({ "leaf": format!("r{}", i + 1), "stab_index": action.stab_index(topo.leaf(i)) }))
        .collect();
    let orphans: Vec<String> = topo
        .proper()
        .into_iter()
        .filter_map(|s| action.orphan(s))
        .map(|o| topo.name(o))
        .collect();
    json!({
        "order": action.order,
        "cycles": cycles(action),
        "cycle_lengths": cycle_lengths(action),
        "picture": numbered(pic),
        "orphans": orphans,
        "clusters": clusters,
        "leaves": leaves,
    })
}

pub fn cycle_lengths(action: &TameAction) -> Vec<usize> {
    let mut v: Vec<usize> = action.generator.cycles().iter().map(Vec::len).collect();
    v.sort_unstable();
    v
}

pub fn report(pic: &ClusterPicture, r: &ActionReport) -> Value {
    let topo = pic.topology();
    let failures: Vec<Value> = r
        .failures()
        .into_iter()
        .map(|c| {
            json!({
                "cluster": topo.name(c.cluster),
                "stab_index": c.stab_index,
                "expected_stab_index": c.expected_stab_index,
                "child_orbit_lengths": c.child_orbit_lengths,
                "expected_orbit_length": c.expected_orbit_length,
            })
        })
        .collect();
    json!({
        "ok": r.ok,
        "automorphism": r.automorphism,
        "order": r.order,
        "required_order": r.required_order,
        "failures": failures,
    })
}

pub fn denominators(pic_topo: &Topology, sets: &DenominatorSets) -> Value {
    let clusters: Vec<Value> = sets
        .clusters
        .iter()
        .zip(&sets.candidates)
        .map(|(&s, c)| json!({ "cluster": pic_topo.name(s), "candidates": c }))
        .collect();
    json!({ "clusters": clusters, "tuples": sets.tuples })
}

fn epsilon(e: Epsilon) -> &'static str {
    match e {
        Epsilon::Zero => "0",
        Epsilon::Trivial => "1",
        Epsilon::OrderTwo => "order 2",
    }
}

pub fn cluster_data(topo: &Topology, c: &ClusterRepData) -> Value {
    json!({
        "cluster": topo.name(c.cluster),
        "n": c.n,
        "n_prime": c.n_prime,
        "odd_children": c.odd_children,
        "floor": c.floor,
        "odd_orphan": c.odd_orphan,
        "mu": c.mu.to_string(),
        "lambda": c.lambda.to_string(),
        "gamma_order": c.gamma_order,
        "epsilon": epsilon(c.epsilon),
        "epsilon_order": c.epsilon.order(),
        "terms": terms(c),
        "ind_v": rho(&c.ind_v),
        "ind_epsilon": rho(&c.ind_epsilon),
    })
}

/// Rows `(d, t, s)` of the twisted regular part: `d | n'`, `s` runs over the
/// orders in `gamma_t (x) rho_d`.
pub fn terms(c: &ClusterRepData) -> Value {
    let t = c.gamma_order;
    let mut rows = Vec::new();
    for d in divisors(c.n_prime) {
        for (s, alpha) in twist(t, d).iter() {
            let g = gcd_inf(c.n, s);
            let n1 = divisors(c.n / g);
            let orders: Vec<u64> = n1.iter().map(|m| s * g * m).collect();
            rows.push(json!({
                "d": d,
                "t": t,
                "s": s,
                "gcd": g,
                "alpha": alpha.to_string(),
                "beta": beta(c.n, s).to_string(),
                "n1": n1,
                "orders": orders,
            }));
        }
    }
    Value::Array(rows)
}

pub fn rep(pic: &ClusterPicture, r: &InertiaRep) -> Value {
    let topo = pic.topology();
    let clusters: Vec<Value> = r.clusters.iter().map(|c| cluster_data(topo, c)).collect();
    json!({
        "order": r.order,
        "genus": pic.genus(),
        "h1_ab": rho(&r.h1_ab),
        "h1_t": rho(&r.h1_t),
        "dim": r.total_dim().to_string(),
        "clusters": clusters,
    })
}

pub fn root_number(r: &RootNumberResult) -> Value {
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|f| json!({ "e": f.e, "value": f.value, "mult": f.mult, "toric": f.toric }))
        .collect();
    json!({ "sign": r.sign, "ambiguous": r.ambiguous, "factors": factors })
}

pub fn elliptic(c: &EllipticClassification) -> Value {
    let row = c.row.map(|r| {
        json!({
            "d_r_mod_2": r.depth().to_string(),
            "kodaira": r.kodaira.to_string(),
            "h1": r.h1,
            "sign": r.sign.to_string(),
        })
    });
    json!({
        "reduction": format!("{:?}", c.reduction),
        "multiplicative": c.multiplicative,
        "normalized_depth": c.normalized_depth.to_string(),
        "kodaira": c.kodaira.to_string(),
        "h1_ab": rho(&c.rep.h1_ab),
        "h1_t": rho(&c.rep.h1_t),
        "root_number": root_number(&c.root_number),
        "row": row,
    })
}

pub fn witness(pic: &ClusterPicture, w: &WitnessPolynomial) -> Value {
    let table: Vec<Value> = w
        .table
        .iter()
        .map(|((y, s), a)| json!({ "root": format!("r{}", y + 1), "cluster": pic.topology().name(s), "a": a }))
        .collect();
    let factors: Vec<Value> = w
        .representatives
        .iter()
        .zip(&w.factors)
        .map(|(&y, f)| json!({ "root": format!("r{}", y + 1), "degree": f.len() - 1, "poly": format_poly(f) }))
        .collect();
    let coeffs: Vec<String> = w.f.iter().map(|c| c.to_string()).collect();
    json!({
        "p": w.p,
        "e": w.e,
        "shift": w.shift,
        "degree": w.f.len() - 1,
        "representatives": w.representatives.iter().map(|y| format!("r{}", y + 1)).collect::<Vec<_>>(),
        "coefficients": table,
        "factors": factors,
        "f": format_poly(&w.f),
        "f_coefficients": coeffs,
        "recovered": w.recovered.to_string(),
        "round_trip": w.round_trip,
        "retries": w.retries,
        "warnings": w.warnings,
    })
}

pub fn table_rows(rows: &[TableRow]) -> Value {
    let out: Vec<Value> = rows
        .iter()
        .map(|r| {
            let cases: Vec<Value> = r
                .cases
                .iter()
                .map(|c| {
                    let samples: Vec<Vec<String>> =
                        c.samples.iter().map(|s| s.iter().map(|d| d.to_string()).collect()).collect();
                    json!({ "h1_ab": rho(&c.h1_ab), "h1_t": rho(&c.h1_t), "samples": samples })
                })
                .collect();
            json!({
                "shape": r.shape,
                "picture": labeled_shape(&r.topology),
                "tuple": r.tuple,
                "cases": cases,
            })
        })
        .collect();
    Value::Array(out)
}
