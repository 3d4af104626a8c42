//! Deterministic text, DOT and JSON renderings. Nodes and vertices are printed 1-based.

use std::fmt::Write as _;

use serde_json::{json, Value};

use qcluster::expansion::{ExchangeGraph, MonomialRef};
use qcluster::leclerc::{Case, LeclercContext, PairReport, TheoremSummary, TriangularReport};
use qcluster::tropical::{Direction, Shift};
use qcluster::{ExpVec, Result};

fn vertices(v: &[usize]) -> Vec<usize> {
    v.iter().map(|k| k + 1).collect()
}

fn vecs(v: &[ExpVec]) -> Vec<Vec<i64>> {
    v.iter().map(|e| e.0.clone()).collect()
}

pub fn dot(g: &ExchangeGraph) -> String {
    let mut out = String::from("graph exchange {\n");
    for (i, t) in g.nodes.iter().enumerate() {
        let label: Vec<String> = t.key().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  n{} [label=\"{}\"];", i + 1, label.join(" "));
    }
    for &(u, k, w) in &g.edges {
        let _ = writeln!(out, "  n{} -- n{} [label=\"{}\"];", u + 1, w + 1, k + 1);
    }
    out += "}\n";
    out
}

pub fn mref(r: &MonomialRef) -> Value {
    json!({"node": r.node + 1, "exponent": r.exponent.0})
}

pub fn shift(sh: &Shift) -> Value {
    let d = &sh.data;
    let vars: Vec<Value> = sh
        .vars()
        .iter()
        .map(|(k, z)| json!({"k": k + 1, "element": z.to_string()}))
        .collect();
    json!({
        "node": d.node + 1,
        "direction": match d.direction { Direction::Plus => "plus", Direction::Minus => "minus" },
        "word": vertices(&d.word),
        "sigma": vertices(&d.sigma),
        "u": vecs(&d.u),
        "target": sh.target + 1,
        "variables": vars,
    })
}

pub fn pair_line(p: &PairReport) -> String {
    let head = format!(
        "R = node {} {}, V = node {} {}",
        p.r.node + 1,
        p.r.exponent,
        p.v.node + 1,
        p.v.exponent
    );
    match &p.verdict.case {
        Case::Indeterminate { reason } => format!("indeterminate: {head}: {reason}"),
        _ => format!("failed: {head}: {}", p.verdict.failed_checks().join(", ")),
    }
}

fn pair(p: &PairReport) -> Value {
    let checks: serde_json::Map<String, Value> =
        p.verdict.checks.iter().map(|(k, ok)| (k.to_string(), json!(ok))).collect();
    let mut v = json!({"R": mref(&p.r), "V": mref(&p.v), "checks": checks, "passed": p.verdict.passed()});
    match &p.verdict.case {
        Case::InBasis { s } => {
            v["verdict"] = json!("in_basis");
            v["s"] = json!(s);
        }
        Case::TwoTail { s, h, s_deg, h_deg, middle } => {
            v["verdict"] = json!("two_tail");
            v["s"] = json!(s);
            v["h"] = json!(h);
            v["S"] = json!(s_deg.0);
            v["H"] = json!(h_deg.0);
            v["middle"] = middle
                .iter()
                .map(|(g, c)| json!({"degree": g.0, "coeff": c.to_string()}))
                .collect();
        }
        Case::Indeterminate { reason } => {
            v["verdict"] = json!("indeterminate");
            v["reason"] = json!(reason);
        }
    }
    v
}

fn triangular(r: &TriangularReport, co: bool, with_entries: bool) -> Value {
    let mut v = json!({
        "node": r.node + 1,
        "side": if co { "codegree" } else { "degree" },
        "pass": r.pass,
        "fail": r.fail,
        "indeterminate": r.indeterminate,
        "roundtrips": r.roundtrips,
    });
    let show = |e: &qcluster::leclerc::TriangularEntry| {
        let n = e.pivot.dim();
        json!({
            "var": e.var + 1,
            "element": mref(&e.element),
            "pivot": e.pivot.0,
            "product": e.decomposition.reconstruct(n).to_string(),
            "terms": e.decomposition.sorted_pairs().iter()
                .map(|(g, c)| json!({"key": g.0, "coeff": c.to_string()}))
                .collect::<Vec<_>>(),
            "unitriangular": e.unitriangular,
        })
    };
    v["failures"] = r.failures().map(show).collect();
    if with_entries {
        v["entries"] = r.entries.iter().map(show).collect();
    }
    v
}

pub fn leclerc_report(
    ctx: &LeclercContext,
    summary: &TheoremSummary,
    tri: &[TriangularReport],
    conjecture: bool,
) -> Result<Value> {
    let atlas = ctx.atlas;
    let chart = &atlas.charts[0];
    let mut basis = Vec::new();
    for r in ctx.refs() {
        let bi = chart.monomial_bidegree(r);
        basis.push(json!({
            "ref": mref(r),
            "degree": bi.deg.0,
            "codegree": bi.codeg.0,
            "element": chart.monomial(r)?.to_string(),
        }));
    }
    Ok(json!({
        "mode": if conjecture { "conjecture" } else { "theorem" },
        "nodes": atlas.len(),
        "variables": atlas.graph.cluster_variables().len(),
        "basis_size": ctx.basis.len(),
        "basis": basis,
        "summary": {
            "in_basis": summary.in_basis,
            "two_tail_pass": summary.two_tail_pass,
            "two_tail_fail": summary.two_tail_fail,
            "in_basis_fail": summary.in_basis_fail,
            "indeterminate": summary.indeterminate,
        },
        "pairs": summary.pairs.iter().map(pair).collect::<Vec<_>>(),
        "triangular": tri.iter().enumerate()
            .map(|(i, r)| triangular(r, i % 2 == 1, r.node == 0))
            .collect::<Vec<_>>(),
    }))
}
