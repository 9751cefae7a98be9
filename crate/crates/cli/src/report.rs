//! Text and JSON renderings of results.

use std::fmt::Write;

use fullpop::engine::Stall;
use fullpop::oracle::OracleReport;
use fullpop::popularity::PopularityVerdict;
use fullpop::solver::{IterationRecord, SolveReport};
use fullpop::{Certificate, EdgeOrLoop, EdgeSet, Instance, Matching, SolveOutcome, Witness};
use serde_json::{json, Map, Value};

pub fn pairs_json(inst: &Instance, m: &Matching) -> Value {
    m.pairs().map(|(a, b)| json!([inst.name(a), inst.name(b)])).collect()
}

pub fn witness_json(inst: &Instance, w: &Witness) -> Value {
    let map: Map<String, Value> = inst.vertices().map(|u| (inst.name(u).to_string(), json!(w.get(u)))).collect();
    Value::Object(map)
}

fn names(inst: &Instance, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| inst.name(v).to_string()).collect()
}

fn pairs_text(inst: &Instance, m: &Matching, out: &mut String) {
    for (a, b) in m.pairs() {
        let _ = writeln!(out, "  {} {}", inst.name(a), inst.name(b));
    }
}

fn witness_text(inst: &Instance, w: &Witness) -> String {
    inst.vertices().map(|u| format!("{}={}", inst.name(u), w.get(u))).collect::<Vec<_>>().join(" ")
}

/// The engine reports stalls on mirror copies, which share ids with the original vertices.
fn stall_text(inst: &Instance, stall: Stall) -> String {
    match stall {
        Stall::ExhaustedLeft(u) => format!("{}_l ran out of edges", inst.name(u)),
        Stall::UnheldRight(u) => format!("{}_r was left without a partner", inst.name(u)),
    }
}

fn trace_json(inst: &Instance, trace: &[IterationRecord]) -> Value {
    trace
        .iter()
        .map(|r| {
            json!({
                "trigger": inst.name(r.trigger),
                "component": names(inst, &r.component),
                "forbidden_edges": r.forbidden_edges.len(),
                "proposals": r.proposals,
            })
        })
        .collect()
}

pub fn solve_json(inst: &Instance, report: &SolveReport, with_trace: bool) -> Value {
    let mut v = match &report.outcome {
        SolveOutcome::Found(s) => json!({
            "outcome": "found",
            "matching": pairs_json(inst, &s.matching),
            "witness": witness_json(inst, &s.witness),
            "size": s.size,
        }),
        SolveOutcome::NoneExists { iteration, stall } => json!({
            "outcome": "none",
            "iteration": iteration,
            "stall": stall_text(inst, *stall),
        }),
    };
    if with_trace {
        v["trace"] = trace_json(inst, &report.trace);
        v["stats"] = json!({
            "mirror_edges": report.stats.mirror_edges,
            "proposals": report.stats.proposals,
            "rejections": report.stats.rejections,
            "iterations": report.stats.iterations,
        });
    }
    v
}

pub fn solve_text(inst: &Instance, report: &SolveReport, with_trace: bool) -> String {
    let mut out = String::new();
    match &report.outcome {
        SolveOutcome::Found(s) => {
            let _ = writeln!(out, "fully popular matching of size {}", s.size);
            pairs_text(inst, &s.matching, &mut out);
            let _ = writeln!(out, "witness: {}", witness_text(inst, &s.witness));
        }
        SolveOutcome::NoneExists { iteration, stall } => {
            let _ = writeln!(out, "no fully popular matching");
            let _ = writeln!(out, "stalled after {iteration} pass(es): {}", stall_text(inst, *stall));
        }
    }
    if with_trace {
        for (k, r) in report.trace.iter().enumerate() {
            let _ = writeln!(
                out,
                "pass {}: trigger {}, marked {{{}}}, forbade {} mirror edges, {} proposals",
                k + 1,
                inst.name(r.trigger),
                names(inst, &r.component).join(" "),
                r.forbidden_edges.len(),
                r.proposals
            );
        }
        let s = &report.stats;
        let _ = writeln!(
            out,
            "{} mirror edges, {} proposals, {} rejections, {} passes",
            s.mirror_edges, s.proposals, s.rejections, s.iterations
        );
    }
    out
}

/// One verification result: a named check with optional details.
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

pub fn popularity_check(inst: &Instance, v: &PopularityVerdict) -> Check {
    let detail = match &v.certificate {
        Certificate::Witness(w) => json!({ "witness": witness_json(inst, w) }),
        Certificate::Counterexample(n) => json!({ "beaten_by": pairs_json(inst, n), "margin": v.optimum }),
    };
    Check { name: "popular", passed: v.popular, detail }
}

pub fn checks_json(checks: &[Check]) -> Value {
    let mut map = Map::new();
    for c in checks {
        map.insert(c.name.to_string(), json!({ "passed": c.passed, "detail": c.detail }));
    }
    map.insert("passed".into(), json!(checks.iter().all(|c| c.passed)));
    Value::Object(map)
}

pub fn checks_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(out, "{}: {}", c.name, if c.passed { "yes" } else { "no" });
        if let Some(w) = c.detail.get("witness").and_then(Value::as_object) {
            let entries: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "  witness: {}", entries.join(" "));
        }
        if let Some(pairs) = c.detail.get("beaten_by").and_then(Value::as_array) {
            let _ = writeln!(out, "  loses by {} to:", c.detail["margin"]);
            for p in pairs {
                let _ = writeln!(out, "    {} {}", p[0].as_str().unwrap_or("?"), p[1].as_str().unwrap_or("?"));
            }
        }
    }
    out
}

pub fn edges_json(inst: &Instance, kind: &str, set: &EdgeSet) -> Value {
    let edges: Vec<Value> = set
        .iter()
        .filter_map(|e| match e {
            EdgeOrLoop::Edge(e) => {
                let (a, b) = inst.edge(e);
                Some(json!([inst.name(a), inst.name(b)]))
            }
            EdgeOrLoop::Loop(_) => None,
        })
        .collect();
    let loops: Vec<&str> = inst.vertices().filter(|&u| set.loops[u]).map(|u| inst.name(u)).collect();
    json!({ "kind": kind, "edges": edges, "loops": loops })
}

pub fn edges_text(inst: &Instance, set: &EdgeSet) -> String {
    let mut out = String::new();
    for e in set.iter() {
        match e {
            EdgeOrLoop::Edge(e) => {
                let (a, b) = inst.edge(e);
                let _ = writeln!(out, "{} {}", inst.name(a), inst.name(b));
            }
            EdgeOrLoop::Loop(u) => {
                let _ = writeln!(out, "{} {}", inst.name(u), inst.name(u));
            }
        }
    }
    out
}

pub fn oracle_json(inst: &Instance, truth: &OracleReport) -> Value {
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    let fully: Vec<Value> = truth.fully_popular_matchings().map(|m| pairs_json(inst, m)).collect();
    json!({
        "matchings": truth.matchings.len(),
        "popular": count(&truth.popular),
        "a_popular": count(&truth.a_popular),
        "fully_popular": count(&truth.fully_popular),
        "stable": count(&truth.stable),
        "popular_sizes": truth.popular_size_range().map(|(lo, hi)| json!([lo, hi])),
        "max_fully_popular_size": truth.max_fully_popular_size(),
        "fully_popular_matchings": fully,
        "popular_edges": edges_json(inst, "popular", &truth.popular_edges),
    })
}

pub fn oracle_text(inst: &Instance, truth: &OracleReport) -> String {
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    let mut out = String::new();
    let _ = writeln!(out, "matchings: {}", truth.matchings.len());
    let _ = writeln!(out, "stable: {}", count(&truth.stable));
    let _ = writeln!(out, "popular: {}", count(&truth.popular));
    let _ = writeln!(out, "a-popular: {}", count(&truth.a_popular));
    let _ = writeln!(out, "fully popular: {}", count(&truth.fully_popular));
    match truth.popular_size_range() {
        Some((lo, hi)) => {
            let _ = writeln!(out, "popular sizes: {lo}..={hi}");
        }
        None => {
            let _ = writeln!(out, "popular sizes: none");
        }
    }
    match truth.max_fully_popular_size() {
        Some(k) => {
            let _ = writeln!(out, "max fully popular size: {k}");
        }
        None => {
            let _ = writeln!(out, "max fully popular size: none");
        }
    }
    for m in truth.fully_popular_matchings() {
        let _ = writeln!(out, "fully popular:");
        pairs_text(inst, m, &mut out);
    }
    out
}
