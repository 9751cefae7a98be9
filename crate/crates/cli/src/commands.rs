//! Subcommand bodies. Each returns the process exit code.

use std::fs;
use std::io::{self, Read};
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use fullpop::generate::{generate as generate_instance, GeneratorParams};
use fullpop::legal::classify_with;
use fullpop::mirror::build_mirror;
use fullpop::oracle::{ground_truth, OracleConfig};
use fullpop::solver::check_final_state;
use fullpop::{
    check_a_popular, compute_posts, parse_instance, parse_matching, popular_edges, solve_with, verify_popular,
    Instance, SolveOptions, SolveOutcome,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{self, Check};
use crate::{
    BenchArgs, EdgesArgs, Format, GenParams, GenerateArgs, Kind, Mode, OracleArgs, SolveArgs, VerifyArgs,
    EXIT_CHECK_FAILED, EXIT_NONE, EXIT_OK,
};

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = read_input(path)?;
    parse_instance(&text).with_context(|| format!("{}", path.display()))
}

fn emit(format: Format, json: impl FnOnce() -> Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json()).expect("values serialize")),
        Format::Text => print!("{}", text()),
    }
}

fn params(gen: &GenParams, seed_offset: u64) -> GeneratorParams {
    GeneratorParams {
        agents: gen.agents,
        jobs: gen.jobs,
        density: gen.density,
        seed: gen.seed.wrapping_add(seed_offset),
    }
}

pub fn solve(args: &SolveArgs) -> Result<u8> {
    let inst = load_instance(&args.instance)?;
    let opts =
        SolveOptions { trigger_order: args.trigger.into(), backend: args.backend.into(), check_invariants: false };
    let classes = classify_with(&inst, opts.backend);
    if args.dump_mirror {
        eprint!("{}", build_mirror(&inst, &classes).dump(&inst));
    }
    let report = solve_with(&inst, &opts);
    if args.check {
        if let SolveOutcome::Found(state) = &report.outcome {
            let problems = check_final_state(&inst, &classes, &build_mirror(&inst, &classes), state);
            if !problems.is_empty() {
                bail!("final state fails its invariants: {}", problems.join("; "));
            }
        }
    }
    emit(
        args.format,
        || report::solve_json(&inst, &report, args.trace),
        || report::solve_text(&inst, &report, args.trace),
    );
    Ok(if report.outcome.found().is_some() { EXIT_OK } else { EXIT_NONE })
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let inst = load_instance(&args.instance)?;
    let text = read_input(&args.matching)?;
    let m = parse_matching(&inst, &text).with_context(|| format!("{}", args.matching.display()))?;
    let mut checks = Vec::new();
    if matches!(args.mode, Mode::Popular | Mode::Fully) {
        checks.push(report::popularity_check(&inst, &verify_popular(&inst, &m)));
    }
    if matches!(args.mode, Mode::APopular | Mode::Fully) {
        let passed = check_a_popular(&inst, &compute_posts(&inst), &m);
        checks.push(Check { name: "a-popular", passed, detail: Value::Null });
    }
    emit(args.format, || report::checks_json(&checks), || report::checks_text(&checks));
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn edges(args: &EdgesArgs) -> Result<u8> {
    let inst = load_instance(&args.instance)?;
    let classes = classify_with(&inst, args.backend.into());
    let (name, set) = match args.kind {
        Kind::Valid => ("valid", &classes.valid),
        Kind::Popular => ("popular", &classes.popular),
        Kind::Legal => ("legal", &classes.legal),
    };
    emit(args.format, || report::edges_json(&inst, name, set), || report::edges_text(&inst, set));
    Ok(EXIT_OK)
}

/// Differences between the solver's fast paths and exhaustive ground truth.
fn cross_check(inst: &Instance, cfg: &OracleConfig) -> Result<Vec<String>> {
    let truth = ground_truth(inst, cfg)?;
    let mut diffs = Vec::new();
    let report = solve_with(inst, &SolveOptions { check_invariants: false, ..SolveOptions::default() });
    let got = report.outcome.found().map(|s| s.size);
    if got != truth.max_fully_popular_size() {
        diffs.push(format!("solver size {got:?}, oracle {:?}", truth.max_fully_popular_size()));
    }
    if let Some(state) = report.outcome.found() {
        if !truth.index_of(&state.matching).is_some_and(|k| truth.fully_popular[k]) {
            diffs.push("solver matching is not fully popular".into());
        }
    }
    if popular_edges(inst) != truth.popular_edges {
        diffs.push("popular edges differ".into());
    }
    let posts = compute_posts(inst);
    for (k, m) in truth.matchings.iter().enumerate() {
        if check_a_popular(inst, &posts, m) != truth.a_popular[k] {
            diffs.push(format!("agent-popularity of matching {k} differs"));
        }
        if verify_popular(inst, m).popular != truth.popular[k] {
            diffs.push(format!("popularity of matching {k} differs"));
        }
    }
    Ok(diffs)
}

pub fn oracle(args: &OracleArgs) -> Result<u8> {
    let cfg = OracleConfig::from_env();
    if let Some(count) = args.sweep {
        let results: Vec<(u64, Result<Vec<String>>)> = (0..count)
            .into_par_iter()
            .map(|i| {
                let p = params(&args.gen, i);
                let res = generate_instance(&p).map_err(anyhow::Error::from).and_then(|g| cross_check(&g, &cfg));
                (p.seed, res)
            })
            .collect();
        let mut diffs = Vec::new();
        for (seed, res) in results {
            for d in res? {
                diffs.push(format!("seed {seed}: {d}"));
            }
        }
        emit(
            args.format,
            || json!({ "instances": count, "diffs": diffs }),
            || {
                let mut s = format!("{count} instances, {} diffs\n", diffs.len());
                diffs.iter().for_each(|d| s.push_str(&format!("  {d}\n")));
                s
            },
        );
        return Ok(if diffs.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED });
    }

    let path = args.instance.as_deref().expect("clap requires an instance without --sweep");
    let inst = load_instance(path)?;
    let truth = ground_truth(&inst, &cfg)?;
    let diffs = if args.cross_check { Some(cross_check(&inst, &cfg)?) } else { None };
    emit(
        args.format,
        || {
            let mut v = report::oracle_json(&inst, &truth);
            if let Some(d) = &diffs {
                v["diffs"] = json!(d);
            }
            v
        },
        || {
            let mut s = report::oracle_text(&inst, &truth);
            if let Some(d) = &diffs {
                s.push_str(&format!("cross-check: {} diffs\n", d.len()));
                d.iter().for_each(|x| s.push_str(&format!("  {x}\n")));
            }
            s
        },
    );
    Ok(if diffs.is_some_and(|d| !d.is_empty()) { EXIT_CHECK_FAILED } else { EXIT_OK })
}

pub fn generate(args: &GenerateArgs) -> Result<u8> {
    let inst = generate_instance(&params(&args.gen, 0))?;
    let text = inst.to_text();
    match &args.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

pub fn bench(args: &BenchArgs) -> Result<u8> {
    if args.min_edges == 0 || args.min_edges > args.max_edges {
        bail!("need 0 < --min-edges <= --max-edges");
    }
    if args.runs == 0 {
        bail!("--runs must be positive");
    }
    let opts = SolveOptions { check_invariants: false, ..SolveOptions::default() };
    let mut rows = Vec::new();
    let mut target = args.min_edges;
    while target <= args.max_edges {
        let side = ((target as f64 / args.degree).ceil() as usize).max(1);
        let density = (args.degree / side as f64).min(1.0);
        let g = generate_instance(&GeneratorParams { agents: side, jobs: side, density, seed: args.seed })?;
        let mut times: Vec<Duration> = Vec::with_capacity(args.runs);
        let mut report = None;
        for _ in 0..args.runs {
            let start = Instant::now();
            report = Some(solve_with(&g, &opts));
            times.push(start.elapsed());
        }
        times.sort();
        let median = times[args.runs / 2];
        let report = report.expect("at least one run");
        let per = median.as_nanos() as f64 / (g.m() + g.n()) as f64;
        rows.push((g.m(), g.n(), median, per, report.stats.proposals, report.stats.iterations));
        target *= 2;
    }
    emit(
        args.format,
        || {
            let v: Vec<Value> = rows
                .iter()
                .map(|&(m, n, t, per, proposals, passes)| {
                    json!({ "m": m, "n": n, "millis": t.as_secs_f64() * 1e3, "ns_per_item": per,
                            "proposals": proposals, "passes": passes })
                })
                .collect();
            json!(v)
        },
        || {
            let mut s = format!(
                "{:>9} {:>8} {:>11} {:>12} {:>10} {:>6}\n",
                "m", "n", "median ms", "ns/(m+n)", "proposals", "passes"
            );
            for &(m, n, t, per, proposals, passes) in &rows {
                s.push_str(&format!(
                    "{m:>9} {n:>8} {:>11.3} {per:>12.1} {proposals:>10} {passes:>6}\n",
                    t.as_secs_f64() * 1e3
                ));
            }
            s
        },
    );
    Ok(EXIT_OK)
}
