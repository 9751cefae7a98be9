use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fullpop")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_reports_matching_and_witness() {
    let out = run(&["solve", &data("six.txt"), "--format", "json", "--trace"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["size"], 5);
    let pairs: Vec<(String, String)> = v["matching"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
        .collect();
    assert!(pairs.contains(&("x".into(), "y'".into())));
    let witness = v["witness"].as_object().unwrap();
    assert_eq!(witness.len(), 12);
    assert_eq!(witness.values().map(|x| x.as_i64().unwrap()).sum::<i64>(), 0);
    assert!(v["trace"].is_array());
}

#[test]
fn solve_without_answer_exits_two() {
    let out = run(&["solve", &data("identical.txt")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("no fully popular matching"));
    assert_eq!(json(&run(&["solve", &data("identical.txt"), "--format", "json"]))["outcome"], "none");
}

#[test]
fn solve_with_invariant_check_and_mirror_dump() {
    let out = run(&["solve", &data("small.txt"), "--check", "--dump-mirror", "--trigger", "discovery"]);
    assert_eq!(code(&out), 0);
    let dump = String::from_utf8_lossy(&out.stderr);
    assert_eq!(dump.lines().count(), 8);
    assert!(dump.contains("a1_l > b1_r- b0_r- b1_r+ b0_r+ a1_r+!"));
}

#[test]
fn verify_modes() {
    let six = data("six.txt");
    let m5 = data("six_size5.txt");
    assert_eq!(code(&run(&["verify", &six, "--matching", &m5, "--mode", "fully"])), 0);
    assert_eq!(code(&run(&["verify", &six, "--matching", &m5, "--mode", "a-popular"])), 0);

    let small = data("small.txt");
    let lone = data("small_lone.txt");
    let out = run(&["verify", &small, "--matching", &lone, "--mode", "popular", "--format", "json"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["popular"]["detail"]["margin"], 2);
}

#[test]
fn edges_by_kind() {
    let small = data("small.txt");
    let legal = json(&run(&["edges", &small, "--kind", "legal", "--format", "json"]));
    assert_eq!(legal["edges"].as_array().unwrap().len(), 3);
    assert_eq!(legal["loops"], serde_json::json!(["a0", "b0"]));
    let valid = run(&["edges", &small, "--kind", "valid"]);
    assert_eq!(code(&valid), 0);
    let popular = run(&["edges", &small, "--kind", "popular", "--backend", "oracle"]);
    assert_eq!(code(&popular), 0);
}

#[test]
fn oracle_cross_checks() {
    let out = run(&["oracle", &data("small.txt"), "--cross-check", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["diffs"].as_array().unwrap().len(), 0);
    assert_eq!(v["max_fully_popular_size"], 2);

    let six = json(&run(&["oracle", &data("six.txt"), "--format", "json"]));
    assert_eq!(six["popular_sizes"], serde_json::json!([4, 6]));

    let sweep = run(&["oracle", "--sweep", "60", "--agents", "3", "--jobs", "3", "--seed", "9"]);
    assert_eq!(code(&sweep), 0, "{}", String::from_utf8_lossy(&sweep.stdout));
}

#[test]
fn oracle_respects_vertex_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_fullpop"))
        .args(["oracle", &data("six.txt")])
        .env("FULLPOP_ORACLE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 4"));
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--agents", "4", "--jobs", "4", "--density", "0.5", "--seed", "1"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(fullpop::parse_instance(&text).is_ok());

    let bad = run(&["generate", "--density", "1.5"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn bench_prints_a_table() {
    let out = run(&["bench", "--min-edges", "500", "--max-edges", "1000", "--runs", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out).as_array().unwrap().len(), 2);
}

#[test]
fn errors_exit_one_and_name_the_line() {
    let out = run(&["solve", &data("broken.txt")]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
    assert_eq!(code(&run(&["solve", &data("missing.txt")])), 1);
    assert_eq!(code(&run(&["solve"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
