//! End-to-end tests of the `ttvote` binary: formats, exit codes, and the
//! stability of JSON reports.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn ttvote(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttvote"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn winners_prints_scheme_example_scores() {
    let profile = write_file("candidates: c1, c2, c3, c4\n1: c3 > c1\n");
    let out = ttvote(&[
        "winners",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "scoring:borda:avg",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c3: 3"));
    assert!(text.contains("c1: 2"));
    assert!(text.contains("c2: 1/2"));
    assert!(text.contains("c4: 1/2"));
    assert!(text.contains("winners: c3"));
}

#[test]
fn manipulate_maximin_fixture_with_fast_solver() {
    let profile = write_file("candidates: a, b, p\n2: a > b > p\nmanipulators: 3\n");
    let out = ttvote(&[
        "manipulate",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "maximin",
        "--goal",
        "cwcm",
        "--target",
        "p",
        "--solver",
        "fast",
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["feasible"], serde_json::json!(true));
    assert_eq!(report["result"]["witness"], serde_json::json!([["p"]]));
}

#[test]
fn json_reports_are_byte_stable() {
    let profile = write_file("candidates: a, b, p\n2: a > b > p\nmanipulators: 3\n");
    let args = [
        "manipulate",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "maximin",
        "--goal",
        "cwcm",
        "--target",
        "p",
        "--solver",
        "brute",
        "--json",
    ];
    let first = ttvote(&args);
    let second = ttvote(&args);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("\"inputs_digest\": \"sha256:"));
}

#[test]
fn parse_errors_exit_2() {
    let profile = write_file("candidates: a, b\n1: a > a\n");
    let out = ttvote(&[
        "winners",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "maximin",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 2"), "stderr: {err}");

    let profile = write_file("candidates: a, b\n1: a\n");
    let out = ttvote(&[
        "winners",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "copeland:3/2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = ttvote(&[
        "manipulate",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "maximin",
        "--goal",
        "cwcm",
        "--target",
        "zz",
        "--solver",
        "brute",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let profile = write_file("candidates: a, b, p\n1: a\nmanipulators: 1, 2\n");
    let out = ttvote(&[
        "manipulate",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "maximin",
        "--goal",
        "cwcm",
        "--target",
        "p",
        "--solver",
        "brute",
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn infeasible_results_still_exit_0() {
    // an overwhelming fixed voter: h cannot be dethroned
    let profile = write_file("candidates: a, b, h\n100: h\nmanipulators: 1\n");
    let out = ttvote(&[
        "manipulate",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "scoring:borda:up",
        "--goal",
        "dwcm",
        "--target",
        "h",
        "--solver",
        "fast",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("feasible: false"));
}

#[test]
fn reduce_emits_the_case1_fixture() {
    let numbers = write_file("1\n1\n");
    let out = ttvote(&[
        "reduce",
        "--family",
        "rounddown1",
        "--numbers",
        numbers.path().to_str().unwrap(),
        "--rule",
        "scoring:2,1,0:down",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("candidates: a, b, p"));
    assert!(text.contains("3: a > b > p"));
    assert!(text.contains("3: b > a > p"));
    assert!(text.contains("manipulators: 3, 3"));

    // the emitted document parses back and the instance is solvable
    let fixture = write_file(&text);
    let solved = ttvote(&[
        "manipulate",
        "--profile",
        fixture.path().to_str().unwrap(),
        "--rule",
        "scoring:2,1,0:down",
        "--goal",
        "cwcm",
        "--target",
        "p",
        "--solver",
        "dp3",
    ]);
    assert!(solved.status.success());
    assert!(stdout(&solved).contains("feasible: true"));
}

#[test]
fn reduce_fdss_prints_numbers() {
    let numbers = write_file("1\n1\n");
    let out = ttvote(&[
        "reduce",
        "--family",
        "fdss-from-partition",
        "--numbers",
        numbers.path().to_str().unwrap(),
        "--rule",
        "scoring:borda:down",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "9\n33\n8\n32\n");
}

#[test]
fn verify_small_grid_agrees() {
    let out = ttvote(&[
        "verify",
        "--family",
        "rounddown1",
        "--rule",
        "scoring:2,1,0:down",
        "--max-t",
        "4",
        "--max-value",
        "6",
        "--samples",
        "20",
        "--sample-t",
        "6",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all agree"));
}

#[test]
fn evaluate_probabilistic_fixture() {
    let profile = write_file(
        "candidates: a, b, p\n1: p > a > b\n1: a > p > b ? 1/2 | b > p > a ? 1/2\n1: a > p > b ? 1/2 | b > p > a ? 1/2\n",
    );
    let out = ttvote(&[
        "evaluate",
        "--prob",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "eliminate:veto",
        "--target",
        "p",
        "--r",
        "0",
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["probability"], serde_json::json!("1/2"));
    assert_eq!(report["result"]["exceeds_r"], serde_json::json!(true));
}

#[test]
fn evaluate_partial_and_weight_zero_cwim_agree() {
    let profile = write_file("candidates: a, b, p\n2: a\n1: b\n");
    let eval = ttvote(&[
        "evaluate",
        "--partial",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "eliminate:veto",
        "--target",
        "p",
        "--model",
        "unique",
        "--json",
    ]);
    assert!(eval.status.success());
    let eval_report: serde_json::Value = serde_json::from_str(&stdout(&eval)).unwrap();

    let cwim = ttvote(&[
        "cwim",
        "--partial",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "eliminate:veto",
        "--target",
        "p",
        "--model",
        "unique",
        "--weight",
        "0",
        "--json",
    ]);
    assert!(cwim.status.success());
    let cwim_report: serde_json::Value = serde_json::from_str(&stdout(&cwim)).unwrap();
    assert_eq!(eval_report["result"]["possible"], cwim_report["result"]["feasible"]);
}

#[test]
fn classify_smoke() {
    let out = ttvote(&[
        "classify",
        "--trials",
        "4",
        "--grid-t",
        "2",
        "--grid-value",
        "3",
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["all_verified"], serde_json::json!(true));
    assert!(report["result"]["rows"].as_array().unwrap().len() >= 15);
}

#[test]
fn evaluate_fast_rejects_unsupported_rules() {
    let profile = write_file("candidates: a, b, p\n2: a\n1: b\n");
    let out = ttvote(&[
        "evaluate",
        "--partial",
        "--fast",
        "--profile",
        profile.path().to_str().unwrap(),
        "--rule",
        "scoring:borda:down",
        "--target",
        "p",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
