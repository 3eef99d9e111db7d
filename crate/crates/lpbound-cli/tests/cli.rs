//! End-to-end runs of the compiled binary: every command, every exit code,
//! and byte-level determinism of the reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use lpbound::instances::standard::make_standard;
use lpbound::instances::Instance;
use lpbound::model::{BoundKind, RunConfig};
use lpbound::rat::{fmt_rat, ratio};
use lpbound::textio::{parse_instance, parse_protocol_tree, serialize_instance};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpbound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn eq4_file(dir: &Path) -> PathBuf {
    let instance = make_standard("eq_4").unwrap();
    write(dir, "eq4.cc", &serialize_instance(&instance))
}

#[test]
fn compute_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());

    let output = run(&[
        "compute",
        "--kind",
        "prt",
        "--eps",
        "1/8",
        "--in",
        input.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let report = json_of(&output);

    let Instance::Comm(f) = make_standard("eq_4").unwrap() else {
        unreachable!()
    };
    let expected =
        lpbound::comm::compute_comm_bound(&f, BoundKind::Prt, &ratio(1, 8), &RunConfig::new())
            .unwrap();
    assert_eq!(report["value"], fmt_rat(&expected.value));
    assert_eq!(report["kind"], "prt");
    assert_eq!(report["epsilon"], "1/8");
    assert!(report["primal_witness"]
        .as_str()
        .unwrap()
        .starts_with("WITNESS v1 primal prt"));
    assert!(report["dual_witness"]
        .as_str()
        .unwrap()
        .starts_with("WITNESS v1 dual prt"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());
    let args = [
        "compute",
        "--kind",
        "prt",
        "--eps",
        "1/8",
        "--in",
        input.to_str().unwrap(),
    ];

    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_files_fail_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "bad.cc",
        "COMM v1\nrows 2 cols 2 alphabet 2\n1 0\n0 bad\n",
    );

    let output = run(&["compute", "--kind", "prt", "--in", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("input error"), "stderr: {stderr}");
    assert!(stderr.contains("line 4"), "stderr: {stderr}");
}

#[test]
fn infeasible_witnesses_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());
    let witness = write(dir.path(), "bad.wit", "WITNESS v1 dual prt eps 0\nMU 0 5\n");

    let output = run(&[
        "verify-witness",
        "--in",
        input.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let report = json_of(&output);
    assert_eq!(report["check"]["feasible"], false);
    assert!(String::from_utf8_lossy(&output.stderr).contains("witness infeasible"));
}

#[test]
fn pivot_caps_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());

    let output = run(&[
        "compute",
        "--kind",
        "prt",
        "--eps",
        "1/8",
        "--in",
        input.to_str().unwrap(),
        "--cap-pivots",
        "3",
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("resource cap"));
}

#[test]
fn dual_witness_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());

    let compute = run(&[
        "compute",
        "--kind",
        "prt",
        "--eps",
        "1/8",
        "--in",
        input.to_str().unwrap(),
    ]);
    assert!(compute.status.success());
    let report = json_of(&compute);
    let witness = write(
        dir.path(),
        "dual.wit",
        report["dual_witness"].as_str().unwrap(),
    );

    let verify = run(&[
        "verify-witness",
        "--in",
        input.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert!(verify.status.success());
    let verdict = json_of(&verify);
    assert_eq!(verdict["check"]["feasible"], true);
    assert_eq!(verdict["check"]["objective"], report["value"]);
}

#[test]
fn tribes_example_verifies() {
    let output = run(&[
        "example", "--name", "tribes", "--n", "4", "--eps", "1/32", "--verify",
    ]);
    assert!(output.status.success());
    let report = json_of(&output);
    assert_eq!(report["objective"], "5/96");
    assert_eq!(report["verified"]["assignments_checked"], 81);
}

#[test]
fn generated_instances_parse_back() {
    let output = run(&["example", "--name", "or", "--n", "2"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let parsed = parse_instance(&text).unwrap();
    assert_eq!(parsed, make_standard("or_2").unwrap());
}

#[test]
fn chain_suite_passes() {
    let output = run(&["suite", "--name", "chain", "--seed", "7", "--count", "2"]);
    assert!(output.status.success());
    let report = json_of(&output);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["results"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_reports_depth_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());

    let output = run(&["oracle", "--in", input.to_str().unwrap()]);
    assert!(output.status.success());
    let report = json_of(&output);
    assert_eq!(report["dcc"], 3);
    assert_eq!(report["rank"], 4);
    parse_protocol_tree(report["protocol"].as_str().unwrap()).unwrap();
}

#[test]
fn rec_lemma_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = eq4_file(dir.path());

    let output = run(&[
        "lemma",
        "--name",
        "rec",
        "--in",
        input.to_str().unwrap(),
        "--eps",
        "1/8",
    ]);
    assert!(output.status.success());
    let report = json_of(&output);
    let construction = &report["report"]["construction"];
    assert_eq!(construction["printed_bound_holds"], true);
    assert!(construction["witness"]
        .as_str()
        .unwrap()
        .starts_with("WITNESS v1 dual rec@1"));
}
