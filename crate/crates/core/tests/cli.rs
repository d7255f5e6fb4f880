use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_htiling"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn xi_json() {
    let out = run(&["--json", "xi", "--beta", "1/9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["beta"], "1/9");
    assert_eq!(v["xi"], "2/9");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["xi", "--beta", "0.1"],
        vec!["xi", "--beta", "1/5"],
        vec!["xi"],
        vec!["verify-lemma", "--id", "L53", "--mode", "exhaustive"],
        vec!["verify-lemma", "--id", "L99", "--mode", "sampled"],
        vec!["curve", "--from", "1/6", "--to", "1/9"],
        vec!["nu", "--graph", "/nonexistent/file.el"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn nu_on_k2_blowup_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.el");
    let g = htiling::graph::SmallGraph::complete(2).unwrap().blowup(6).unwrap();
    std::fs::write(&path, g.to_edge_list()).unwrap();
    let out = run(&["--json", "nu", "--graph", path.to_str().unwrap(), "--pattern", "H"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nu"], 2);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"]["coverage"], 12);

    let out = run_with_stdin(&["--json", "nu", "--graph", "-"], &g.to_edge_list());
    assert_eq!(json(&out)["nu"], 2);
}

#[test]
fn nu_with_custom_pattern_file() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = dir.path().join("p3.el");
    std::fs::write(&pattern, "3 2\n0 1\n1 2\n").unwrap();
    let host = dir.path().join("c6.el");
    std::fs::write(&host, "# six-cycle\n6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n").unwrap();
    let out = run(&[
        "--json", "nu", "--graph", host.to_str().unwrap(), "--pattern-file", pattern.to_str().unwrap(),
    ]);
    assert_eq!(json(&out)["nu"], 2);
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let g = htiling::patterns::PatternKind::Hhat.graph().blowup(4).unwrap();
    let out = run_with_stdin(&["nu", "--graph", "-", "--budget", "3"], &g.to_edge_list());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn construct_round_trips_into_nu() {
    let spec = ["--kind", "planted", "--i", "1", "--n", "20", "--beta", "1/10"];
    let built = run(&[&["construct"][..], &spec[..]].concat());
    assert_eq!(built.status.code(), Some(0));
    let nu = run_with_stdin(&["--json", "nu", "--graph", "-"], &stdout(&built));
    let check = run(&[&["--json", "verify-construction"][..], &spec[..]].concat());
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(json(&nu)["nu"], json(&check)["nu"]);
    assert_eq!(json(&check)["holds"], false);
    assert_eq!(json(&check)["beta_n"], "2");
}

#[test]
fn refutation_demo_passes() {
    let out = run(&["--json", "refutation-demo"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let holds: Vec<bool> = v["scenarios"].as_array().unwrap().iter().map(|s| s["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, vec![true, true, false]);
}

#[test]
fn curve_file_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xi.csv");
    let out = run(&["curve", "--from", "0", "--to", "1/6", "--steps", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("beta,xi,xi_exact"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[0], vec!["0", "0", "0"]);
    assert_eq!(rows[20], vec!["0.111111111111", "0.222222222222", "2/9"]);
    assert_eq!(rows[24][1], "0.32");
    assert_eq!(rows[30], vec!["0.166666666667", "0.5", "1/2"]);
    // nothing but the report is left in the directory
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn psi_star_and_prop_table() {
    let out = run(&["psi-star", "--alpha", "1/10"]);
    assert!(stdout(&out).contains("21/100"));
    let out = run(&["--json", "check-prop-opt", "--grid", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 31);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_lemma_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["--json", "verify-lemma", "--id", "L55", "--mode", "sampled", "--count", "200", "--seed", "3", "--jobs", "2", "--out", path.to_str().unwrap()];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["lemma"], "L55");
    assert_eq!(report["checked"], 200);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["verdict"], "pass");
    assert!(String::from_utf8_lossy(&out.stderr).contains("progress"));
    let mut again = json(&run(&args));
    let mut first = report;
    first["elapsed_ms"] = 0.into();
    again["elapsed_ms"] = 0.into();
    assert_eq!(first, again);
}

#[test]
fn fixtures_and_embeddings() {
    let out = run(&["--json", "fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["fixtures"].as_array().unwrap().len(), 6);
    let out = run(&["verify-embeddings", "--t-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Hhat[6]      copies=7"));
}

#[test]
fn mixed_cover_target() {
    let g = htiling::verify::assemble_host(&htiling::verify::figure_fixtures()[0].config).unwrap();
    let out = run_with_stdin(&["--json", "mixed-cover", "--graph", "-", "--target", "13"], &g.to_edge_list());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["coverage"].as_u64().unwrap() >= 13);
}
