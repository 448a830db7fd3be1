use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauerlab")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn dims_prints_the_basis_size() {
    let out = run(&["dims", "--d", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("15"));
    assert!(text.contains("dim Delta((2,1)) = 2"));
    assert!(text.contains("dim Delta((1)) = 3"));
}

#[test]
fn phi_verify_at_d2_passes_with_worked_example() {
    let out = run(&["phi-verify", "--d", "2", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["anchor"] == "worked-example" && c["status"] == "pass"));
    assert!(checks.iter().all(|c| c["status"] != "fail"));
}

#[test]
fn generic_relations_at_d4() {
    let out = run(&["relations", "--d", "4", "--generic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["config"]["generic"], true);
}

#[test]
fn schema_is_the_same_for_every_command() {
    for cmd in ["dims", "relations", "jm", "gram", "decomp", "seminormal", "phi-verify", "kl", "crosscheck"] {
        let out = run(&[cmd, "--d", "2", "--delta", "2"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let r = report(&out);
        let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["checks", "command", "config", "elapsed_ms"], "{cmd}");
        assert_eq!(r["command"], cmd);
        for c in r["checks"].as_array().unwrap() {
            for k in ["name", "anchor", "status", "residual"] {
                assert!(c.get(k).is_some(), "{cmd}: check without {k}");
            }
        }
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["dims", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["seminormal", "--d", "3", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["gram", "--delta", "one"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--precision", "20"]).status.code(), Some(2));
}

#[test]
fn degenerate_parameters_exit_with_three() {
    let out = run(&["seminormal", "--d", "3", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn failing_checks_give_nonzero_exit() {
    // a truncation identity that is false on the model at d = 3
    let out = run(&["phi-verify", "--d", "3", "--delta", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cache_is_written_once_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let first = run(&["relations", "--d", "3", "--delta", "1", "--cache-dir", path, "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(text.starts_with("brauerlab-cache v1\n"));
    assert_eq!(text.lines().count(), 2 + 15 * 15);
    let second = run(&["relations", "--d", "3", "--delta", "1", "--cache-dir", path, "--seed", "7"]);
    assert_eq!(second.status.code(), Some(0));
    let r = report(&second);
    let cache_check = r["checks"].as_array().unwrap().iter().find(|c| c["anchor"] == "cache").unwrap().clone();
    assert!(cache_check["detail"].as_str().unwrap().contains("from disk"));
    assert_eq!(std::fs::read_to_string(&files[0]).unwrap(), text);
}

#[test]
fn csv_output_for_tables() {
    let out = run(&["decomp", "--d", "2", "--delta", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lambda,(2),(1,1)"), "{text}");
    let out = run(&["crosscheck", "--d", "2", "--delta", "0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"∅\",\"(2)\",\"q\",1,1,true"), "{text}");
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let out = run(&["kl", "--d", "2", "--delta", "0", "--report", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(saved, report(&out));
}
