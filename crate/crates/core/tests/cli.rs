use std::process::{Command, Output};

use serde_json::Value;

use ednorm::cli::{overall_exit_code, RunManifest, EXIT_BUDGET, EXIT_OK, EXIT_VERIFY_FAILED};

fn ednorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ednorm")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn round_trips(text: &str) -> Value {
    let value: Value = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), text.trim_end());
    value
}

#[test]
fn construct_json() {
    let out = ednorm(&["construct", "--case", "c", "--p", "2", "--r", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = round_trips(&stdout(&out));
    assert_eq!(v["case"], "c");
    assert_eq!(v["total_dimension"], 8);
    assert_eq!(v["weights"].as_array().unwrap().len(), 8);
    assert_eq!(v["weights"][0], serde_json::json!([-1, 0, 0, 1]));
}

#[test]
fn json_outputs_round_trip() {
    let commands: [&[&str]; 6] = [
        &["check-genfree", "--n", "6", "--p", "2", "--json"],
        &["orbit", "--n", "4", "--p", "2", "--q", "4", "--weight", "[1,0,3,0]", "--json"],
        &["search-min", "--n", "4", "--p", "2", "--q", "4", "--json"],
        &["verify", "--bound", "general", "--n", "6", "--p", "2", "--json"],
        &["ed", "--n", "12", "--p", "2", "--json"],
        &["ed", "--table", "--max-n", "10", "--p", "3", "--json"],
    ];
    for args in commands {
        let out = ednorm(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        round_trips(&stdout(&out));
    }
}

#[test]
fn verify_reports() {
    let out = ednorm(&["verify", "--bound", "prime-power", "--p", "2", "--r", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = round_trips(&stdout(&out));
    assert_eq!((v["bound"].as_u64(), v["minimum"].as_u64(), v["tight"].as_bool()), (Some(8), Some(8), Some(true)));
    assert_eq!(v["q"], 4);

    let out = ednorm(&["verify", "--bound", "prime-power", "--p", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("bound 3, minimum 3"));
}

#[test]
fn orbit_with_explicit_generators() {
    let out = ednorm(&["orbit", "--n", "4", "--weight", "[1,-1,0,0]", "--perm", "(1 2 3 4)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("orbit of a[1,2]: 4 elements"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 7] = [
        &["reproduce-all", "--profile", "bogus"],
        &["ed", "--n", "4", "--p", "4"],
        &["construct", "--case", "e", "--p", "2"],
        &["search-min", "--n", "3", "--p", "2", "--q", "9"],
        &["verify", "--bound", "prime-power", "--p", "2", "--r", "1", "--q", "2"],
        &["verify", "--bound", "general", "--n", "4", "--p", "2"],
        &["orbit", "--n", "3", "--p", "3", "--weight", "[1,1,1]"],
    ];
    for args in cases {
        assert_eq!(ednorm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_exhaustion_exits_four() {
    let out = ednorm(&["search-min", "--n", "4", "--p", "2", "--q", "4", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn markdown_table() {
    let out = ednorm(&["ed", "--table", "--max-n", "4", "--p", "2"]);
    let text = stdout(&out);
    assert!(text.starts_with("| n | p | case | ed |"));
    assert!(text.contains("| 4 | 2 | c | 5 | 4 | 8 | true |"));
}

fn strip_timing(mut v: Value) -> Value {
    for row in v.as_array_mut().unwrap() {
        row.as_object_mut().unwrap().remove("elapsed_micros");
    }
    v
}

#[test]
fn quick_reproduction_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = ednorm(&["reproduce-all", "--profile", "quick", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        let text = std::fs::read_to_string(&path).unwrap();
        let v = round_trips(&text);
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r["exit_code"] == 0));
        reports.push(strip_timing(v));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn exit_code_aggregation() {
    let manifest = |code| RunManifest {
        command: "x".into(),
        parameters: Value::Null,
        tool_version: "0".into(),
        elapsed_micros: 0,
        result: Value::Null,
        exit_code: code,
    };
    assert_eq!(overall_exit_code(&[manifest(0), manifest(0)]), EXIT_OK);
    assert_eq!(overall_exit_code(&[manifest(0), manifest(4)]), EXIT_BUDGET);
    assert_eq!(overall_exit_code(&[manifest(4), manifest(3)]), EXIT_VERIFY_FAILED);
}
