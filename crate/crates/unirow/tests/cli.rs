//! End-to-end command tests: golden outputs, round-trips through the JSON
//! layer, error codes and determinism.

use serde_json::{json, Value};
use unirow::cli::{run_text, CommandName, Options};

fn run_ok(command: CommandName, payload: &str) -> Value {
    let (status, out) = run_text(command, payload, &Options::default());
    assert_eq!(status, 0, "command failed: {}", out);
    serde_json::from_str(&out).unwrap()
}

#[test]
fn snf_golden_output() {
    let out = run_ok(
        CommandName::Snf,
        r#"{"ring":{"kind":"Z"},"matrix":[["2","4"],["6","8"]]}"#,
    );
    assert_eq!(out["d"], json!([["2", "0"], ["0", "4"]]));
    // transforms re-multiply: P * A * Q = D
    let ring = unirow::Ring::Int;
    let a = unirow::json::matrix_from_json(&json!([["2", "4"], ["6", "8"]]), &ring).unwrap();
    let p = unirow::json::matrix_from_json(&out["p"], &ring).unwrap();
    let q = unirow::json::matrix_from_json(&out["q"], &ring).unwrap();
    let d = unirow::json::matrix_from_json(&out["d"], &ring).unwrap();
    assert_eq!(p.mul(&a).unwrap().mul(&q).unwrap(), d);
}

#[test]
fn decompose_golden_output() {
    let out = run_ok(
        CommandName::Decompose,
        r#"{"ring":{"kind":"Z"},"relations":[["2","4"],["6","8"]]}"#,
    );
    assert_eq!(out["module"]["factors"], json!(["2", "4"]));
}

#[test]
fn normalize_response_replays() {
    let payload = r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
        "row":[["2","1"],["0","3"]]}"#;
    let out = run_ok(CommandName::Normalize, payload);
    let m = unirow::InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();
    let row = unirow::json::row_from_json(
        &json!([["2", "1"], ["0", "3"]]),
        &m,
    )
    .unwrap();
    let script = unirow::json::script_from_json(&out["script"], m.ring(), 2).unwrap();
    let canonical = unirow::json::row_from_json(&out["canonical"], &m).unwrap();
    assert_eq!(row.apply_script(&script).unwrap(), canonical);
}

#[test]
fn det_command_matches_the_library() {
    let out = run_ok(
        CommandName::Det,
        r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
            "row":[["2","0"],["0","1"]]}"#,
    );
    assert_eq!(out, json!({"modulus": "5", "value": "2"}));
}

#[test]
fn equiv_witness_round_trips() {
    let out = run_ok(
        CommandName::Equiv,
        r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
            "row_a":[["2","0"],["0","1"]],"row_b":[["0","1"],["3","0"]]}"#,
    );
    assert_eq!(out["equivalent"], json!(true));
    let m = unirow::InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();
    let a = unirow::json::row_from_json(&json!([["2", "0"], ["0", "1"]]), &m).unwrap();
    let b = unirow::json::row_from_json(&json!([["0", "1"], ["3", "0"]]), &m).unwrap();
    let w = unirow::json::script_from_json(&out["witness"], m.ring(), 2).unwrap();
    assert_eq!(a.apply_script(&w).unwrap(), b);
}

#[test]
fn nielsen_equiv_moves_replay() {
    let opts = Options { expand_moves: true, ..Options::default() };
    let (status, out) = run_text(
        CommandName::NielsenEquiv,
        r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},
            "row_a":[["2","0"],["0","1"]],"row_b":[["3","0"],["0","1"]]}"#,
        &opts,
    );
    assert_eq!(status, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equivalent"], json!(true));
    let m = unirow::InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();
    let a = unirow::json::row_from_json(&json!([["2", "0"], ["0", "1"]]), &m).unwrap();
    let b = unirow::json::row_from_json(&json!([["3", "0"], ["0", "1"]]), &m).unwrap();
    let moves = unirow::json::moves_from_json(&v["moves"], 2).unwrap();
    assert_eq!(moves.replay(&a).unwrap(), b);
}

#[test]
fn classes_elementary_and_nielsen() {
    let out = run_ok(
        CommandName::Classes,
        r#"{"group":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"notion":"elementary"}"#,
    );
    assert_eq!(out["count"], json!("4"));
    let out = run_ok(
        CommandName::Classes,
        r#"{"group":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"notion":"nielsen"}"#,
    );
    assert_eq!(out["count"], json!("2"));
}

#[test]
fn orbits_reports_sizes_and_representatives() {
    let out = run_ok(
        CommandName::Orbits,
        r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"generators":"elementary"}"#,
    );
    assert_eq!(out["class_count"], json!(4));
    assert_eq!(out["classes"].as_array().unwrap().len(), 4);
    let total: u64 = out["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["size"].as_u64().unwrap())
        .sum();
    assert_eq!(json!(total), out["state_count"]);
}

#[test]
fn budget_errors_use_exit_code_one() {
    let opts = Options { budget: 10, ..Options::default() };
    let (status, out) = run_text(
        CommandName::Orbits,
        r#"{"module":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"generators":"elementary"}"#,
        &opts,
    );
    assert_eq!(status, 1);
    assert!(out.contains("BudgetExceeded"));
}

#[test]
fn unknown_fields_and_bad_payloads_are_schema_errors() {
    let (status, out) = run_text(
        CommandName::Classes,
        r#"{"group":{"ring":{"kind":"Z"},"factors":["5","5"]},"n":2,"notion":"weird"}"#,
        &Options::default(),
    );
    assert_eq!(status, 2);
    assert!(out.contains("SchemaError"));
}

#[test]
fn repeated_runs_are_identical() {
    let payload = r#"{"module":{"ring":{"kind":"Z"},"factors":["2","2","4"]},
        "n":3,"generators":"nielsen"}"#;
    let (s1, o1) = run_text(CommandName::Orbits, payload, &Options::default());
    let (s2, o2) = run_text(CommandName::Orbits, payload, &Options::default());
    assert_eq!(s1, 0);
    assert_eq!((s1, o1), (s2, o2));
}

#[test]
fn selftest_passes() {
    let (status, out) = run_text(CommandName::Selftest, "", &Options::default());
    assert_eq!(status, 0, "selftest failed: {}", out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], json!("ok"));
}
