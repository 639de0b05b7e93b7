use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const Z4: &str = r#"{"alphabet":["0","1","2","3"],
 "op_table":[["0","1","2","3"],["1","2","3","0"],["2","3","0","1"],["3","0","1","2"]],
 "transitions":[[1,0,1,0],[0,1,0,1],[1,0,1,0],[0,1,0,1]]}"#;

/// Same shift with `a • b = -(a + b)`, which satisfies the chain hypotheses.
const Z4_NEG: &str = r#"{"alphabet":["0","1","2","3"],
 "op_table":[["0","3","2","1"],["3","2","1","0"],["2","1","0","3"],["1","0","3","2"]],
 "transitions":[[1,0,1,0],[0,1,0,1],[1,0,1,0],[0,1,0,1]]}"#;

const GOLDEN_MEAN: &str = r#"{"alphabet":["0","1"],"op_table":[["0","1"],["1","0"]],"transitions":[[1,1],[1,0]]}"#;

const FULL2: &str = r#"{"alphabet":["a","b"],"op_table":[["a","b"],["b","a"]],"transitions":[[1,1],[1,1]]}"#;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasishift")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn validate_z4_passes() {
    let f = file(Z4);
    let out = run(&["validate", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn golden_mean_is_incompatible() {
    let f = file(GOLDEN_MEAN);
    let out = run(&["validate", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failed: Vec<&Value> = report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["witness"].as_str().unwrap().contains("b=1, b'=0, a=0, a'=1"));
}

#[test]
fn malformed_input_exits_with_two() {
    for text in [
        "{",
        r#"{"alphabet":["0"],"op_table":[["0"]]}"#,
        r#"{"alphabet":["0"],"op_table":[["0"]],"transitions":[[1]],"extra":1}"#,
        r#"{"alphabet":["0","1"],"op_table":[["0","1"],["1","0"]],"transitions":[[1,1]]}"#,
        r#"{"alphabet":["0","1"],"op_table":[["0","1"],["1","0"]],"transitions":[[1,1],[1,1]],"base":"7"}"#,
    ] {
        let f = file(text);
        let out = run(&["validate", path(&f)]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["validate", "/nonexistent/instance.json"]).status.code(), Some(2));
}

#[test]
fn non_latin_table_is_a_domain_failure() {
    let f = file(r#"{"alphabet":["0","1"],"op_table":[["0","1"],["0","1"]],"transitions":[[1,1],[1,1]]}"#);
    assert_eq!(run(&["validate", path(&f)]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let f = file(Z4);
    for args in [
        vec!["validate", path(&f)],
        vec!["analyze", path(&f)],
        vec!["decompose", path(&f), "--emit-code"],
        vec!["export-dot", path(&f)],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn analyze_reports_quotients() {
    let f = file(Z4);
    let report = json(&run(&["analyze", path(&f)]));
    assert_eq!(report["h"], serde_json::json!(["0", "2"]));
    assert_eq!(report["follower_classes"], serde_json::json!([["0", "2"], ["1", "3"]]));
    assert_eq!(report["entropy"]["exact_log_of"], 2);
    assert_eq!(report["irreducible"], false);
}

#[test]
fn decompose_z4_and_full_shift() {
    let f = file(Z4);
    let out = run(&["decompose", path(&f), "--verify-len", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["full_shift_exponent"], 2);
    assert_eq!(report["finite_factor"]["alphabet"].as_array().unwrap().len(), 2);
    assert_eq!(report["verification"]["max_len"], 8);

    let f = file(FULL2);
    let report = json(&run(&["decompose", path(&f), "--emit-code"]));
    assert_eq!(report["full_shift_exponent"], 2);
    assert_eq!(report["finite_factor"]["alphabet"].as_array().unwrap().len(), 1);
    assert_eq!(report["block_bound"]["passed"], true);
    assert_eq!(report["forward"]["rule"].as_array().unwrap().len(), 2);
}

#[test]
fn decompose_honours_the_section() {
    let f = file(&Z4.replace('}', r#","section":{"0":"2"}}"#));
    let report = json(&run(&["decompose", path(&f)]));
    assert_eq!(report["passed"], true);
    let bad = file(&Z4.replace('}', r#","section":{"0":"1"}}"#));
    assert_eq!(run(&["decompose", path(&bad)]).status.code(), Some(1));
}

#[test]
fn moves_apply_and_search() {
    let f = file(Z4);
    let out = run(&["moves", "apply", path(&f), "--kind", "split_successors", "--anchor", "0", "--block", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["alphabet"].as_array().unwrap().len(), 8);

    let out = run(&[
        "moves",
        "apply",
        path(&f),
        "--kind",
        "amalg_pred_common_succ_disjoint",
        "--anchor",
        "0",
        "--block",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].as_str().unwrap().contains("P("));

    let out = run(&["moves", "apply", path(&f), "--kind", "twist", "--anchor", "0", "--block", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["moves", "search", path(&f), path(&f)]);
    assert_eq!(json(&out)["moves"], serde_json::json!([]));

    let g = file(r#"{"alphabet":["0"],"op_table":[["0"]],"transitions":[[1]]}"#);
    let out = run(&["moves", "search", path(&g), path(&f), "--max-depth", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reason"], "Nonisomorphic");
}

#[test]
fn chains_report() {
    let f = file(Z4_NEG);
    let out = run(&["chains", path(&f), "--radius", "2", "--order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let sizes: Vec<u64> = report["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, [16, 4, 1]);
    assert_eq!(report["partition"].as_array().unwrap().len(), 64 / 4);

    let g = file(Z4);
    assert_eq!(run(&["chains", path(&g)]).status.code(), Some(1));
    assert_eq!(run(&["chains", path(&f), "--radius", "1", "--order", "2"]).status.code(), Some(2));
}

#[test]
fn dot_export_lists_every_edge() {
    let f = file(FULL2);
    let out = run(&["export-dot", path(&f)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 4);
    assert!(text.contains("\"a\" -> \"b\";"));
}

#[test]
fn forbidden_words_input() {
    let f = file(
        r#"{"alphabet":["0","1"],"op_table":[["0","1"],["1","0"]],"forbidden_words":[["0","0","1"],["0","1","0"],["1","0","0"],["1","1","1"]]}"#,
    );
    let out = run(&["analyze", path(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["block_length"], 2);
    assert_eq!(report["instance"]["alphabet"].as_array().unwrap().len(), 4);
}
