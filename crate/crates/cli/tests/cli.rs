use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn epiloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epiloc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn localize_s3_matches_the_presentation() {
    let out = epiloc(&["localize", "--group", "S3", "-p", "3", "--max-degree", "12", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let dims: Vec<u64> = (0..=12).map(|n| u64::from(n != 1)).collect();
    assert_eq!(r["results"]["dims"], serde_json::to_value(dims).unwrap());
    assert_eq!(r["results"]["relations"]["xy=yx"], "pass");
    assert_eq!(r["results"]["relations"]["x^3=y^2"], "pass");
    assert_eq!(r["trusted_to"], 12);
}

#[test]
fn report_has_the_fixed_schema() {
    let r = json(&epiloc(&["tor", "--group", "C3", "-p", "3", "--max-degree", "3"]));
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "inputs", "results", "certificates", "trusted_to", "timings_ms"]);
    assert!(r["timings_ms"].is_null());
    assert_eq!(r["results"]["dims"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn idempotent_search_and_candidate() {
    let found = epiloc(&["idempotent", "--group", "S3", "-p", "3"]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(json(&found)["certificates"]["primitive"], true);
    let given = epiloc(&["idempotent", "--group", "S3", "-p", "3", "--candidate=-(12)-1"]);
    assert_eq!(given.status.code(), Some(0));
    let r = json(&given);
    assert_eq!(r["certificates"]["squares_to_itself"], true);
    assert_eq!(r["certificates"]["kills_nontrivial_simples"], true);
    let wrong = epiloc(&["idempotent", "--group", "S3", "-p", "3", "--candidate", "(12)"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn epi_check_identity_is_yes() {
    let id = scratch(
        "identity.json",
        r#"{"source": {"p": 3, "group": "S3"}, "target": {"p": 3, "group": "S3"},
            "images": [[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,1]]}"#,
    );
    let out = epiloc(&["epi-check", "--from-file", id.to_str().unwrap(), "--max-degree", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["results"]["homological"], serde_json::json!({"verdict": "yes_up_to", "up_to": 8}));
    assert_eq!(r["results"]["homotopy"]["verdict"], "yes_up_to");
}

#[test]
fn epi_check_ground_into_c2_is_no() {
    let f = scratch("ground_c2.json", r#"{"source": {"p": 3, "truncated_polynomial": 1}, "target": {"p": 3, "group": "C2"}, "images": [[1,0]]}"#);
    let r = json(&epiloc(&["epi-check", "--from-file", f.to_str().unwrap(), "--max-degree", "4"]));
    assert_eq!(r["results"]["homological"]["verdict"], "no_at_degree");
    assert_eq!(r["results"]["homotopy"]["verdict"], "no");
    assert_eq!(r["certificates"]["verdicts_agree"], true);
}

#[test]
fn free_product_quotients_match() {
    let f = scratch("ground_c2_fp.json", r#"{"source": {"p": 3, "truncated_polynomial": 1}, "target": {"p": 3, "group": "C2"}, "images": [[1,0]]}"#);
    let out = epiloc(&["free-product", "--from-file", f.to_str().unwrap(), "--max-word", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["results"]["filtration_dims"], serde_json::json!([0, 2, 4, 6, 8]));
    assert_eq!(r["certificates"]["quotients_match_formula"], true);
}

#[test]
fn unknown_group_exits_2_with_library() {
    let out = epiloc(&["localize", "--group", "Q8", "-p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("S3") && err.contains("CpxCq(p,q)") && err.contains("Dn"));
}

#[test]
fn malformed_table_exits_2() {
    let bad = scratch("bad_group.json", r#"{"name": "bad", "order": 2, "elements": ["1", "a"], "table": [[0, 1], [1, 1]]}"#);
    let out = epiloc(&["tor", "--group", bad.to_str().unwrap(), "-p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid group table"));
}

#[test]
fn group_file_matches_bundled() {
    let c3 = scratch("c3.json", r#"{"name": "C3", "order": 3, "elements": ["1", "a", "a^2"], "table": [[0,1,2],[1,2,0],[2,0,1]]}"#);
    let from_file = json(&epiloc(&["tor", "--group", c3.to_str().unwrap(), "-p", "3", "--max-degree", "4"]));
    let bundled = json(&epiloc(&["tor", "--group", "C3", "-p", "3", "--max-degree", "4"]));
    assert_eq!(from_file["results"], bundled["results"]);
}

#[test]
fn semidirect_product_has_order_21() {
    let r = json(&epiloc(&["idempotent", "--group", "CpxCq(7,3)", "-p", "7"]));
    assert_eq!(r["results"]["algebra_dim"], 21);
}

#[test]
fn output_is_byte_identical() {
    let args = ["benson", "--group", "S3", "-p", "3", "--max-degree", "5", "--output", "text"];
    let (a, b) = (epiloc(&args), epiloc(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_output_has_header() {
    let out = epiloc(&["hilbert", "--group", "S3", "-p", "3", "--max-degree", "6", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\ncommand,hilbert\n"));
    assert!(text.contains("certificates.mismatches,[]"));
}

#[test]
fn non_prime_is_input_error() {
    assert_eq!(epiloc(&["tor", "--group", "C4", "-p", "4"]).status.code(), Some(2));
}

#[test]
fn selftest_runs_chosen_criteria() {
    let out = epiloc(&["selftest", "--only", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS criterion 2"));
    assert_eq!(json(&out)["results"]["failed"], serde_json::json!([]));
}

#[test]
fn default_relations_for_order_ten() {
    let r = json(&epiloc(&["localize", "--group", "CpxCq(5,2)", "-p", "5", "--max-degree", "8"]));
    assert_eq!(r["results"]["relations"]["xy=yx"], "pass");
    assert_eq!(r["results"]["relations"]["y^2=0"], "pass");
}
