use std::process::Command;

use galnum::cli::run;
use serde_json::{json, Value};

fn galnum(args: &[&str]) -> galnum::cli::Outcome {
    run(std::iter::once("galnum").chain(args.iter().copied()))
}

fn json_out(args: &[&str]) -> Value {
    let out = galnum(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid JSON")
}

const JORDAN: &str = r#"{"n":2,"entries":[[0,1],[0,0]]}"#;

#[test]
fn seven_is_not_a_sum_of_three_squares() {
    let v = json_out(&["delta", "--field", "Q[sqrt=-1]", "--k", "7"]);
    assert_eq!(v["answer"], "No");
    assert_eq!(v["obstruction"], "p=7");
    assert!(v.get("witness").is_some() && v.get("bound").is_some());
}

#[test]
fn delta_yes_has_witness() {
    let v = json_out(&["delta", "--field", "Q[sqrt=-1]", "--k", "25/4"]);
    assert_eq!(v["answer"], "Yes");
    assert!(v["witness"].is_string());
    let v = json_out(&["delta", "--field", "Q[sqrt=-1]", "--k", "7", "--n", "3"]);
    assert_eq!(v["answer"], "Yes");
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn jordan_block_over_f9() {
    let v = json_out(&["numrange", "--field", "F[3][sqrt=2]", "--matrix", JORDAN, "--mode", "exhaustive"]);
    let pts: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(pts, ["[0, 0]", "[0, 1]", "[0, 2]", "[1, 0]", "[2, 0]"]);
}

#[test]
fn matrix_from_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("galnum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jordan.json");
    std::fs::write(&path, JORDAN).unwrap();
    let out = galnum(&["numrange", "--field", "F[3][sqrt=2]", "--matrix", path.to_str().unwrap(), "--csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "coeff0,coeff1\n0,0\n0,1\n0,2\n1,0\n2,0\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_tags_by_variant() {
    let v = json_out(&["numrange", "--field", "F[3][sqrt=2]", "--matrix", JORDAN, "--mode", "classify"]);
    assert!(v["description"]["CenterCircleFamily"].is_object());
    let diag = r#"{"n":2,"entries":[[1,0],[0,-1]]}"#;
    let v = json_out(&["numrange", "--field", "Q[sqrt=2]", "--matrix", diag, "--mode", "classify"]);
    assert!(v["description"]["SegmentJoin"].is_object());
}

#[test]
fn corank1_classification_over_f9() {
    let m = r#"{"n":3,"entries":[[2,0,0],[0,2,0],[0,0,1]]}"#;
    let v = json_out(&["numrange", "--field", "F[3][sqrt=2]", "--matrix", m, "--mode", "classify"]);
    assert_eq!(v["corank1"]["case"], 1);
    let exhaustive = json_out(&["numrange", "--field", "F[3][sqrt=2]", "--matrix", m, "--mode", "exhaustive"]);
    assert_eq!(v["points"], exhaustive["points"]);
}

#[test]
fn sample_values_are_exact() {
    let v = json_out(&["numrange", "--field", "Q[sqrt=-1]", "--matrix", JORDAN, "--mode", "sample", "--count", "5"]);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 5);
    assert!(samples.iter().all(|s| s["value"].is_string() && s["vector"].is_array()));
}

#[test]
fn circle_csv_and_approx() {
    let out = galnum(&["circle", "--field", "Q[sqrt=-1]", "--center", "[1, 0]", "--c", "25", "--points", "4", "--csv"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "coeff0,coeff1");
    assert_eq!(lines.len(), 5);
    let v = json_out(&["circle", "--field", "Q[sqrt=-1]", "--center", "0", "--c", "2", "--points", "3", "--approx"]);
    assert_eq!(v["kind"], "SmoothConic");
    assert_eq!(v["bounded"], true);
    assert_eq!(v["approx"]["lossy"], true);
    let v = json_out(&["circle", "--field", "Q[sqrt=-1]", "--center", "0", "--c", "3"]);
    assert_eq!(v["kind"], "Empty");
    assert_eq!(v["points"], json!([]));
}

#[test]
fn finite_circle_is_complete() {
    let v = json_out(&["circle", "--field", "F[5][sqrt=2]", "--center", "0", "--c", "1", "--points", "100"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
}

#[test]
fn knumrange_modes() {
    let m = r#"{"n":2,"entries":[[0,1],[0,0]]}"#;
    let v = json_out(&["knumrange", "--field", "F[5]", "--matrix", m]);
    assert_eq!(v["result"]["variant"], "SingletonK");
    let v = json_out(&["knumrange", "--field", "F[7]", "--matrix", m]);
    assert_eq!(v["result"]["points"], json!(["0", "3", "4"]));
    let v = json_out(&["knumrange", "--field", "F[2^2]", "--matrix", m, "--mode", "char2"]);
    assert_eq!(v["degree"], 2);
    let skew = r#"{"n":2,"entries":[["3","1"],["-1","3"]]}"#;
    let v = json_out(&["knumrange", "--field", "Q", "--matrix", skew, "--mode", "structural"]);
    assert_eq!(v["structurally_singleton"], true);
    assert_eq!(v["c"], "3");
    let v = json_out(&["knumrange", "--field", "Q", "--matrix", m, "--mode", "structural"]);
    assert_eq!(v["structurally_singleton"], false);
    assert_eq!(v["distinct_values"].as_array().unwrap().len(), 2);
    let v = json_out(&["knumrange", "--field", "Q", "--matrix", m, "--count", "4"]);
    assert_eq!(v["result"]["variant"], "SampledK");
}

#[test]
fn exit_codes() {
    assert_eq!(galnum(&["delta", "--field", "Q[sqrt=4]", "--k", "1"]).code, 2);
    assert_eq!(galnum(&["delta", "--field", "Q[sqrt=-1]", "--k", "x"]).code, 2);
    assert_eq!(galnum(&["delta", "--field", "Q[sqrt=-1]"]).code, 2);
    assert_eq!(galnum(&["numrange", "--field", "F[3]", "--matrix", r#"{"n":3,"entries":[[1]]}"#]).code, 2);
    let swap = r#"{"n":2,"entries":[[0,1],[1,0]]}"#;
    assert_eq!(galnum(&["numrange", "--field", "Q[sqrt=-1]", "--matrix", swap, "--mode", "classify"]).code, 0);
    let irrational = r#"{"n":2,"entries":[[0,3],[1,0]]}"#;
    assert_eq!(galnum(&["numrange", "--field", "Q[sqrt=-1]", "--matrix", irrational, "--mode", "classify"]).code, 3);
    assert_eq!(galnum(&["numrange", "--field", "Q[sqrt=-1]", "--matrix", JORDAN, "--mode", "exhaustive"]).code, 3);
    let big = galnum(&["numrange", "--field", "F[7]", "--matrix", JORDAN, "--budget", "10"]);
    assert_eq!(big.code, 3);
    assert!(big.stderr.contains("budget"));
    assert_eq!(galnum(&["numrange", "--field", "F[7]", "--matrix", JORDAN, "--budget", "0"]).code, 2);
    assert_eq!(galnum(&["circle", "--field", "F[3]", "--center", "0", "--c", "1", "--approx"]).code, 2);
}

#[test]
fn verify_single_field_passes() {
    let out = galnum(&["verify", "--field", "F[5][sqrt=2]"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("7/7 criteria passed\n"));
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--field", "F[3]", "--seed", "7", "--json"];
    assert_eq!(galnum(&args).stdout, galnum(&args).stdout);
    let args = ["numrange", "--field", "Q[sqrt=2]", "--matrix", JORDAN, "--mode", "sample"];
    assert_eq!(galnum(&args).stdout, galnum(&args).stdout);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_galnum");
    let out = Command::new(bin).args(["delta", "--field", "Q[sqrt=-1]", "--k", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["answer"], "No");
    let out = Command::new(bin).args(["delta", "--field", "nonsense", "--k", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
