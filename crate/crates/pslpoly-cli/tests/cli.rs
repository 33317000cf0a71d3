use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pslpoly")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

#[test]
fn family_build_prints_polynomial_and_sidecar() {
    let (code, out, _) = run(&["family", "build", "--tag", "char2", "--q", "8", "--n", "9", "--alpha", "1", "--field", "GF(2^1|g)"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "GF(2^1|g){ X^28 + X^10 + X }");
    let side: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(side["degree"], 28);
    assert_eq!(side["boundary_case"], false);
    assert_eq!(side["predicted_group"], "PGL");
    assert_eq!(side["predicted_genus"], 28);
}

#[test]
fn family_output_round_trips() {
    let (code, out, _) = run(&["family", "--tag", "gen-even", "--q", "8", "--m", "3"]);
    assert_eq!(code, 0);
    let text = out.lines().next().unwrap();
    let p = pslpoly::Poly::parse(text).unwrap();
    assert_eq!(p.deg(), 28);
    assert_eq!(p.to_string(), text);
}

#[test]
fn json_reports_carry_schema() {
    let (code, v) = json(&["family", "--tag", "table-b", "--index", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["degree"], 55);
    let (code, v) = json(&["family", "--tag", "char3", "--q", "27", "--n", "7", "--alpha", "2", "--field", "GF(3^1|g)"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 351);
}

#[test]
fn constraint_violations_are_usage_errors() {
    let (code, v) = json(&["family", "--tag", "char3", "--q", "27", "--n", "2", "--alpha", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["schema"], 1);
    assert!(v["message"].as_str().unwrap().contains("n | (q+1)/4"));
    let (code, _, err) = run(&["check", "--poly", "GF(2^1|g){X^3 +}"]);
    assert_eq!(code, 2);
    assert!(err.contains("byte"));
    let (code, _, err) = run(&["family", "--tag", "table-b", "--index", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("1..=11"));
    let (code, _, _) = run(&["family", "--tag", "nonsense"]);
    assert_eq!(code, 2);
}

#[test]
fn budget_exceedance_exit_code() {
    let (code, v) = json(&["--budget", "10", "check", "--poly", "GF(2^1|g){X^3}", "--checks", "perm", "--k", "5"]);
    assert_eq!(code, 3);
    let rows = v["results"]["perm"]["rows"].as_array().unwrap();
    assert_eq!(rows[3]["bijective"], Value::Null);
    assert_eq!(rows[0]["bijective"], true);
    assert_eq!(rows[1]["bijective"], false);
}

#[test]
fn check_perm_on_cube_over_f5() {
    let (code, v) = json(&["check", "--poly", "GF(5^1|g){X^3}", "--checks", "perm", "--k", "3"]);
    assert_eq!(code, 0);
    let bits: Vec<bool> = v["results"]["perm"]["rows"].as_array().unwrap().iter().map(|r| r["bijective"].as_bool().unwrap()).collect();
    assert_eq!(bits, vec![true, false, true]);
}

#[test]
fn check_decompose_emits_witness_over_extension() {
    let (_, out, _) = run(&["family", "--tag", "ind7", "--alpha", "3"]);
    let poly = out.lines().next().unwrap().to_string();
    let (code, v) = json(&["check", "--poly", &poly, "--checks", "decompose", "--inner", "3", "--ext", "2"]);
    assert_eq!(code, 0);
    let row = &v["results"]["decompose"][0];
    assert_eq!(row["verified"], true);
    assert!(row["witness"]["h"].as_str().unwrap().starts_with("GF(7^2|"));
    let (code, v) = json(&["check", "--poly", &poly, "--checks", "decompose", "--inner", "3,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["decompose"][0]["witness"], Value::Null);
    assert_eq!(v["results"]["decompose"][1]["witness"], Value::Null);
}

#[test]
fn check_stats_csv() {
    let (_, out, _) = run(&["family", "--tag", "gen-odd", "--q", "7", "--m", "2"]);
    let poly = out.lines().next().unwrap().to_string();
    let (code, csv, _) = run(&["--output", "csv", "check", "--poly", &poly, "--checks", "stats", "--ext", "2"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("pattern,count,frequency\n"));
    let total: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 48);
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "--poly", "GF(3^1|g){X^5+X^2+1}", "--checks", "stats", "--ext", "3", "--samples", "10", "--seed", "4"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
}

#[test]
fn group_and_ramify_subcommands() {
    let (code, v) = json(&["group", "--q", "8", "--report", "fixed-points"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_match"], true);
    let (code, v) = json(&["ramify", "rh", "--q", "8", "--case", "no-finite", "--n", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["genus"], 28);
    let (code, v) = json(&["ramify", "star", "--p", "3", "--n", "7", "--r", "13"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    let (code, _, _) = run(&["ramify", "rh", "--q", "7", "--case", "sideways", "--n", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_paper_group_scope_passes() {
    let (code, out, _) = run(&["verify-paper", "--scope", "group"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 7);
    assert!(!out.contains("FAIL "));
}
