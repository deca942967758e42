//! End-to-end tests of the shortvar binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shortvar")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text:?}"));
    (v, code)
}

#[test]
fn lambda_of_irreducible_quadratic() {
    let (v, code) = json(&["lambda", "--rep", "trivial", "--q", "3", "--poly", "1,0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], 2);
    let (v, _) = json(&["lambda", "--rep", "trivial", "--q", "3", "--poly", "1,0,0,1"]);
    assert_eq!(v["value"], 1);
}

#[test]
fn rmt_mean_and_provenance() {
    let (v, code) = json(&["rmt", "--size", "2", "--power", "3", "--samples", "20000", "--seed", "1"]);
    assert_eq!(code, 0);
    let (mean, se) = (v["mean"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    assert!((mean - 2.0).abs() <= 4.0 * se, "{v}");
    let p = &v["provenance"];
    assert_eq!(p["seed"], 1);
    assert_eq!(p["samples"], 20000);
    assert_eq!(p["generator"], "ChaCha8");
    assert_eq!(p["tool"], "shortvar");
    // reproducible from the provenance block
    let (w, _) = json(&["rmt", "--size", "2", "--power", "3", "--samples", "20000", "--seed", "1", "--workers", "1"]);
    assert_eq!(v["mean"], w["mean"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["lambda", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["nosuch"]).status.code(), Some(1));
    assert_eq!(run(&["lambda", "--rep", "trivial", "--q", "6", "--poly", "1,1"]).status.code(), Some(1));
    let out = run(&["lambda", "--rep", "legendre", "--q", "3", "--poly", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("characteristic > 3"));
    let out = run(&["limit-table", "--rep", "trivial", "--n", "6", "--h", "2", "--q-list", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n − h >= 5"));
    assert_eq!(run(&["variance", "--rep", "trivial", "--q", "3", "--n", "3", "--h", "3"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "--q", "3", "--poly", "1,1", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn variance_tolerance_failure_and_override() {
    // the Legendre character route differs from the direct route
    let args = ["variance", "--rep", "legendre", "--q", "5", "--n", "4", "--h", "2"];
    let (v, code) = json(&args);
    assert_eq!(code, 3);
    assert_eq!(v["identity_pass"], false);
    let (v, code) = json(&["variance", "--rep", "trivial", "--q", "3", "--n", "6", "--h", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["identity_pass"], true);
    let mut loose = args.to_vec();
    loose.extend(["--tol-id", "100"]);
    assert_eq!(json(&loose).1, 0);
}

#[test]
fn variance_routes() {
    let base = ["variance", "--rep", "trivial", "--q", "3", "--n", "5", "--h", "1"];
    let direct = json(&[&base[..], &["--route", "direct"]].concat()).0;
    let chars = json(&[&base[..], &["--route", "chars"]].concat()).0;
    assert!(direct["char_route_variance"].is_null());
    assert!(chars["variance"].is_null());
    let (d, c) = (direct["variance"].as_f64().unwrap(), chars["char_route_variance"].as_f64().unwrap());
    assert!((d - c).abs() <= 1e-8 * d.max(1.0));
}

#[test]
fn limit_table_csv_schema() {
    let out = run(&[
        "limit-table",
        "--rep",
        "trivial",
        "--n",
        "7",
        "--h",
        "2",
        "--q-list",
        "3,5",
        "--format",
        "csv",
        "--samples",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rd.headers().unwrap().iter().collect::<Vec<_>>(),
        ["q", "normalized_variance", "good_trace_avg", "predicted", "rmt_mc"]
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "3");
    assert_eq!(&rows[1][3], "3");
    let nv: f64 = rows[0][1].parse().unwrap();
    assert!((nv - 2.5171).abs() < 1e-3);
}

#[test]
fn json_round_trips_and_out_file() {
    let dir = std::env::temp_dir().join(format!("shortvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.json");
    let out = run(&["degree-census", "--rep", "trivial", "--q", "3", "--m", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert_eq!(v["histogram"], serde_json::json!({"0": 2, "1": 6, "2": 18, "3": 54}));
    assert_eq!(v["majority"], 3);
    assert_eq!(v["trivial_character"], "heavy");
    let bad = run(&["field-info", "--q", "3", "--out", "/nonexistent/dir/x.json"]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn field_factor_and_chars() {
    let (v, _) = json(&["field-info", "--q", "3^2"]);
    assert_eq!(v["q"], 9);
    assert_eq!(v["nonzero_squares"], 4);
    let (v, _) = json(&["factor", "--q", "3", "--poly", "1,0,0,1"]);
    assert_eq!(v["factors"][0]["prime"], "1,1");
    assert_eq!(v["factors"][0]["exponent"], 3);
    assert_eq!(v["prime_power"], true);
    let (v, code) = json(&["chars", "--q", "3", "--m", "3", "--check"]);
    assert_eq!(code, 0);
    assert_eq!(v["even_count"], 9);
    assert_eq!(v["group_order"], 18);
    assert_eq!(v["orthogonality"]["violations"].as_array().map(Vec::len), Some(0));
}

#[test]
fn lfunction_single_character() {
    let (all, code) = json(&["lfunction", "--rep", "trivial", "--q", "5", "--m", "2"]);
    assert_eq!(code, 0);
    let chars = all["characters"].as_array().unwrap();
    assert_eq!(chars.len(), 5);
    let nontrivial = chars.iter().find(|c| c["classification"] == "good").unwrap();
    let name = nontrivial["char"].as_str().unwrap();
    let (one, _) = json(&["lfunction", "--rep", "trivial", "--q", "5", "--m", "2", "--char", name]);
    assert_eq!(one["characters"][0]["coefficients"], nontrivial["coefficients"]);
    assert_eq!(one["characters"][0]["S"], 0);
}

#[test]
fn identity_suite_reports_residuals() {
    let (v, code) = json(&["identity-suite", "--rep", "trivial"]);
    assert_eq!(code, 0);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 36);
    for c in cases {
        assert!(c["relative_residual"].as_f64().unwrap() <= 1e-8, "{c}");
        assert_eq!(c["expectation_pass"], true);
    }
}
