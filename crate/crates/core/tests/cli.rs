use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mathieu-asym"))
        .args(args)
        .env_remove("MATHIEU_ASYM_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn zeta_values_and_pole() {
    let out = run(&["zeta", "--s", "2", "--a", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((f(&v["summary"]["value"]) - pi2_6).abs() < 1e-10);
    assert!(f(&v["summary"]["abs_error"]) <= 1e-10);
    assert_eq!(v["schema_version"], "1");

    let out = run(&["zeta", "--s", "1", "--a", "1", "--alt"]);
    assert_eq!(code(&out), 0);
    assert!((f(&json(&out)["summary"]["value"]) - std::f64::consts::LN_2).abs() < 1e-10);

    let out = run(&["zeta", "--s", "1", "--a", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole at s=1"));
}

#[test]
fn zeta_accepts_negative_arguments() {
    let out = run(&["zeta", "--s", "-1", "--a", "1"]);
    assert_eq!(code(&out), 0);
    assert!((f(&json(&out)["summary"]["value"]) + 1.0 / 12.0).abs() < 1e-10);
}

#[test]
fn eval_examples() {
    let out = run(&["eval", "--family", "S", "--x", "0", "--a", "1", "--gamma", "1", "--alpha", "2", "--mu", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((f(&v["summary"]["value"]) - 1.202_056_903_159_594_3).abs() < 1e-10);
    assert!(v["summary"]["terms_used"].as_u64().is_some());

    // Σ e^{-nx} = 1/(e^x − 1)
    let out = run(&["eval", "--family", "f", "--x", "1", "--a", "1", "--gamma", "0", "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    let expected = 1.0 / (1f64.exp() - 1.0);
    let v = json(&out);
    assert!((f(&v["summary"]["value"]) - expected).abs() <= f(&v["summary"]["abs_error_bound"]) + 1e-15);

    let out = run(&["eval", "--family", "g", "--x", "1", "--a", "1", "--gamma", "0", "--alpha", "1", "--mu", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));
}

#[test]
fn eval_missing_mu_and_bad_family() {
    let out = run(&["eval", "--family", "g", "--x", "1", "--a", "1", "--gamma", "0", "--alpha", "1"]);
    assert_eq!(code(&out), 2);
    let out = run(&["eval", "--family", "h", "--x", "1", "--a", "1", "--gamma", "0", "--alpha", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn eval_budget_exceeded_exit_three() {
    let out = run(&[
        "eval",
        "--family",
        "g",
        "--x",
        "1e-7",
        "--a",
        "1",
        "--gamma",
        "1",
        "--alpha",
        "1",
        "--mu",
        "3",
        "--max-terms",
        "1000",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["summary"]["budget_exceeded"], true);
}

#[test]
fn expand_examples() {
    let out = run(&["expand", "--family", "f", "--a", "1", "--gamma", "1", "--alpha", "2", "--terms", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((f(&v["summary"]["head"]["coefficient"]) - 0.5).abs() < 1e-15);
    assert!((f(&v["summary"]["head"]["exponent"]) + 1.0).abs() < 1e-15);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["k"], 0);
    assert!((f(&rows[0]["coefficient"]) + 1.0 / 12.0).abs() < 1e-14);
    assert!((f(&rows[1]["coefficient"]) + 1.0 / 120.0).abs() < 1e-14);

    let out = run(&["expand", "--family", "f", "--a", "1", "--gamma", "-1", "--alpha", "1", "--terms", "1"]);
    let v = json(&out);
    let lb = &v["summary"]["log_block"];
    assert_eq!(lb["r"], 0);
    assert!((f(&lb["c_log"]) + 1.0).abs() < 1e-15);
    assert!(f(&lb["c_const"]).abs() < 1e-14);

    let out = run(&["expand", "--family", "falt", "--a", "1", "--gamma", "0", "--alpha", "1", "--terms", "0"]);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!((f(&rows[0]["coefficient"]) - 0.5).abs() < 1e-15);
}

#[test]
fn expand_at_point_matches_direct() {
    let out =
        run(&["expand", "--family", "f", "--a", "1", "--gamma", "-1", "--alpha", "1", "--terms", "30", "--at", "1"]);
    let v = json(&out);
    let expected = -(1.0 - (-1.0f64).exp()).ln();
    assert!((f(&v["summary"]["value"]) - expected).abs() < 1e-12);
    let out = run(&[
        "expand", "--family", "f", "--a", "1", "--gamma", "1", "--alpha", "2", "--terms", "10", "--at", "0.5", "--n",
        "3",
    ]);
    assert_eq!(json(&out)["summary"]["n_used"], 3);
}

#[test]
fn expand_rejects_s_family() {
    let out = run(&["expand", "--family", "S", "--a", "1", "--gamma", "1", "--alpha", "2", "--mu", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compare_inside_convergence_interval() {
    let out = run(&[
        "compare",
        "--family",
        "falt",
        "--a",
        "1",
        "--gamma",
        "0",
        "--alpha",
        "1",
        "--x-grid",
        "0.05:2:12",
        "--terms",
        "60",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        assert!(r["error"].is_null());
        assert!(f(&r["diff"]) <= 1e-10, "{r}");
        assert!(f(&r["bound"]) <= 1e-10, "{r}");
    }
}

#[test]
fn compare_empty_grid_and_csv() {
    let out = run(&[
        "compare", "--family", "f", "--a", "1", "--gamma", "1", "--alpha", "2", "--x-grid", "0.1:1:0", "--terms", "5",
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["rows"].as_array().unwrap().is_empty());

    let out = run(&[
        "compare",
        "--family",
        "f",
        "--a",
        "1",
        "--gamma",
        "1",
        "--alpha",
        "2",
        "--x-grid",
        "0.001:1:4",
        "--terms",
        "5",
        "--csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    for col in ["x", "direct", "expansion", "diff", "bound"] {
        assert!(headers.iter().any(|h| h == col), "missing {col} in {headers:?}");
    }
    let diffs: Vec<f64> =
        rdr.records().map(|r| r.unwrap()[headers.iter().position(|h| h == "diff").unwrap()].parse().unwrap()).collect();
    assert_eq!(diffs.len(), 4);
    // remainder is O(x^{K+1}): smallest at the small-x end
    assert!(diffs[0] < diffs[3]);
}

#[test]
fn compare_linear_grid() {
    let out = run(&[
        "compare", "--family", "f", "--a", "1", "--gamma", "0", "--alpha", "1", "--x-grid", "1:3:3", "--linear",
        "--terms", "30",
    ]);
    let v = json(&out);
    let xs: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| f(&r["x"])).collect();
    assert_eq!(xs.len(), 3);
    assert!((xs[1] - 2.0).abs() < 1e-14);
}

#[test]
fn constants_examples() {
    let out = run(&["constants", "--kind", "A", "--shift", "0", "--a", "1", "--gamma", "1", "--alpha", "2"]);
    assert_eq!(code(&out), 0);
    assert!((f(&json(&out)["summary"]["value"]) - 0.5).abs() < 1e-9);

    let out = run(&["constants", "--kind", "A", "--shift", "2", "--a", "1", "--gamma", "1", "--alpha", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["summary"]["value"], "+inf");
    assert!(v["summary"]["reason"].as_str().unwrap().contains("p >= a^alpha"));

    let out = run(&["constants", "--kind", "A", "--a", "1", "--gamma", "-1.5", "--alpha", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn constants_classical() {
    let out = run(&["constants", "--classical"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let zeta3 = 1.202_056_903_159_594_3;
    assert!((f(&v["summary"]["q_sharp"]) - 0.5 / zeta3).abs() < 1e-9);
    assert!((f(&v["summary"]["p_sharp"]) - 1.0 / 6.0).abs() < 1e-4);
}

#[test]
fn verify_exit_codes() {
    // classical two-sided bound with the sharp constants
    let out = run(&[
        "verify",
        "--ineq",
        "n2",
        "--a",
        "1",
        "--gamma",
        "1",
        "--alpha",
        "2",
        "--upper",
        "0.5",
        "--lower",
        "0.5",
        "--p-shift",
        "0",
        "--q-shift",
        "1",
        "--mu-list",
        "2,3,5",
        "--x-grid",
        "0.01:100:9",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // n1 with C=1, F=-inf fails at large x
    let out = run(&[
        "verify",
        "--ineq",
        "n1",
        "--a",
        "1",
        "--gamma",
        "9",
        "--alpha",
        "2",
        "--upper",
        "1",
        "--lower",
        "-inf",
        "--p-shift",
        "1",
        "--q-shift",
        "0",
        "--mu-list",
        "5",
        "--x-grid",
        "0.1:10000:9",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let viol: Vec<u64> = v["summary"]["violations"].as_array().unwrap().iter().map(|i| i.as_u64().unwrap()).collect();
    assert!(viol.contains(&8), "{viol:?}");

    // n3 with q < a^α
    let out = run(&[
        "verify",
        "--ineq",
        "n3",
        "--a",
        "1",
        "--gamma",
        "-2",
        "--alpha",
        "1",
        "--upper",
        "1.6449340668482264",
        "--lower",
        "1",
        "--p-shift",
        "1",
        "--q-shift",
        "0.5",
        "--mu-list",
        "0.1,0.5,1,3,10",
        "--x-grid",
        "0.001:1000:25",
    ]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));

    let out = run(&[
        "verify",
        "--ineq",
        "n4",
        "--a",
        "1",
        "--gamma",
        "1",
        "--alpha",
        "2",
        "--upper",
        "1",
        "--lower",
        "0",
        "--mu-list",
        "2",
        "--x-grid",
        "1:2:2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "compare",
        "--family",
        "g",
        "--a",
        "0.5",
        "--gamma",
        "0.5",
        "--alpha",
        "1.5",
        "--mu",
        "2",
        "--x-grid",
        "0.01:10:7",
        "--terms",
        "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"schema_version\":\"1\""));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mathieu-asym"))
        .args(["zeta", "--s", "3", "--a", "1"])
        .env("MATHIEU_ASYM_TOL", "1e-4")
        .output()
        .unwrap();
    let v = json(&out);
    assert!((f(&v["inputs"]["tol"]) / 1e-4 - 1.0).abs() < 1e-12);
    let out = run(&["zeta", "--s", "3", "--a", "1", "--tol", "1e-12"]);
    assert!((f(&json(&out)["inputs"]["tol"]) / 1e-12 - 1.0).abs() < 1e-12);
}
