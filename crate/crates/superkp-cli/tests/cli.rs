use std::io::Write;
use std::process::{Command, Output, Stdio};

use num_complex::Complex64;
use serde_json::{json, Value};
use superkp::jacobian::PeriodData;
use superkp::matrix::LambdaMatrix;
use superkp::{random, GrassmannScalar, Parity};

fn superkp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_superkp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn run_json(args: &[&str], input: &Value) -> Value {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let out = superkp(&full, Some(&input.to_string()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scalar(v: &Value) -> GrassmannScalar {
    serde_json::from_value(v.clone()).unwrap()
}

fn to_value(x: &impl serde::Serialize) -> Value {
    serde_json::to_value(x).unwrap()
}

fn example_matrix() -> Value {
    let n = 2;
    let one = GrassmannScalar::one(n);
    let b = |i| GrassmannScalar::generator(n, i);
    json!({ "rows": [1, 1], "cols": [1, 1], "entries": [[to_value(&one), to_value(&b(0))], [to_value(&b(1)), to_value(&one)]] })
}

fn period_data(seed: u64) -> PeriodData {
    let mut rng = random::rng(seed);
    let z_e = random::symmetric_period_matrix(&mut rng, 3, 3, 1.0, 0.3);
    let z_o = LambdaMatrix::from_fn(3, 3, 2, |_, _| random::soul(&mut rng, 3, Parity::Odd, 0.5));
    PeriodData::new(z_e, z_o).unwrap()
}

#[test]
fn berezinian_of_the_example_matrix() {
    let out = run_json(&["ber"], &example_matrix());
    let ber = scalar(&out["ber"]);
    let b12 = &GrassmannScalar::generator(2, 0) * &GrassmannScalar::generator(2, 1);
    assert!(ber.approx_eq(&(&GrassmannScalar::one(2) - &b12), 1e-15));
    assert!((&ber * &scalar(&out["ber_star"])).approx_eq(&GrassmannScalar::one(2), 1e-15));
}

#[test]
fn quasideterminant_uses_one_based_indices() {
    let out = run_json(&["quasidet", "--i", "1", "--j", "1"], &example_matrix());
    let b12 = &GrassmannScalar::generator(2, 0) * &GrassmannScalar::generator(2, 1);
    assert!(scalar(&out["quasideterminant"]).approx_eq(&(&GrassmannScalar::one(2) - &b12), 1e-15));
    let bad = superkp(&["quasidet", "--i", "0", "--j", "1", "--json", "-"], Some(&example_matrix().to_string()));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn solve_matches_the_defining_equation() {
    let mut rng = random::rng(4);
    let a = random::even_supermatrix(&mut rng, (2, 1), 3, 0.5);
    let y = random::row_vector(&mut rng, 3, 3, 1.0);
    let out = run_json(&["solve"], &json!({ "matrix": to_value(&a), "rhs": to_value(&y) }));
    let x: Vec<GrassmannScalar> = serde_json::from_value(out["x"].clone()).unwrap();
    let back = a.matrix().left_apply(&x);
    assert!(back.iter().zip(&y).all(|(p, q)| p.approx_eq(q, 1e-10)));
    assert!(out["oracle_difference"].as_f64().unwrap() < 1e-10);
}

#[test]
fn riemann_roch_example() {
    let out = superkp(&["rr", "--degL", "3", "--g", "2", "--degN", "0"], None);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["superdimension"], "(2|2)");
    let neg = superkp(&["rr", "--degL", "-1", "--g", "1", "--degN", "-2"], None);
    let v: Value = serde_json::from_slice(&neg.stdout).unwrap();
    assert_eq!((v["even"].as_i64(), v["odd"].as_i64()), (Some(-1), Some(-3)));
}

#[test]
fn theta_and_super_theta() {
    let n = 2;
    let tau = GrassmannScalar::scalar(n, Complex64::new(0.1, 1.1));
    let z = GrassmannScalar::scalar(n, Complex64::new(0.2, 0.1));
    let out = run_json(&["theta"], &json!({ "period_matrix": [[to_value(&tau)]], "z": [to_value(&z)], "characteristic": "11" }));
    assert!(scalar(&out["value"]).max_abs() > 1e-3);
    let zero = run_json(&["theta"], &json!({ "period_matrix": [[to_value(&tau)]], "z": [to_value(&GrassmannScalar::zero(n))], "characteristic": "11" }));
    assert!(scalar(&zero["value"]).max_abs() < 1e-12);

    let pd = period_data(3);
    let mut rng = random::rng(5);
    let zs: Vec<GrassmannScalar> = (0..3).map(|_| GrassmannScalar::scalar(3, random::complex(&mut rng, 0.3))).collect();
    let eta: Vec<GrassmannScalar> = (0..2).map(|_| random::soul(&mut rng, 3, Parity::Odd, 0.5)).collect();
    let input = json!({
        "period_matrix": to_value(&pd.z_e().to_rows()),
        "odd_periods": to_value(&pd.z_o().to_rows()),
        "alphas": [1, 0],
        "z": to_value(&zs),
        "eta": to_value(&eta),
    });
    let out = run_json(&["super-theta"], &input);
    assert!(out["multipliers"]["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn period_subcommands() {
    let pd = period_data(8);
    let q = run_json(&["period-q"], &to_value(&pd));
    assert_eq!(q["matches_product"], true);
    assert_eq!(q["projectedness"]["projected"], false);
    let d = run_json(&["dual-cohomology"], &to_value(&pd));
    assert_eq!(d["rank_nullity"], true);
    let b = run_json(&["bilinear-check"], &json!({ "period_data": to_value(&pd) }));
    assert_eq!(b["passed"], true);
    let stray = json!({ "a": to_value(&vec![GrassmannScalar::one(3); 3]), "b": to_value(&vec![GrassmannScalar::one(3); 3]) });
    let b = run_json(&["bilinear-check"], &json!({ "period_data": to_value(&pd), "omegas": [stray] }));
    assert_eq!(b["passed"], false);
}

#[test]
fn sgr_output_is_reproducible() {
    let input = json!({
        "window_M": 6,
        "frame": { "kind": "generic", "n": 2, "seed": 3 },
        "flows": { "n": 2, "times": [
            { "index": "1", "value": { "n": 2, "terms": [{ "mask": [], "re": 0.2, "im": 0.0 }] } },
            { "index": "1/2", "value": { "n": 2, "terms": [{ "mask": [1], "re": 0.3, "im": 0.0 }] } }
        ] }
    })
    .to_string();
    let first = superkp(&["sgr-tau", "--json", "-"], Some(&input));
    let second = superkp(&["sgr-tau", "--json", "-"], Some(&input));
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let t = scalar(&v["tau"]["finite"]);
    let s = scalar(&v["tau_star"]["finite"]);
    assert!((&t * &s).approx_eq(&GrassmannScalar::one(2), 1e-10));

    let baker = superkp(&["sgr-baker", "--json", "-"], Some(&input));
    let v: Value = serde_json::from_slice(&baker.stdout).unwrap();
    assert!(v["route_difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn elliptic_report() {
    let out = superkp(&["tau-elliptic", "--tau", "0,2", "--a", "0.21,0.3", "--zeta", "-0.05,0.02", "--alpha-delta-scale", "1,0"], None);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["ber_check_residual"].as_f64().unwrap() < 1e-6);
    assert!(scalar(&v["tau_ratio"]).coeff(0b11).norm() > 1e-6);
}

#[test]
fn error_exit_codes() {
    assert_eq!(superkp(&["ber", "--json", "-"], Some("{not json")).status.code(), Some(2));
    assert_eq!(superkp(&["ber", "--json", "/nonexistent/file.json"], None).status.code(), Some(2));
    let singular = json!({ "rows": [1, 0], "cols": [1, 0], "entries": [[{ "n": 0, "terms": [] }]] });
    assert_eq!(superkp(&["ber", "--json", "-"], Some(&singular.to_string())).status.code(), Some(3));
    let zero = superkp(&["tau-elliptic", "--a", "0,0", "--zeta", "0.1,0"], None);
    assert_eq!(zero.status.code(), Some(3));
    assert_eq!(superkp(&["rr", "--degL", "1", "--g", "2", "--degN", "0", "--tol", "0"], None).status.code(), Some(2));
}

#[test]
fn acceptance_suite_passes_and_is_reproducible() {
    let first = superkp(&["acceptance", "--seed", "7"], None);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    let stderr = String::from_utf8_lossy(&first.stderr);
    assert_eq!(stderr.lines().filter(|l| l.contains("[PASS]")).count(), 10);
    let second = superkp(&["acceptance", "--seed", "7"], None);
    assert_eq!(first.stdout, second.stdout);
}
