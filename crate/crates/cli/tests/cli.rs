use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn msd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msd")).args(args).env_remove("MSD_OUTPUT_DIR").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn header(text: &str) -> &str {
    text.lines().find(|l| !l.starts_with('#')).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn t_distance(row: &[String]) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ((f(&row[1]) - s).powi(2) + (f(&row[2]) - s).powi(2) + f(&row[3]).powi(2)).sqrt()
}

#[test]
fn iterate_above_threshold_converges_with_an_infidelity_cap() {
    let text = stdout(&msd(&["iterate", "--code", "15-1-3-canonical", "--beta", "2", "--input", "depolarized-T:0.1"]));
    assert!(text.starts_with("# msd "));
    assert!(text.lines().next().unwrap().contains("--beta 2"));
    assert_eq!(header(&text), "step,x,y,z,p_succ");
    let r = rows(&text);
    let first = t_distance(&r[0]);
    let last = t_distance(r.last().unwrap());
    assert!(last < first);
    // The noisy target sits a finite distance from |T⟩.
    assert!(last > 1e-3, "{last}");
    assert!(r.last().unwrap()[4].is_empty());
    assert!(text.contains("NontrivialFixedPoint"));
}

#[test]
fn iterate_below_threshold_decays_to_the_origin() {
    let text = stdout(&msd(&["iterate", "--code", "15-1-3-canonical", "--beta", "1"]));
    let norms: Vec<f64> = rows(&text).iter().map(|r| (1..4).map(|i| f(&r[i]).powi(2)).sum::<f64>().sqrt()).collect();
    assert!(norms.windows(2).all(|w| w[1] < w[0]));
    assert!(*norms.last().unwrap() < 1e-6);
}

#[test]
fn iterate_ideal_reaches_t() {
    let text = stdout(&msd(&["iterate", "--code", "15-1-3-canonical", "--lambda", "1"]));
    assert!(t_distance(rows(&text).last().unwrap()) < 1e-12);
}

#[test]
fn flow_smoke_and_basins() {
    let text = stdout(&msd(&["flow", "--code", "15-1-3-canonical", "--beta", "2", "--resolution", "2"]));
    assert_eq!(header(&text), "x,y,z,x1,y1,z1,p,basin");
    assert_eq!(rows(&text).len(), 4);

    let count = |beta: &str| {
        let text = stdout(&msd(&["flow", "--code", "15-1-3-canonical", "--beta", beta, "--resolution", "15"]));
        rows(&text).iter().filter(|r| r[7] == "nontrivial").count()
    };
    assert!(count("2") > 0);
    assert_eq!(count("1"), 0);
}

#[test]
fn threshold_json() {
    let text = stdout(&msd(&["threshold", "--code", "15-1-3-canonical"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    let beta = v["threshold"]["beta_star"].as_f64().unwrap();
    assert!((beta - 1.74).abs() < 0.05, "{beta}");
    assert!(v["threshold"]["eigen_trace"].as_array().unwrap().len() > 5);
    assert_eq!(v["provenance"]["tool"], "msd");
    assert_eq!(v["provenance"]["args"][0], "threshold");
}

#[test]
fn deviation_fit_for_standard_form() {
    let text = stdout(&msd(&["deviation", "--code", "15-1-3-standard", "--beta", "2.5:4:7", "--fit"]));
    assert_eq!(header(&text), "beta,lambda,rx,ry,rz,mx,my,zres,k_prime,dom_eig");
    assert_eq!(rows(&text).len(), 7);
    let line = text.lines().find(|l| l.starts_with("# fit distance")).unwrap();
    let slope: f64 = line.split_whitespace().find_map(|w| w.strip_prefix("slope=")).unwrap().parse().unwrap();
    assert!((slope + 6.0).abs() < 0.3, "{slope}");
}

#[test]
fn deviation_below_threshold_is_a_domain_failure() {
    let out = msd(&["deviation", "--code", "15-1-3-canonical", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convergence_sweep_keeps_input_order_across_job_counts() {
    let run = |jobs: &str| {
        let text = stdout(&msd(&["convergence", "--code", "14-2-2-canonical", "--beta", "1.5:3:7", "--jobs", jobs]));
        text.lines().skip(1).collect::<Vec<_>>().join("\n")
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let r = rows(&one);
    assert_eq!(r[0][0], "1.5");
    // β* ≈ 1.89, so the first two points have no target state.
    assert!(r[0][8].is_empty() && r[1][8].is_empty());
    let k: Vec<f64> = r[2..].iter().map(|r| f(&r[8])).collect();
    assert!(k.windows(2).all(|w| w[1] < w[0]) && k.iter().all(|&k| k > 0.0 && k < 1.0));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["flow", "--code", "14-2-2-canonical", "--beta", "2.5", "--resolution", "9"];
    assert_eq!(stdout(&msd(&args)), stdout(&msd(&args)));
}

#[test]
fn cost_linear_example() {
    let text =
        stdout(&msd(&["cost", "--n", "15", "--k", "1", "--k-prime", "0.5", "--eps-raw", "1e-2", "--eps", "1e-6"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["cost"]["levels"], 14);
    assert_eq!(v["cost"]["cost_exact"].as_u64(), Some(15u64.pow(14)));
    assert!((v["cost"]["smooth_levels"].as_f64().unwrap() - 13.2877).abs() < 1e-3);
    assert!((v["tau"].as_f64().unwrap() - 3.9069).abs() < 1e-4);
}

#[test]
fn cost_from_measured_rate() {
    let text =
        stdout(&msd(&["cost", "--code", "15-1-3-canonical", "--beta", "3", "--eps-raw", "1e-2", "--eps", "1e-6"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    let k = v["measured_rate"]["trajectory_estimate"].as_f64().unwrap();
    assert_eq!(v["cost"]["query"]["regime"]["k_prime"].as_f64().unwrap(), k);
    assert!(k > 0.0 && k < 1.0);
}

#[test]
fn standard_form_report_and_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("std.code");
    let text = stdout(&msd(&["standard-form", "--code", "14-2-2-canonical", "--code-out", out.to_str().unwrap()]));
    let v: Value = serde_json::from_str(&text).unwrap();
    let d = v["destabilizers"].as_array().unwrap();
    assert_eq!(d.len(), 12);
    for check in ["block_structure", "replay_matches", "destabilizers_weight_one", "destabilizer_supports_distinct"] {
        assert_eq!(v["checks"][check], true, "{check}");
    }
    // The converted code loads back as a valid [[14,2]] code.
    let again = stdout(&msd(&["standard-form", "--code", out.to_str().unwrap()]));
    let w: Value = serde_json::from_str(&again).unwrap();
    assert_eq!((w["n"].as_u64(), w["k"].as_u64()), (Some(14), Some(2)));
}

#[test]
fn oracle_check_passes_and_fails_by_tolerance() {
    let text = stdout(&msd(&["oracle-check"]));
    assert_eq!(header(&text), "code,lambda,input,max_diff,pass");
    assert!(rows(&text).iter().all(|r| r[4] == "true"));
    let out = msd(&["oracle-check", "--code", "5-1-3", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_msd"))
        .args(["iterate", "--code", "5-1-3", "--lambda", "0.5", "-o", "sub/traj.csv"])
        .env("MSD_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(dir.path().join("sub/traj.csv")).unwrap();
    assert_eq!(header(&written), "step,x,y,z,p_succ");
    assert!(!Path::new("sub/traj.csv").exists());
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["iterate", "--code", "15-1-3-canonical", "--beta", "1", "--lambda", "0.5"],
        vec!["iterate", "--code", "no-such-code", "--beta", "1"],
        vec!["iterate", "--code", "15-1-3-canonical", "--beta", "1:2:3"],
        vec!["iterate", "--code", "15-1-3-canonical", "--eta", "1.5"],
        vec!["iterate", "--code", "15-1-3-canonical", "--beta", "1", "--input", "bloch:1,1,1"],
        vec!["flow", "--code", "15-1-3-canonical", "--beta", "1", "--resolution", "1"],
        vec!["iterate", "--code", "14-2-2-canonical", "--beta", "2", "--feedback", "2"],
        vec!["frobnicate"],
    ] {
        assert_eq!(msd(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(msd(&["--help"]).status.code(), Some(0));
}
