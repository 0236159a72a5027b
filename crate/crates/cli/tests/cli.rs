use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rhls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rhls_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhls"))
        .env("RHLS_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_radial(path: &Path) {
    let h = 24.0 / 256.0;
    let mut s = String::from("# rhls radial n=1\nlog_radius,weight,value\n");
    for k in -256i32..=256 {
        let u = k as f64 * h;
        let r = u.exp();
        s += &format!("{u:e},{:e},{:e}\n", 2.0 * r * h, (1.0 + r * r).powf(-1.5));
    }
    fs::write(path, s).unwrap();
}

#[test]
fn constant_json() {
    let out = rhls(&["constant", "--n", "1", "--alpha", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "rhls/1");
    let ns = v["n_star"].as_f64().unwrap();
    let want = 2.0 / std::f64::consts::PI.powi(2);
    assert!((ns - want).abs() < 1e-12 * want, "{ns}");
    assert!((v["kernel_integral"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert!(v["cross_check_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn alpha_below_n_is_a_usage_error() {
    let out = rhls(&["constant", "--n", "2", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_check_is_a_usage_error() {
    let out = rhls(&["verify", "--n", "1", "--alpha", "2", "--which", "cauchy"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = rhls_threads("zero", &["constant", "--n", "1", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let out = rhls(&["verify", "--n", "1", "--alpha", "2", "--seeds", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["schema"], "rhls/1");
    assert_eq!(v["all_pass"], true);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4 * 10 + 2 + 10 + 10 + 2);
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["verify", "--n", "2", "--alpha", "3", "--seeds", "4", "--which", "hls"];
    let one = rhls_threads("1", &args);
    let four = rhls_threads("4", &args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn minimize_reaches_sharp_constant() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = rhls(&[
        "minimize",
        "--n",
        "1",
        "--alpha",
        "2",
        "--nodes",
        "64",
        "--seed",
        "3",
        "--json",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["gap"].as_f64().unwrap() < 1e-6);
    let text = fs::read_to_string(&trace).unwrap();
    let q: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(q.windows(2).all(|w| w[1] <= w[0] + 1e-14));
}

#[test]
fn apply_split_parts_add_up() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    write_radial(&input);
    let read = |name: &str, extra: &[&str]| -> Vec<f64> {
        let path = dir.path().join(name);
        let mut args = vec!["apply", "--n", "1", "--alpha", "2", "--input", input.to_str().unwrap()];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--output", path.to_str().unwrap()]);
        assert_eq!(rhls(&args).status.code(), Some(0));
        fs::read_to_string(&path)
            .unwrap()
            .lines()
            .skip(2)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect()
    };
    let full = read("full.csv", &[]);
    let near = read("near.csv", &["--split", "1", "--part", "near"]);
    let far = read("far.csv", &["--split", "1", "--part", "far"]);
    for k in 0..full.len() {
        assert!((near[k] + far[k] - full[k]).abs() <= 1e-6 * full[k], "node {k}");
    }
}

#[test]
fn lift_and_norms() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    let lifted = dir.path().join("z.csv");
    write_radial(&input);
    let out = rhls(&[
        "lift",
        "--n",
        "1",
        "--alpha",
        "2",
        "--input",
        input.to_str().unwrap(),
        "--output",
        lifted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&lifted).unwrap().starts_with("# rhls zonal n=1\n"));
    // The lift is an isometry of the critical p-norm.
    let norm = |path: &Path| {
        json(&rhls(&[
            "norm",
            "--p",
            "0.6666666666666666",
            "--input",
            path.to_str().unwrap(),
            "--json",
        ]))["norm"]
            .as_f64()
            .unwrap()
    };
    let (a, b) = (norm(&input), norm(&lifted));
    assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");

    let lc = json(&rhls(&[
        "layercake",
        "--r",
        "-2",
        "--input",
        input.to_str().unwrap(),
        "--json",
    ]));
    assert!(lc["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(
        rhls(&["layercake", "--r", "2", "--input", input.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn kelvin_and_el() {
    let k = json(&rhls(&[
        "kelvin", "--n", "2", "--alpha", "3", "--lambda", "1.7", "--json",
    ]));
    assert!(k["self_inversion_residual"].as_f64().unwrap() <= 1e-12);
    let out = rhls(&["el", "--n", "1", "--alpha", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let c1 = json(&out)["c1"].as_f64().unwrap();
    assert!((c1 - 2f64.powf(0.25)).abs() < 1e-9);
}

#[test]
fn sweep_csv() {
    let out = rhls(&[
        "sweep",
        "--n",
        "1",
        "--alpha-min",
        "2",
        "--alpha-max",
        "3",
        "--steps",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,n_star");
    assert_eq!(lines.len(), 4);
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 2.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
}
