//! End-to-end checks of the command-line surface.

use std::fs;
use std::path::Path;

use waveheat::cli::output::{energy_records_from_csv, ENERGY_HEADER};
use waveheat::cli::{run_with, EXIT_CONFIG, EXIT_OK, EXIT_VIOLATED};

const CONFIG: &str = "\
[params]
a = 0.5
b = 0.1
c = 4
d = 0.2
epsilon = 0.01
mu = 0.1

[grid]
nx = 20
t_final = 1
";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("waveheat").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["--version"]).0, EXIT_OK);
    assert_eq!(run(&[]).0, EXIT_CONFIG);
    assert_eq!(run(&["frobnicate"]).0, EXIT_CONFIG);
    assert_eq!(run(&["simulate", "--config", "/nonexistent/run.cfg"]).0, EXIT_CONFIG);
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[params]\na = 0.5\nbogus = 1\n");
    let (code, _, err) = run(&["validate", "--config", &cfg]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn validate_prints_every_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (code, out, _) = run(&["validate", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    for id in ["T1_1", "T1_3_i", "T1_3_ii", "T1_4"] {
        assert!(out.contains(id), "missing {id} in\n{out}");
    }
}

#[test]
fn simulate_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (code, out, _) = run(&["simulate", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some(ENERGY_HEADER));
    let records = energy_records_from_csv(&out).unwrap();
    assert_eq!(records.len(), 41);
    assert_eq!(records[0].t, 0.0);
    assert!((records.last().unwrap().t - 1.0).abs() < 1e-12);
    assert!(records.windows(2).all(|w| w[1].e <= w[0].e + 1e-12));

    let file = dir.path().join("layer.csv");
    let (code, out, _) = run(&["simulate", "--config", &cfg, "--system", "layer", "--out", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(fs::read_to_string(&file).unwrap().starts_with(ENERGY_HEADER));
}

#[test]
fn spectrum_is_stable_and_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (code, out, _) = run(&["spectrum", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    let re: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(re.len(), 3 * 20 + 1);
    assert!(re[0] < 0.0);
    assert!(re.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn tikhonov_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out_dir = dir.path().join("sweep");
    let (code, out, _) = run(&[
        "tikhonov", "--config", &cfg, "--eps-list", "0.1,0.05,0.025", "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("e_u_slope"));
    for name in ["summary.csv", "slopes.txt"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
}

#[test]
fn tikhonov_rejects_bad_eps_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out_dir = dir.path().join("sweep");
    let (code, _, _) = run(&["tikhonov", "--config", &cfg, "--eps-list", "0.1,-1", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn audit_flags_violations_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let file = dir.path().join("audit.csv");
    let (code, out, _) = run(&["audit", "--config", &cfg, "--out", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_VIOLATED);
    assert!(out.contains("layer_rate_printed") && out.contains("VIOLATED"));
    assert!(fs::read_to_string(&file).unwrap().contains("layer_rate_oracle"));
}

#[test]
fn inequalities_zero_trials_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (code, _, _) = run(&["inequalities", "--config", &cfg, "--trials", "0"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, out, _) = run(&["inequalities", "--config", &cfg, "--trials", "20", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("A4_i0"));
}
