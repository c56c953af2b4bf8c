use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hypiss::models::{benchmark, euler, saint_venant};
use hypiss::ScenarioSpec;
use serde_json::Value;
use tempfile::TempDir;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn hypiss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypiss")).args(args).output().unwrap()
}

fn run_cmd(cmd: &str, scenario: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--scenario", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    hypiss(&args)
}

/// Writes `spec` on a coarser mesh into `dir` and returns the path.
fn coarse(dir: &TempDir, spec: &ScenarioSpec, cells: usize) -> PathBuf {
    let path = dir.path().join(format!("{cells}.toml"));
    fs::write(&path, spec.with_grid(cells, spec.grid.cfl).to_toml_string()).unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# hypiss-v1"));
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn shipped_scenarios_match_builtin_specs() {
    let load = |n: &str| ScenarioSpec::from_path(&scenario_path(n)).unwrap();
    assert_eq!(load("benchmark.toml"), benchmark::linear_benchmark_spec(&Default::default()));
    assert_eq!(load("euler.toml"), euler::example_spec(1600));
    for (mu, file) in [(0.01, "saint_venant_mu001.toml"), (0.05, "saint_venant_mu005.toml"), (0.1, "saint_venant_mu01.toml")] {
        assert_eq!(load(file), saint_venant::decay_example_spec(mu, 1600));
    }
}

#[test]
fn certify_benchmark_passes() {
    let out = TempDir::new().unwrap();
    let o = run_cmd("certify", &scenario_path("benchmark.toml"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let cert = json(&out.path().join("certificate.json"));
    let eta = cert["report"]["eta"].as_f64().unwrap();
    assert!((eta - 0.57479).abs() < 5e-6);
    assert!(fs::read_to_string(out.path().join("certificate.txt")).unwrap().contains("overall: pass"));
}

#[test]
fn certify_euler_fails_with_witness() {
    let out = TempDir::new().unwrap();
    let o = run_cmd("certify", &scenario_path("euler.toml"), out.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("witness: C2"), "{stdout}");
    assert_eq!(json(&out.path().join("certificate.json"))["report"]["failure"]["condition"], "C2");
}

#[test]
fn gain_above_bound_fails_at_c3() {
    let dir = TempDir::new().unwrap();
    let mut spec = benchmark::linear_benchmark_spec(&Default::default());
    spec.kappa.as_mut().unwrap().kappa12 = 0.95;
    let path = coarse(&dir, &spec, 1600);
    let o = run_cmd("certify", &path, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("witness: C3"));
}

#[test]
fn run_benchmark_is_dominated_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = coarse(&dir, &benchmark::linear_benchmark_spec(&Default::default()), 100);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run_cmd("run", &path, &a, &["--stride", "50"]).status.code(), Some(0));
    assert_eq!(run_cmd("run", &path, &b, &["--stride", "50"]).status.code(), Some(0));
    for f in ["trace.csv", "trajectory.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let summary = json(&a.join("summary.json"));
    assert!(summary["max_envelope_violation"].as_f64().unwrap() <= 0.0);
    let rows = csv_rows(&a.join("trace.csv"));
    assert_eq!(rows[0], ["n", "t", "L", "U", "sup_b_sq"]);
    assert_eq!(rows.len() - 1, summary["steps"].as_u64().unwrap() as usize + 1);
    let traj = csv_rows(&a.join("trajectory.csv"));
    assert_eq!(traj[0], ["n", "t", "j", "x", "w1", "w2"]);
}

#[test]
fn zero_data_gives_zero_trace() {
    let dir = TempDir::new().unwrap();
    let mut spec = benchmark::linear_benchmark_spec(&Default::default());
    spec.initial = Default::default();
    spec.boundary.disturbance = Default::default();
    let path = coarse(&dir, &spec, 50);
    let out = dir.path().join("out");
    assert_eq!(run_cmd("run", &path, &out, &[]).status.code(), Some(0));
    for row in csv_rows(&out.join("trace.csv")).iter().skip(1) {
        assert_eq!(row[2], "0.0");
    }
}

#[test]
fn failed_certificate_needs_force() {
    let dir = TempDir::new().unwrap();
    let path = coarse(&dir, &saint_venant::decay_example_spec(0.05, 1600), 100);
    let out = dir.path().join("out");
    let o = run_cmd("run", &path, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.join("trace.csv").exists());
    assert_eq!(run_cmd("run", &path, &out, &["--force"]).status.code(), Some(0));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["forced"], true);
    assert!(summary["final_lyapunov"].as_f64().unwrap() < 1e-3 * summary["initial_lyapunov"].as_f64().unwrap());
}

#[test]
fn table_reports_reference_deviation() {
    let out = TempDir::new().unwrap();
    let o = run_cmd("table", &scenario_path("benchmark.toml"), out.path(), &["--J-list", "200,400"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&out.path().join("table.csv"));
    assert_eq!(rows.len(), 3);
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    let sup: Vec<f64> = rows[1..].iter().map(|r| r[col("sup")].parse().unwrap()).collect();
    assert!(sup[1] < sup[0]);
    for r in &rows[1..] {
        let dev: f64 = r[col("dev_l2")].parse().unwrap();
        assert!(dev.abs() < 0.1);
        assert!(r[col("error")].is_empty());
    }
}

#[test]
fn table_rejects_unsorted_list() {
    let out = TempDir::new().unwrap();
    let o = run_cmd("table", &scenario_path("benchmark.toml"), out.path(), &["--J-list", "400,200"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_point_sweep_matches_certificate() {
    let out = TempDir::new().unwrap();
    let path = scenario_path("benchmark.toml");
    assert_eq!(run_cmd("sweep", &path, out.path(), &[]).status.code(), Some(0));
    assert_eq!(run_cmd("certify", &path, out.path(), &[]).status.code(), Some(0));
    let rows = csv_rows(&out.path().join("sweep.csv"));
    let cert = json(&out.path().join("certificate.json"));
    let bounds = &cert["report"]["boundary"]["kappa_bounds"];
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), bounds["kappa12_max"].as_f64().unwrap());
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), bounds["kappa21_max"].as_f64().unwrap());
    assert_eq!(rows[1][3].parse::<f64>().unwrap(), cert["report"]["nu"].as_f64().unwrap());

    let o = run_cmd("sweep", &path, out.path(), &["--xi-range", "1:1000:3"]);
    assert_eq!(o.status.code(), Some(0));
    let last = csv_rows(&out.path().join("sweep.csv")).pop().unwrap();
    assert!(last[1].parse::<f64>().unwrap() < 0.05);
}

#[test]
fn bad_inputs_exit_with_code_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.toml");
    let text = fs::read_to_string(scenario_path("benchmark.toml")).unwrap().replace("mu = 0.575", "mu = 0.575\nrate = 1");
    fs::write(&path, text).unwrap();
    let o = run_cmd("certify", &path, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rate"));

    let o = Command::new(env!("CARGO_BIN_EXE_hypiss"))
        .args(["sweep", "--scenario", scenario_path("benchmark.toml").to_str().unwrap(), "--out"])
        .arg(dir.path().join("out"))
        .env("HYPISS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
