//! Browser bindings: certify a scenario, simulate it, and sweep `xi`.
//!
//! Every entry point takes a scenario as TOML (or JSON when the text starts
//! with `{`) and returns a JSON string. The plain functions are usable from
//! Rust; the `#[wasm_bindgen]` wrappers turn errors into JS exceptions.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use hypiss::certifier::xi_sweep as sweep_rows;
use hypiss::models::{benchmark, euler, saint_venant};
use hypiss::{CertificateReport, LyapunovTrace, ScenarioSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest mesh accepted from the page, to keep the tab responsive.
pub const MAX_CELLS: usize = 2000;

fn parse(text: &str) -> Result<ScenarioSpec, String> {
    let parsed = if text.trim_start().starts_with('{') {
        ScenarioSpec::from_json_str(text)
    } else {
        ScenarioSpec::from_toml_str(text)
    };
    let spec = parsed.map_err(|e| e.to_string())?;
    if spec.grid.cells > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} cells in the browser, got {}", spec.grid.cells));
    }
    Ok(spec)
}

fn to_json(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Built-in scenarios as TOML: `benchmark`, `saint_venant` (with `mu`) and
/// `euler`.
pub fn preset_toml(name: &str, cells: usize, mu: f64) -> Result<String, String> {
    let spec = match name {
        "benchmark" => benchmark::linear_benchmark_spec(&benchmark::BenchmarkConfig {
            cells,
            mu,
            ..Default::default()
        }),
        "saint_venant" => saint_venant::decay_example_spec(mu, cells),
        "euler" => euler::example_spec(cells),
        other => return Err(format!("unknown preset {other:?}")),
    };
    Ok(spec.to_toml_string())
}

#[derive(Serialize)]
struct CertifyOut<'a> {
    text: String,
    notes: &'a [String],
    report: &'a CertificateReport,
}

pub fn certify_json(scenario: &str) -> Result<String, String> {
    let sc = parse(scenario)?.build().map_err(|e| e.to_string())?;
    let report = sc.certify().map_err(|e| e.to_string())?;
    to_json(&CertifyOut {
        text: report.to_text(),
        notes: &sc.notes,
        report: &report,
    })
}

#[derive(Serialize)]
struct SimulateOut {
    certified: bool,
    witness: Option<String>,
    eta: f64,
    nu: f64,
    times: Vec<f64>,
    lyapunov: Vec<f64>,
    /// Empty when the envelope is undefined (`eta dt >= 1` or `eta <= 0`).
    envelope: Vec<f64>,
    max_violation: Option<f64>,
}

/// Runs the scenario regardless of the certificate and returns at most
/// `max_points` evenly strided samples of `L` and `U` (the last level is
/// always included).
pub fn simulate_json(scenario: &str, max_points: usize) -> Result<String, String> {
    let sc = parse(scenario)?.build().map_err(|e| e.to_string())?;
    let report = sc.certify().map_err(|e| e.to_string())?;
    let run = sc.run(None).map_err(|e| e.to_string())?;
    let trace = LyapunovTrace::from_run(&run, report.eta, report.nu, sc.xi, &sc.grid).ok();
    let levels = run.times.len();
    let stride = levels.div_ceil(max_points.max(2) - 1).max(1);
    let mut idx: Vec<usize> = (0..levels).step_by(stride).collect();
    if idx.last() != Some(&(levels - 1)) {
        idx.push(levels - 1);
    }
    let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
    to_json(&SimulateOut {
        certified: report.passed,
        witness: report.failure.as_ref().map(|w| w.to_string()),
        eta: report.eta,
        nu: report.nu,
        times: pick(&run.times),
        lyapunov: pick(&run.lyapunov),
        envelope: trace.as_ref().map(|t| pick(&t.envelope)).unwrap_or_default(),
        max_violation: trace.as_ref().map(LyapunovTrace::max_violation),
    })
}

/// `steps` values of `xi` spaced evenly over `[lo, hi]`.
pub fn xi_sweep_json(scenario: &str, lo: f64, hi: f64, steps: usize) -> Result<String, String> {
    if !(lo > 0.0) || !(hi >= lo) || steps == 0 {
        return Err(format!("need 0 < lo <= hi and steps >= 1, got {lo}, {hi}, {steps}"));
    }
    let sc = parse(scenario)?.build().map_err(|e| e.to_string())?;
    let xis: Vec<f64> = if steps == 1 {
        vec![lo]
    } else {
        (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
    };
    let rows = sweep_rows(&sc.coefficients, &sc.weights, &sc.grid, &xis).map_err(|e| e.to_string())?;
    to_json(&rows)
}

#[wasm_bindgen]
pub fn preset(name: &str, cells: usize, mu: f64) -> Result<String, JsError> {
    preset_toml(name, cells, mu).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(scenario: &str) -> Result<String, JsError> {
    certify_json(scenario).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(scenario: &str, max_points: usize) -> Result<String, JsError> {
    simulate_json(scenario, max_points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn xi_sweep(scenario: &str, lo: f64, hi: f64, steps: usize) -> Result<String, JsError> {
    xi_sweep_json(scenario, lo, hi, steps).map_err(|e| JsError::new(&e))
}
