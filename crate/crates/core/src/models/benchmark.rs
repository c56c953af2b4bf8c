//! Constant-coefficient 2x2 benchmark: `Lambda = diag(1, -1)`,
//! `Pi = [[0.3, -0.1], [-0.1, 0.3]]`, `M = I`, initial state `(-0.5, 0.5)`
//! and the standard boundary pulse `b = (d, -d)`.

use crate::error::Result;
use crate::scenario::{
    BoundarySpec, DisturbanceSpec, GridSpec, InitialSpec, KappaSpec, ModelSpec, Scenario, ScenarioSpec, WeightsSpec,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkConfig {
    pub cells: usize,
    pub cfl: f64,
    pub final_time: f64,
    pub mu: f64,
    pub xi: f64,
    pub kappa12: f64,
    pub kappa21: f64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            cells: 1600,
            cfl: 0.75,
            final_time: 10.0,
            mu: 0.575,
            xi: 0.125,
            kappa12: 0.5,
            kappa21: 0.5,
        }
    }
}

pub fn linear_benchmark_spec(cfg: &BenchmarkConfig) -> ScenarioSpec {
    ScenarioSpec {
        name: "linear benchmark".into(),
        grid: GridSpec {
            length: 1.0,
            cells: cfg.cells,
            final_time: cfg.final_time,
            cfl: cfg.cfl,
        },
        model: ModelSpec::Linear2x2 {
            lambda: vec![1.0, -1.0],
            gamma: vec![vec![0.3, -0.1], vec![-0.1, 0.3]],
        },
        weights: WeightsSpec::Exponential {
            p_plus: vec![1.0],
            p_minus: vec![1.0],
            mu: cfg.mu,
        },
        xi: cfg.xi,
        boundary: BoundarySpec {
            feedback: None,
            injection: Some(vec![1.0, 1.0]),
            disturbance: DisturbanceSpec::Pulse {
                amplitude: 0.01,
                cutoff: 5.0,
                direction: vec![1.0, -1.0],
            },
        },
        initial: InitialSpec::Constant { values: vec![-0.5, 0.5] },
        gamma_override: None,
        kappa: Some(KappaSpec {
            kappa12: cfg.kappa12,
            kappa21: cfg.kappa21,
            kappa21_times_exp_minus_mu: false,
        }),
    }
}

pub fn build_linear_benchmark(cfg: &BenchmarkConfig) -> Result<Scenario> {
    linear_benchmark_spec(cfg).build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build() {
        let sc = build_linear_benchmark(&BenchmarkConfig {
            cells: 100,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(sc.coefficients.lambda(5), &[1.0, -1.0]);
        assert_eq!(sc.coefficients.disturbance().value(4.5), vec![0.01, -0.01]);
        assert_eq!(sc.coefficients.disturbance().value(5.0), vec![0.0, 0.0]);
        assert_eq!(sc.grid.dt(), 0.75 / 100.0);
    }
}
