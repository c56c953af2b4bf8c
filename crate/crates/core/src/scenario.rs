//! Scenario files (TOML or JSON) and their assembly into a runnable,
//! certifiable problem.
//!
//! ```toml
//! name = "benchmark"
//! xi = 0.125
//!
//! [grid]
//! length = 1.0
//! cells = 1600
//! final_time = 10.0
//! cfl = 0.75
//!
//! [model]
//! kind = "linear2x2"          # or "saint_venant", "isothermal_euler"
//! lambda = [1.0, -1.0]
//! gamma = [[0.3, -0.1], [-0.1, 0.3]]
//!
//! [weights]
//! kind = "exponential"
//! p_plus = [1.0]
//! p_minus = [1.0]
//! mu = 0.575
//!
//! [kappa]                     # also accepted as [kappa_override]
//! kappa12 = 0.5
//! kappa21 = 0.5
//!
//! [boundary.disturbance]
//! kind = "pulse"
//! amplitude = 0.01
//! cutoff = 5.0
//! direction = [1.0, -1.0]
//!
//! [initial]
//! kind = "constant"
//! values = [-0.5, 0.5]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certifier::{certify, CertificateReport};
use crate::disturbance::DisturbanceSignal;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::lyapunov::LyapunovTrace;
use crate::matrix::SquareMatrix;
use crate::models::euler::{linearize_euler, EulerParams};
use crate::models::saint_venant::{linearize_saint_venant, SaintVenantParams};
use crate::solver::{RunOutput, Simulation};
use crate::state::StateField;
use crate::system::{sample_coefficients, BoundaryCoupling, SystemCoefficients};
use crate::weights::WeightField;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: String,
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub weights: WeightsSpec,
    pub xi: f64,
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub initial: InitialSpec,
    /// Replaces the model's source matrix at every cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_override: Option<Vec<Vec<f64>>>,
    /// 2x2 feedback gains; for the physical models this takes precedence over
    /// gains derived from `k0`, `kl`.
    #[serde(default, alias = "kappa_override", skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "one")]
    pub length: f64,
    pub cells: usize,
    pub final_time: f64,
    pub cfl: f64,
}

fn one() -> f64 {
    1.0
}

fn gravity() -> f64 {
    9.81
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Constant coefficients; despite the name any size `k` is accepted.
    #[serde(rename = "linear2x2")]
    Linear2x2 { lambda: Vec<f64>, gamma: Vec<Vec<f64>> },
    /// Linearization about a constant state `(h_star, v_star)`.
    SaintVenant {
        #[serde(default = "gravity")]
        g: f64,
        cf: f64,
        sb: f64,
        h_star: f64,
        v_star: f64,
        #[serde(default)]
        k0: Option<f64>,
        #[serde(default)]
        kl: Option<f64>,
    },
    IsothermalEuler {
        a: f64,
        f_over_d: f64,
        rho0: f64,
        q: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightsSpec {
    Exponential {
        p_plus: Vec<f64>,
        p_minus: Vec<f64>,
        mu: f64,
    },
    /// `J + 2` rows, ghosts included.
    Explicit { m: usize, samples: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSpec {
    pub kappa12: f64,
    pub kappa21: f64,
    /// Multiply `kappa21` by `e^{-mu}` of the exponential weight.
    #[serde(default)]
    pub kappa21_times_exp_minus_mu: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    /// Full `K`; mutually exclusive with `kappa`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<Vec<Vec<f64>>>,
    /// Diagonal of `M`. Defaults to ones for `linear2x2` and to
    /// `(1 - kappa12, 1 - kappa21)` for the physical models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injection: Option<Vec<f64>>,
    #[serde(default)]
    pub disturbance: DisturbanceSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DisturbanceSpec {
    #[default]
    Zero,
    /// `direction * amplitude * sin^2(pi t)` for `t < cutoff`.
    Pulse {
        amplitude: f64,
        cutoff: f64,
        direction: Vec<f64>,
    },
    Constant { values: Vec<f64> },
    Tabulated { times: Vec<f64>, values: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    #[default]
    Zero,
    Constant { values: Vec<f64> },
    /// `offset_i + amplitude_i sin(wavenumber pi x)`.
    Sine {
        offset: Vec<f64>,
        amplitude: Vec<f64>,
        wavenumber: f64,
    },
    /// `offset_i + amplitude_i cos(wavenumber pi x)`.
    Cosine {
        offset: Vec<f64>,
        amplitude: Vec<f64>,
        wavenumber: f64,
    },
    /// Saint-Venant only: `H(x,0) = depth`, `V(x,0) = velocity_amplitude sin(pi x)`,
    /// mapped to characteristic variables.
    ShallowWater { depth: f64, velocity_amplitude: f64 },
    /// One row per interior cell.
    Cells { values: Vec<Vec<f64>> },
}

impl ScenarioSpec {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Scenario(e.to_string()))
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        };
        parsed.map_err(|e| match e {
            Error::Scenario(msg) => Error::Scenario(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("scenario specs serialize to TOML")
    }

    /// Same scenario on a different mesh and Courant number.
    pub fn with_grid(&self, cells: usize, cfl: f64) -> Self {
        let mut s = self.clone();
        s.grid.cells = cells;
        s.grid.cfl = cfl;
        s
    }

    pub fn build(&self) -> Result<Scenario> {
        Scenario::from_spec(self.clone())
    }
}

/// A fully sampled problem: mesh, coefficients with boundary law and
/// disturbance, weights, initial state and `xi`.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub grid: Grid1D,
    pub coefficients: SystemCoefficients,
    pub weights: WeightField,
    pub initial: StateField,
    pub xi: f64,
    /// Diagnostics raised while building, e.g. source formulas disagreeing
    /// with an override.
    pub notes: Vec<String>,
}

struct Sampled {
    coefficients: SystemCoefficients,
    natural_kappa: Option<(f64, f64)>,
    physical: bool,
    notes: Vec<String>,
}

impl Scenario {
    pub fn from_spec(spec: ScenarioSpec) -> Result<Self> {
        if !(spec.xi > 0.0) {
            return Err(Error::Scenario(format!("xi: must be positive, got {}", spec.xi)));
        }
        let g = &spec.grid;
        // speeds only depend on cell centers, so a provisional mesh finds max|lambda|
        let probe = Grid1D::new(g.length, g.cells, g.final_time, g.cfl, 1.0)?;
        let lambda_max = sample_model(&spec, &probe)?.coefficients.max_speed();
        let grid = Grid1D::new(g.length, g.cells, g.final_time, g.cfl, lambda_max)?;
        let sampled = sample_model(&spec, &grid)?;

        let weights = match &spec.weights {
            WeightsSpec::Exponential { p_plus, p_minus, mu } => WeightField::exponential(p_plus, p_minus, *mu, &grid)?,
            WeightsSpec::Explicit { m, samples } => WeightField::explicit(*m, samples.clone())?,
        };
        let mu = weights.exponential_rate().unwrap_or(0.0);

        let k = sampled.coefficients.k();
        let m = sampled.coefficients.m();
        let (feedback, default_injection) = match (&spec.boundary.feedback, &spec.kappa, sampled.natural_kappa) {
            (Some(_), Some(_), _) => {
                return Err(Error::Scenario("boundary.feedback and kappa are mutually exclusive".into()))
            }
            (Some(rows), None, _) => (SquareMatrix::from_rows(rows)?, vec![1.0; k]),
            (None, Some(kp), _) => {
                let k21 = if kp.kappa21_times_exp_minus_mu {
                    kp.kappa21 * (-mu).exp()
                } else {
                    kp.kappa21
                };
                two_by_two(k, kp.kappa12, k21, sampled.physical)?
            }
            (None, None, Some((k12, k21))) => two_by_two(k, k12, k21, sampled.physical)?,
            (None, None, None) if sampled.physical => {
                return Err(Error::Scenario("kappa: required unless k0 and kl are given".into()))
            }
            (None, None, None) => (SquareMatrix::zeros(k), vec![1.0; k]),
        };
        let injection = spec.boundary.injection.clone().unwrap_or(default_injection);
        let boundary = BoundaryCoupling::new(feedback, injection, m)?;

        let disturbance = match &spec.boundary.disturbance {
            DisturbanceSpec::Zero => DisturbanceSignal::zero(k),
            DisturbanceSpec::Pulse {
                amplitude,
                cutoff,
                direction,
            } => DisturbanceSignal::SinePulse {
                amplitude: *amplitude,
                cutoff: *cutoff,
                direction: direction.clone(),
            },
            DisturbanceSpec::Constant { values } => DisturbanceSignal::Constant(values.clone()),
            DisturbanceSpec::Tabulated { times, values } => DisturbanceSignal::tabulated(times.clone(), values.clone())?,
        };
        let coefficients = sampled
            .coefficients
            .with_boundary(boundary)?
            .with_disturbance(disturbance)?;

        let initial = build_initial(&spec, &grid, k)?;
        Ok(Self {
            xi: spec.xi,
            notes: sampled.notes,
            spec,
            grid,
            coefficients,
            weights,
            initial,
        })
    }

    pub fn certify(&self) -> Result<CertificateReport> {
        certify(&self.coefficients, &self.weights, &self.grid, self.xi)
    }

    pub fn simulation(&self) -> Simulation<'_> {
        Simulation::new(&self.grid, &self.coefficients, self.initial.clone()).with_weights(&self.weights)
    }

    /// Runs the scheme, keeping every `stride`-th state when a stride is given.
    pub fn run(&self, stride: Option<usize>) -> Result<RunOutput> {
        let sim = self.simulation();
        match stride {
            Some(s) => sim.with_history(s).run(),
            None => sim.run(),
        }
    }

    /// Runs and pairs the Lyapunov series with the envelope for the
    /// certificate's `eta` and `nu`.
    pub fn trace(&self, report: &CertificateReport) -> Result<(RunOutput, LyapunovTrace)> {
        let run = self.run(None)?;
        let trace = LyapunovTrace::from_run(&run, report.eta, report.nu, self.xi, &self.grid)?;
        Ok((run, trace))
    }
}

fn two_by_two(k: usize, k12: f64, k21: f64, physical: bool) -> Result<(SquareMatrix, Vec<f64>)> {
    if k != 2 {
        return Err(Error::Scenario(format!("kappa: needs a 2x2 system, got k = {k}; use boundary.feedback")));
    }
    let b = BoundaryCoupling::two_by_two(k12, k21, 1.0, 1.0);
    let injection = if physical { vec![1.0 - k12, 1.0 - k21] } else { vec![1.0, 1.0] };
    Ok((b.feedback().clone(), injection))
}

fn gamma_override(spec: &ScenarioSpec) -> Result<Option<SquareMatrix>> {
    spec.gamma_override
        .as_ref()
        .map(|rows| SquareMatrix::from_rows(rows).map_err(|e| Error::Scenario(format!("gamma_override: {e}"))))
        .transpose()
}

fn sample_model(spec: &ScenarioSpec, grid: &Grid1D) -> Result<Sampled> {
    let over = gamma_override(spec)?;
    match &spec.model {
        ModelSpec::Linear2x2 { lambda, gamma } => {
            let gamma = match over {
                Some(g) => g,
                None => SquareMatrix::from_rows(gamma).map_err(|e| Error::Scenario(format!("model.gamma: {e}")))?,
            };
            if gamma.size() != lambda.len() {
                return Err(Error::Scenario(format!(
                    "model: gamma is {0}x{0} but lambda has {1} entries",
                    gamma.size(),
                    lambda.len()
                )));
            }
            let coefficients = sample_coefficients(|_| lambda.clone(), |_| gamma.clone(), grid)?;
            Ok(Sampled {
                coefficients,
                natural_kappa: None,
                physical: false,
                notes: Vec::new(),
            })
        }
        ModelSpec::SaintVenant {
            g,
            cf,
            sb,
            h_star,
            v_star,
            k0,
            kl,
        } => {
            let mut params = SaintVenantParams::constant(*g, *cf, *sb, *h_star, *v_star);
            params.length = grid.length();
            params.k0 = *k0;
            params.kl = *kl;
            let lin = linearize_saint_venant(&params, grid, over.as_ref())?;
            let mut notes = Vec::new();
            if let Some(dev) = lin.formula_deviation {
                if dev > 1e-6 {
                    notes.push(format!(
                        "gamma_override differs from the linearized source terms by up to {dev:.4e}"
                    ));
                }
            }
            Ok(Sampled {
                coefficients: lin.coefficients,
                natural_kappa: params.kappa_from_gains()?,
                physical: true,
                notes,
            })
        }
        ModelSpec::IsothermalEuler { a, f_over_d, rho0, q } => {
            let params = EulerParams {
                a: *a,
                f_over_d: *f_over_d,
                rho0: *rho0,
                q: *q,
            };
            let mut coefficients = linearize_euler(&params, grid)?;
            if let Some(g) = over {
                let lambda: Vec<Vec<f64>> = (-1..=grid.cells() as isize).map(|j| coefficients.lambda(j).to_vec()).collect();
                coefficients = SystemCoefficients::new(coefficients.m(), lambda, vec![g; grid.cells()])?;
            }
            Ok(Sampled {
                coefficients,
                natural_kappa: None,
                physical: true,
                notes: Vec::new(),
            })
        }
    }
}

fn build_initial(spec: &ScenarioSpec, grid: &Grid1D, k: usize) -> Result<StateField> {
    let check = |name: &str, v: &[f64]| {
        if v.len() == k {
            Ok(())
        } else {
            Err(Error::Scenario(format!("initial.{name}: expected {k} entries, got {}", v.len())))
        }
    };
    match &spec.initial {
        InitialSpec::Zero => Ok(StateField::zeros(k, grid.cells())),
        InitialSpec::Constant { values } => {
            check("values", values)?;
            StateField::from_fn(k, grid, |_| values.clone())
        }
        InitialSpec::Sine {
            offset,
            amplitude,
            wavenumber,
        }
        | InitialSpec::Cosine {
            offset,
            amplitude,
            wavenumber,
        } => {
            check("offset", offset)?;
            check("amplitude", amplitude)?;
            let cosine = matches!(spec.initial, InitialSpec::Cosine { .. });
            StateField::from_fn(k, grid, |x| {
                let arg = wavenumber * std::f64::consts::PI * x;
                let s = if cosine { arg.cos() } else { arg.sin() };
                offset.iter().zip(amplitude).map(|(o, a)| o + a * s).collect()
            })
        }
        InitialSpec::ShallowWater {
            depth,
            velocity_amplitude,
        } => {
            let ModelSpec::SaintVenant {
                g,
                cf,
                sb,
                h_star,
                v_star,
                ..
            } = spec.model
            else {
                return Err(Error::Scenario("initial.shallow_water: needs the saint_venant model".into()));
            };
            let params = SaintVenantParams::constant(g, cf, sb, h_star, v_star);
            StateField::from_fn(k, grid, |x| {
                let v = velocity_amplitude * (std::f64::consts::PI * x).sin();
                params.to_characteristic(x, *depth, v).to_vec()
            })
        }
        InitialSpec::Cells { values } => {
            if values.len() != grid.cells() {
                return Err(Error::Scenario(format!(
                    "initial.values: expected {} rows, got {}",
                    grid.cells(),
                    values.len()
                )));
            }
            StateField::from_interior(k, values)
        }
    }
}
