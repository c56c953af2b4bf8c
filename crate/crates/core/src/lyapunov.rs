//! Discrete ISS-Lyapunov function, its Gronwall envelope and the norms used to
//! compare the two.
//!
//! `L^n = dx * sum_j W_j^T P_j W_j` over the interior cells. For a certified
//! scenario the decay inequality
//!
//! ```text
//! (L^{n+1} - L^n) / dt <= -eta L^n + nu (1 + 1/xi) sup_{s<=n} |b^s|^2
//! ```
//!
//! holds, and iterating it gives the envelope
//!
//! ```text
//! U^n = e^{-eta t^n} L^0 + (nu/eta)(1 + 1/xi) sup_{s<=n-1} |b^s|^2.
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::solver::RunOutput;
use crate::state::StateField;
use crate::weights::WeightField;

/// `dx * sum_{j=0}^{J-1} W_j^T P_j W_j`; ghosts do not contribute.
pub fn evaluate(state: &StateField, weights: &WeightField, grid: &Grid1D) -> Result<f64> {
    if state.k() != weights.k() || state.cells() != weights.cells() {
        return Err(Error::Dimension("state and weights differ in shape".into()));
    }
    let mut sum = 0.0;
    for j in 0..state.cells() as isize {
        let p = weights.at(j);
        for (i, (w, pi)) in state.cell(j).iter().zip(p).enumerate() {
            if !(*pi > 0.0) {
                return Err(Error::NonPositiveWeight { j, component: i, value: *pi });
            }
            sum += pi * w * w;
        }
    }
    Ok(grid.dx() * sum)
}

/// Closed form of the discrete Gronwall bound after `steps` steps:
/// `(c - z/a)(1 - a dt)^steps + z/a`.
pub fn gronwall_closed_form(c: f64, a: f64, z: f64, dt: f64, steps: usize) -> f64 {
    let q = z / a;
    (c - q) * (1.0 - a * dt).powi(steps as i32) + q
}

/// Both forms of the envelope on the run's time levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    /// `e^{-eta t^n} L^0 + (nu/eta)(1+1/xi) S^n`, the reported envelope.
    pub exponential: Vec<f64>,
    /// `(L^0 - (nu/eta)(1+1/xi) S^n) prod_{i<n}(1 - eta dt_i) + (nu/eta)(1+1/xi) S^n`.
    pub recursion: Vec<f64>,
    /// `S^n = sup_{s<=n-1} |b^s|^2` (zero at `n = 0`).
    pub sup_disturbance_sq: Vec<f64>,
}

/// Builds the envelope from `sup_{s<=n}|b^s|^2` (as recorded by the solver)
/// and the time levels.
pub fn gronwall_envelope(
    l0: f64,
    eta: f64,
    nu: f64,
    xi: f64,
    sup_disturbance_sq: &[f64],
    times: &[f64],
) -> Result<Envelope> {
    if sup_disturbance_sq.len() != times.len() {
        return Err(Error::Dimension("disturbance and time series differ in length".into()));
    }
    if !(xi > 0.0) {
        return Err(Error::Scenario(format!("xi must be positive, got {xi}")));
    }
    let dt_max = times.windows(2).map(|w| w[1] - w[0]).fold(0.0_f64, f64::max);
    if !(eta > 0.0) || eta * dt_max >= 1.0 {
        return Err(Error::GronwallInapplicable { eta, dt: dt_max });
    }

    let gain = nu / eta * (1.0 + 1.0 / xi);
    let n_levels = times.len();
    let mut exponential = Vec::with_capacity(n_levels);
    let mut recursion = Vec::with_capacity(n_levels);
    let mut shifted = Vec::with_capacity(n_levels);
    let mut contraction = 1.0;
    for n in 0..n_levels {
        let sup = if n == 0 { 0.0 } else { sup_disturbance_sq[n - 1] };
        if n > 0 {
            contraction *= 1.0 - eta * (times[n] - times[n - 1]);
        }
        let offset = gain * sup;
        exponential.push((-eta * times[n]).exp() * l0 + offset);
        recursion.push((l0 - offset) * contraction + offset);
        shifted.push(sup);
    }
    Ok(Envelope {
        exponential,
        recursion,
        sup_disturbance_sq: shifted,
    })
}

/// `L^n` next to its envelope, with the constants that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub envelope: Vec<f64>,
    pub sup_disturbance_sq: Vec<f64>,
    pub eta: f64,
    pub nu: f64,
    pub xi: f64,
    pub dt: f64,
    pub dx: f64,
}

impl LyapunovTrace {
    pub fn from_run(run: &RunOutput, eta: f64, nu: f64, xi: f64, grid: &Grid1D) -> Result<Self> {
        if run.lyapunov.len() != run.times.len() {
            return Err(Error::Dimension("run was recorded without weights".into()));
        }
        let env = gronwall_envelope(run.lyapunov[0], eta, nu, xi, &run.sup_disturbance_sq, &run.times)?;
        Ok(Self {
            times: run.times.clone(),
            values: run.lyapunov.clone(),
            envelope: env.exponential,
            sup_disturbance_sq: env.sup_disturbance_sq,
            eta,
            nu,
            xi,
            dt: grid.dt(),
            dx: grid.dx(),
        })
    }

    /// `max_n (L^n - U^n)`; non-positive when the envelope dominates.
    pub fn max_violation(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.envelope)
            .map(|(l, u)| l - u)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn gap_norms(&self) -> GapNorms {
        envelope_gap_norms(self)
    }
}

/// Distances between the envelope and the Lyapunov series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapNorms {
    /// `max_n |U^n - L^n|`
    pub sup: f64,
    /// `sqrt(dx * sum_n (U^n - L^n)^2)`, the convergence-table column.
    pub l2: f64,
    /// `sqrt(dt * sum_n (U^n - L^n)^2)`
    pub l2_time: f64,
}

pub fn envelope_gap_norms(trace: &LyapunovTrace) -> GapNorms {
    let mut sup = 0.0_f64;
    let mut sum_sq = 0.0;
    for (l, u) in trace.values.iter().zip(&trace.envelope) {
        let g = u - l;
        sup = sup.max(g.abs());
        sum_sq += g * g;
    }
    GapNorms {
        sup,
        l2: (trace.dx * sum_sq).sqrt(),
        l2_time: (trace.dt * sum_sq).sqrt(),
    }
}

/// Least-squares slope of `ln L` against `t` over `t >= t_start`, returned as
/// a positive decay rate.
pub fn fit_decay_rate(times: &[f64], values: &[f64], t_start: f64) -> Result<f64> {
    let mut pts = Vec::new();
    for (n, (&t, &v)) in times.iter().zip(values).enumerate() {
        if t < t_start {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::NonPositiveLyapunov { n, value: v });
        }
        pts.push((t, v.ln()));
    }
    if pts.len() < 10 {
        return Err(Error::ShortWindow { samples: pts.len() });
    }
    let count = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let y_mean = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (t, y) in &pts {
        sty += (t - t_mean) * (y - y_mean);
        stt += (t - t_mean) * (t - t_mean);
    }
    Ok(-sty / stt)
}
