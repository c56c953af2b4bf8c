//! Split upwind scheme: an upwind transport sub-step, an explicit Euler source
//! sub-step, then the disturbed feedback law written into the ghost cells.
//!
//! The transport sub-step samples the speeds on the upwind neighbour exactly
//! as the discrete scheme is stated:
//!
//! ```text
//! W~+_j = W+_j - (dt/dx) Lambda+_{j-1} (W+_j - W+_{j-1})
//! W~-_j = W-_j + (dt/dx) Lambda-_{j+1} (W-_{j+1} - W-_j)
//! W^{n+1}_j = (I - dt Pi_j) W~_j
//! ```
//!
//! with `Lambda-` taken as positive magnitudes.

use serde::{Deserialize, Serialize};

use crate::disturbance::SupTracker;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::lyapunov;
use crate::state::StateField;
use crate::system::SystemCoefficients;
use crate::weights::WeightField;

const COURANT_SLACK: f64 = 1e-12;

fn check_shapes(state: &StateField, coefficients: &SystemCoefficients) -> Result<()> {
    if state.k() != coefficients.k() || state.cells() != coefficients.cells() {
        return Err(Error::Dimension(format!(
            "state is {} cells x {} components, coefficients are {} x {}",
            state.cells(),
            state.k(),
            coefficients.cells(),
            coefficients.k()
        )));
    }
    Ok(())
}

fn check_courant(coefficients: &SystemCoefficients, dx: f64, dt: f64) -> Result<()> {
    let courant = dt * coefficients.max_speed() / dx;
    if courant > 1.0 + COURANT_SLACK {
        return Err(Error::CflViolation { courant });
    }
    Ok(())
}

/// Upwind transport of every interior cell; returns the intermediate field.
pub fn transport_step(state: &StateField, coefficients: &SystemCoefficients, grid: &Grid1D, dt: f64) -> Result<StateField> {
    check_shapes(state, coefficients)?;
    let mut out = state.clone();
    transport_into(state, coefficients, grid.dx(), dt, &mut out)?;
    Ok(out)
}

fn transport_into(
    state: &StateField,
    coefficients: &SystemCoefficients,
    dx: f64,
    dt: f64,
    out: &mut StateField,
) -> Result<()> {
    if !state.ghosts_ready() {
        return Err(Error::MissingGhosts(state.step()));
    }
    check_courant(coefficients, dx, dt)?;
    let ratio = dt / dx;
    let k = coefficients.k();
    let m = coefficients.m();
    for j in 0..state.cells() as isize {
        let here = state.cell(j);
        let left = state.cell(j - 1);
        let right = state.cell(j + 1);
        let speeds_left = coefficients.lambda(j - 1);
        let speeds_right = coefficients.lambda(j + 1);
        let target = out.cell_mut(j);
        for i in 0..m {
            target[i] = here[i] - ratio * speeds_left[i] * (here[i] - left[i]);
        }
        for i in m..k {
            target[i] = here[i] + ratio * speeds_right[i].abs() * (right[i] - here[i]);
        }
    }
    out.set_level(state.step(), state.time());
    out.mark_ghosts(false);
    Ok(())
}

/// Explicit Euler step of `W_t = -Pi W` on every interior cell.
pub fn source_step(intermediate: &StateField, coefficients: &SystemCoefficients, dt: f64) -> Result<StateField> {
    check_shapes(intermediate, coefficients)?;
    let mut out = intermediate.clone();
    source_in_place(&mut out, coefficients, dt);
    Ok(out)
}

fn source_in_place(state: &mut StateField, coefficients: &SystemCoefficients, dt: f64) {
    let k = coefficients.k();
    let mut product = vec![0.0; k];
    for j in 0..state.cells() {
        let pi = coefficients.pi(j);
        let cell = state.cell_mut(j as isize);
        pi.mul_vec_into(cell, &mut product);
        for (w, p) in cell.iter_mut().zip(&product) {
            *w -= dt * p;
        }
    }
}

/// Writes the feedback law into the ghosts:
/// `[W+_{-1}; W-_J] = K [W+_{J-1}; W-_0] + M b`.
pub fn apply_boundary(state: &mut StateField, coefficients: &SystemCoefficients, b: &[f64]) -> Result<()> {
    check_shapes(state, coefficients)?;
    let k = coefficients.k();
    let m = coefficients.m();
    if b.len() != k {
        return Err(Error::Dimension(format!("disturbance sample has {} entries, expected {k}", b.len())));
    }
    let last = state.cells() as isize - 1;
    let mut outgoing = Vec::with_capacity(k);
    outgoing.extend_from_slice(&state.cell(last)[..m]);
    outgoing.extend_from_slice(&state.cell(0)[m..]);

    let boundary = coefficients.boundary();
    let mut incoming = boundary.feedback().mul_vec(&outgoing);
    for ((g, mi), bi) in incoming.iter_mut().zip(boundary.injection()).zip(b) {
        *g += mi * bi;
    }

    state.cell_mut(-1)[..m].copy_from_slice(&incoming[..m]);
    state.cell_mut(last + 1)[m..].copy_from_slice(&incoming[m..]);
    state.mark_ghosts(true);
    Ok(())
}

/// Initial ghosts from the compatibility condition (feedback only, no disturbance).
pub fn apply_compatibility(state: &mut StateField, coefficients: &SystemCoefficients) -> Result<()> {
    apply_boundary(state, coefficients, &vec![0.0; coefficients.k()])
}

/// Everything recorded by [`Simulation::run`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutput {
    /// `t^n` for `n = 0..=N`.
    pub times: Vec<f64>,
    /// `L^n` for `n = 0..=N` (empty when the run had no weights).
    pub lyapunov: Vec<f64>,
    /// `|b^n|^2` of the disturbance written into the level-n ghosts; zero at
    /// `n = 0` where the compatibility condition applies.
    pub disturbance_sq: Vec<f64>,
    /// `sup_{s <= n} |b^s|^2`.
    pub sup_disturbance_sq: Vec<f64>,
    /// Every `stride`-th state (level 0 and the final level always included).
    pub history: Vec<StateField>,
    pub final_state: StateField,
}

/// One simulation: grid, coefficients, initial data and what to record.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    pub grid: &'a Grid1D,
    pub coefficients: &'a SystemCoefficients,
    pub weights: Option<&'a WeightField>,
    pub initial: StateField,
    /// Keep every `stride`-th state in [`RunOutput::history`]; `None` keeps none.
    pub history_stride: Option<usize>,
}

impl<'a> Simulation<'a> {
    pub fn new(grid: &'a Grid1D, coefficients: &'a SystemCoefficients, initial: StateField) -> Self {
        Self {
            grid,
            coefficients,
            weights: None,
            initial,
            history_stride: None,
        }
    }

    pub fn with_weights(mut self, weights: &'a WeightField) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_history(mut self, stride: usize) -> Self {
        self.history_stride = Some(stride.max(1));
        self
    }

    pub fn run(&self) -> Result<RunOutput> {
        self.run_with(|_| {})
    }

    /// Runs to `T`, calling `hook` on every time level (after ghosts are set).
    pub fn run_with(&self, mut hook: impl FnMut(&StateField)) -> Result<RunOutput> {
        let grid = self.grid;
        let coefficients = self.coefficients;
        check_shapes(&self.initial, coefficients)?;
        if coefficients.cells() != grid.cells() {
            return Err(Error::Dimension("coefficients were sampled on a different grid".into()));
        }
        if let Some(w) = self.weights {
            if w.k() != coefficients.k() || w.cells() != grid.cells() {
                return Err(Error::Dimension("weights do not match the grid".into()));
            }
        }

        let steps = grid.steps();
        let lyapunov_of = |s: &StateField| -> Result<Option<f64>> {
            self.weights.map(|w| lyapunov::evaluate(s, w, grid)).transpose()
        };

        let mut state = self.initial.clone();
        state.set_level(0, 0.0);
        apply_compatibility(&mut state, coefficients)?;
        if !state.is_finite() {
            return Err(Error::NonFinite { step: 0, time: 0.0 });
        }

        let mut times = Vec::with_capacity(steps + 1);
        let mut lyapunov = Vec::with_capacity(if self.weights.is_some() { steps + 1 } else { 0 });
        let mut disturbance_sq = Vec::with_capacity(steps + 1);
        let mut sup_disturbance_sq = Vec::with_capacity(steps + 1);
        let mut history = Vec::new();
        let mut tracker = SupTracker::new();

        times.push(0.0);
        if let Some(l) = lyapunov_of(&state)? {
            lyapunov.push(l);
        }
        disturbance_sq.push(0.0);
        sup_disturbance_sq.push(tracker.update(0.0));
        if self.history_stride.is_some() {
            history.push(state.clone());
        }
        hook(&state);

        let mut scratch = state.clone();
        for n in 0..steps {
            let dt = grid.step_size(n);
            let t_next = grid.time(n + 1);
            transport_into(&state, coefficients, grid.dx(), dt, &mut scratch)?;
            source_in_place(&mut scratch, coefficients, dt);
            let b = coefficients.disturbance().value(t_next);
            apply_boundary(&mut scratch, coefficients, &b)?;
            scratch.set_level(n + 1, t_next);
            std::mem::swap(&mut state, &mut scratch);

            if !state.is_finite() {
                return Err(Error::NonFinite { step: n + 1, time: t_next });
            }

            let b_sq: f64 = b.iter().map(|v| v * v).sum();
            times.push(t_next);
            if let Some(l) = lyapunov_of(&state)? {
                lyapunov.push(l);
            }
            disturbance_sq.push(b_sq);
            sup_disturbance_sq.push(tracker.update(b_sq));
            if let Some(stride) = self.history_stride {
                if (n + 1) % stride == 0 || n + 1 == steps {
                    history.push(state.clone());
                }
            }
            hook(&state);
        }

        Ok(RunOutput {
            times,
            lyapunov,
            disturbance_sq,
            sup_disturbance_sq,
            history,
            final_state: state,
        })
    }
}
