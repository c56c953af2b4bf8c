//! Equilibrium profiles `dw*/dx = f(x, w*)` by classical RK4.

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// RK4 substeps per cell width.
pub const SUBSTEPS_PER_CELL: usize = 10;

/// Integrates from `w*(0) = w0` and returns the profile at every center
/// `x_{-1}..x_J`, ghosts included (the left ghost is reached by marching
/// backwards from 0).
pub fn integrate_steady_state(
    rhs: impl Fn(f64, &[f64]) -> Vec<f64>,
    w0: &[f64],
    grid: &Grid1D,
) -> Result<Vec<Vec<f64>>> {
    let centers = grid.centers_with_ghosts();
    let h = grid.dx() / SUBSTEPS_PER_CELL as f64;
    let mut out = Vec::with_capacity(centers.len());
    out.push(march(&rhs, 0.0, w0.to_vec(), centers[0], h)?);
    let mut x = 0.0;
    let mut w = w0.to_vec();
    for &target in &centers[1..] {
        w = march(&rhs, x, w, target, h)?;
        x = target;
        out.push(w.clone());
    }
    Ok(out)
}

/// RK4 from `x0` to `x1` with steps of at most `h` (either direction).
fn march(rhs: &impl Fn(f64, &[f64]) -> Vec<f64>, x0: f64, mut w: Vec<f64>, x1: f64, h: f64) -> Result<Vec<f64>> {
    let span = x1 - x0;
    let steps = (span.abs() / h - 1e-9).ceil().max(1.0) as usize;
    let step = span / steps as f64;
    let axpy = |w: &[f64], a: f64, k: &[f64]| -> Vec<f64> { w.iter().zip(k).map(|(w, k)| w + a * k).collect() };
    let mut x = x0;
    for _ in 0..steps {
        let k1 = rhs(x, &w);
        let k2 = rhs(x + 0.5 * step, &axpy(&w, 0.5 * step, &k1));
        let k3 = rhs(x + 0.5 * step, &axpy(&w, 0.5 * step, &k2));
        let k4 = rhs(x + step, &axpy(&w, step, &k3));
        for i in 0..w.len() {
            w[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        x += step;
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Model(format!("steady-state integration blew up near x = {x}")));
        }
    }
    Ok(w)
}
