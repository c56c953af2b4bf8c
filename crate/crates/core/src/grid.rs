//! Uniform space-time mesh.
//!
//! Cells are indexed `j = 0..J-1` with centers `x_j = (j + 1/2) dx`. The two
//! ghost cells sit at `j = -1` and `j = J`, one cell width outside the domain,
//! so `x_{-1} = -dx/2` and `x_J = l + dx/2`.
//!
//! The time step is fixed by the Courant number, `dt = cfl * dx / lambda_max`,
//! and the step count is `N = ceil(T / dt)`. When `N * dt` overshoots `T` the
//! last step is shortened so the run lands exactly on `T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack when deciding whether `T / dt` is already an integer.
const STEP_COUNT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    length: f64,
    cells: usize,
    final_time: f64,
    cfl: f64,
    lambda_max: f64,
    dx: f64,
    dt: f64,
    steps: usize,
}

impl Grid1D {
    pub fn new(length: f64, cells: usize, final_time: f64, cfl: f64, lambda_max: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if cells < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 cells, got {cells}")));
        }
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::InvalidGrid(format!("final time must be positive, got {final_time}")));
        }
        if !(lambda_max > 0.0) || !lambda_max.is_finite() {
            return Err(Error::InvalidGrid(format!("lambda_max must be positive, got {lambda_max}")));
        }
        if !(cfl > 0.0) {
            return Err(Error::InvalidGrid(format!("cfl must be positive, got {cfl}")));
        }
        if cfl > 1.0 {
            return Err(Error::CflViolation { courant: cfl });
        }

        let dx = length / cells as f64;
        let dt = cfl * dx / lambda_max;
        let ratio = final_time / dt;
        let steps = if (ratio - ratio.round()).abs() <= STEP_COUNT_SLACK * ratio {
            ratio.round() as usize
        } else {
            ratio.ceil() as usize
        }
        .max(1);

        Ok(Self {
            length,
            cells,
            final_time,
            cfl,
            lambda_max,
            dx,
            dt,
            steps,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of interior cells `J`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Nominal time step. Only the final step may be shorter.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of time steps `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Cell center for `j = -1..=J` (ghosts included).
    pub fn center(&self, j: isize) -> f64 {
        (j as f64 + 0.5) * self.dx
    }

    /// All centers from the left ghost to the right ghost, `J + 2` values.
    pub fn centers_with_ghosts(&self) -> Vec<f64> {
        (-1..=self.cells as isize).map(|j| self.center(j)).collect()
    }

    /// Time level `t^n`; `t^N` is exactly `T`.
    pub fn time(&self, n: usize) -> f64 {
        if n >= self.steps {
            self.final_time
        } else {
            n as f64 * self.dt
        }
    }

    /// Length of the step that advances level `n` to `n + 1`.
    pub fn step_size(&self, n: usize) -> f64 {
        // differencing t^{n+1} - t^n loses ~ulp(T)/dt relative accuracy
        if n + 1 < self.steps {
            self.dt
        } else {
            (self.final_time - self.time(n)).min(self.dt)
        }
    }

    /// Courant number actually realised by the nominal step.
    pub fn courant(&self) -> f64 {
        self.dt * self.lambda_max / self.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn benchmark_mesh() {
        let g = Grid1D::new(1.0, 1600, 10.0, 0.75, 1.0).unwrap();
        assert_relative_eq!(g.dx(), 1.0 / 1600.0);
        assert_relative_eq!(g.dt(), 0.75 / 1600.0);
        assert_eq!(g.steps(), 21334);
        assert_eq!(g.time(g.steps()), 10.0);
        assert!(g.step_size(g.steps() - 1) <= g.dt());
        assert!(g.courant() <= 1.0);
    }

    #[test]
    fn exact_division() {
        let g = Grid1D::new(1.0, 2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.dt(), 0.5);
        assert_eq!(g.steps(), 2);
    }

    #[test]
    fn saint_venant_mesh() {
        let g = Grid1D::new(1.0, 1600, 10.0, 0.75, 7.4294).unwrap();
        assert_relative_eq!(g.dt(), 0.75 / (1600.0 * 7.4294), max_relative = 1e-15);
    }

    #[test]
    fn ghost_spacing() {
        let g = Grid1D::new(2.0, 7, 1.0, 0.5, 3.0).unwrap();
        let x = g.centers_with_ghosts();
        assert_eq!(x.len(), 9);
        assert_relative_eq!(x[0], -0.5 * g.dx());
        assert_relative_eq!(x[8], 2.0 + 0.5 * g.dx());
        for w in x.windows(2) {
            assert_relative_eq!(w[1] - w[0], g.dx(), max_relative = 1e-12);
        }
        assert_relative_eq!(g.dx() * 7.0, 2.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Grid1D::new(1.0, 10, 1.0, 1.2, 1.0), Err(Error::CflViolation { .. })));
        assert!(Grid1D::new(0.0, 10, 1.0, 0.5, 1.0).is_err());
        assert!(Grid1D::new(1.0, 1, 1.0, 0.5, 1.0).is_err());
        assert!(Grid1D::new(1.0, 10, -1.0, 0.5, 1.0).is_err());
        assert!(Grid1D::new(1.0, 10, 1.0, 0.0, 1.0).is_err());
        assert!(Grid1D::new(1.0, 10, 1.0, 0.5, 0.0).is_err());
    }
}
