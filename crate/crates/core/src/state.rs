//! Cell-averaged state `W_j^n` with one ghost cell on each side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// `J + 2` cells of `k` components, stored contiguously from the left ghost
/// to the right ghost. Components `0..m` are `W+`, `m..k` are `W-`.
///
/// Only the left ghost's `W+` part and the right ghost's `W-` part are ever
/// read by the upwind stencil; the other ghost components stay zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateField {
    k: usize,
    cells: usize,
    values: Vec<f64>,
    step: usize,
    time: f64,
    ghosts_ready: bool,
}

impl StateField {
    pub fn zeros(k: usize, cells: usize) -> Self {
        Self {
            k,
            cells,
            values: vec![0.0; (cells + 2) * k],
            step: 0,
            time: 0.0,
            ghosts_ready: false,
        }
    }

    /// Interior values from `f(x_j)`; ghosts are left empty until a boundary
    /// update fills them.
    pub fn from_fn(k: usize, grid: &Grid1D, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut state = Self::zeros(k, grid.cells());
        for j in 0..grid.cells() {
            let v = f(grid.center(j as isize));
            if v.len() != k {
                return Err(Error::Dimension(format!("initial data returned {} components, expected {k}", v.len())));
            }
            state.cell_mut(j as isize).copy_from_slice(&v);
        }
        Ok(state)
    }

    pub fn from_interior(k: usize, interior: &[Vec<f64>]) -> Result<Self> {
        let mut state = Self::zeros(k, interior.len());
        for (j, v) in interior.iter().enumerate() {
            if v.len() != k {
                return Err(Error::Dimension(format!("cell {j} has {} components, expected {k}", v.len())));
            }
            state.cell_mut(j as isize).copy_from_slice(v);
        }
        Ok(state)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_level(&mut self, step: usize, time: f64) {
        self.step = step;
        self.time = time;
    }

    pub fn ghosts_ready(&self) -> bool {
        self.ghosts_ready
    }

    pub(crate) fn mark_ghosts(&mut self, ready: bool) {
        self.ghosts_ready = ready;
    }

    /// Cell `j in -1..=J`.
    pub fn cell(&self, j: isize) -> &[f64] {
        let start = (j + 1) as usize * self.k;
        &self.values[start..start + self.k]
    }

    pub fn cell_mut(&mut self, j: isize) -> &mut [f64] {
        let start = (j + 1) as usize * self.k;
        &mut self.values[start..start + self.k]
    }

    /// Interior cells `0..J` as one slice of `J * k` values.
    pub fn interior(&self) -> &[f64] {
        &self.values[self.k..self.values.len() - self.k]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let end = self.values.len() - self.k;
        &mut self.values[self.k..end]
    }

    /// All `J + 2` cells, ghosts included.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    /// `dx * sum_j |W_j|^2` over the interior.
    pub fn l2_sq(&self, dx: f64) -> f64 {
        dx * self.interior().iter().map(|v| v * v).sum::<f64>()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `alpha * self + beta * other`, interior and ghosts alike.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let mut out = self.clone();
        for (o, b) in out.values.iter_mut().zip(&other.values) {
            *o = alpha * *o + beta * b;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let grid = Grid1D::new(1.0, 4, 1.0, 1.0, 1.0).unwrap();
        let s = StateField::from_fn(2, &grid, |x| vec![x, -x]).unwrap();
        assert_eq!(s.raw().len(), 12);
        assert_eq!(s.cell(-1), &[0.0, 0.0]);
        assert_eq!(s.cell(0), &[0.125, -0.125]);
        assert_eq!(s.cell(4), &[0.0, 0.0]);
        assert_eq!(s.interior().len(), 8);
        assert!(!s.ghosts_ready());
    }
}
