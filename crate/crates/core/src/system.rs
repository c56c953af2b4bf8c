//! Sampled coefficients of `W_t + Lambda(x) W_x + Pi(x) W = 0` together with
//! the feedback boundary law `[W+(0); W-(l)] = K [W+(l); W-(0)] + M b(t)`.

use serde::{Deserialize, Serialize};

use crate::disturbance::DisturbanceSignal;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::matrix::SquareMatrix;

/// Boundary feedback `K` (block anti-diagonal) and diagonal injection `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCoupling {
    feedback: SquareMatrix,
    injection: Vec<f64>,
}

impl BoundaryCoupling {
    /// `m` is the number of positive speeds; `K` must vanish on the two
    /// diagonal blocks of size `m` and `k - m`.
    pub fn new(feedback: SquareMatrix, injection: Vec<f64>, m: usize) -> Result<Self> {
        let k = feedback.size();
        if injection.len() != k {
            return Err(Error::Dimension(format!(
                "injection has {} entries, K is {k}x{k}",
                injection.len()
            )));
        }
        if m > k {
            return Err(Error::Dimension(format!("m = {m} exceeds k = {k}")));
        }
        for row in 0..k {
            for col in 0..k {
                let same_block = (row < m) == (col < m);
                let value = feedback[(row, col)];
                if same_block && value != 0.0 {
                    return Err(Error::BoundaryBlocks { row, col, value });
                }
            }
        }
        Ok(Self { feedback, injection })
    }

    /// No feedback and no injection.
    pub fn open(k: usize) -> Self {
        Self {
            feedback: SquareMatrix::zeros(k),
            injection: vec![0.0; k],
        }
    }

    /// The 2x2 law `w1(0) = kappa12 w2(0) + m1 b1`, `w2(l) = kappa21 w1(l) + m2 b2`.
    pub fn two_by_two(kappa12: f64, kappa21: f64, m1: f64, m2: f64) -> Self {
        let mut feedback = SquareMatrix::zeros(2);
        feedback[(0, 1)] = kappa12;
        feedback[(1, 0)] = kappa21;
        Self {
            feedback,
            injection: vec![m1, m2],
        }
    }

    pub fn feedback(&self) -> &SquareMatrix {
        &self.feedback
    }

    pub fn injection(&self) -> &[f64] {
        &self.injection
    }

    pub fn injection_matrix(&self) -> SquareMatrix {
        SquareMatrix::from_diagonal(&self.injection)
    }
}

/// Coefficient samples on a [`Grid1D`]: speeds at `j = -1..=J`, source
/// matrices at `j = 0..J-1`.
#[derive(Debug, Clone)]
pub struct SystemCoefficients {
    k: usize,
    m: usize,
    cells: usize,
    lambda: Vec<f64>,
    pi: Vec<SquareMatrix>,
    boundary: BoundaryCoupling,
    disturbance: DisturbanceSignal,
}

impl SystemCoefficients {
    /// `lambda` holds `J + 2` signed diagonals (ghost, interior..., ghost).
    /// The first `m` speeds must be strictly positive and the rest strictly
    /// negative at every sample.
    pub fn new(m: usize, lambda: Vec<Vec<f64>>, pi: Vec<SquareMatrix>) -> Result<Self> {
        let cells = pi.len();
        if lambda.len() != cells + 2 {
            return Err(Error::Dimension(format!(
                "{} speed samples for {} cells; expected J + 2",
                lambda.len(),
                cells
            )));
        }
        let k = lambda.first().map(Vec::len).unwrap_or(0);
        if k == 0 || m > k {
            return Err(Error::Dimension(format!("invalid partition m = {m}, k = {k}")));
        }
        for (idx, row) in lambda.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension(format!("speed sample {idx} has {} entries", row.len())));
            }
            check_sign_pattern(row, m, idx as isize - 1)?;
        }
        if let Some(bad) = pi.iter().find(|p| p.size() != k) {
            return Err(Error::Dimension(format!("source matrix is {0}x{0}, k = {k}", bad.size())));
        }
        Ok(Self {
            k,
            m,
            cells,
            lambda: lambda.into_iter().flatten().collect(),
            pi,
            boundary: BoundaryCoupling::open(k),
            disturbance: DisturbanceSignal::zero(k),
        })
    }

    pub fn with_boundary(mut self, boundary: BoundaryCoupling) -> Result<Self> {
        if boundary.feedback().size() != self.k {
            return Err(Error::Dimension("boundary coupling size does not match system".into()));
        }
        // re-validate the block structure against this system's partition
        self.boundary = BoundaryCoupling::new(boundary.feedback, boundary.injection, self.m)?;
        Ok(self)
    }

    pub fn with_disturbance(mut self, disturbance: DisturbanceSignal) -> Result<Self> {
        if disturbance.components() != self.k {
            return Err(Error::Dimension(format!(
                "disturbance has {} components, system has {}",
                disturbance.components(),
                self.k
            )));
        }
        self.disturbance = disturbance;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Signed speeds at sample `j in -1..=J`.
    pub fn lambda(&self, j: isize) -> &[f64] {
        let start = (j + 1) as usize * self.k;
        &self.lambda[start..start + self.k]
    }

    /// Speed magnitude of component `i` at sample `j` (`Lambda+` entries for
    /// `i < m`, `Lambda-` entries otherwise).
    pub fn speed(&self, j: isize, i: usize) -> f64 {
        self.lambda(j)[i].abs()
    }

    pub fn pi(&self, j: usize) -> &SquareMatrix {
        &self.pi[j]
    }

    pub fn boundary(&self) -> &BoundaryCoupling {
        &self.boundary
    }

    pub fn disturbance(&self) -> &DisturbanceSignal {
        &self.disturbance
    }

    /// `max |lambda_i,j|` over all samples, ghosts included.
    pub fn max_speed(&self) -> f64 {
        self.lambda.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn has_source(&self) -> bool {
        self.pi.iter().any(|p| p.max_abs() != 0.0)
    }
}

fn check_sign_pattern(row: &[f64], m: usize, j: isize) -> Result<()> {
    for (component, &value) in row.iter().enumerate() {
        let ok = if component < m { value > 0.0 } else { value < 0.0 };
        if !ok || !value.is_finite() {
            return Err(Error::SignPattern {
                j,
                component,
                value,
                m,
                rest: row.len() - m,
            });
        }
    }
    Ok(())
}

/// Samples `lambda_fn` at every center `x_{-1}..x_J` and `pi_fn` at the
/// interior centers. The partition `m` is read from the left ghost sample
/// and must stay the same across the domain.
pub fn sample_coefficients(
    lambda_fn: impl Fn(f64) -> Vec<f64>,
    pi_fn: impl Fn(f64) -> SquareMatrix,
    grid: &Grid1D,
) -> Result<SystemCoefficients> {
    let lambda: Vec<Vec<f64>> = grid.centers_with_ghosts().into_iter().map(&lambda_fn).collect();
    let first = &lambda[0];
    if let Some((component, &value)) = first.iter().enumerate().find(|(_, v)| **v == 0.0) {
        return Err(Error::SignPattern {
            j: -1,
            component,
            value,
            m: first.iter().filter(|v| **v > 0.0).count(),
            rest: first.iter().filter(|v| **v < 0.0).count(),
        });
    }
    let m = first.iter().take_while(|v| **v > 0.0).count();
    let pi = (0..grid.cells() as isize).map(|j| pi_fn(grid.center(j))).collect();
    SystemCoefficients::new(m, lambda, pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::new(1.0, 8, 1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn constant_fields() {
        let gamma = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
        let c = sample_coefficients(|_| vec![1.0, -1.0], |_| gamma.clone(), &grid()).unwrap();
        assert_eq!(c.m(), 1);
        for j in -1..=8 {
            assert_eq!(c.lambda(j), &[1.0, -1.0]);
        }
        for j in 0..8 {
            assert_eq!(c.pi(j), &gamma);
        }
        assert_eq!(c.max_speed(), 1.0);
    }

    #[test]
    fn saint_venant_speeds() {
        let c = sample_coefficients(
            |_| {
                let s = (9.81_f64 * 2.0).sqrt();
                vec![3.0 + s, 3.0 - s]
            },
            |_| SquareMatrix::zeros(2),
            &grid(),
        )
        .unwrap();
        assert!((c.lambda(4)[0] - 7.4294).abs() < 5e-5);
        assert!((c.lambda(4)[1] + 1.4294).abs() < 5e-5);
    }

    #[test]
    fn sign_change_rejected() {
        let err = sample_coefficients(|x| vec![1.0, x - 0.5], |_| SquareMatrix::zeros(2), &grid()).unwrap_err();
        assert!(matches!(err, Error::SignPattern { .. }));
        let err = sample_coefficients(|_| vec![0.0, -1.0], |_| SquareMatrix::zeros(2), &grid()).unwrap_err();
        assert!(matches!(err, Error::SignPattern { j: -1, .. }));
    }

    #[test]
    fn feedback_blocks() {
        let mut k = SquareMatrix::zeros(2);
        k[(0, 0)] = 0.1;
        assert!(matches!(
            BoundaryCoupling::new(k, vec![1.0, 1.0], 1),
            Err(Error::BoundaryBlocks { row: 0, col: 0, .. })
        ));
        let ok = BoundaryCoupling::two_by_two(0.5, 0.5, 1.0, 1.0);
        assert!(BoundaryCoupling::new(ok.feedback().clone(), vec![1.0, 1.0], 1).is_ok());
    }
}
