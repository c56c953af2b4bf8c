//! Diagonal Lyapunov weights `P_j`, sampled at `j = -1..=J`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// How a [`WeightField`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `P(x) = diag{p+ e^{-mu x}, p- e^{mu x}}`.
    Exponential {
        p_plus: Vec<f64>,
        p_minus: Vec<f64>,
        mu: f64,
    },
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightField {
    k: usize,
    m: usize,
    diag: Vec<f64>,
    spec: WeightSpec,
}

impl WeightField {
    /// Evaluates the exponential weight at the cell and ghost centers.
    pub fn exponential(p_plus: &[f64], p_minus: &[f64], mu: f64, grid: &Grid1D) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::Scenario(format!("weight rate mu must be non-negative, got {mu}")));
        }
        let m = p_plus.len();
        let k = m + p_minus.len();
        let mut diag = Vec::with_capacity((grid.cells() + 2) * k);
        for x in grid.centers_with_ghosts() {
            let down = (-mu * x).exp();
            let up = (mu * x).exp();
            diag.extend(p_plus.iter().map(|p| p * down));
            diag.extend(p_minus.iter().map(|p| p * up));
        }
        let field = Self {
            k,
            m,
            diag,
            spec: WeightSpec::Exponential {
                p_plus: p_plus.to_vec(),
                p_minus: p_minus.to_vec(),
                mu,
            },
        };
        field.validate()?;
        Ok(field)
    }

    /// Explicit samples, `J + 2` rows from the left ghost to the right ghost.
    pub fn explicit(m: usize, samples: Vec<Vec<f64>>) -> Result<Self> {
        let k = samples.first().map(Vec::len).unwrap_or(0);
        if samples.len() < 4 || k == 0 || m > k {
            return Err(Error::Dimension(format!(
                "explicit weights need J + 2 >= 4 rows of equal length (got {} rows, k = {k})",
                samples.len()
            )));
        }
        if samples.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("explicit weight rows differ in length".into()));
        }
        let field = Self {
            k,
            m,
            diag: samples.into_iter().flatten().collect(),
            spec: WeightSpec::Explicit,
        };
        field.validate()?;
        Ok(field)
    }

    fn validate(&self) -> Result<()> {
        for (idx, row) in self.diag.chunks(self.k).enumerate() {
            if let Some((component, &value)) = row.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    j: idx as isize - 1,
                    component,
                    value,
                });
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> usize {
        self.diag.len() / self.k - 2
    }

    /// Diagonal of `P_j` for `j in -1..=J`.
    pub fn at(&self, j: isize) -> &[f64] {
        let start = (j + 1) as usize * self.k;
        &self.diag[start..start + self.k]
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    /// `mu` of an exponential weight.
    pub fn exponential_rate(&self) -> Option<f64> {
        match self.spec {
            WeightSpec::Exponential { mu, .. } => Some(mu),
            WeightSpec::Explicit => None,
        }
    }

    /// `(zeta, beta)`: smallest and largest diagonal entry over the interior
    /// cells `j = 0..J-1`.
    pub fn interior_bounds(&self) -> (f64, f64) {
        let interior = &self.diag[self.k..self.diag.len() - self.k];
        interior
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_uses_ghost_centers() {
        let grid = Grid1D::new(1.0, 10, 1.0, 1.0, 1.0).unwrap();
        let w = WeightField::exponential(&[1.0], &[2.0], 0.5, &grid).unwrap();
        assert_eq!(w.cells(), 10);
        assert_relative_eq!(w.at(-1)[0], (0.5_f64 * 0.05).exp());
        assert_relative_eq!(w.at(-1)[1], 2.0 * (-0.5_f64 * 0.05).exp());
        assert_relative_eq!(w.at(10)[0], (-0.5_f64 * 1.05).exp());
        let (zeta, beta) = w.interior_bounds();
        assert_relative_eq!(zeta, (-0.5_f64 * 0.95).exp());
        assert_relative_eq!(beta, 2.0 * (0.5_f64 * 0.95).exp());
    }

    #[test]
    fn rejects_nonpositive() {
        let err = WeightField::explicit(1, vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { j: 0, component: 1, .. }));
        let grid = Grid1D::new(1.0, 10, 1.0, 1.0, 1.0).unwrap();
        assert!(WeightField::exponential(&[-1.0], &[1.0], 0.1, &grid).is_err());
    }
}
