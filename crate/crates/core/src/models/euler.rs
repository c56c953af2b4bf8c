//! Isothermal Euler equations with friction, linearized about the subsonic
//! steady state with constant mass flux `q*`.
//!
//! The steady density solves `(a^2 rho - q^2/rho) rho' = -(f/2D) q|q|`,
//! whose closed form is `rho*^2 = -(q/a)^2 W_{-1}(z(x))`.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::matrix::SquareMatrix;
use crate::models::lambert::lambert_w_minus1_log;
use crate::scenario::{
    BoundarySpec, DisturbanceSpec, GridSpec, InitialSpec, KappaSpec, ModelSpec, ScenarioSpec, WeightsSpec,
};
use crate::system::SystemCoefficients;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    /// Sound speed.
    pub a: f64,
    /// Friction ratio `f / D`.
    pub f_over_d: f64,
    /// `rho*(0)`.
    pub rho0: f64,
    /// Constant mass flux `q*`.
    pub q: f64,
}

impl EulerParams {
    /// `a = 1`, `f/D = 1`, `rho*(0) = 3`, `q* = 0.2`.
    pub fn example() -> Self {
        Self {
            a: 1.0,
            f_over_d: 1.0,
            rho0: 3.0,
            q: 0.2,
        }
    }

    fn beta(&self) -> f64 {
        (self.q / self.a).powi(2)
    }

    /// Steady density at `x`.
    pub fn rho_star(&self, x: f64) -> Result<f64> {
        let beta = self.beta();
        if beta == 0.0 {
            return Ok(self.rho0);
        }
        if !(self.rho0 * self.rho0 > beta) {
            return Err(Error::Model(format!(
                "steady state is not subsonic at x = 0 (rho0 = {}, |q|/a = {})",
                self.rho0,
                beta.sqrt()
            )));
        }
        // w + ln(-w) = s(x) with w = -rho^2 / beta
        let c = 0.5 * self.rho0 * self.rho0 - beta * self.rho0.ln();
        let s = self.q.signum() * self.f_over_d * x - 2.0 * c / beta - beta.ln();
        if s > -1.0 {
            return Err(Error::Model(format!("steady state reaches the sonic point before x = {x}")));
        }
        let w = lambert_w_minus1_log(s)?;
        Ok((-beta * w).sqrt())
    }

    /// `d rho* / dx` from the steady-state equation.
    pub fn rho_star_slope(&self, x: f64) -> Result<f64> {
        let rho = self.rho_star(x)?;
        let (a, q) = (self.a, self.q);
        Ok(-0.5 * self.f_over_d * q * q.abs() * rho / (a * a * rho * rho - q * q))
    }

    pub fn lambda(&self, x: f64) -> Result<[f64; 2]> {
        let u = self.q / self.rho_star(x)?;
        Ok([u + self.a, u - self.a])
    }

    /// Centered difference of both speeds with step `h`.
    pub fn lambda_slope(&self, x: f64, h: f64) -> Result<[f64; 2]> {
        let hi = self.lambda(x + h)?;
        let lo = self.lambda(x - h)?;
        Ok([(hi[0] - lo[0]) / (2.0 * h), (hi[1] - lo[1]) / (2.0 * h)])
    }

    /// Source matrix at `x`, speed derivatives by centered differences with step `h`.
    pub fn gamma(&self, x: f64, h: f64) -> Result<SquareMatrix> {
        let rho = self.rho_star(x)?;
        let (a, q, fd) = (self.a, self.q, self.f_over_d);
        let [l1, l2] = self.lambda(x)?;
        let [d1, d2] = self.lambda_slope(x, h)?;
        let common = l2 * d1 + l1 * d2 + fd * q * q / (2.0 * rho * rho);
        let fric = 2.0 * q / (rho * rho) - fd * q / rho;
        let s = 1.0 / (2.0 * a);
        let mut m = SquareMatrix::zeros(2);
        m[(0, 0)] = -s * common - s * l1 * fric + s * d2;
        m[(0, 1)] = s * common + s * l2 * fric - s * d2;
        m[(1, 0)] = -s * common - s * l1 * fric + s * l1 * d1;
        m[(1, 1)] = s * common + s * l2 * fric - s * l2 * d1;
        Ok(m)
    }
}

/// Speeds and source matrices on `grid`, derivatives with step `dx / 10`.
pub fn linearize_euler(params: &EulerParams, grid: &Grid1D) -> Result<SystemCoefficients> {
    let h = grid.dx() / 10.0;
    let xs = grid.centers_with_ghosts();
    let mut lambda = Vec::with_capacity(xs.len());
    for &x in &xs {
        let l = params.lambda(x)?;
        if !(l[1] < 0.0 && 0.0 < l[0]) {
            return Err(Error::Model(format!("speeds {l:?} at x = {x} violate lambda2 < 0 < lambda1")));
        }
        lambda.push(l.to_vec());
    }
    let pi = xs[1..xs.len() - 1]
        .iter()
        .map(|&x| params.gamma(x, h))
        .collect::<Result<Vec<_>>>()?;
    SystemCoefficients::new(1, lambda, pi)
}

/// Euler example: `a = 1`, `f/D = 1`, `rho*(0) = 3`, `q* = 0.2`, initial data
/// `cos(2 pi x)` in both components, unit weights with rate 0.575, gains
/// `kappa12 = kappa21 = 0.5`.
pub fn example_spec(cells: usize) -> ScenarioSpec {
    ScenarioSpec {
        name: "isothermal euler".into(),
        grid: GridSpec {
            length: 1.0,
            cells,
            final_time: 10.0,
            cfl: 0.75,
        },
        model: ModelSpec::IsothermalEuler {
            a: 1.0,
            f_over_d: 1.0,
            rho0: 3.0,
            q: 0.2,
        },
        weights: WeightsSpec::Exponential {
            p_plus: vec![1.0],
            p_minus: vec![1.0],
            mu: 0.575,
        },
        xi: 0.125,
        boundary: BoundarySpec {
            feedback: None,
            injection: None,
            disturbance: DisturbanceSpec::Pulse {
                amplitude: 0.01,
                cutoff: 5.0,
                direction: vec![1.0, -1.0],
            },
        },
        initial: InitialSpec::Cosine {
            offset: vec![0.0, 0.0],
            amplitude: vec![1.0, 1.0],
            wavenumber: 2.0,
        },
        gamma_override: None,
        kappa: Some(KappaSpec {
            kappa12: 0.5,
            kappa21: 0.5,
            kappa21_times_exp_minus_mu: false,
        }),
    }
}
