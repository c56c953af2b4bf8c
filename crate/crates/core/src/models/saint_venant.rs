//! Saint-Venant equations linearized about a sub-critical equilibrium
//! `(H*(x), V*(x))`, written in characteristic variables
//! `w_{1,2} = V - V* +/- (H - H*) sqrt(g / H*)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::matrix::SquareMatrix;
use crate::scenario::{
    DisturbanceSpec, GridSpec, InitialSpec, KappaSpec, ModelSpec, ScenarioSpec, WeightsSpec,
};
use crate::system::{sample_coefficients, SystemCoefficients};

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SaintVenantParams {
    pub g: f64,
    /// Friction coefficient `C_f`.
    pub cf: f64,
    /// Bottom slope `S_b`.
    pub sb: f64,
    pub length: f64,
    pub h_star: Profile,
    pub v_star: Profile,
    /// Physical boundary gains in `V(0) = k0 H(0)`, `V(l) = kl H(l)`.
    pub k0: Option<f64>,
    pub kl: Option<f64>,
}

impl std::fmt::Debug for SaintVenantParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SaintVenantParams")
            .field("g", &self.g)
            .field("cf", &self.cf)
            .field("sb", &self.sb)
            .field("length", &self.length)
            .field("h_star(0)", &(self.h_star)(0.0))
            .field("v_star(0)", &(self.v_star)(0.0))
            .field("k0", &self.k0)
            .field("kl", &self.kl)
            .finish()
    }
}

impl SaintVenantParams {
    pub fn constant(g: f64, cf: f64, sb: f64, h_star: f64, v_star: f64) -> Self {
        Self {
            g,
            cf,
            sb,
            length: 1.0,
            h_star: Arc::new(move |_| h_star),
            v_star: Arc::new(move |_| v_star),
            k0: None,
            kl: None,
        }
    }

    /// `g = 9.81`, `C_f = 0.1`, `S_b = 0.0459`, `H* = 2`, `V* = 3` on `[0, 1]`.
    pub fn example() -> Self {
        Self::constant(9.81, 0.1, 0.0459, 2.0, 3.0)
    }

    pub fn lambda(&self, x: f64) -> [f64; 2] {
        let c = (self.g * (self.h_star)(x)).sqrt();
        let v = (self.v_star)(x);
        [v + c, v - c]
    }

    /// Source matrix of the linearization at `x`.
    pub fn gamma(&self, x: f64) -> SquareMatrix {
        let (g, cf, sb) = (self.g, self.cf, self.sb);
        let h = (self.h_star)(x);
        let v = (self.v_star)(x);
        let [l1, l2] = self.lambda(x);
        let slope = g / h * (sb * h - cf * v * v);
        let fric = g * cf * v * v / (2.0 * h);
        let c = (g * h).sqrt();
        let mut m = SquareMatrix::zeros(2);
        m[(0, 0)] = 0.75 * slope / l1 + fric * (2.0 / v - 1.0 / c);
        m[(0, 1)] = 0.25 * slope / l1 + fric * (2.0 / v + 1.0 / c);
        m[(1, 0)] = 0.25 * slope / l2 + fric * (2.0 / v - 1.0 / c);
        m[(1, 1)] = 0.75 * slope / l2 + fric * (2.0 / v + 1.0 / c);
        m
    }

    /// `V*^2 < g H*` at every given point.
    pub fn check_subcritical(&self, xs: &[f64]) -> Result<()> {
        for &x in xs {
            let h = (self.h_star)(x);
            let v = (self.v_star)(x);
            if !(h > 0.0) || !(v * v < self.g * h) {
                return Err(Error::Model(format!(
                    "equilibrium is not sub-critical at x = {x}: H* = {h}, V* = {v}"
                )));
            }
        }
        Ok(())
    }

    /// `kappa = (k sqrt(H*/g) - 1) / (1 + k sqrt(H*/g))` at each end, when
    /// both physical gains are set.
    pub fn kappa_from_gains(&self) -> Result<Option<(f64, f64)>> {
        let (Some(k0), Some(kl)) = (self.k0, self.kl) else {
            return Ok(None);
        };
        let map = |k: f64, x: f64| -> Result<f64> {
            let s = k * ((self.h_star)(x) / self.g).sqrt();
            let kappa = (s - 1.0) / (1.0 + s);
            if !kappa.is_finite() || kappa == 1.0 {
                return Err(Error::Model(format!("boundary gain {k} gives an invalid kappa ({kappa})")));
            }
            Ok(kappa)
        };
        Ok(Some((map(k0, 0.0)?, map(kl, self.length)?)))
    }

    /// `(H, V) -> (w1, w2)` at `x`.
    pub fn to_characteristic(&self, x: f64, h: f64, v: f64) -> [f64; 2] {
        let hs = (self.h_star)(x);
        let dv = v - (self.v_star)(x);
        let dh = (h - hs) * (self.g / hs).sqrt();
        [dv + dh, dv - dh]
    }

    /// `(w1, w2) -> (H, V)` at `x`.
    pub fn from_characteristic(&self, x: f64, w: [f64; 2]) -> (f64, f64) {
        let hs = (self.h_star)(x);
        let v = (self.v_star)(x) + 0.5 * (w[0] + w[1]);
        let h = hs + 0.5 * (w[0] - w[1]) / (self.g / hs).sqrt();
        (h, v)
    }
}

/// Sampled coefficients plus, when an override replaces the source matrix,
/// the largest entrywise gap to the formula values.
#[derive(Debug, Clone)]
pub struct SaintVenantLinearization {
    pub coefficients: SystemCoefficients,
    pub formula_deviation: Option<f64>,
}

pub fn linearize_saint_venant(
    params: &SaintVenantParams,
    grid: &Grid1D,
    gamma_override: Option<&SquareMatrix>,
) -> Result<SaintVenantLinearization> {
    params.check_subcritical(&grid.centers_with_ghosts())?;
    let mut formula_deviation = None;
    if let Some(g) = gamma_override {
        if g.size() != 2 {
            return Err(Error::Dimension("Saint-Venant source override must be 2x2".into()));
        }
        let dev = (0..grid.cells() as isize)
            .map(|j| params.gamma(grid.center(j)).sub(g).max_abs())
            .fold(0.0, f64::max);
        formula_deviation = Some(dev);
    }
    let coefficients = sample_coefficients(
        |x| params.lambda(x).to_vec(),
        |x| gamma_override.cloned().unwrap_or_else(|| params.gamma(x)),
        grid,
    )?;
    Ok(SaintVenantLinearization {
        coefficients,
        formula_deviation,
    })
}

/// Decay experiment: constant equilibrium `H* = 2`, `V* = 3`, source values
/// `gamma11 = gamma21 = 0.0992`, `gamma12 = gamma22 = 0.2008`, weights
/// `p1 = 0.0992`, `p2 = 0.2008` with rate `mu`, gains `kappa12 = 0.5`,
/// `kappa21 = 1.5 e^{-mu}`, `H(x,0) = 2.5`, `V(x,0) = 4 sin(pi x)`.
pub fn decay_example_spec(mu: f64, cells: usize) -> ScenarioSpec {
    ScenarioSpec {
        name: format!("saint-venant decay, mu = {mu}"),
        grid: GridSpec {
            length: 1.0,
            cells,
            final_time: 10.0,
            cfl: 0.75,
        },
        model: ModelSpec::SaintVenant {
            g: 9.81,
            cf: 0.1,
            sb: 0.0459,
            h_star: 2.0,
            v_star: 3.0,
            k0: None,
            kl: None,
        },
        weights: WeightsSpec::Exponential {
            p_plus: vec![0.0992],
            p_minus: vec![0.2008],
            mu,
        },
        xi: 0.125,
        boundary: crate::scenario::BoundarySpec {
            feedback: None,
            injection: None,
            disturbance: DisturbanceSpec::Pulse {
                amplitude: 0.01,
                cutoff: 5.0,
                direction: vec![1.0, -1.0],
            },
        },
        initial: InitialSpec::ShallowWater {
            depth: 2.5,
            velocity_amplitude: 4.0,
        },
        gamma_override: Some(vec![vec![0.0992, 0.2008], vec![0.0992, 0.2008]]),
        kappa: Some(KappaSpec {
            kappa12: 0.5,
            kappa21: 1.5,
            kappa21_times_exp_minus_mu: true,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn example_speeds_and_transform() {
        let p = SaintVenantParams::example();
        let [l1, l2] = p.lambda(0.3);
        assert_relative_eq!(l1, 7.4294, epsilon = 1e-4);
        assert_relative_eq!(l2, -1.4294, epsilon = 1e-4);
        assert_relative_eq!(l1 - l2, 2.0 * (9.81_f64 * 2.0).sqrt(), max_relative = 1e-15);

        let x = 0.25;
        let w = p.to_characteristic(x, 2.5, 4.0 * (std::f64::consts::PI * x).sin());
        let s = 4.0 * (std::f64::consts::PI * x).sin();
        assert_relative_eq!(w[0], -1.8926 + s, epsilon = 1e-4);
        assert_relative_eq!(w[1], -4.1074 + s, epsilon = 1e-4);
        let (h, v) = p.from_characteristic(x, w);
        assert_relative_eq!(h, 2.5, max_relative = 1e-12);
        assert_relative_eq!(v, s, max_relative = 1e-12);
    }

    #[test]
    fn gains_map_to_kappa() {
        let mut p = SaintVenantParams::example();
        assert_eq!(p.kappa_from_gains().unwrap(), None);
        // k sqrt(H*/g) = 1 gives kappa = 0
        let k = (9.81_f64 / 2.0).sqrt();
        p.k0 = Some(k);
        p.kl = Some(3.0 * k);
        let (k12, k21) = p.kappa_from_gains().unwrap().unwrap();
        assert!(k12.abs() < 1e-15);
        assert_relative_eq!(k21, 0.5, max_relative = 1e-14);
        p.kl = Some(-k);
        assert!(p.kappa_from_gains().is_err());
    }

    #[test]
    fn supercritical_rejected() {
        let p = SaintVenantParams::constant(9.81, 0.1, 0.0459, 0.5, 3.0);
        let grid = Grid1D::new(1.0, 10, 1.0, 0.5, 1.0).unwrap();
        assert!(matches!(linearize_saint_venant(&p, &grid, None), Err(Error::Model(_))));
    }

    #[test]
    fn override_flags_disagreement() {
        let p = SaintVenantParams::example();
        let grid = Grid1D::new(1.0, 10, 1.0, 0.5, 8.0).unwrap();
        let o = SquareMatrix::from_rows(&[vec![0.0992, 0.2008], vec![0.0992, 0.2008]]).unwrap();
        let lin = linearize_saint_venant(&p, &grid, Some(&o)).unwrap();
        assert!(lin.formula_deviation.unwrap() > 1e-6);
        assert_eq!(lin.coefficients.pi(3), &o);
        let lin = linearize_saint_venant(&p, &grid, None).unwrap();
        assert!(lin.formula_deviation.is_none());
        assert_eq!(lin.coefficients.pi(3), &p.gamma(grid.center(3)));
    }
}
