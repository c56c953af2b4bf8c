//! Discrete ISS conditions for the split upwind scheme.
//!
//! * C1: `Theta_j` positive definite for every interior cell, giving the decay
//!   rate `eta`;
//! * C2: `P_j Pi_j + Pi_j^T P_j - dt Pi_j^T P_j Pi_j` positive semi-definite;
//! * C3: the boundary matrix `B_c` positive semi-definite for the chosen `xi`.
//!
//! All three only read the sampled speeds, weights and source matrices, so a
//! certificate never requires running the scheme.

mod eigen;

pub use eigen::{eigen_2x2, jacobi_eigenvalues, symmetric_eigenvalues};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::matrix::SquareMatrix;
use crate::system::SystemCoefficients;
use crate::weights::{WeightField, WeightSpec};

/// An eigenvalue at or above `-PSD_RELATIVE_TOL * max|M_ij|` counts as
/// non-negative.
pub const PSD_RELATIVE_TOL: f64 = 1e-10;
/// Strict positivity threshold for C1.
pub const PD_ABSOLUTE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    C1,
    C2,
    C3,
    Gronwall,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C1 => "C1 (transport)",
            Condition::C2 => "C2 (source)",
            Condition::C3 => "C3 (boundary)",
            Condition::Gronwall => "eta*dt < 1",
        };
        f.write_str(s)
    }
}

/// First offending cell, component and value of a failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: Condition,
    pub cell: Option<usize>,
    pub component: Option<usize>,
    pub value: f64,
    pub matrix: Option<SquareMatrix>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails", self.condition)?;
        if let Some(j) = self.cell {
            write!(f, " at cell j = {j}")?;
        }
        if let Some(i) = self.component {
            write!(f, ", component {i}")?;
        }
        write!(f, ": value {:e}", self.value)?;
        if let Some(m) = &self.matrix {
            write!(f, ", matrix {:?}", m.rows())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaCell {
    /// Diagonal of `Theta_j`.
    pub entries: Vec<f64>,
    /// `Theta_j[i,i] / P_j[i,i]`.
    pub ratios: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaCheck {
    pub cells: Vec<ThetaCell>,
    pub passed: bool,
    /// `min_{j,i} Theta_j[i,i] / P_j[i,i]`.
    pub eta_discrete: f64,
    /// Reported decay rate; see [`certified_eta`].
    pub eta: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceCell {
    /// `[M11, M12, M22]` for two components.
    pub closed_form: Option<[f64; 3]>,
    /// Ascending eigenvalues; `(sigma-, sigma+)` for two components.
    pub eigenvalues: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceCheck {
    pub cells: Vec<SourceCell>,
    pub passed: bool,
    pub min_eigenvalue: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaBounds {
    pub kappa12_max: f64,
    pub kappa21_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub matrix: SquareMatrix,
    pub eigenvalues: Vec<f64>,
    pub passed: bool,
    pub kappa_bounds: Option<KappaBounds>,
    pub witness: Option<Witness>,
}

/// `diag{Lambda+_{J-1} P+_J, |Lambda-_0| P-_{-1}}`: outflow weights.
fn outflow_weights(c: &SystemCoefficients, w: &WeightField) -> Vec<f64> {
    let last = c.cells() as isize - 1;
    (0..c.k())
        .map(|i| {
            if i < c.m() {
                c.speed(last, i) * w.at(last + 1)[i]
            } else {
                c.speed(0, i) * w.at(-1)[i]
            }
        })
        .collect()
}

/// `diag{Lambda+_{-1} P+_0, |Lambda-_J| P-_{J-1}}`: inflow weights.
fn inflow_weights(c: &SystemCoefficients, w: &WeightField) -> Vec<f64> {
    let cells = c.cells() as isize;
    (0..c.k())
        .map(|i| {
            if i < c.m() {
                c.speed(-1, i) * w.at(0)[i]
            } else {
                c.speed(cells, i) * w.at(cells - 1)[i]
            }
        })
        .collect()
}

fn check_shapes(c: &SystemCoefficients, w: &WeightField) -> Result<()> {
    if c.k() != w.k() || c.m() != w.m() || c.cells() != w.cells() {
        return Err(Error::Dimension(format!(
            "coefficients (k = {}, m = {}, J = {}) and weights (k = {}, m = {}, J = {}) disagree",
            c.k(),
            c.m(),
            c.cells(),
            w.k(),
            w.m(),
            w.cells()
        )));
    }
    Ok(())
}

/// The reported decay rate. For an exponential weight with `h = mu dx > 0`
/// the tight ratio is scaled by `h e^{-h} / (1 - e^{-h})`, which turns
/// `alpha (1 - e^{-h}) / dx` into `mu alpha e^{-h}`; otherwise the tight
/// ratio is returned as is.
pub fn certified_eta(eta_discrete: f64, weights: &WeightField, dx: f64) -> f64 {
    match weights.exponential_rate() {
        Some(mu) if mu > 0.0 => {
            let h = mu * dx;
            eta_discrete * h * (-h).exp() / -(-h).exp_m1()
        }
        _ => eta_discrete,
    }
}

/// C1: the diagonal matrices `Theta_j`, `j = 0..J-1`.
pub fn check_theta(coefficients: &SystemCoefficients, weights: &WeightField, grid: &Grid1D) -> Result<ThetaCheck> {
    check_shapes(coefficients, weights)?;
    let (c, w) = (coefficients, weights);
    let dx = grid.dx();
    let mut cells = Vec::with_capacity(c.cells());
    let mut witness = None;
    let mut eta_discrete = f64::INFINITY;
    for j in 0..c.cells() as isize {
        let mut entries = Vec::with_capacity(c.k());
        let mut ratios = Vec::with_capacity(c.k());
        for i in 0..c.k() {
            let theta = if i < c.m() {
                let (lm, l0) = (c.speed(j - 1, i), c.speed(j, i));
                let (p0, p1) = (w.at(j)[i], w.at(j + 1)[i]);
                -lm * (p1 - p0) / dx - (l0 - lm) / dx * p1
            } else {
                let (l0, l1) = (c.speed(j, i), c.speed(j + 1, i));
                let (pm, p0) = (w.at(j - 1)[i], w.at(j)[i]);
                l1 * (p0 - pm) / dx + (l1 - l0) / dx * pm
            };
            let ratio = theta / w.at(j)[i];
            if !(theta > PD_ABSOLUTE_TOL) && witness.is_none() {
                witness = Some(Witness {
                    condition: Condition::C1,
                    cell: Some(j as usize),
                    component: Some(i),
                    value: theta,
                    matrix: None,
                });
            }
            eta_discrete = eta_discrete.min(ratio);
            entries.push(theta);
            ratios.push(ratio);
        }
        let passed = entries.iter().all(|t| *t > PD_ABSOLUTE_TOL);
        cells.push(ThetaCell { entries, ratios, passed });
    }
    Ok(ThetaCheck {
        passed: witness.is_none(),
        eta: certified_eta(eta_discrete, w, dx),
        eta_discrete,
        cells,
        witness,
    })
}

/// `P Pi + Pi^T P - dt Pi^T P Pi` for one cell.
pub fn source_matrix(p: &[f64], pi: &SquareMatrix, dt: f64) -> SquareMatrix {
    let pm = SquareMatrix::from_diagonal(p);
    let p_pi = pm.matmul(pi);
    let quad = pi.transpose().matmul(&p_pi);
    p_pi.add(&p_pi.transpose()).sub(&quad.scale(dt))
}

/// Entries `[M11, M12, M22]` of the two-component source matrix written out
/// in terms of `gamma` and the weights.
pub fn source_closed_form(p: &[f64], g: &SquareMatrix, dt: f64) -> [f64; 3] {
    let (p1, p2) = (p[0], p[1]);
    let (g11, g12, g21, g22) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    [
        2.0 * g11 * p1 - dt * (g11 * g11 * p1 + g21 * g21 * p2),
        g21 * p2 + g12 * p1 - dt * (g11 * g12 * p1 + g21 * g22 * p2),
        2.0 * g22 * p2 - dt * (g12 * g12 * p1 + g22 * g22 * p2),
    ]
}

fn is_psd(min_eigenvalue: f64, m: &SquareMatrix) -> bool {
    min_eigenvalue >= -PSD_RELATIVE_TOL * m.max_abs()
}

/// C2 at every interior cell.
pub fn check_source(coefficients: &SystemCoefficients, weights: &WeightField, dt: f64) -> Result<SourceCheck> {
    check_shapes(coefficients, weights)?;
    let mut cells = Vec::with_capacity(coefficients.cells());
    let mut witness = None;
    let mut min_eigenvalue = f64::INFINITY;
    for j in 0..coefficients.cells() {
        let p = weights.at(j as isize);
        let pi = coefficients.pi(j);
        let m = source_matrix(p, pi, dt);
        let asym = m.asymmetry();
        if asym > 1e-12 * m.max_abs().max(1.0) {
            return Err(Error::Asymmetric(asym));
        }
        let (closed_form, eigenvalues) = if coefficients.k() == 2 {
            let cf = source_closed_form(p, pi, dt);
            let (lo, hi) = eigen_2x2(cf[0], cf[1], cf[2]);
            (Some(cf), vec![lo, hi])
        } else {
            (None, symmetric_eigenvalues(&m)?)
        };
        let lowest = eigenvalues.first().copied().unwrap_or(0.0);
        let passed = is_psd(lowest, &m);
        if !passed && witness.is_none() {
            witness = Some(Witness {
                condition: Condition::C2,
                cell: Some(j),
                component: None,
                value: lowest,
                matrix: Some(m),
            });
        }
        min_eigenvalue = min_eigenvalue.min(lowest);
        cells.push(SourceCell {
            closed_form,
            eigenvalues,
            passed,
        });
    }
    Ok(SourceCheck {
        cells,
        passed: witness.is_none(),
        min_eigenvalue,
        witness,
    })
}

/// Largest admissible `|kappa12|`, `|kappa21|` for a 2x2 system with one
/// positive speed.
pub fn kappa_bounds(coefficients: &SystemCoefficients, weights: &WeightField, xi: f64) -> Option<KappaBounds> {
    if coefficients.k() != 2 || coefficients.m() != 1 {
        return None;
    }
    let out = outflow_weights(coefficients, weights);
    let inn = inflow_weights(coefficients, weights);
    Some(KappaBounds {
        kappa12_max: (out[1] / ((1.0 + xi) * inn[0])).sqrt(),
        kappa21_max: (out[0] / ((1.0 + xi) * inn[1])).sqrt(),
    })
}

/// C3: `B_c = diag(outflow) - (1 + xi) K^T diag(inflow) K`.
pub fn check_boundary(coefficients: &SystemCoefficients, weights: &WeightField, xi: f64) -> Result<BoundaryCheck> {
    check_shapes(coefficients, weights)?;
    if !(xi > 0.0) {
        return Err(Error::Scenario(format!("xi must be positive, got {xi}")));
    }
    let k = coefficients.boundary().feedback();
    let out = SquareMatrix::from_diagonal(&outflow_weights(coefficients, weights));
    let inn = SquareMatrix::from_diagonal(&inflow_weights(coefficients, weights));
    let matrix = out.sub(&k.transpose().matmul(&inn).matmul(k).scale(1.0 + xi));
    let eigenvalues = symmetric_eigenvalues(&matrix)?;
    let lowest = eigenvalues.first().copied().unwrap_or(0.0);
    let passed = is_psd(lowest, &matrix);
    let witness = (!passed).then(|| Witness {
        condition: Condition::C3,
        cell: None,
        component: None,
        value: lowest,
        matrix: Some(matrix.clone()),
    });
    Ok(BoundaryCheck {
        kappa_bounds: kappa_bounds(coefficients, weights, xi),
        matrix,
        eigenvalues,
        passed,
        witness,
    })
}

/// Largest eigenvalue of `M^T diag(inflow) M`.
pub fn compute_nu(coefficients: &SystemCoefficients, weights: &WeightField) -> Result<f64> {
    check_shapes(coefficients, weights)?;
    let m = coefficients.boundary().injection_matrix();
    let inn = SquareMatrix::from_diagonal(&inflow_weights(coefficients, weights));
    let g = m.transpose().matmul(&inn).matmul(&m);
    Ok(symmetric_eigenvalues(&g)?.last().copied().unwrap_or(0.0).max(0.0))
}

/// Everything [`certify`] computes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub passed: bool,
    pub failure: Option<Witness>,
    pub eta: f64,
    pub eta_discrete: f64,
    pub nu: f64,
    pub xi: f64,
    pub dt: f64,
    pub dx: f64,
    pub cells: usize,
    /// `min` and `max` of the interior weight diagonals.
    pub zeta: f64,
    pub beta: f64,
    /// `beta / zeta`
    pub c1: f64,
    /// `nu / zeta`
    pub c2: f64,
    /// `(1 + 1/xi) nu / eta`, the disturbance offset per unit `sup|b|^2`.
    pub envelope_gain: f64,
    pub weights: WeightSpec,
    pub theta: ThetaCheck,
    pub source: SourceCheck,
    pub boundary: BoundaryCheck,
}

/// Runs C1-C3 and assembles the constants. A failed check is reported in
/// `failure` (the first of C1, C2, C3, Gronwall in that order) while the rest
/// of the report is still filled in.
pub fn certify(
    coefficients: &SystemCoefficients,
    weights: &WeightField,
    grid: &Grid1D,
    xi: f64,
) -> Result<CertificateReport> {
    if coefficients.cells() != grid.cells() {
        return Err(Error::Dimension("coefficients sampled on a different grid".into()));
    }
    let theta = check_theta(coefficients, weights, grid)?;
    let source = check_source(coefficients, weights, grid.dt())?;
    let boundary = check_boundary(coefficients, weights, xi)?;
    let nu = compute_nu(coefficients, weights)?;
    let (zeta, beta) = weights.interior_bounds();
    let eta = theta.eta;
    let gronwall = (eta * grid.dt() < 1.0).then_some(()).ok_or(Witness {
        condition: Condition::Gronwall,
        cell: None,
        component: None,
        value: eta * grid.dt(),
        matrix: None,
    });
    let failure = theta
        .witness
        .clone()
        .or_else(|| source.witness.clone())
        .or_else(|| boundary.witness.clone())
        .or(gronwall.err());
    Ok(CertificateReport {
        passed: failure.is_none(),
        failure,
        eta,
        eta_discrete: theta.eta_discrete,
        nu,
        xi,
        dt: grid.dt(),
        dx: grid.dx(),
        cells: grid.cells(),
        zeta,
        beta,
        c1: beta / zeta,
        c2: nu / zeta,
        envelope_gain: (1.0 + 1.0 / xi) * nu / eta,
        weights: weights.spec().clone(),
        theta,
        source,
        boundary,
    })
}

impl CertificateReport {
    /// Short human-readable summary; per-cell data stays in the JSON form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = |b: bool| if b { "pass" } else { "FAIL" };
        s.push_str(&format!("overall: {}\n", verdict(self.passed)));
        if let Some(w) = &self.failure {
            s.push_str(&format!("witness: {w}\n"));
        }
        s.push_str(&format!("J = {}, dx = {}, dt = {}, xi = {}\n", self.cells, self.dx, self.dt, self.xi));
        s.push_str(&format!(
            "C1 transport: {} (eta = {:.5}, eta_discrete = {:.5})\n",
            verdict(self.theta.passed),
            self.eta,
            self.eta_discrete
        ));
        s.push_str(&format!(
            "C2 source:    {} (min eigenvalue = {:e})\n",
            verdict(self.source.passed),
            self.source.min_eigenvalue
        ));
        s.push_str(&format!(
            "C3 boundary:  {} (eigenvalues = {:?})\n",
            verdict(self.boundary.passed),
            self.boundary.eigenvalues
        ));
        if let Some(kb) = self.boundary.kappa_bounds {
            s.push_str(&format!(
                "  |kappa12| <= {:.4}, |kappa21| <= {:.4}\n",
                kb.kappa12_max, kb.kappa21_max
            ));
        }
        s.push_str(&format!(
            "nu = {:.4}, zeta = {:.4}, beta = {:.4}, C1 = {:.4}, C2 = {:.4}, (1+1/xi) nu/eta = {:.4}\n",
            self.nu, self.zeta, self.beta, self.c1, self.c2, self.envelope_gain
        ));
        s
    }
}

/// One row of a `xi` sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub xi: f64,
    pub kappa12_max: Option<f64>,
    pub kappa21_max: Option<f64>,
    pub nu: f64,
    pub eta: f64,
    pub envelope_gain: f64,
    pub boundary_passed: bool,
}

/// C3 and the envelope constant across several `xi`. `eta` and `nu` do not
/// depend on `xi` and are computed once.
pub fn xi_sweep(
    coefficients: &SystemCoefficients,
    weights: &WeightField,
    grid: &Grid1D,
    xis: &[f64],
) -> Result<Vec<SweepRow>> {
    let eta = check_theta(coefficients, weights, grid)?.eta;
    let nu = compute_nu(coefficients, weights)?;
    xis.iter()
        .map(|&xi| {
            let b = check_boundary(coefficients, weights, xi)?;
            Ok(SweepRow {
                xi,
                kappa12_max: b.kappa_bounds.map(|k| k.kappa12_max),
                kappa21_max: b.kappa_bounds.map(|k| k.kappa21_max),
                nu,
                eta,
                envelope_gain: (1.0 + 1.0 / xi) * nu / eta,
                boundary_passed: b.passed,
            })
        })
        .collect()
}

/// Sampled continuous check: the interior and boundary matrices of the
/// continuous Lyapunov argument evaluated with grid samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledContinuousCheck {
    /// Smallest eigenvalue of `-(Lambda P)' + Pi^T P + P Pi` per interior cell.
    pub interior_min_eigenvalues: Vec<f64>,
    pub interior_passed: bool,
    pub boundary_eigenvalues: Vec<f64>,
    pub boundary_passed: bool,
}

/// Derivatives are centered differences over neighboring samples; boundary
/// values are averages of the ghost and the adjacent interior sample.
pub fn sampled_continuous_check(
    coefficients: &SystemCoefficients,
    weights: &WeightField,
    grid: &Grid1D,
    xi: f64,
) -> Result<SampledContinuousCheck> {
    check_shapes(coefficients, weights)?;
    let (c, w) = (coefficients, weights);
    let k = c.k();
    let dx = grid.dx();
    let flux = |j: isize, i: usize| c.lambda(j)[i] * w.at(j)[i];
    let mut interior_min_eigenvalues = Vec::with_capacity(c.cells());
    for j in 0..c.cells() as isize {
        let p = SquareMatrix::from_diagonal(w.at(j));
        let pi = c.pi(j as usize);
        let p_pi = p.matmul(pi);
        let mut q = p_pi.add(&p_pi.transpose());
        for i in 0..k {
            q[(i, i)] -= (flux(j + 1, i) - flux(j - 1, i)) / (2.0 * dx);
        }
        interior_min_eigenvalues.push(symmetric_eigenvalues(&q)?[0]);
    }
    let cells = c.cells() as isize;
    let left = |i: usize| 0.5 * (flux(-1, i) + flux(0, i)).abs();
    let right = |i: usize| 0.5 * (flux(cells - 1, i) + flux(cells, i)).abs();
    let out: Vec<f64> = (0..k).map(|i| if i < c.m() { right(i) } else { left(i) }).collect();
    let inn: Vec<f64> = (0..k).map(|i| if i < c.m() { left(i) } else { right(i) }).collect();
    let kk = c.boundary().feedback();
    let b = SquareMatrix::from_diagonal(&out).sub(
        &kk.transpose()
            .matmul(&SquareMatrix::from_diagonal(&inn))
            .matmul(kk)
            .scale(1.0 + xi),
    );
    let boundary_eigenvalues = symmetric_eigenvalues(&b)?;
    Ok(SampledContinuousCheck {
        interior_passed: interior_min_eigenvalues.iter().all(|v| *v > PD_ABSOLUTE_TOL),
        interior_min_eigenvalues,
        boundary_passed: is_psd(boundary_eigenvalues[0], &b),
        boundary_eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{sample_coefficients, BoundaryCoupling};
    use approx::assert_relative_eq;

    fn benchmark(cells: usize, cfl: f64, kappa: (f64, f64)) -> (Grid1D, SystemCoefficients, WeightField) {
        let grid = Grid1D::new(1.0, cells, 10.0, cfl, 1.0).unwrap();
        let gamma = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
        let c = sample_coefficients(|_| vec![1.0, -1.0], |_| gamma.clone(), &grid)
            .unwrap()
            .with_boundary(BoundaryCoupling::two_by_two(kappa.0, kappa.1, 1.0, 1.0))
            .unwrap();
        let w = WeightField::exponential(&[1.0], &[1.0], 0.575, &grid).unwrap();
        (grid, c, w)
    }

    #[test]
    fn theta_rate_for_exponential_weights() {
        let (grid, c, w) = benchmark(1600, 0.75, (0.5, 0.5));
        let th = check_theta(&c, &w, &grid).unwrap();
        assert!(th.passed);
        let h = 0.575 * grid.dx();
        assert_relative_eq!(th.eta_discrete, -(-h).exp_m1() / grid.dx(), max_relative = 1e-9);
        assert_relative_eq!(th.eta, 0.575 * (-h).exp(), max_relative = 1e-9);
        assert!(th.eta <= th.eta_discrete);
    }

    #[test]
    fn constant_weights_fail_c1() {
        let (grid, c, _) = benchmark(50, 0.75, (0.5, 0.5));
        let w = WeightField::exponential(&[1.0], &[1.0], 0.0, &grid).unwrap();
        let th = check_theta(&c, &w, &grid).unwrap();
        assert!(!th.passed);
        let wit = th.witness.unwrap();
        assert_eq!((wit.cell, wit.component), (Some(0), Some(0)));
        assert_eq!(wit.value, 0.0);
    }

    #[test]
    fn source_closed_form_agrees_with_products() {
        let (grid, c, w) = benchmark(1600, 0.75, (0.5, 0.5));
        let dt = grid.dt();
        let sc = check_source(&c, &w, dt).unwrap();
        assert!(sc.passed);
        for j in [0usize, 800, 1599] {
            let m = source_matrix(w.at(j as isize), c.pi(j), dt);
            let cf = sc.cells[j].closed_form.unwrap();
            assert_relative_eq!(m[(0, 0)], cf[0], max_relative = 1e-13);
            assert_relative_eq!(m[(0, 1)], cf[1], max_relative = 1e-13);
            assert_relative_eq!(m[(1, 1)], cf[2], max_relative = 1e-13);
        }
    }

    #[test]
    fn source_hand_example() {
        // unit weights: M = G + G^T - dt G^T G
        let g = SquareMatrix::from_rows(&[vec![0.3, -0.1], vec![-0.1, 0.3]]).unwrap();
        let dt = 0.75 / 1600.0;
        let m = source_matrix(&[1.0, 1.0], &g, dt);
        assert_relative_eq!(m[(0, 0)], 0.6 - dt * 0.1, max_relative = 1e-14);
        assert_relative_eq!(m[(0, 1)], -0.2 + dt * 0.06, max_relative = 1e-14);
        let ev = symmetric_eigenvalues(&m).unwrap();
        // G has eigenvalues 0.2 and 0.4, so M has 2g - dt g^2
        assert_relative_eq!(ev[0], 0.4 - dt * 0.04, max_relative = 1e-13);
        assert_relative_eq!(ev[1], 0.8 - dt * 0.16, max_relative = 1e-13);
        let zero = source_matrix(&[1.0, 2.0], &SquareMatrix::zeros(2), dt);
        assert_eq!(zero, SquareMatrix::zeros(2));
    }

    #[test]
    fn boundary_bounds_and_nu() {
        let (grid, c, w) = benchmark(1600, 0.75, (0.5, 0.5));
        let b = check_boundary(&c, &w, 0.125).unwrap();
        assert!(b.passed);
        let kb = b.kappa_bounds.unwrap();
        let dx = grid.dx();
        // the ghost/first-cell weights at x = 0 coincide; at x = l they differ by e^{-2 mu}
        assert_relative_eq!(kb.kappa12_max, (1.0 / 1.125_f64).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(kb.kappa21_max, (-0.575_f64).exp() / 1.125_f64.sqrt(), max_relative = 1e-12);
        let nu = compute_nu(&c, &w).unwrap();
        assert_relative_eq!(nu, (0.575 * (1.0 - 0.5 * dx)).exp(), max_relative = 1e-12);
    }

    #[test]
    fn open_boundary_always_passes() {
        let (grid, c, w) = benchmark(40, 0.75, (0.0, 0.0));
        for xi in [1e-3, 1.0, 1e3] {
            assert!(check_boundary(&c, &w, xi).unwrap().passed);
        }
        let c = c.with_boundary(BoundaryCoupling::open(2)).unwrap();
        assert_eq!(compute_nu(&c, &w).unwrap(), 0.0);
        assert!(check_boundary(&c, &w, 0.0).is_err());
        let _ = grid;
    }

    #[test]
    fn certify_assembles_constants() {
        let (grid, c, w) = benchmark(200, 0.75, (0.5, 0.5));
        let r = certify(&c, &w, &grid, 0.125).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_relative_eq!(r.c1, r.beta / r.zeta);
        assert_relative_eq!(r.c2, r.nu / r.zeta);
        let (grid, c, w) = benchmark(200, 0.75, (0.95, 0.5));
        let r = certify(&c, &w, &grid, 0.125).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failure.unwrap().condition, Condition::C3);
        let json = serde_json::to_string(&r.boundary).unwrap();
        assert!(json.contains("kappa12_max"));
    }

    #[test]
    fn sweep_is_monotone() {
        let (grid, c, w) = benchmark(100, 0.75, (0.5, 0.5));
        let rows = xi_sweep(&c, &w, &grid, &[0.05, 0.125, 1.0, 10.0]).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].kappa12_max.unwrap() < pair[0].kappa12_max.unwrap());
            assert!(pair[1].envelope_gain < pair[0].envelope_gain);
            assert_eq!(pair[1].nu, pair[0].nu);
        }
    }

    #[test]
    fn continuous_check_on_benchmark() {
        let (grid, c, w) = benchmark(100, 0.75, (0.5, 0.5));
        let s = sampled_continuous_check(&c, &w, &grid, 0.125).unwrap();
        assert!(s.interior_passed);
        assert!(s.boundary_passed);
    }
}
