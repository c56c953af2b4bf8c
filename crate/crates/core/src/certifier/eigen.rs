//! Eigenvalues of small symmetric matrices: closed form for 2x2, cyclic
//! Jacobi rotations otherwise.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Ascending eigenvalues of `(A + A^T) / 2`.
pub fn symmetric_eigenvalues(a: &SquareMatrix) -> Result<Vec<f64>> {
    let s = a.symmetrized();
    match s.size() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![s[(0, 0)]]),
        2 => {
            let (lo, hi) = eigen_2x2(s[(0, 0)], s[(0, 1)], s[(1, 1)]);
            Ok(vec![lo, hi])
        }
        _ => jacobi_eigenvalues(&s),
    }
}

/// `(sigma-, sigma+)` of `[[a11, a12], [a12, a22]]`, i.e.
/// `((a11 + a22) -/+ sqrt((a11 + a22)^2 - 4 (a11 a22 - a12^2))) / 2`.
///
/// The discriminant is evaluated as `(a11 - a22)^2 + 4 a12^2`, and the root
/// of smaller magnitude is recovered from the determinant.
pub fn eigen_2x2(a11: f64, a12: f64, a22: f64) -> (f64, f64) {
    let trace = a11 + a22;
    let det = a11 * a22 - a12 * a12;
    let root = ((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12).sqrt();
    let big = 0.5 * (trace + trace.signum() * root);
    let (x, y) = if big == 0.0 { (0.0, 0.0) } else { (big, det / big) };
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Cyclic Jacobi on the symmetric part of `a`, sweeping until the
/// off-diagonal Frobenius norm drops below `1e-12` times the matrix norm.
pub fn jacobi_eigenvalues(a: &SquareMatrix) -> Result<Vec<f64>> {
    let mut s = a.symmetrized();
    let n = s.size();
    let scale = frobenius(&s).max(f64::MIN_POSITIVE);
    let mut off = off_diagonal(&s);
    let mut sweeps = 0;
    while off > JACOBI_TOL * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut s, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal(&s);
    }
    let mut values = s.diagonal();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn rotate(s: &mut SquareMatrix, p: usize, q: usize) {
    let apq = s[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (s[(q, q)] - s[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * c;
    let n = s.size();
    for k in 0..n {
        let skp = s[(k, p)];
        let skq = s[(k, q)];
        s[(k, p)] = c * skp - sn * skq;
        s[(k, q)] = sn * skp + c * skq;
    }
    for k in 0..n {
        let spk = s[(p, k)];
        let sqk = s[(q, k)];
        s[(p, k)] = c * spk - sn * sqk;
        s[(q, k)] = sn * spk + c * sqk;
    }
    s[(p, q)] = 0.0;
    s[(q, p)] = 0.0;
}

fn off_diagonal(s: &SquareMatrix) -> f64 {
    let n = s.size();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += s[(i, j)] * s[(i, j)];
            }
        }
    }
    sum.sqrt()
}

fn frobenius(s: &SquareMatrix) -> f64 {
    s.rows().iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}
