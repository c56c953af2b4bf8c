//! Lower real branch `W_{-1}` of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / E;
const MAX_ITER: usize = 100;

/// `w <= -1` with `w e^w = z` for `z` in `[-1/e, 0)`.
///
/// Halley iteration on `w e^w - z`, seeded by the branch-point series near
/// `-1/e` and by `ln(-z) - ln(-ln(-z))` elsewhere. For `|z| < 1e-3` the
/// equation is solved in log form, see [`lambert_w_minus1_log`].
pub fn lambert_w_minus1(z: f64) -> Result<f64> {
    if !(z < 0.0) || z < -INV_E * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::LambertDomain(z));
    }
    let w = if z.abs() < 1e-3 {
        lambert_w_minus1_log((-z).ln())?
    } else {
        let q = 1.0 + E * z;
        if q <= 0.0 {
            return Ok(-1.0);
        }
        let seed = if z < -0.25 {
            let p = -(2.0 * q).sqrt();
            -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
        } else {
            let l1 = (-z).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        };
        halley(z, seed)
    };
    Ok(polish(z, w))
}

/// Solves `w + ln(-w) = s` on `w <= -1`, i.e. `W_{-1}(z)` for `s = ln(-z)`.
///
/// Working with `s` avoids forming `z` when it would underflow, and keeps
/// full relative precision in `w` for tiny `|z|`. Requires `s <= -1`.
pub fn lambert_w_minus1_log(s: f64) -> Result<f64> {
    if !(s <= -1.0) {
        return Err(Error::LambertDomain(-s.exp()));
    }
    let mut w = if s > -3.0 {
        -1.0 - (2.0 * (-1.0 - s)).sqrt()
    } else {
        s - (-s).ln()
    };
    if w >= -1.0 {
        return Ok(-1.0);
    }
    for _ in 0..MAX_ITER {
        let f = w + (-w).ln() - s;
        let step = f / (1.0 + 1.0 / w);
        let next = (w - step).min(-1.0);
        let done = (next - w).abs() <= 2.0 * f64::EPSILON * w.abs();
        w = next;
        if done || !step.is_finite() {
            break;
        }
    }
    Ok(w)
}

fn halley(z: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        let next = (w - step).min(-1.0);
        let done = (next - w).abs() <= 2.0 * f64::EPSILON * w.abs();
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Moves `w` to whichever neighboring double gives the smallest residual.
fn polish(z: f64, w: f64) -> f64 {
    let residual = |v: f64| (v * v.exp() - z).abs();
    let mut best = w;
    let mut best_r = residual(w);
    for dir in [-1.0_f64, 1.0] {
        let mut v = w;
        for _ in 0..4 {
            v = neighbor(v, dir);
            if v > -1.0 {
                break;
            }
            let r = residual(v);
            if r < best_r {
                best = v;
                best_r = r;
            }
        }
    }
    best
}

/// Adjacent double towards `+inf` (`dir > 0`) or `-inf`, for negative finite `v`.
fn neighbor(v: f64, dir: f64) -> f64 {
    let bits = v.to_bits();
    // magnitude grows with the bit pattern for negative numbers
    if dir > 0.0 {
        f64::from_bits(bits - 1)
    } else {
        f64::from_bits(bits + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_point_and_known_value() {
        assert!((lambert_w_minus1(-INV_E).unwrap() + 1.0).abs() < 1e-7);
        let w = lambert_w_minus1(-0.1).unwrap();
        assert!((w + 3.577152).abs() < 1e-6);
        assert_eq!(lambert_w_minus1(-225.0 * (-225.0_f64).exp()).unwrap(), -225.0);
        assert!((lambert_w_minus1_log(225.0_f64.ln() - 225.0).unwrap() + 225.0).abs() < 1e-12);
    }

    #[test]
    fn domain() {
        for z in [0.0, 0.1, -0.5, f64::NAN] {
            assert!(matches!(lambert_w_minus1(z), Err(Error::LambertDomain(_))));
        }
        assert!(lambert_w_minus1_log(0.0).is_err());
    }

    #[test]
    fn residual_near_branch_point() {
        for k in 1..12 {
            let z = -INV_E * (1.0 - 10f64.powi(-k));
            let w = lambert_w_minus1(z).unwrap();
            assert!(w <= -1.0);
            assert!((w * w.exp() - z).abs() <= 1e-13 * z.abs(), "z = {z}, w = {w}");
        }
    }
}
