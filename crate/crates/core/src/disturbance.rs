//! Boundary disturbance signals `b(t)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type SignalFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub enum DisturbanceSignal {
    /// `b(t) = 0`.
    Zero { components: usize },
    /// `b(t) = c` for all t.
    Constant(Vec<f64>),
    /// `b(t) = direction * A sin^2(pi t)` for `0 <= t < cutoff`, zero afterwards.
    SinePulse {
        amplitude: f64,
        cutoff: f64,
        direction: Vec<f64>,
    },
    /// Piecewise-linear interpolation of tabulated samples, held constant
    /// outside the table.
    Tabulated { times: Vec<f64>, values: Vec<Vec<f64>> },
    Custom { components: usize, signal: SignalFn },
}

impl DisturbanceSignal {
    pub fn zero(components: usize) -> Self {
        Self::Zero { components }
    }

    /// The pulse used in both test problems: `b_1 = -b_2 = 0.01 sin^2(pi t)` on `[0, 5)`.
    pub fn standard_pulse() -> Self {
        Self::SinePulse {
            amplitude: 0.01,
            cutoff: 5.0,
            direction: vec![1.0, -1.0],
        }
    }

    pub fn tabulated(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::Dimension(format!(
                "tabulated disturbance needs matching non-empty tables ({} times, {} rows)",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Scenario("tabulated disturbance times must be strictly increasing".into()));
        }
        let k = values[0].len();
        if values.iter().any(|v| v.len() != k) {
            return Err(Error::Dimension("tabulated disturbance rows differ in length".into()));
        }
        Ok(Self::Tabulated { times, values })
    }

    pub fn custom(components: usize, f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self::Custom {
            components,
            signal: Arc::new(f),
        }
    }

    pub fn components(&self) -> usize {
        match self {
            Self::Zero { components } | Self::Custom { components, .. } => *components,
            Self::Constant(c) => c.len(),
            Self::SinePulse { direction, .. } => direction.len(),
            Self::Tabulated { values, .. } => values[0].len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero { .. })
    }

    pub fn value(&self, t: f64) -> Vec<f64> {
        match self {
            Self::Zero { components } => vec![0.0; *components],
            Self::Constant(c) => c.clone(),
            Self::SinePulse {
                amplitude,
                cutoff,
                direction,
            } => {
                let d = sine_pulse(*amplitude, *cutoff, t);
                direction.iter().map(|s| s * d).collect()
            }
            Self::Tabulated { times, values } => interpolate(times, values, t),
            Self::Custom { signal, .. } => signal(t),
        }
    }

    pub fn norm_sq(&self, t: f64) -> f64 {
        self.value(t).iter().map(|v| v * v).sum()
    }
}

/// Scalar profile `A sin^2(pi t)` on `[0, cutoff)`, zero elsewhere.
pub fn sine_pulse(amplitude: f64, cutoff: f64, t: f64) -> f64 {
    if (0.0..cutoff).contains(&t) {
        let s = (PI * t).sin();
        amplitude * s * s
    } else {
        0.0
    }
}

fn interpolate(times: &[f64], values: &[Vec<f64>], t: f64) -> Vec<f64> {
    if t <= times[0] {
        return values[0].clone();
    }
    let last = times.len() - 1;
    if t >= times[last] {
        return values[last].clone();
    }
    let i = times.partition_point(|&s| s <= t) - 1;
    let w = (t - times[i]) / (times[i + 1] - times[i]);
    values[i]
        .iter()
        .zip(&values[i + 1])
        .map(|(a, b)| a + w * (b - a))
        .collect()
}

impl fmt::Debug for DisturbanceSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero { components } => write!(f, "Zero({components})"),
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::SinePulse {
                amplitude,
                cutoff,
                direction,
            } => f
                .debug_struct("SinePulse")
                .field("amplitude", amplitude)
                .field("cutoff", cutoff)
                .field("direction", direction)
                .finish(),
            Self::Tabulated { times, .. } => write!(f, "Tabulated({} samples)", times.len()),
            Self::Custom { components, .. } => write!(f, "Custom({components})"),
        }
    }
}

/// Running `sup_{s <= n} |b^s|^2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SupTracker {
    sup: f64,
}

impl SupTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds in one more sample and returns the updated supremum.
    pub fn update(&mut self, norm_sq: f64) -> f64 {
        if norm_sq > self.sup {
            self.sup = norm_sq;
        }
        self.sup
    }

    pub fn value(&self) -> f64 {
        self.sup
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulse_values() {
        let b = DisturbanceSignal::standard_pulse();
        assert_eq!(b.value(0.0), vec![0.0, -0.0]);
        assert_eq!(b.value(5.0), vec![0.0, 0.0]);
        let v = b.value(4.5);
        assert!((v[0] - 0.01).abs() < 1e-15 && (v[1] + 0.01).abs() < 1e-15);
        assert!((b.norm_sq(0.5) - 2e-4).abs() < 1e-18);
    }

    #[test]
    fn tabulated_interpolates() {
        let b = DisturbanceSignal::tabulated(vec![0.0, 1.0, 3.0], vec![vec![0.0], vec![2.0], vec![0.0]]).unwrap();
        assert_eq!(b.value(-1.0), vec![0.0]);
        assert_eq!(b.value(0.5), vec![1.0]);
        assert_eq!(b.value(2.0), vec![1.0]);
        assert_eq!(b.value(9.0), vec![0.0]);
        assert!(DisturbanceSignal::tabulated(vec![1.0, 0.0], vec![vec![0.0], vec![0.0]]).is_err());
    }

    #[test]
    fn tracker_is_monotone() {
        let b = DisturbanceSignal::standard_pulse();
        let mut tr = SupTracker::new();
        let mut prev = 0.0;
        for i in 0..2000 {
            let s = tr.update(b.norm_sq(i as f64 * 0.005));
            assert!(s >= prev);
            prev = s;
        }
        assert!((prev - 2e-4).abs() < 1e-12);
    }
}
