//! Simulation and ISS certification for 1-D linear hyperbolic balance laws
//!
//! ```text
//! W_t + Lambda(x) W_x + Pi(x) W = 0,   x in [0, l]
//! [W+(t,0); W-(t,l)] = K [W+(t,l); W-(t,0)] + M b(t)
//! ```
//!
//! discretized by an upwind transport step followed by an explicit source
//! step. The crate evaluates the weighted discrete Lyapunov function along a
//! run, compares it with its Gronwall envelope, and checks the sufficient
//! conditions under which that envelope is guaranteed.
//!
//! ```
//! use hypiss::models::{build_linear_benchmark, BenchmarkConfig};
//!
//! let scenario = build_linear_benchmark(&BenchmarkConfig { cells: 200, final_time: 1.0, ..Default::default() }).unwrap();
//! let report = scenario.certify().unwrap();
//! assert!(report.passed);
//! let (_, trace) = scenario.trace(&report).unwrap();
//! assert!(trace.max_violation() <= 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certifier;
pub mod disturbance;
pub mod error;
pub mod grid;
pub mod lyapunov;
pub mod matrix;
pub mod models;
pub mod scenario;
pub mod solver;
pub mod state;
pub mod system;
pub mod weights;

pub use certifier::{certify, CertificateReport};
pub use disturbance::DisturbanceSignal;
pub use error::{Error, Result};
pub use grid::Grid1D;
pub use lyapunov::{GapNorms, LyapunovTrace};
pub use matrix::SquareMatrix;
pub use scenario::{Scenario, ScenarioSpec};
pub use solver::{RunOutput, Simulation};
pub use state::StateField;
pub use system::{BoundaryCoupling, SystemCoefficients};
pub use weights::WeightField;
