//! Problem builders: the constant 2x2 benchmark, linearized Saint-Venant and
//! isothermal Euler, plus the numerical helpers they need.

pub mod benchmark;
pub mod euler;
pub mod lambert;
pub mod saint_venant;
pub mod steady;

pub use benchmark::{build_linear_benchmark, linear_benchmark_spec, BenchmarkConfig};
pub use euler::{linearize_euler, EulerParams};
pub use lambert::{lambert_w_minus1, lambert_w_minus1_log};
pub use saint_venant::{linearize_saint_venant, SaintVenantLinearization, SaintVenantParams};
pub use steady::integrate_steady_state;
