use thiserror::Error;

/// Errors raised while building, certifying or running a scenario.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("CFL condition violated: dt*max|lambda|/dx = {courant} > 1")]
    CflViolation { courant: f64 },

    #[error("characteristic speed {component} at sample j={j} is {value}; expected sign pattern (+)^{m} (-)^{rest}")]
    SignPattern {
        j: isize,
        component: usize,
        value: f64,
        m: usize,
        rest: usize,
    },

    #[error("weight entry {component} at sample j={j} is not strictly positive ({value})")]
    NonPositiveWeight { j: isize, component: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("boundary matrix K must have zero diagonal blocks; entry ({row},{col}) = {value}")]
    BoundaryBlocks { row: usize, col: usize, value: f64 },

    #[error("ghost cells are not populated for time level {0}")]
    MissingGhosts(usize),

    #[error("non-finite state at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("discrete Gronwall bound needs 0 < eta*dt < 1, got eta={eta}, dt={dt}")]
    GronwallInapplicable { eta: f64, dt: f64 },

    #[error("decay fit window has {samples} samples; need at least 10")]
    ShortWindow { samples: usize },

    #[error("Lyapunov value {value} at n={n} is not positive; cannot take its logarithm")]
    NonPositiveLyapunov { n: usize, value: f64 },

    #[error("matrix is not symmetric: |A - A^T| = {0}")]
    Asymmetric(f64),

    #[error("Jacobi eigen iteration did not converge after {sweeps} sweeps (off-diagonal norm {off})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("Lambert W_-1 is defined on (-1/e, 0); got {0}")]
    LambertDomain(f64),

    #[error("model: {0}")]
    Model(String),

    #[error("scenario: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
