use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duality system for degree {degree} is singular")]
    SingularBasis { degree: usize },

    #[error("Gauss-Lobatto Newton iteration did not converge for {nodes} nodes")]
    QuadratureNotConverged { nodes: usize },

    #[error("characteristic foot point at distance {reach:.3e} exceeds one cell ({dx:.3e})")]
    CflViolation { reach: f64, dx: f64 },

    #[error("non-finite value after RK stage {stage}")]
    NonFinite { stage: usize },

    #[error("solution blew up after {steps} steps")]
    Unstable { steps: usize },

    #[error("method {method} is unstable already at CFL {cfl:e} for degree {degree}")]
    UnstableAtZero {
        degree: usize,
        method: &'static str,
        cfl: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed CSV: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
