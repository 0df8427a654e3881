use thiserror::Error;

/// Errors raised by the model, metric, map and evolution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    Argument(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("matrix is singular to working precision (smallest singular value {0:e})")]
    Singular(f64),

    #[error("Hamiltonian is defective at tau = {0} (eigenvectors coalesce)")]
    Degenerate(f64),

    #[error("not positive definite: {0}")]
    NotPositive(String),

    #[error("coefficient array for N = {n}, k = {k} is not tabulated; solve the metric polynomial instead")]
    NotTabulated { n: usize, k: usize },

    #[error("metric polynomial is not unique: nullspace dimension {0}")]
    Ambiguous(usize),

    #[error("linear system is inconsistent (residual {0:e})")]
    Inconsistent(f64),

    #[error("optimizer did not converge after {iterations} iterations (best anisotropy {best})")]
    NoConvergence {
        iterations: usize,
        best: f64,
        kappa: Vec<f64>,
    },

    #[error("integration unstable at tau = {tau}: norm drift {drift:e}; use a smaller step")]
    Unstable { tau: f64, drift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
