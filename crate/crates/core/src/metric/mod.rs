//! Hilbert-space metrics compatible with the toy Hamiltonians.
//!
//! A metric `Θ` is admissible at time `τ` when it is symmetric, positive
//! definite and satisfies `HᵀΘ = ΘH`. The unique minimal-anisotropy member
//! is the polynomial `Θ(τ) = Σⱼ (−τ)^{j−1} M(j)` with `M(1) = I`, solved in
//! [`polynomial`]; its spectrum is known in closed form ([`pascal`]).

pub mod coefficients;
pub mod families;
pub mod oracle;
pub mod pascal;
pub mod polynomial;

pub use coefficients::{coefficient_array, CoefficientArray, CoefficientTable};
pub use families::{
    metric_n2_alpha, metric_n2_hyperbolic, metric_n2_hyperbolic_at, metric_n3_gfamily,
    n3_g_eigenvalues, positivity_boundary_n3, spectral_metric, N2FamilyPoint,
};
pub use oracle::{minimize_anisotropy, AnisotropyMinimum};
pub use pascal::{binomial, metric_eigenvalues_closed, pascal_table, theta_factorized, PascalTable};
pub use polynomial::{assemble_metric, solve_metric_polynomial, MetricPolynomial, SolveReport};

use crate::dense::{self, RealMatrix};
use crate::error::{Error, Result};
use crate::model;

/// A metric evaluated at one time, with its ascending spectrum.
#[derive(Debug, Clone)]
pub struct MetricSample {
    pub n: usize,
    pub tau: f64,
    pub theta: RealMatrix,
    pub eigenvalues: Vec<f64>,
}

impl MetricSample {
    pub fn new(n: usize, tau: f64, theta: RealMatrix) -> Result<Self> {
        if theta.shape() != (n, n) {
            return Err(Error::Contract(format!(
                "metric for N = {n} must be {n}x{n}, got {}x{}",
                theta.nrows(),
                theta.ncols()
            )));
        }
        let eigenvalues = dense::sym_eig(&theta)?.values;
        Ok(Self {
            n,
            tau,
            theta,
            eigenvalues,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    /// `‖HᵀΘ − ΘH‖∞ / ‖Θ‖∞` against the Hamiltonian at the sample's time.
    pub fn compatibility_residual(&self) -> Result<f64> {
        compatibility_residual(&self.theta, self.n, self.tau)
    }
}

/// `‖HᵀΘ − ΘH‖∞ / ‖Θ‖∞` for `H = H⁽ᴺ⁾(τ)`.
pub fn compatibility_residual(theta: &RealMatrix, n: usize, tau: f64) -> Result<f64> {
    let h = model::build_hamiltonian(n, tau)?;
    let defect = h.transpose() * theta - theta * &h;
    Ok(dense::norm_inf(&defect) / dense::norm_inf(theta))
}

/// Anisotropy `θ_max / θ_min` of a positive-definite sample.
pub fn anisotropy(sample: &MetricSample) -> Result<f64> {
    let lo = sample.min_eigenvalue();
    let hi = sample.eigenvalues[sample.n - 1];
    // below this the ratio only measures rounding noise
    if lo <= 1e-13 * hi {
        return Err(Error::NotPositive(format!(
            "metric at tau = {} has smallest eigenvalue {lo:e}",
            sample.tau
        )));
    }
    Ok(hi / lo)
}
