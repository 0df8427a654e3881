//! The toy Hamiltonian family `H(τ) = D + τA`.
//!
//! `D = diag(2n − N − 1)` and `A` is antisymmetric and bidiagonal with
//! `A[n, n+1] = √(n(N − n))` (1-based). `H(0)` is diagonal and Hermitian; as
//! `τ → 1` all `N` levels merge and `H(1)` is a single Jordan block.

use crate::dense::{self, RealMatrix};
use crate::error::{Error, Result};

/// A member of the Hamiltonian family at a given dimension and time.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInstance {
    pub n: usize,
    pub tau: f64,
    /// Diagonal part `D`.
    pub d: RealMatrix,
    /// Antisymmetric coupling `A`.
    pub a: RealMatrix,
}

impl ModelInstance {
    pub fn new(n: usize, tau: f64) -> Result<Self> {
        check_dimension(n)?;
        if !tau.is_finite() {
            return Err(Error::Argument(format!("tau must be finite, got {tau}")));
        }
        let d = RealMatrix::from_fn(n, n, |i, j| {
            if i == j {
                level_index(n, i)
            } else {
                0.0
            }
        });
        let a = RealMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                coupling(n, i + 1)
            } else if i == j + 1 {
                -coupling(n, j + 1)
            } else {
                0.0
            }
        });
        Ok(Self { n, tau, d, a })
    }

    pub fn hamiltonian(&self) -> RealMatrix {
        &self.d + &self.a * self.tau
    }

    /// Whether `τ` lies in the observable interval `[0, 1]`.
    pub fn is_physical(&self) -> bool {
        (0.0..=1.0).contains(&self.tau)
    }
}

/// Real spectrum of `H(τ)`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    pub tau: f64,
    pub levels: Vec<f64>,
}

/// Right eigenvectors of `H`, eigenvectors of `Hᵀ` ("ketkets") and their
/// pairing `⟨⟨ψₙ|ψₙ⟩`. All vectors have unit Euclidean norm and follow the
/// dense-kernel sign convention; column `n` belongs to `levels[n]`.
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    pub n: usize,
    pub tau: f64,
    pub levels: Vec<f64>,
    pub rights: RealMatrix,
    pub ketkets: RealMatrix,
    pub pairing: Vec<f64>,
}

impl BiorthogonalSystem {
    /// Full overlap matrix `⟨⟨ψₘ|ψₙ⟩`.
    pub fn overlaps(&self) -> RealMatrix {
        self.ketkets.transpose() * &self.rights
    }

    /// Largest off-diagonal overlap `|⟨⟨ψₘ|ψₙ⟩|`, `m ≠ n`, of the unit vectors.
    pub fn biorthogonality_defect(&self) -> f64 {
        let o = self.overlaps();
        let mut off = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    off = off.max(o[(i, j)].abs());
                }
            }
        }
        off
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument("n must be ≥ 2".into()));
    }
    Ok(())
}

fn check_physical_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Domain(format!(
            "tau = {tau} is outside [0, 1]; the post-catastrophic regime is not modelled"
        )));
    }
    Ok(())
}

/// `2n − N − 1` for the 0-based index `i = n − 1`.
fn level_index(n: usize, i: usize) -> f64 {
    (2 * i + 1) as f64 - n as f64
}

/// `√(k(N − k))` for the 1-based bond index `k`.
fn coupling(n: usize, k: usize) -> f64 {
    ((k * (n - k)) as f64).sqrt()
}

pub fn build_hamiltonian(n: usize, tau: f64) -> Result<RealMatrix> {
    Ok(ModelInstance::new(n, tau)?.hamiltonian())
}

/// Closed-form energies `Eₙ = (2n − N − 1)√(1 − τ²)`.
pub fn energies(n: usize, tau: f64) -> Result<EnergySpectrum> {
    check_dimension(n)?;
    check_physical_tau(tau)?;
    let r = (1.0 - tau * tau).sqrt();
    Ok(EnergySpectrum {
        tau,
        levels: (0..n).map(|i| level_index(n, i) * r).collect(),
    })
}

fn eigenvector_of(m: &RealMatrix, level: f64) -> Vec<f64> {
    let n = m.nrows();
    let shifted = m - RealMatrix::identity(n, n) * level;
    let (_, mut v) = dense::smallest_right_singular(&shifted);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Right and conjugate eigenvectors of `H(τ)` for `0 ≤ τ < 1`.
///
/// Each eigenvector spans the one-dimensional nullspace of `H − Eₙ` (resp.
/// `Hᵀ − Eₙ`) at the closed-form level `Eₙ`.
pub fn biorthogonal_system(n: usize, tau: f64) -> Result<BiorthogonalSystem> {
    check_dimension(n)?;
    check_physical_tau(tau)?;
    if tau >= 1.0 {
        return Err(Error::Degenerate(tau));
    }
    let h = build_hamiltonian(n, tau)?;
    let ht = h.transpose();
    let levels = energies(n, tau)?.levels;

    let mut rights = RealMatrix::zeros(n, n);
    let mut ketkets = RealMatrix::zeros(n, n);
    for (col, &e) in levels.iter().enumerate() {
        let r = eigenvector_of(&h, e);
        let k = eigenvector_of(&ht, e);
        rights.column_mut(col).copy_from_slice(&r);
        ketkets.column_mut(col).copy_from_slice(&k);
    }
    let pairing = (0..n)
        .map(|i| ketkets.column(i).dot(&rights.column(i)))
        .collect();
    Ok(BiorthogonalSystem {
        n,
        tau,
        levels,
        rights,
        ketkets,
        pairing,
    })
}

/// Alternating-sign parity `P = diag(1, −1, 1, …)`.
pub fn parity(n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |i, j| {
        if i != j {
            0.0
        } else if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// `‖P H P − Hᵀ‖∞`, the witness of P-pseudo-Hermiticity.
pub fn pseudo_hermiticity_residual(n: usize, tau: f64) -> Result<f64> {
    let h = build_hamiltonian(n, tau)?;
    let p = parity(n);
    Ok(dense::norm_inf(&(&p * &h * &p - h.transpose())))
}

/// Smallest singular value of the matrix of unit right eigenvectors;
/// zero once the Jordan block is reached.
pub fn defectiveness_gauge(n: usize, tau: f64) -> Result<f64> {
    check_dimension(n)?;
    check_physical_tau(tau)?;
    if tau == 1.0 {
        return Ok(0.0);
    }
    let system = biorthogonal_system(n, tau)?;
    Ok(*dense::singular_values(&system.rights).last().unwrap())
}
