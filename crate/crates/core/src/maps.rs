//! Dyson factorisation `Θ = ΩᵀΩ` of the minimal metric and the objects
//! built from it: the Coriolis term `Σ = i Ω⁻¹ ∂τΩ`, the generator
//! `G = H − Σ` and the Hermitian image `𝔥 = Ω H Ω⁻¹`.
//!
//! The metrics `Θ(τ)` commute for all `τ`, so one orthogonal `Q` diagonalises
//! the whole family and `Ω(τ) = diag(√θ(τ)) Qᵀ` with closed-form `θ`.

use nalgebra::Complex;

use crate::dense::{self, ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};
use crate::metric::{theta_factorized, MetricPolynomial};
use crate::model;

/// Time at which the shared eigenbasis is computed; the spectrum is
/// non-degenerate there for every `N`.
const BASIS_TAU: f64 = 0.5;
const COMMUTATOR_TOL: f64 = 1e-12;

/// τ-independent part of the factorisation.
#[derive(Debug, Clone)]
pub struct DysonMap {
    pub n: usize,
    /// Orthogonal eigenbasis of every `Θ(τ)`; column `c` carries `θ_{k[c]}`.
    pub q: RealMatrix,
    /// Pascal index `k` of each column of `q`, ascending in `θ` (`N, …, 1`).
    pub k: Vec<usize>,
    pub poly: MetricPolynomial,
}

/// `Ω` evaluated at one time.
#[derive(Debug, Clone)]
pub struct DysonFactorization {
    pub n: usize,
    pub tau: f64,
    pub q: RealMatrix,
    /// `θ_{k[c]}(τ)` per column of `q`.
    pub theta: Vec<f64>,
    pub omega: RealMatrix,
}

impl DysonFactorization {
    /// `‖ΩᵀΩ − Θ‖∞ / ‖Θ‖∞` against the supplied metric.
    pub fn reconstruction_residual(&self, theta: &RealMatrix) -> f64 {
        let back = self.omega.transpose() * &self.omega;
        dense::norm_inf(&(back - theta)) / dense::norm_inf(theta)
    }
}

/// `Σ(τ)`; purely imaginary.
#[derive(Debug, Clone)]
pub struct CoriolisTerm {
    pub n: usize,
    pub tau: f64,
    pub sigma: ComplexMatrix,
}

/// `G(τ) = H(τ) − Σ(τ)`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub n: usize,
    pub tau: f64,
    pub g: ComplexMatrix,
}

fn check_open(tau: f64) -> Result<()> {
    if tau >= 1.0 {
        return Err(Error::Singular(0.0));
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("tau = {tau} is outside [0, 1)")));
    }
    Ok(())
}

fn commutator_norm(a: &RealMatrix, b: &RealMatrix) -> f64 {
    dense::norm_inf(&(a * b - b * a)) / (dense::norm_inf(a) * dense::norm_inf(b))
}

impl DysonMap {
    pub fn new(n: usize) -> Result<Self> {
        let poly = MetricPolynomial::solve(n)?;
        let base = poly.evaluate(BASIS_TAU);
        for probe in [0.2, 0.9] {
            let c = commutator_norm(&base, &poly.evaluate(probe));
            if c > COMMUTATOR_TOL {
                return Err(Error::Contract(format!(
                    "metrics at tau = {BASIS_TAU} and {probe} do not commute ({c:e})"
                )));
            }
        }
        let eig = dense::sym_eig(&base)?;
        // θₖ(½) = 3^{N−k}/2^{N−1} decreases in k
        let k: Vec<usize> = (1..=n).rev().collect();
        for (value, &kk) in eig.values.iter().zip(&k) {
            let want = theta_factorized(n, kk, BASIS_TAU);
            if (value - want).abs() > 1e-9 * want.max(1.0) {
                return Err(Error::Contract(format!(
                    "metric eigenvalue {value} does not match closed form {want} (k = {kk})"
                )));
            }
        }
        Ok(Self { n, q: eig.vectors, k, poly })
    }

    pub fn metric(&self, tau: f64) -> RealMatrix {
        self.poly.evaluate(tau)
    }

    /// `θ` per column of `q`.
    pub fn theta_values(&self, tau: f64) -> Vec<f64> {
        self.k.iter().map(|&k| theta_factorized(self.n, k, tau)).collect()
    }

    /// `d log θ / dτ` per column of `q`.
    pub fn log_derivatives(&self, tau: f64) -> Vec<f64> {
        let n = self.n as f64;
        self.k
            .iter()
            .map(|&k| {
                let k = k as f64;
                -(k - 1.0) / (1.0 - tau) + (n - k) / (1.0 + tau)
            })
            .collect()
    }

    fn scaled_qt(&self, weights: &[f64]) -> RealMatrix {
        let mut m = self.q.transpose();
        for (mut row, w) in m.row_iter_mut().zip(weights) {
            row *= *w;
        }
        m
    }

    pub fn omega(&self, tau: f64) -> Result<RealMatrix> {
        check_open(tau)?;
        let roots: Vec<f64> = self.theta_values(tau).iter().map(|t| t.sqrt()).collect();
        Ok(self.scaled_qt(&roots))
    }

    /// `Ω⁻¹ = Q diag(1/√θ)`, in closed form.
    pub fn omega_inverse(&self, tau: f64) -> Result<RealMatrix> {
        check_open(tau)?;
        let inv: Vec<f64> = self.theta_values(tau).iter().map(|t| t.sqrt().recip()).collect();
        Ok(self.scaled_qt(&inv).transpose())
    }

    pub fn factorize(&self, tau: f64) -> Result<DysonFactorization> {
        Ok(DysonFactorization {
            n: self.n,
            tau,
            q: self.q.clone(),
            theta: self.theta_values(tau),
            omega: self.omega(tau)?,
        })
    }

    /// `Σ = (i/2) Q diag(d log θ/dτ) Qᵀ`.
    pub fn coriolis(&self, tau: f64) -> Result<CoriolisTerm> {
        check_open(tau)?;
        let real = &self.q * self.scaled_qt(&self.log_derivatives(tau)) * 0.5;
        let sigma = real.map(|x| Complex::new(0.0, x));
        Ok(CoriolisTerm { n: self.n, tau, sigma })
    }

    /// `i Ω⁻¹ (Ω(τ+h) − Ω(τ−h)) / 2h` with a general numerical inverse.
    pub fn coriolis_numeric(&self, tau: f64, h: f64) -> Result<CoriolisTerm> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("step h = {h} must be positive")));
        }
        if !(tau - h > 0.0 && tau + h < 1.0) {
            return Err(Error::Domain(format!(
                "tau ± h = {tau} ± {h} leaves the open interval (0, 1)"
            )));
        }
        let inv = dense::inverse(&self.omega(tau)?)?;
        let d = dense::finite_diff(|t| self.omega(t), tau, h)?;
        let sigma = (inv * d).map(|x| Complex::new(0.0, x));
        Ok(CoriolisTerm { n: self.n, tau, sigma })
    }

    pub fn generator(&self, tau: f64) -> Result<Generator> {
        let h = dense::to_complex(&model::build_hamiltonian(self.n, tau)?);
        let sigma = self.coriolis(tau)?.sigma;
        Ok(Generator { n: self.n, tau, g: h - sigma })
    }

    /// `𝔥 = Ω H Ω⁻¹`, symmetric up to rounding.
    pub fn dyson_hamiltonian(&self, tau: f64) -> Result<RealMatrix> {
        let h = model::build_hamiltonian(self.n, tau)?;
        Ok(self.omega(tau)? * h * self.omega_inverse(tau)?)
    }
}

pub fn factorize(n: usize, tau: f64) -> Result<DysonFactorization> {
    DysonMap::new(n)?.factorize(tau)
}

pub fn coriolis_spectral(n: usize, tau: f64) -> Result<CoriolisTerm> {
    DysonMap::new(n)?.coriolis(tau)
}

pub fn coriolis_numeric(n: usize, tau: f64, h: f64) -> Result<CoriolisTerm> {
    DysonMap::new(n)?.coriolis_numeric(tau, h)
}

pub fn generator(n: usize, tau: f64) -> Result<Generator> {
    DysonMap::new(n)?.generator(tau)
}

pub fn dyson_hamiltonian(n: usize, tau: f64) -> Result<RealMatrix> {
    DysonMap::new(n)?.dyson_hamiltonian(tau)
}

/// The two-level Coriolis term in closed form,
/// `1/(2i(1−τ²)) [[τ, 1], [1, τ]]`.
pub fn coriolis_two_level(tau: f64) -> ComplexMatrix {
    let f = Complex::new(0.0, -0.5 / (1.0 - tau * tau));
    ComplexMatrix::from_row_slice(2, 2, &[f * tau, f, f, f * tau])
}
