//! Exactly solvable N-level PT-symmetric toy model.
//!
//! The Hamiltonians `H⁽ᴺ⁾(τ)` are non-Hermitian for `τ > 0`, have the real
//! equidistant spectrum `(2n − N − 1)√(1 − τ²)`, and collapse into a single
//! `N`-dimensional Jordan block at `τ = 1`. Along the way they stay
//! self-adjoint in the inner product defined by a unique minimally
//! anisotropic metric `Θ(τ)`, whose eigenvalues are
//! `(1 − τ)^{k−1}(1 + τ)^{N−k}`.
//!
//! Modules, bottom up:
//!
//! - [`dense`]: symmetric eigensolver, nullspace, least squares, inverse.
//! - [`model`]: Hamiltonians, energies, biorthogonal eigenvectors.
//! - [`metric`]: metric families, the polynomial solver, closed spectra.
//! - [`maps`]: Dyson factor `Ω`, Coriolis term `Σ`, generator `G = H − Σ`.
//! - [`evolution`]: fixed-step RK4 in the non-Hermitian and Hermitian frames.
//! - [`verify`]: one-shot invariant runner behind `ptmodel verify`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dense;
pub mod error;
pub mod evolution;
pub mod maps;
pub mod metric;
pub mod model;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

/// Version string written into emitted files.
pub const MODEL_VERSION: &str = env!("CARGO_PKG_VERSION");
