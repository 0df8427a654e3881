//! Closed-form metric eigenvalues.
//!
//! The eigenvalues of the minimal metric are polynomials in `τ`,
//! `θₖ(τ) = Σₙ Cₖₙ τ^{n−1}` with
//! `Cₖₙ = Σₚ (−1)^{p−1} C(k−1, p−1) C(N−k, n−p)`,
//! i.e. the coefficients of `(1 − τ)^{k−1}(1 + τ)^{N−k}`.

use crate::error::{Error, Result};

/// Largest dimension whose table fits in `i64` without overflow.
pub const MAX_PASCAL_N: usize = 60;

/// Exact binomial coefficient; zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// The `N × N` integer table `Cₖₙ`, row `k` giving the coefficients of `θₖ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PascalTable {
    pub n: usize,
    /// `c[k-1][m-1] = Cₖₘ`.
    pub c: Vec<Vec<i64>>,
}

impl PascalTable {
    /// Row `k` (1-based).
    pub fn row(&self, k: usize) -> &[i64] {
        &self.c[k - 1]
    }

    /// `θₖ(τ)` by Horner evaluation of row `k` (1-based).
    pub fn eigenvalue(&self, k: usize, tau: f64) -> f64 {
        self.row(k)
            .iter()
            .rev()
            .fold(0.0, |acc, &coef| acc * tau + coef as f64)
    }

    /// All `θₖ(τ)` in Pascal order `k = 1..N`.
    pub fn eigenvalues(&self, tau: f64) -> Vec<f64> {
        (1..=self.n).map(|k| self.eigenvalue(k, tau)).collect()
    }
}

pub fn pascal_table(n: usize) -> Result<PascalTable> {
    if n == 0 || n > MAX_PASCAL_N {
        return Err(Error::Argument(format!(
            "pascal table dimension must be in 1..={MAX_PASCAL_N}, got {n}"
        )));
    }
    let big_n = n as i64;
    let c = (1..=big_n)
        .map(|k| {
            (1..=big_n)
                .map(|m| {
                    (1..=k)
                        .map(|p| {
                            let sign = if p % 2 == 1 { 1 } else { -1 };
                            sign * binomial(k - 1, p - 1) * binomial(big_n - k, m - p)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(PascalTable { n, c })
}

/// `(1 − τ)^{k−1}(1 + τ)^{N−k}`.
pub fn theta_factorized(n: usize, k: usize, tau: f64) -> f64 {
    (1.0 - tau).powi(k as i32 - 1) * (1.0 + tau).powi((n - k) as i32)
}

/// Closed-form spectrum of the minimal metric, ascending.
pub fn metric_eigenvalues_closed(n: usize, tau: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} is outside [0, 1]")));
    }
    let mut values = pascal_table(n)?.eigenvalues(tau);
    values.sort_by(f64::total_cmp);
    Ok(values)
}
