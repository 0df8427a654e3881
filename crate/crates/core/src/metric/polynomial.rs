//! The minimal-anisotropy metric as a polynomial in `τ`.
//!
//! Writing `Θ(τ) = Σⱼ (−τ)^{j−1} M(j)` and matching powers of `τ` in
//! `(D − τA)Θ = Θ(D + τA)` gives, with `M(1) = I`,
//!
//! ```text
//! [D, M(k)] = −(A M(k−1) + M(k−1) A)    k = 2..N
//! A M(N) + M(N) A = 0
//! ```
//!
//! `M(k)` is restricted to the rotated `k × (N−k+1)` rectangle of entries
//! `(m+j−1, m+k−j)`, `j = 1..k`, `m = 1..N−k+1` (1-based). All equations are
//! stacked into one linear system which is solved by least squares and
//! checked for a zero residual and a trivial nullspace.

use crate::dense::{self, RealMatrix};
use crate::error::{Error, Result};
use crate::metric::MetricSample;
use crate::model::ModelInstance;

/// Singular values below this fraction of the largest count as null directions.
const NULLSPACE_TOL: f64 = 1e-10;
/// Largest acceptable residual of the stacked system, relative to the rhs.
const RESIDUAL_TOL: f64 = 1e-9;

/// The coefficient matrices `M(1)..M(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPolynomial {
    pub n: usize,
    pub coeffs: Vec<RealMatrix>,
}

/// Diagnostics of the stacked solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub unknowns: usize,
    pub equations: usize,
    pub residual: f64,
    pub nullspace_dim: usize,
    pub smallest_singular_value: f64,
}

/// 0-based positions of the admissible entries of `M(k)`, in the order
/// `α₁₁, α₁₂, …, α₁,N−k+1, α₂₁, …` of the coefficient array.
pub fn pattern(n: usize, k: usize) -> Vec<(usize, usize)> {
    let width = n + 1 - k;
    let mut cells = Vec::with_capacity(k * width);
    for j in 1..=k {
        for m in 1..=width {
            cells.push((m + j - 2, m + k - j - 1));
        }
    }
    cells
}

impl MetricPolynomial {
    pub fn solve(n: usize) -> Result<Self> {
        Self::solve_with_report(n).map(|(poly, _)| poly)
    }

    pub fn solve_with_report(n: usize) -> Result<(Self, SolveReport)> {
        let model = ModelInstance::new(n, 0.0)?;
        let system = StackedSystem::build(&model);
        let report_base = (system.unknowns(), system.rows.len());

        let x = dense::lstsq(&system.matrix, &system.rhs)?;
        let applied = &system.matrix * nalgebra::DVector::from_column_slice(&x);
        let residual = applied
            .iter()
            .zip(&system.rhs)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let rhs_norm = system.rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        let singular = dense::singular_values(&system.matrix);
        let nullspace_dim = dense::nullspace(&system.matrix, NULLSPACE_TOL)?.ncols();

        let report = SolveReport {
            unknowns: report_base.0,
            equations: report_base.1,
            residual,
            nullspace_dim,
            smallest_singular_value: singular.get(report_base.0 - 1).copied().unwrap_or(0.0),
        };
        if nullspace_dim > 0 {
            return Err(Error::Ambiguous(nullspace_dim));
        }
        if residual > RESIDUAL_TOL * rhs_norm.max(1.0) {
            return Err(Error::Inconsistent(residual));
        }

        let mut coeffs = vec![RealMatrix::identity(n, n)];
        for k in 2..=n {
            let mut m = RealMatrix::zeros(n, n);
            for &(r, c) in &pattern(n, k) {
                m[(r, c)] = x[system.index[k - 2][r * n + c].expect("pattern cell")];
            }
            coeffs.push(m);
        }
        Ok((Self { n, coeffs }, report))
    }

    /// `M(k)`, 1-based.
    pub fn coefficient(&self, k: usize) -> &RealMatrix {
        &self.coeffs[k - 1]
    }

    /// `Θ(τ) = Σⱼ (−τ)^{j−1} M(j)`.
    pub fn evaluate(&self, tau: f64) -> RealMatrix {
        self.coeffs
            .iter()
            .rev()
            .fold(RealMatrix::zeros(self.n, self.n), |acc, m| acc * (-tau) + m)
    }

    /// `dΘ/dτ`.
    pub fn derivative(&self, tau: f64) -> RealMatrix {
        let mut acc = RealMatrix::zeros(self.n, self.n);
        for (j, m) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * (-tau) + m * (-(j as f64));
        }
        acc
    }
}

struct StackedSystem {
    /// `index[k-2][r*n + c]` is the unknown for entry `(r, c)` of `M(k)`.
    index: Vec<Vec<Option<usize>>>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    matrix: RealMatrix,
}

impl StackedSystem {
    fn unknowns(&self) -> usize {
        self.matrix.ncols()
    }

    fn build(model: &ModelInstance) -> Self {
        let n = model.n;
        let mut index = Vec::with_capacity(n.saturating_sub(1));
        let mut count = 0;
        for k in 2..=n {
            let mut slot = vec![None; n * n];
            for (r, c) in pattern(n, k) {
                slot[r * n + c] = Some(count);
                count += 1;
            }
            index.push(slot);
        }

        // Linear form of M(k)[r, c]: either an unknown, the identity for k = 1, or zero.
        let term = |k: usize, r: usize, c: usize| -> Term {
            if k == 1 {
                Term::Constant(if r == c { 1.0 } else { 0.0 })
            } else {
                match index[k - 2][r * n + c] {
                    Some(u) => Term::Unknown(u),
                    None => Term::Constant(0.0),
                }
            }
        };

        let d = &model.d;
        let a = &model.a;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for k in 2..=n + 1 {
            for i in 0..n {
                for j in 0..n {
                    let mut coeffs: Vec<(usize, f64)> = Vec::new();
                    let mut constant = 0.0;
                    let mut add = |t: Term, w: f64| match t {
                        Term::Unknown(u) => coeffs.push((u, w)),
                        Term::Constant(v) => constant += w * v,
                    };
                    if k <= n {
                        let w = d[(i, i)] - d[(j, j)];
                        if w != 0.0 {
                            add(term(k, i, j), w);
                        }
                    }
                    for l in neighbours(i, n) {
                        add(term(k - 1, l, j), a[(i, l)]);
                    }
                    for l in neighbours(j, n) {
                        add(term(k - 1, i, l), a[(l, j)]);
                    }
                    if coeffs.is_empty() && constant == 0.0 {
                        continue;
                    }
                    rows.push(coeffs);
                    rhs.push(-constant);
                }
            }
        }

        let mut matrix = RealMatrix::zeros(rows.len(), count);
        for (r, row) in rows.iter().enumerate() {
            for &(u, w) in row {
                matrix[(r, u)] += w;
            }
        }
        Self {
            index,
            rows,
            rhs,
            matrix,
        }
    }
}

#[derive(Clone, Copy)]
enum Term {
    Unknown(usize),
    Constant(f64),
}

fn neighbours(i: usize, n: usize) -> impl Iterator<Item = usize> {
    let below = i.checked_sub(1);
    let above = (i + 1 < n).then_some(i + 1);
    below.into_iter().chain(above)
}

pub fn solve_metric_polynomial(n: usize) -> Result<MetricPolynomial> {
    MetricPolynomial::solve(n)
}

pub fn assemble_metric(poly: &MetricPolynomial, tau: f64) -> Result<MetricSample> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} is outside [0, 1]")));
    }
    MetricSample::new(poly.n, tau, poly.evaluate(tau))
}
