//! Independent check of the minimal-anisotropy selection: minimise the
//! condition number of `Σₙ κₙ |ψₙ⟩⟩⟨⟨ψₙ|` over all positive weights.

use crate::dense;
use crate::error::{Error, Result};
use crate::metric::families::weighted_projectors;
use crate::metric::MetricSample;
use crate::model;

const MAX_ITERATIONS: usize = 20_000;
const RESTARTS: usize = 4;

/// Result of [`minimize_anisotropy`]. `kappa` sums to one.
#[derive(Debug, Clone)]
pub struct AnisotropyMinimum {
    pub kappa: Vec<f64>,
    pub anisotropy: f64,
    pub sample: MetricSample,
    pub iterations: usize,
}

fn softmax(x: &[f64]) -> Vec<f64> {
    // first weight pinned at log-weight 0
    let logits: Vec<f64> = std::iter::once(0.0).chain(x.iter().copied()).collect();
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

/// Nelder–Mead on `f`; returns the best point, its value and the iteration
/// count, or `None` if the simplex did not contract within the budget.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], scale: f64) -> (Vec<f64>, f64, usize, bool) {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += scale;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for iter in 0..MAX_ITERATIONS {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[dim] - values[0];
        let size = simplex
            .iter()
            .skip(1)
            .flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= 1e-15 * values[0].abs() && size < 1e-10 {
            return (simplex[0].clone(), values[0], iter, true);
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|p| p[d]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
        } else {
            let (contracted, fc) = if fr < values[dim] {
                let p = along(0.5);
                let v = f(&p);
                (p, v)
            } else {
                let p = along(-0.5);
                let v = f(&p);
                (p, v)
            };
            if fc < values[dim].min(fr) {
                simplex[dim] = contracted;
                values[dim] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=dim {
                    simplex[i] = simplex[i]
                        .iter()
                        .zip(&best)
                        .map(|(p, b)| b + 0.5 * (p - b))
                        .collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    (simplex[best].clone(), values[best], MAX_ITERATIONS, false)
}

/// Weights `κ` (summing to one) that minimise the anisotropy of the
/// spectral metric at `(n, τ)`. Oracle scale: `2 ≤ n ≤ 5`, `0 < τ ≤ 0.9`.
pub fn minimize_anisotropy(n: usize, tau: f64) -> Result<AnisotropyMinimum> {
    if !(2..=5).contains(&n) {
        return Err(Error::Argument(format!(
            "anisotropy minimisation is limited to 2 ≤ n ≤ 5, got {n}"
        )));
    }
    if !(tau > 0.0 && tau <= 0.9) {
        return Err(Error::Domain(format!("tau = {tau} is outside (0, 0.9]")));
    }
    let ketkets = model::biorthogonal_system(n, tau)?.ketkets;
    let cost = |x: &[f64]| -> f64 {
        let theta = weighted_projectors(&ketkets, &softmax(x));
        match dense::sym_eig(&theta) {
            Ok(e) if e.values[0] > 0.0 => e.values[n - 1] / e.values[0],
            _ => f64::INFINITY,
        }
    };

    let mut x = vec![0.0; n - 1];
    let mut best = cost(&x);
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..RESTARTS {
        let (xn, fx, it, ok) = nelder_mead(&cost, &x, 0.5);
        iterations += it;
        converged = ok;
        let improved = fx < best * (1.0 - 1e-14);
        if fx <= best {
            x = xn;
            best = fx;
        }
        if ok && !improved {
            break;
        }
    }
    let kappa = softmax(&x);
    if !converged {
        return Err(Error::NoConvergence {
            iterations,
            best,
            kappa,
        });
    }
    let sample = MetricSample::new(n, tau, weighted_projectors(&ketkets, &kappa))?;
    Ok(AnisotropyMinimum {
        kappa,
        anisotropy: best,
        sample,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::metric_eigenvalues_closed;

    fn normalised(v: &[f64]) -> Vec<f64> {
        let s: f64 = v.iter().sum();
        v.iter().map(|x| x / s).collect()
    }

    #[test]
    fn two_level_minimum() {
        for &tau in &[0.25, 0.5, 0.75] {
            let m = minimize_anisotropy(2, tau).unwrap();
            assert!((m.anisotropy - (1.0 + tau) / (1.0 - tau)).abs() < 1e-9);
            let got = normalised(&m.sample.eigenvalues);
            let want = normalised(&[1.0 - tau, 1.0 + tau]);
            assert!(got.iter().zip(&want).all(|(a, b)| (a / b - 1.0).abs() < 1e-6));
        }
    }

    #[test]
    fn three_level_lands_on_g_one() {
        let m = minimize_anisotropy(3, 0.5).unwrap();
        assert!((m.anisotropy - 9.0).abs() < 1e-8);
        let got = normalised(&m.sample.eigenvalues);
        let want = normalised(&metric_eigenvalues_closed(3, 0.5).unwrap());
        assert!(got.iter().zip(&want).all(|(a, b)| (a / b - 1.0).abs() < 1e-4));
    }

    #[test]
    fn rejects_out_of_scale_requests() {
        assert!(matches!(minimize_anisotropy(6, 0.5), Err(Error::Argument(_))));
        assert!(matches!(minimize_anisotropy(3, 0.0), Err(Error::Domain(_))));
        assert!(matches!(minimize_anisotropy(3, 0.95), Err(Error::Domain(_))));
    }
}
