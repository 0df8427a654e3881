//! Known coefficient arrays `α(k)` of the minimal metric.
//!
//! The nonzero entries of `M(k)` form a `k × (N−k+1)` array with
//! `α_{jm}(k) = M(k)[m+j−1, m+k−j]` (1-based). Closed forms exist for
//! `k ∈ {1, 2, N−1, N}`; four further arrays are tabulated literally.

use std::collections::BTreeMap;

use crate::dense::RealMatrix;
use crate::error::{Error, Result};
use crate::metric::polynomial::pattern;

/// Nonzero entries of one coefficient matrix, arranged `k × (N−k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientArray {
    pub n: usize,
    pub k: usize,
    /// `values[j-1][m-1] = α_{jm}(k)`.
    pub values: Vec<Vec<f64>>,
}

impl CoefficientArray {
    /// Read `α(k)` off a full `M(k)`; fails if `m` has weight outside the pattern.
    pub fn from_matrix(n: usize, k: usize, m: &RealMatrix) -> Result<Self> {
        if m.shape() != (n, n) || k == 0 || k > n {
            return Err(Error::Contract(format!("M({k}) for N = {n} has wrong shape")));
        }
        let cells = pattern(n, k);
        let width = n + 1 - k;
        let mut inside = vec![false; n * n];
        let mut values = vec![vec![0.0; width]; k];
        for (idx, &(r, c)) in cells.iter().enumerate() {
            inside[r * n + c] = true;
            values[idx / width][idx % width] = m[(r, c)];
        }
        for r in 0..n {
            for c in 0..n {
                if !inside[r * n + c] && m[(r, c)] != 0.0 {
                    return Err(Error::Contract(format!(
                        "M({k}) has a nonzero entry at ({}, {}) outside its pattern",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(Self { n, k, values })
    }

    pub fn to_matrix(&self) -> RealMatrix {
        let width = self.n + 1 - self.k;
        let mut m = RealMatrix::zeros(self.n, self.n);
        for (idx, (r, c)) in pattern(self.n, self.k).into_iter().enumerate() {
            m[(r, c)] = self.values[idx / width][idx % width];
        }
        m
    }

    /// Largest absolute entrywise difference; infinite on shape mismatch.
    pub fn max_deviation(&self, other: &CoefficientArray) -> f64 {
        if (self.n, self.k) != (other.n, other.k) {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Source of reference coefficient arrays: closed-form rules plus literal
/// tables, optionally overridden (used to inject faults into verification).
#[derive(Debug, Clone, Default)]
pub struct CoefficientTable {
    overrides: BTreeMap<(usize, usize), CoefficientArray>,
}

impl CoefficientTable {
    pub fn literals() -> Self {
        Self::default()
    }

    /// Replace the reference array for `(array.n, array.k)`.
    pub fn with_override(mut self, array: CoefficientArray) -> Self {
        self.overrides.insert((array.n, array.k), array);
        self
    }

    /// Every `(n, k)` with a reference array for `2 ≤ n ≤ n_max`.
    pub fn covered(&self, n_max: usize) -> Vec<(usize, usize)> {
        let mut keys = Vec::new();
        for n in 2..=n_max {
            for k in 1..=n {
                if is_covered(n, k) || self.overrides.contains_key(&(n, k)) {
                    keys.push((n, k));
                }
            }
        }
        keys
    }

    pub fn lookup(&self, n: usize, k: usize) -> Result<CoefficientArray> {
        if let Some(a) = self.overrides.get(&(n, k)) {
            return Ok(a.clone());
        }
        reference_array(n, k)
    }
}

fn is_covered(n: usize, k: usize) -> bool {
    (1..=n).contains(&k)
        && (k <= 2 || k + 1 >= n || matches!((n, k), (5, 3) | (6, 3) | (7, 3) | (7, 4)))
}

fn bond(n: usize, i: usize) -> f64 {
    ((i * (n - i)) as f64).sqrt()
}

fn reference_array(n: usize, k: usize) -> Result<CoefficientArray> {
    if n < 2 || !is_covered(n, k) {
        return Err(Error::NotTabulated { n, k });
    }
    let width = n + 1 - k;
    let values: Vec<Vec<f64>> = if k == 1 || k == n {
        vec![vec![1.0; width]; k]
    } else if k == 2 {
        let row: Vec<f64> = (1..=width).map(|i| bond(n, i)).collect();
        vec![row.clone(), row]
    } else if k == n - 1 {
        (1..=k).map(|j| vec![bond(n, j); 2]).collect()
    } else {
        return tabulated_array(n, k);
    };
    Ok(CoefficientArray { n, k, values })
}

fn tabulated_array(n: usize, k: usize) -> Result<CoefficientArray> {
    let s = f64::sqrt;
    let values = match (n, k) {
        (5, 3) => vec![
            vec![s(6.0), 3.0, s(6.0)],
            vec![3.0, 4.0, 3.0],
            vec![s(6.0), 3.0, s(6.0)],
        ],
        (6, 3) => {
            let (r10, r18) = (s(10.0), 3.0 * s(2.0));
            vec![
                vec![r10, r18, r18, r10],
                vec![4.0, 6.0, 6.0, 4.0],
                vec![r10, r18, r18, r10],
            ]
        }
        (7, k @ (3 | 4)) => return CoefficientArray::from_matrix(7, k, &literal_m7_matrix(k)),
        _ => return Err(Error::NotTabulated { n, k }),
    };
    Ok(CoefficientArray { n, k, values })
}

fn literal_m7_matrix(k: usize) -> RealMatrix {
    let s = f64::sqrt;
    let rows = if k == 3 {
        let (a, b) = (s(15.0), s(30.0));
        [
            [0.0, 0.0, a, 0.0, 0.0, 0.0, 0.0],
            [0.0, 5.0, 0.0, b, 0.0, 0.0, 0.0],
            [a, 0.0, 8.0, 0.0, 6.0, 0.0, 0.0],
            [0.0, b, 0.0, 9.0, 0.0, b, 0.0],
            [0.0, 0.0, 6.0, 0.0, 8.0, 0.0, a],
            [0.0, 0.0, 0.0, b, 0.0, 5.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, a, 0.0, 0.0],
        ]
    } else {
        let (a, b, c) = (2.0 * s(5.0), 2.0 * s(10.0), 6.0 * s(3.0));
        [
            [0.0, 0.0, 0.0, a, 0.0, 0.0, 0.0],
            [0.0, 0.0, b, 0.0, b, 0.0, 0.0],
            [0.0, b, 0.0, c, 0.0, b, 0.0],
            [a, 0.0, c, 0.0, c, 0.0, a],
            [0.0, b, 0.0, c, 0.0, b, 0.0],
            [0.0, 0.0, b, 0.0, b, 0.0, 0.0],
            [0.0, 0.0, 0.0, a, 0.0, 0.0, 0.0],
        ]
    };
    RealMatrix::from_fn(7, 7, |i, j| rows[i][j])
}

/// Reference `α(k)` for `N = n`: closed forms for `k ∈ {1, 2, N−1, N}` and
/// the literal arrays for `(5,3)`, `(6,3)`, `(7,3)`, `(7,4)`.
pub fn coefficient_array(n: usize, k: usize) -> Result<CoefficientArray> {
    reference_array(n, k)
}

/// Full `M(7)(3)` and `M(7)(4)` as tabulated.
pub fn literal_m7(k: usize) -> Option<RealMatrix> {
    matches!(k, 3 | 4).then(|| literal_m7_matrix(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::solve_metric_polynomial;

    #[test]
    fn five_level_third_array() {
        let a = coefficient_array(5, 3).unwrap();
        let s6 = 6f64.sqrt();
        assert_eq!(a.values, vec![vec![s6, 3.0, s6], vec![3.0, 4.0, 3.0], vec![s6, 3.0, s6]]);
    }

    #[test]
    fn six_level_third_array() {
        let a = coefficient_array(6, 3).unwrap();
        let (r10, r18) = (10f64.sqrt(), 3.0 * 2f64.sqrt());
        assert_eq!(a.values[0], vec![r10, r18, r18, r10]);
        assert_eq!(a.values[1], vec![4.0, 6.0, 6.0, 4.0]);
        assert_eq!(a.values[2], a.values[0]);
    }

    #[test]
    fn bidiagonal_rule() {
        for n in 3..=9 {
            let a = coefficient_array(n, 2).unwrap();
            let want: Vec<f64> = (1..n).map(|i| ((i * (n - i)) as f64).sqrt()).collect();
            assert_eq!(a.values, vec![want.clone(), want]);
        }
    }

    #[test]
    fn uncovered_is_rejected() {
        assert_eq!(coefficient_array(8, 3), Err(Error::NotTabulated { n: 8, k: 3 }));
        assert_eq!(coefficient_array(6, 4), Err(Error::NotTabulated { n: 6, k: 4 }));
        assert_eq!(coefficient_array(6, 5).unwrap().values.len(), 5);
    }

    #[test]
    fn literal_matrices_respect_pattern() {
        for k in [3, 4] {
            let m = literal_m7(k).unwrap();
            let a = CoefficientArray::from_matrix(7, k, &m).unwrap();
            assert_eq!(a.to_matrix(), m);
        }
    }

    #[test]
    fn solver_agrees_with_every_reference() {
        let table = CoefficientTable::literals();
        for n in 2..=7 {
            let poly = solve_metric_polynomial(n).unwrap();
            for (nn, k) in table.covered(7).into_iter().filter(|&(nn, _)| nn == n) {
                let solved = CoefficientArray::from_matrix(nn, k, poly.coefficient(k));
                let solved = solved.unwrap_or_else(|e| panic!("n={n} k={k}: {e}"));
                let reference = table.lookup(nn, k).unwrap();
                assert!(solved.max_deviation(&reference) < 1e-10, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn from_matrix_rejects_off_pattern_weight() {
        let mut m = RealMatrix::identity(4, 4);
        m[(0, 1)] = 1.0;
        assert!(CoefficientArray::from_matrix(4, 1, &m).is_err());
    }
}
