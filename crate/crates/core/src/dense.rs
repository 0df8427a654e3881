//! Small dense linear-algebra kernel.
//!
//! Thin wrappers over `nalgebra` that fix the conventions the rest of the
//! crate relies on: ascending eigenvalues, a deterministic eigenvector sign,
//! SVD-based nullspaces and least squares, and an inverse that refuses
//! near-singular input.

pub use nalgebra::Complex;
use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex<f64>>;
pub type ComplexVector = DVector<Complex<f64>>;

/// Components at or below this magnitude are skipped by the sign convention.
const SIGN_THRESHOLD: f64 = 1e-12;

/// Relative asymmetry accepted by [`sym_eig`].
const SYMMETRY_TOL: f64 = 1e-12;

/// Ratio `sigma_min / sigma_max` below which [`inverse`] reports singularity.
const SINGULAR_RATIO: f64 = 1e-14;

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: RealMatrix,
}

/// Induced infinity norm (maximum absolute row sum).
pub fn norm_inf(m: &RealMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_inf_complex(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// The exchange matrix `J` (ones on the antidiagonal).
pub fn exchange(n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { 1.0 } else { 0.0 })
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex::new(x, 0.0))
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<RealMatrix> {
    let r = rows.len();
    if r == 0 {
        return Err(Error::Contract("matrix must have at least one row".into()));
    }
    let c = rows[0].len();
    if c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Contract("ragged or empty rows".into()));
    }
    Ok(RealMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn to_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

/// Flip `v` so that its first component of magnitude above `1e-12` is positive.
pub fn fix_sign(v: &mut [f64]) {
    if let Some(&lead) = v.iter().find(|x| x.abs() > SIGN_THRESHOLD) {
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn fix_column_signs(m: &mut RealMatrix) {
    for mut col in m.column_iter_mut() {
        let lead = col.iter().copied().find(|x| x.abs() > SIGN_THRESHOLD);
        if matches!(lead, Some(x) if x < 0.0) {
            col.neg_mut();
        }
    }
}

fn ensure_finite(m: &RealMatrix, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Contract(format!("{what} has non-finite entries")))
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues and the
/// first-significant-component-positive sign convention.
pub fn sym_eig(m: &RealMatrix) -> Result<SymEig> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "sym_eig needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m, "sym_eig input")?;
    let asym = max_abs(&(m - m.transpose()));
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Contract(format!(
            "sym_eig input is not symmetric (max |m - m^T| = {asym:e})"
        )));
    }

    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RealMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    fix_column_signs(&mut vectors);
    Ok(SymEig { values, vectors })
}

/// Eigenvalues of a general real square matrix, sorted by real part.
pub fn general_eigenvalues(m: &RealMatrix) -> Vec<Complex<f64>> {
    let mut z: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

/// Singular values in descending order.
pub fn singular_values(m: &RealMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Right singular vectors of `m` as columns (all `cols` of them) with the
/// matching singular values, descending; missing values (wide input) are 0.
fn full_right_singular(m: &RealMatrix) -> (Vec<f64>, RealMatrix) {
    let (rows, cols) = m.shape();
    // Zero rows leave the row space unchanged and give a full V for wide input.
    let padded = if rows < cols {
        let mut p = RealMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("SVD computed with V");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = RealMatrix::from_fn(cols, cols, |r, c| v_t[(order[c], r)]);
    (values, v)
}

/// Orthonormal basis (as columns) of `{x : a x ≈ 0}`.
///
/// A direction is kept when its singular value is at most `tol * ‖a‖₂`.
pub fn nullspace(a: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    if !(tol > 0.0) {
        return Err(Error::Contract(format!("nullspace tolerance must be positive, got {tol}")));
    }
    ensure_finite(a, "nullspace input")?;
    let cols = a.ncols();
    let (sv, v) = full_right_singular(a);
    let scale = sv.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..cols).filter(|&i| sv[i] <= tol * scale).collect();
    let mut basis = RealMatrix::from_fn(cols, keep.len(), |r, c| v[(r, keep[c])]);
    fix_column_signs(&mut basis);
    Ok(basis)
}

/// Right singular vector belonging to the smallest singular value, with
/// that value. Used where exactly one null direction is expected.
pub fn smallest_right_singular(a: &RealMatrix) -> (f64, Vec<f64>) {
    let (sv, v) = full_right_singular(a);
    let last = a.ncols() - 1;
    let mut x: Vec<f64> = v.column(last).iter().copied().collect();
    fix_sign(&mut x);
    (sv[last], x)
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn lstsq(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.nrows() != b.len() {
        return Err(Error::Contract(format!(
            "lstsq: {} rows but right-hand side of length {}",
            a.nrows(),
            b.len()
        )));
    }
    ensure_finite(a, "lstsq matrix")?;
    if b.iter().all(|&x| x == 0.0) {
        return Ok(vec![0.0; a.ncols()]);
    }
    let rhs = DVector::from_column_slice(b);
    let svd = SVD::new(a.clone(), true, true);
    let eps = svd.singular_values.max() * f64::EPSILON * a.nrows().max(a.ncols()) as f64;
    let x = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::Contract(format!("lstsq failed: {e}")))?;
    Ok(x.iter().copied().collect())
}

/// Inverse of a square, well-conditioned matrix.
pub fn inverse(m: &RealMatrix) -> Result<RealMatrix> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "inverse needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m, "inverse input")?;
    let sv = singular_values(m);
    let largest = sv[0];
    let smallest = *sv.last().unwrap();
    if largest == 0.0 || smallest <= SINGULAR_RATIO * largest {
        return Err(Error::Singular(smallest));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular(smallest))
}

/// Central difference `(f(τ+h) − f(τ−h)) / 2h`.
pub fn finite_diff<F>(f: F, tau: f64, h: f64) -> Result<RealMatrix>
where
    F: Fn(f64) -> Result<RealMatrix>,
{
    if !(h > 0.0) {
        return Err(Error::Contract(format!("finite-difference step must be positive, got {h}")));
    }
    let ahead = f(tau + h)?;
    let behind = f(tau - h)?;
    if ahead.shape() != behind.shape() {
        return Err(Error::Contract("finite_diff: shape changed between samples".into()));
    }
    Ok((ahead - behind) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[f64]]) -> RealMatrix {
        from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sym_eig_identity() {
        let e = sym_eig(&RealMatrix::identity(2, 2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn sym_eig_exchange_matrix() {
        let e = sym_eig(&exchange(2)).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = mat(&[&[s, s], &[-s, s]]);
        assert!(max_abs(&(&e.vectors - expect)) < 1e-15);
    }

    #[test]
    fn sym_eig_minimal_two_level_metric() {
        let theta = mat(&[&[1.0, -0.5], &[-0.5, 1.0]]);
        let e = sym_eig(&theta).unwrap();
        assert!((e.values[0] - 0.5).abs() < 1e-15);
        assert!((e.values[1] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn sym_eig_rejects_bad_input() {
        assert!(matches!(sym_eig(&RealMatrix::zeros(2, 3)), Err(Error::Contract(_))));
        let m = mat(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(sym_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&RealMatrix::zeros(2, 2), 1e-12).unwrap().ncols(), 2);
        assert_eq!(nullspace(&RealMatrix::identity(3, 3), 1e-12).unwrap().ncols(), 0);
        let basis = nullspace(&mat(&[&[1.0, 1.0]]), 1e-12).unwrap();
        assert_eq!(basis.ncols(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((basis[(0, 0)] - s).abs() < 1e-14);
        assert!((basis[(1, 0)] + s).abs() < 1e-14);
        assert!(nullspace(&RealMatrix::zeros(1, 1), 0.0).is_err());
    }

    #[test]
    fn lstsq_examples() {
        let x = lstsq(&RealMatrix::identity(2, 2), &[3.0, 4.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14 && (x[1] - 4.0).abs() < 1e-14);

        let x = lstsq(&mat(&[&[1.0], &[1.0]]), &[1.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);

        let a = mat(&[&[1.0, 0.0], &[0.0, 2.0], &[1.0, 1.0]]);
        let x = lstsq(&a, &[1.0, 4.0, 3.0]).unwrap();
        let r = &a * DVector::from_vec(x) - DVector::from_vec(vec![1.0, 4.0, 3.0]);
        assert!(r.norm() < 1e-13);

        assert_eq!(lstsq(&a, &[0.0; 3]).unwrap(), vec![0.0, 0.0]);
        assert!(lstsq(&a, &[1.0]).is_err());
    }

    #[test]
    fn inverse_examples() {
        let inv = inverse(&mat(&[&[2.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert!(max_abs(&(inv - mat(&[&[0.5, 0.0], &[0.0, 0.25]]))) < 1e-15);

        match inverse(&mat(&[&[1.0, -1.0], &[-1.0, 1.0]])) {
            Err(Error::Singular(s)) => assert!(s < 1e-14),
            other => panic!("expected singularity, got {other:?}"),
        }

        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = mat(&[&[c, -s], &[s, c]]);
        assert!(max_abs(&(inverse(&rot).unwrap() - rot.transpose())) < 1e-15);
    }

    #[test]
    fn finite_diff_examples() {
        let d = finite_diff(|t| Ok(RealMatrix::identity(2, 2) * (t * t)), 1.0, 1e-5).unwrap();
        assert!(max_abs(&(d - RealMatrix::identity(2, 2) * 2.0)) < 1e-9);

        let c = mat(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let d = finite_diff(|_| Ok(c.clone()), 0.3, 1e-3).unwrap();
        assert_eq!(max_abs(&d), 0.0);

        let err = finite_diff(
            |t| if t >= 1.0 { Err(Error::Domain("t >= 1".into())) } else { Ok(c.clone()) },
            0.999_999,
            1e-5,
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    fn symmetric(n: usize, seed: Vec<f64>) -> RealMatrix {
        let a = RealMatrix::from_fn(n, n, |i, j| seed[i * n + j]);
        (&a + a.transpose()) * 0.5
    }

    proptest! {
        #[test]
        fn sym_eig_reconstructs(n in 1usize..=16, seed in prop::collection::vec(-10.0f64..10.0, 256)) {
            let m = symmetric(n, seed);
            let e = sym_eig(&m).unwrap();
            let lambda = RealMatrix::from_diagonal(&DVector::from_vec(e.values.clone()));
            let back = &e.vectors * lambda * e.vectors.transpose();
            let scale = max_abs(&m).max(1.0);
            prop_assert!(max_abs(&(back - &m)) <= 1e-10 * scale);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let gram = e.vectors.transpose() * &e.vectors;
            prop_assert!(max_abs(&(gram - RealMatrix::identity(n, n))) < 1e-10);
        }

        #[test]
        fn nullspace_rank_nullity(rows in 1usize..6, cols in 1usize..6, rank in 0usize..6,
                                  seed in prop::collection::vec(-1.0f64..1.0, 72)) {
            let r = rank.min(rows).min(cols);
            let left = RealMatrix::from_fn(rows, r, |i, j| seed[i * 6 + j]);
            let right = RealMatrix::from_fn(r, cols, |i, j| seed[36 + i * 6 + j]);
            let a = left * right;
            let basis = nullspace(&a, 1e-10).unwrap();
            let numeric_rank = singular_values(&a).iter()
                .filter(|&&s| s > 1e-10 * singular_values(&a)[0]).count();
            prop_assert_eq!(basis.ncols() + numeric_rank, cols);
            if basis.ncols() > 0 {
                prop_assert!(max_abs(&(&a * &basis)) <= 1e-9 * max_abs(&a).max(1.0));
            }
        }

        #[test]
        fn inverse_is_an_involution(n in 1usize..8, seed in prop::collection::vec(-1.0f64..1.0, 64)) {
            let m = RealMatrix::from_fn(n, n, |i, j| seed[i * 8 + j]) + RealMatrix::identity(n, n) * 4.0;
            let twice = inverse(&inverse(&m).unwrap()).unwrap();
            prop_assert!(max_abs(&(twice - &m)) < 1e-9);
        }
    }
}
