//! Small dense numeric helpers: rank decisions, kernels, G-orthonormalization.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::GeometryError;

/// Scale-relative rank threshold: 1e-9 × max(1, σ_max).
pub fn rank_tolerance(sigma_max: f64) -> f64 {
    1e-9 * sigma_max.max(1.0)
}

pub fn inf_norm_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn inf_norm_mat(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Euclidean-orthonormal basis of the column span, rank decided by singular values.
pub fn column_span(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let n = cols.nrows();
    if cols.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = cols.clone().svd(true, false);
    let tol = rank_tolerance(svd.singular_values.max());
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    let u = svd.u.expect("SVD with U requested");
    u.columns(0, rank).into_owned()
}

/// Euclidean-orthonormal basis of the kernel of `m`.
///
/// The matrix is padded with zero rows when it is wide, so the decomposition
/// always yields a full right-singular basis.
pub fn kernel(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let work = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, rows).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let tol = rank_tolerance(svd.singular_values.max());
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    let v_t = svd.v_t.expect("SVD with V requested");
    v_t.rows(rank, v_t.nrows() - rank).transpose()
}

/// Smallest singular value of a nonempty matrix.
pub fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    let svd = m.clone().svd(false, false);
    svd.singular_values.min()
}

/// Largest singular value (0 for an empty matrix).
pub fn largest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.max()
}

/// Modified Gram–Schmidt with respect to the inner product xᵀGy.
///
/// Columns of `raw` must be linearly independent; the caller is expected to
/// have screened them (see `smallest_singular_value`). A second projection
/// pass keeps the loss of orthogonality near machine precision.
pub fn gram_schmidt_g(g: &DMatrix<f64>, raw: &DMatrix<f64>) -> Result<DMatrix<f64>, GeometryError> {
    let n = raw.nrows();
    let m = raw.ncols();
    let mut out = DMatrix::zeros(n, m);
    let scale = largest_singular_value(raw).max(1.0);
    for c in 0..m {
        let mut v: DVector<f64> = raw.column(c).into_owned();
        for _pass in 0..2 {
            for k in 0..c {
                let u = out.column(k);
                let coeff = u.dot(&(g * &v));
                v -= coeff * DVector::from(u.into_owned());
            }
        }
        let norm = (v.dot(&(g * &v))).max(0.0).sqrt();
        if norm <= rank_tolerance(scale) {
            return Err(GeometryError::DependentBasis { sigma: norm });
        }
        v /= norm;
        out.set_column(c, &v);
    }
    Ok(out)
}

/// G-orthogonal residual of `v` against the G-orthonormal columns of `basis`.
pub fn g_normal_component(
    g: &DMatrix<f64>,
    basis: &DMatrix<f64>,
    v: &DVector<f64>,
) -> DVector<f64> {
    if basis.ncols() == 0 {
        return v.clone();
    }
    let coords = basis.transpose() * (g * v);
    v - basis * coords
}

pub fn g_norm(g: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(g * v)).max(0.0).sqrt()
}

/// Uniformly distributed unit vector (Euclidean) of the given dimension.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kernel_of_wide_matrix() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let k = kernel(&m);
        assert_eq!(k.ncols(), 2);
        for c in 0..2 {
            let v = k.column(c);
            assert_abs_diff_eq!(v.sum(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let m = DMatrix::zeros(4, 3);
        let k = kernel(&m);
        assert_eq!(k.ncols(), 3);
    }

    #[test]
    fn gram_schmidt_produces_g_orthonormal_columns() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]);
        let raw = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        let b = gram_schmidt_g(&g, &raw).unwrap();
        let gram = b.transpose() * &g * &b;
        assert_abs_diff_eq!(gram[(0, 0)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gram[(1, 1)], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gram[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        let g = DMatrix::identity(3, 3);
        let raw = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 0.0, 0.0]);
        assert!(matches!(
            gram_schmidt_g(&g, &raw),
            Err(GeometryError::DependentBasis { .. })
        ));
    }

    #[test]
    fn random_unit_vectors_are_unit_and_seeded() {
        use rand::SeedableRng;
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let va = random_unit_vector(&mut a, 5);
        let vb = random_unit_vector(&mut b, 5);
        assert_eq!(va, vb);
        assert_abs_diff_eq!(va.norm(), 1.0, epsilon = 1e-12);
    }
}
