//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Relative threshold on singular values below which a complex matrix is
/// treated as singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank with threshold `rtol · σ_max` (absolute floor `1e-300`).
pub fn rank(m: &CMatrix, rtol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = (smax * rtol).max(1e-300);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Whether a square matrix is numerically singular.
pub fn is_singular(m: &CMatrix) -> bool {
    assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    if n == 0 {
        return false;
    }
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    smax == 0.0 || smin <= smax * SINGULAR_RTOL
}

/// Inverse of a numerically invertible square matrix (LU with partial pivoting).
pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(CMatrix::zeros(0, 0));
    }
    if is_singular(m) {
        return None;
    }
    m.clone().lu().try_inverse()
}

pub fn determinant(m: &CMatrix) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve(m: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(CMatrix::zeros(0, b.ncols()));
    }
    if is_singular(m) {
        return None;
    }
    m.clone().lu().solve(b)
}

/// Orthonormal basis (as columns) of the null space of `m`, using the
/// threshold `rtol · σ_max` on singular values.
pub fn null_space(m: &CMatrix, rtol: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // Pad to a square matrix so that the SVD returns a full right basis.
    let size = m.nrows().max(cols);
    let mut padded = CMatrix::zeros(size, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = (smax * rtol).max(1e-300);
    let null_rows: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] <= cut).collect();
    CMatrix::from_fn(cols, null_rows.len(), |i, k| v_t[(null_rows[k], i)].conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_singularity() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        assert_eq!(rank(&m, 1e-12), 1);
        assert!(is_singular(&m));
        assert!(inverse(&m).is_none());
        let id = CMatrix::identity(3, 3);
        assert_eq!(inverse(&id).unwrap(), id);
        assert_eq!(determinant(&CMatrix::zeros(0, 0)), c(1.0));
    }

    #[test]
    fn null_space_of_a_wide_matrix() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let k = null_space(&m, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).iter().all(|x| x.norm() < 1e-14));
    }
}
