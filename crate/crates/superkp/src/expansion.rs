//! Expansion of Λ-linear maps over the monomial basis of `Λ ≅ ℂ^{2ⁿ}`.
//!
//! A vector in `Λᵐ` is flattened as `m` consecutive blocks of `2ⁿ`
//! coefficients, block `i` holding component `i` indexed by monomial mask.

use num_complex::Complex64;

use crate::grassmann::{reorder_sign, GrassmannScalar};
use crate::linalg::CMatrix;
use crate::matrix::LambdaMatrix;

/// Matrix of `v ↦ a·v` on `Λ`.
pub fn left_multiplication(a: &GrassmannScalar) -> CMatrix {
    let n = a.n_generators();
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    add_product_block(&mut out, 0, 0, a, true);
    debug_assert_eq!(out.nrows(), dim);
    out
}

/// Matrix of `v ↦ v·a` on `Λ`.
pub fn right_multiplication(a: &GrassmannScalar) -> CMatrix {
    let dim = 1usize << a.n_generators();
    let mut out = CMatrix::zeros(dim, dim);
    add_product_block(&mut out, 0, 0, a, false);
    out
}

/// Adds the matrix of `v ↦ a·v` (`left = true`) or `v ↦ v·a` into the
/// `2ⁿ × 2ⁿ` block at `(r0, c0)`.
fn add_product_block(out: &mut CMatrix, r0: usize, c0: usize, a: &GrassmannScalar, left: bool) {
    let dim = 1u32 << a.n_generators();
    for s in 0..dim {
        for &(t, c) in a.terms() {
            if s & t != 0 {
                continue;
            }
            let sign = if left { reorder_sign(t, s) } else { reorder_sign(s, t) };
            out[(r0 + (s | t) as usize, c0 + s as usize)] += c * sign;
        }
    }
}

/// Matrix of the column-vector map `v ↦ M v` from `Λ^{cols}` to `Λ^{rows}`.
pub fn column_action(m: &LambdaMatrix) -> CMatrix {
    let dim = 1usize << m.n_generators();
    let mut out = CMatrix::zeros(m.nrows() * dim, m.ncols() * dim);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            add_product_block(&mut out, i * dim, j * dim, m.get(i, j), true);
        }
    }
    out
}

/// Matrix of the row-vector map `x ↦ x M` from `Λ^{rows}` to `Λ^{cols}`.
pub fn row_action(m: &LambdaMatrix) -> CMatrix {
    let dim = 1usize << m.n_generators();
    let mut out = CMatrix::zeros(m.ncols() * dim, m.nrows() * dim);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            add_product_block(&mut out, j * dim, i * dim, m.get(i, j), false);
        }
    }
    out
}

pub fn flatten(v: &[GrassmannScalar]) -> Vec<Complex64> {
    v.iter().flat_map(GrassmannScalar::to_dense).collect()
}

pub fn unflatten(n: usize, flat: &[Complex64]) -> Vec<GrassmannScalar> {
    let dim = 1usize << n;
    assert_eq!(flat.len() % dim, 0);
    flat.chunks(dim).map(|c| GrassmannScalar::from_dense(n, c)).collect()
}
