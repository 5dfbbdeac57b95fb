use num_complex::Complex64;

use super::SuperMatrix;
use crate::error::{Error, Result};
use crate::grassmann::GrassmannScalar;
use crate::linalg;
use crate::matrix::LambdaMatrix;

/// Largest size for which a body-singular determinant is expanded term by term.
const MAX_EXPANSION_SIZE: usize = 10;

/// Determinant of a square matrix with even (hence mutually commuting) entries.
pub fn det_even(m: &LambdaMatrix) -> Result<GrassmannScalar> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.nrows(), m.ncols())));
    }
    if let Some((i, j)) = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).find(|&(i, j)| !m.get(i, j).is_even()) {
        return Err(Error::Parity(format!("entry ({i},{j}) is not even")));
    }
    let n = m.n_generators();
    if m.nrows() == 0 {
        return Ok(GrassmannScalar::one(n));
    }
    let body = m.body();
    match linalg::inverse(&body) {
        Some(body_inv) => {
            // det(M₀ + S) = det M₀ · exp(Σ_k (−1)^{k+1} tr(Nᵏ)/k), N = M₀⁻¹S.
            let step = &LambdaMatrix::from_complex(n, &body_inv) * &m.soul();
            let mut log = GrassmannScalar::zero(n);
            let mut power = step.clone();
            let mut k = 1.0;
            while !power.is_zero() {
                let sign = if (k as i64) % 2 == 1 { 1.0 } else { -1.0 };
                log += power.trace().scale(Complex64::new(sign / k, 0.0));
                power = &power * &step;
                k += 1.0;
            }
            Ok(log.exp().scale(linalg::determinant(&body)))
        }
        None => expand_determinant(m),
    }
}

/// Signed sum over permutations, skipping zero partial products.
fn expand_determinant(m: &LambdaMatrix) -> Result<GrassmannScalar> {
    let size = m.nrows();
    if size > MAX_EXPANSION_SIZE {
        return Err(Error::Domain(format!(
            "determinant with singular body larger than {MAX_EXPANSION_SIZE}x{MAX_EXPANSION_SIZE}"
        )));
    }
    let n = m.n_generators();
    let mut total = GrassmannScalar::zero(n);
    expand_rows(m, 0, 0, false, &GrassmannScalar::one(n), &mut total);
    Ok(total)
}

fn expand_rows(m: &LambdaMatrix, row: usize, used: u32, odd: bool, partial: &GrassmannScalar, total: &mut GrassmannScalar) {
    if row == m.nrows() {
        if odd {
            *total -= partial;
        } else {
            *total += partial;
        }
        return;
    }
    for col in 0..m.ncols() {
        if used & (1 << col) != 0 || m.get(row, col).is_zero() {
            continue;
        }
        let next = partial * m.get(row, col);
        if next.is_zero() {
            continue;
        }
        let crossings = (used >> col >> 1).count_ones() % 2 == 1;
        expand_rows(m, row + 1, used | (1 << col), odd ^ crossings, &next, total);
    }
}

fn check_even_square(a: &SuperMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Berezinian needs equal row and column shapes, got {:?} and {:?}",
            a.row_shape(),
            a.col_shape()
        )));
    }
    if !a.is_even() {
        return Err(Error::Parity("matrix is not even".into()));
    }
    Ok(())
}

fn diagonal_inverses(a: &SuperMatrix) -> Result<(LambdaMatrix, LambdaMatrix, LambdaMatrix, LambdaMatrix, LambdaMatrix, LambdaMatrix)> {
    let (x, alpha, beta, y) = a.blocks();
    let x_inv = x.inverse().map_err(|_| Error::NotInvertible("even-even block has singular body".into()))?;
    let y_inv = y.inverse().map_err(|_| Error::NotInvertible("odd-odd block has singular body".into()))?;
    Ok((x, alpha, beta, y, x_inv, y_inv))
}

/// `ber A = det(X − αY⁻¹β) · det(Y⁻¹)`.
pub fn berezinian(a: &SuperMatrix) -> Result<GrassmannScalar> {
    check_even_square(a)?;
    let (x, alpha, beta, _, _, y_inv) = diagonal_inverses(a)?;
    let schur = &x - &(&(&alpha * &y_inv) * &beta);
    Ok(&det_even(&schur)? * &det_even(&y_inv)?)
}

/// `ber* A = det(X⁻¹) · det(Y − βX⁻¹α)`, the inverse of `ber A`.
pub fn berezinian_star(a: &SuperMatrix) -> Result<GrassmannScalar> {
    check_even_square(a)?;
    let (_, alpha, beta, y, x_inv, _) = diagonal_inverses(a)?;
    let schur = &y - &(&(&beta * &x_inv) * &alpha);
    Ok(&det_even(&x_inv)? * &det_even(&schur)?)
}
