use super::{Symbol, TruncationWindow};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannScalar, Parity};
use crate::matrix::LambdaMatrix;

fn check(w: &TruncationWindow, m: &LambdaMatrix) -> Result<()> {
    if m.nrows() != w.size() || m.ncols() != w.size() {
        return Err(Error::Dimension(format!("expected a {0}x{0} matrix for M = {1}", w.size(), w.m())));
    }
    Ok(())
}

/// Sum of diagonal entries on even indices minus those on odd indices, for
/// a square matrix on `positions` of the window.
fn supertrace_on(w: &TruncationWindow, m: &LambdaMatrix, positions: &[usize]) -> GrassmannScalar {
    let mut total = GrassmannScalar::zero(m.n_generators());
    for (k, &p) in positions.iter().enumerate() {
        match w.parity(p) {
            Parity::Even => total += m.get(k, k),
            Parity::Odd => total -= m.get(k, k),
        }
    }
    total
}

/// Supertrace of a matrix on the whole window.
pub fn supertrace(w: &TruncationWindow, m: &LambdaMatrix) -> Result<GrassmannScalar> {
    check(w, m)?;
    Ok(supertrace_on(w, m, &(0..w.size()).collect::<Vec<_>>()))
}

/// `Str(c_X b_Y − b_X c_Y)`, with `b` the block from the positive part to the
/// negative part and `c` the block back.
pub fn cocycle(w: &TruncationWindow, x: &LambdaMatrix, y: &LambdaMatrix) -> Result<GrassmannScalar> {
    check(w, x)?;
    check(w, y)?;
    let h = w.negative_size();
    let b = |m: &LambdaMatrix| m.block(0, h, h, h);
    let c = |m: &LambdaMatrix| m.block(h, 0, h, h);
    let positive: Vec<usize> = (h..w.size()).collect();
    let negative: Vec<usize> = (0..h).collect();
    let plus = supertrace_on(w, &c(x).checked_mul(&b(y))?, &positive);
    let minus = supertrace_on(w, &b(x).checked_mul(&c(y))?, &negative);
    Ok(&plus - &minus)
}

/// `¼ Str(J [J, X] [J, Y])` with `J = diag(1_{H−}, −1_{H+})`.
pub fn cocycle_from_grading(w: &TruncationWindow, x: &LambdaMatrix, y: &LambdaMatrix) -> Result<GrassmannScalar> {
    check(w, x)?;
    check(w, y)?;
    let n = x.n_generators();
    let h = w.negative_size();
    let j = LambdaMatrix::from_fn(n, w.size(), w.size(), |r, c| {
        GrassmannScalar::real(n, if r != c { 0.0 } else if r < h { 1.0 } else { -1.0 })
    });
    let bracket = |m: &LambdaMatrix| -> Result<LambdaMatrix> { Ok(&j.checked_mul(m)? - &m.checked_mul(&j)?) };
    let product = j.checked_mul(&bracket(x)?)?.checked_mul(&bracket(y)?)?;
    Ok(supertrace(w, &product)?.scale(0.25.into()))
}

/// `Str_{H−}([f_−, f_+])` where `f_±` are the compressions of the two
/// multiplication operators to the negative part of the window.
pub fn heisenberg_supertrace(w: &TruncationWindow, f_minus: &Symbol, f_plus: &Symbol) -> Result<GrassmannScalar> {
    let h = w.negative_size();
    let a = f_minus.matrix(w).0.block(0, 0, h, h);
    let b = f_plus.matrix(w).0.block(0, 0, h, h);
    let commutator = &a.checked_mul(&b)? - &b.checked_mul(&a)?;
    Ok(supertrace_on(w, &commutator, &(0..h).collect::<Vec<_>>()))
}
