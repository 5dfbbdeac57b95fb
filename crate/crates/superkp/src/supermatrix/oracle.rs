use nalgebra::DMatrix;

use super::SuperLinearSystem;
use crate::error::{Error, Result};
use crate::expansion;
use crate::grassmann::GrassmannScalar;
use crate::linalg;

/// Residual above which the expanded solve is declared inconsistent.
const RESIDUAL_LIMIT: f64 = 1e-8;

/// Solves `x A = y` by expanding every entry over the monomial basis and
/// solving the resulting complex linear system.
pub fn oracle_solve(sys: &SuperLinearSystem) -> Result<Vec<GrassmannScalar>> {
    if !sys.matrix.is_square() || sys.rhs.len() != sys.matrix.nrows() {
        return Err(Error::Dimension("system must be square with matching right-hand side".into()));
    }
    let n = sys.matrix.n_generators();
    let big = expansion::row_action(sys.matrix.matrix());
    let rhs = DMatrix::from_column_slice(big.nrows(), 1, &expansion::flatten(&sys.rhs));
    let x = linalg::solve(&big, &rhs).ok_or_else(|| Error::NotInvertible("expanded system is singular".into()))?;
    let residual = (&big * &x - &rhs).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if residual > RESIDUAL_LIMIT {
        return Err(Error::Domain(format!("expanded system is inconsistent (residual {residual:e})")));
    }
    Ok(expansion::unflatten(n, x.as_slice()))
}
