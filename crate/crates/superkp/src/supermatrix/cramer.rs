use super::{berezinian, berezinian_star, SuperLinearSystem, SuperMatrix};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannScalar, Parity};
use crate::matrix::LambdaMatrix;

/// Bodies below this modulus are treated as zero when choosing pivots.
const PIVOT_FLOOR: f64 = 1e-12;

/// Data for `|A|_{ij}` and its row-substituted variants: the inverse of
/// `A^{ij}` together with the kept row and column labels.
struct Minor {
    i: usize,
    j: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    inv: LambdaMatrix,
}

impl Minor {
    fn new(a: &SuperMatrix, i: usize, j: usize) -> Result<Minor> {
        let rows: Vec<usize> = (0..a.nrows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..a.ncols()).filter(|&c| c != j).collect();
        let inv = a
            .matrix()
            .select(&rows, &cols)
            .inverse()
            .map_err(|_| Error::NotInvertible(format!("minor A^({i},{j}) has singular body")))?;
        Ok(Minor { i, j, rows, cols, inv })
    }

    /// `r_j − Σ_{p≠j, q≠i} r_p c_{pq} a_{qj}` for a row `r` standing in for row `i`.
    fn quasi(&self, a: &SuperMatrix, row: &[GrassmannScalar]) -> GrassmannScalar {
        let kept: Vec<GrassmannScalar> = self.cols.iter().map(|&p| row[p].clone()).collect();
        let through = self.inv.left_apply(&kept);
        let mut acc = row[self.j].clone();
        for (v, &q) in through.iter().zip(&self.rows) {
            let x = a.get(q, self.j);
            if !v.is_zero() && !x.is_zero() {
                acc -= &(v * x);
            }
        }
        acc
    }
}

fn check_indices(a: &SuperMatrix, i: usize, j: usize) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("quasideterminant of a non-square matrix".into()));
    }
    if i >= a.nrows() || j >= a.ncols() {
        return Err(Error::Dimension(format!("index ({i},{j}) outside a {}x{} matrix", a.nrows(), a.ncols())));
    }
    if a.row_parity(i) != a.col_parity(j) {
        return Err(Error::Parity(format!("row {i} and column {j} have different parity")));
    }
    Ok(())
}

/// Quasideterminant `|A|_{ij}` (zero-based indices of equal parity).
pub fn quasideterminant(a: &SuperMatrix, i: usize, j: usize) -> Result<GrassmannScalar> {
    check_indices(a, i, j)?;
    let minor = Minor::new(a, i, j)?;
    Ok(minor.quasi(a, a.matrix().row(i)))
}

/// Inverse of an even supermatrix with invertible body.
pub fn invert_matrix(a: &SuperMatrix) -> Result<SuperMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("only square supermatrices are invertible".into()));
    }
    if !a.is_even() {
        return Err(Error::Parity("matrix is not even".into()));
    }
    SuperMatrix::new(a.col_shape(), a.row_shape(), a.matrix().inverse()?)
}

/// One unknown `x_i` of `x A = y`, prepared for any right-hand side.
pub struct CramerComponent<'a> {
    a: &'a SuperMatrix,
    minor: Minor,
    /// `(−1)^{i+j}` times `ber(A^{ij})/ber(A)` or `ber*(A^{ij})/ber*(A)`.
    factor: GrassmannScalar,
}

impl CramerComponent<'_> {
    pub fn row(&self) -> usize {
        self.minor.i
    }

    pub fn column(&self) -> usize {
        self.minor.j
    }

    /// `x_i = ber(A_i(y))/ber(A)` (even `i`) or `ber*(A_i(y))/ber*(A)` (odd `i`),
    /// with `ber(A_i(y)) = (−1)^{i+j} |A_i(y)|_{ij} ber(A^{ij})`.
    pub fn solve(&self, y: &[GrassmannScalar]) -> GrassmannScalar {
        &self.minor.quasi(self.a, y) * &self.factor
    }
}

/// Reusable super Cramer solver for a fixed even matrix.
pub struct CramerSolver<'a> {
    a: &'a SuperMatrix,
    ber_inv: GrassmannScalar,
    ber_star_inv: GrassmannScalar,
}

impl<'a> CramerSolver<'a> {
    pub fn new(a: &'a SuperMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("system matrix must be square".into()));
        }
        let ber_inv = berezinian(a)?.invert()?;
        let ber_star_inv = berezinian_star(a)?.invert()?;
        Ok(CramerSolver { a, ber_inv, ber_star_inv })
    }

    /// Prepares unknown `i` using column `j`, which must have the parity of `i`
    /// and give invertible `A^{ij}` and `|A|_{ij}`.
    pub fn component_with_column(&self, i: usize, j: usize) -> Result<CramerComponent<'a>> {
        check_indices(self.a, i, j)?;
        let minor = Minor::new(self.a, i, j)?;
        if minor.quasi(self.a, self.a.matrix().row(i)).body().norm() <= PIVOT_FLOOR {
            return Err(Error::NotInvertible(format!("quasideterminant |A|_({i},{j}) has zero body")));
        }
        let sub = self.a.minor(i, j);
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        let ratio = match self.a.row_parity(i) {
            Parity::Even => &berezinian(&sub)? * &self.ber_inv,
            Parity::Odd => &berezinian_star(&sub)? * &self.ber_star_inv,
        };
        Ok(CramerComponent { a: self.a, minor, factor: &ratio * sign })
    }

    /// Prepares unknown `i` with the smallest admissible column.
    pub fn component(&self, i: usize) -> Result<CramerComponent<'a>> {
        let parity = self.a.row_parity(i);
        (0..self.a.ncols())
            .filter(|&j| self.a.col_parity(j) == parity)
            .find_map(|j| self.component_with_column(i, j).ok())
            .ok_or_else(|| Error::NotInvertible(format!("no admissible pivot column for unknown {i}")))
    }

    pub fn solve(&self, y: &[GrassmannScalar]) -> Result<Vec<GrassmannScalar>> {
        if y.len() != self.a.nrows() {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} unknowns", y.len(), self.a.nrows())));
        }
        (0..self.a.nrows()).map(|i| Ok(self.component(i)?.solve(y))).collect()
    }
}

/// Solves `x A = y` by the super Cramer rule.
pub fn solve_cramer(sys: &SuperLinearSystem) -> Result<Vec<GrassmannScalar>> {
    sys.validate()?;
    CramerSolver::new(&sys.matrix)?.solve(&sys.rhs)
}

/// Unknown `x_i` computed with the explicitly chosen pivot column `j`.
pub fn cramer_component(sys: &SuperLinearSystem, i: usize, j: usize) -> Result<GrassmannScalar> {
    sys.validate()?;
    let solver = CramerSolver::new(&sys.matrix)?;
    Ok(solver.component_with_column(i, j)?.solve(&sys.rhs))
}
