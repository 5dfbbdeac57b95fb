//! Supermatrices over `Λ`: Berezinians, quasideterminants, inversion and
//! the super Cramer rule, with an independent solver working on the
//! complex expansion.
//!
//! Row index `i` is even when `i < k` for row shape `(k|l)`; likewise for
//! columns with `(p|q)`. All indices in this module are zero-based.

mod berezinian;
mod cramer;
mod oracle;

use serde::{Deserialize, Serialize};

pub use berezinian::{berezinian, berezinian_star, det_even};
pub use cramer::{cramer_component, invert_matrix, quasideterminant, solve_cramer, CramerComponent, CramerSolver};
pub use oracle::oracle_solve;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannScalar, Parity};
use crate::matrix::LambdaMatrix;

/// Even/odd split `(even count | odd count)` of a row or column index set.
pub type Shape = (usize, usize);

/// Matrix over `Λ` with graded rows `(k|l)` and columns `(p|q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperMatrixRepr", into = "SuperMatrixRepr")]
pub struct SuperMatrix {
    row_shape: Shape,
    col_shape: Shape,
    m: LambdaMatrix,
}

impl SuperMatrix {
    pub fn new(row_shape: Shape, col_shape: Shape, m: LambdaMatrix) -> Result<Self> {
        if m.nrows() != row_shape.0 + row_shape.1 || m.ncols() != col_shape.0 + col_shape.1 {
            return Err(Error::Dimension(format!(
                "entry grid {}x{} does not match shape ({}|{})x({}|{})",
                m.nrows(),
                m.ncols(),
                row_shape.0,
                row_shape.1,
                col_shape.0,
                col_shape.1
            )));
        }
        Ok(SuperMatrix { row_shape, col_shape, m })
    }

    pub fn from_rows(row_shape: Shape, col_shape: Shape, n: usize, rows: Vec<Vec<GrassmannScalar>>) -> Result<Self> {
        if rows.is_empty() && col_shape.0 + col_shape.1 > 0 {
            return Err(Error::Dimension("no rows given".into()));
        }
        let m = LambdaMatrix::from_rows(n, rows)?;
        Self::new(row_shape, col_shape, m)
    }

    pub fn identity(shape: Shape, n: usize) -> Self {
        SuperMatrix { row_shape: shape, col_shape: shape, m: LambdaMatrix::identity(n, shape.0 + shape.1) }
    }

    pub fn zeros(row_shape: Shape, col_shape: Shape, n: usize) -> Self {
        SuperMatrix {
            row_shape,
            col_shape,
            m: LambdaMatrix::zeros(n, row_shape.0 + row_shape.1, col_shape.0 + col_shape.1),
        }
    }

    pub fn row_shape(&self) -> Shape {
        self.row_shape
    }

    pub fn col_shape(&self) -> Shape {
        self.col_shape
    }

    pub fn matrix(&self) -> &LambdaMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> LambdaMatrix {
        self.m
    }

    pub fn n_generators(&self) -> usize {
        self.m.n_generators()
    }

    pub fn nrows(&self) -> usize {
        self.m.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.m.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannScalar {
        self.m.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, x: GrassmannScalar) {
        self.m.set(i, j, x);
    }

    pub fn row_parity(&self, i: usize) -> Parity {
        if i < self.row_shape.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn col_parity(&self, j: usize) -> Parity {
        if j < self.col_shape.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Whether entry `(i, j)` has parity `parity(i) + parity(j)` for all `i, j`.
    pub fn is_even(&self) -> bool {
        (0..self.nrows()).all(|i| {
            (0..self.ncols()).all(|j| self.get(i, j).has_parity(self.row_parity(i).add(self.col_parity(j))))
        })
    }

    pub fn is_square(&self) -> bool {
        self.row_shape == self.col_shape
    }

    /// Blocks `(X, α, β, Y)` of the even/odd decomposition.
    pub fn blocks(&self) -> (LambdaMatrix, LambdaMatrix, LambdaMatrix, LambdaMatrix) {
        let (k, l) = self.row_shape;
        let (p, q) = self.col_shape;
        (self.m.block(0, 0, k, p), self.m.block(0, p, k, q), self.m.block(k, 0, l, p), self.m.block(k, p, l, q))
    }

    /// Assembles a supermatrix from its four blocks.
    pub fn from_blocks(x: &LambdaMatrix, alpha: &LambdaMatrix, beta: &LambdaMatrix, y: &LambdaMatrix) -> Result<Self> {
        let k = x.nrows();
        let p = x.ncols();
        let l = y.nrows();
        let q = y.ncols();
        if alpha.nrows() != k || alpha.ncols() != q || beta.nrows() != l || beta.ncols() != p {
            return Err(Error::Dimension("inconsistent block sizes".into()));
        }
        let n = x.n_generators().max(y.n_generators());
        let m = LambdaMatrix::from_fn(n, k + l, p + q, |i, j| match (i < k, j < p) {
            (true, true) => x.get(i, j).clone(),
            (true, false) => alpha.get(i, j - p).clone(),
            (false, true) => beta.get(i - k, j).clone(),
            (false, false) => y.get(i - k, j - p).clone(),
        });
        Self::new((k, l), (p, q), m)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.col_shape != other.row_shape {
            return Err(Error::Dimension(format!(
                "column shape {:?} does not match row shape {:?}",
                self.col_shape, other.row_shape
            )));
        }
        Self::new(self.row_shape, other.col_shape, self.m.checked_mul(&other.m)?)
    }

    /// Matrix with row `i` replaced by `row`.
    pub fn with_row(&self, i: usize, row: &[GrassmannScalar]) -> Result<Self> {
        if row.len() != self.ncols() {
            return Err(Error::Dimension(format!("row of length {} for {} columns", row.len(), self.ncols())));
        }
        let mut out = self.clone();
        for (j, x) in row.iter().enumerate() {
            out.set(i, j, x.clone());
        }
        Ok(out)
    }

    /// Submatrix `A^{ij}` with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.nrows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.ncols()).filter(|&c| c != j).collect();
        let shrink = |s: Shape, even: bool| if even { (s.0 - 1, s.1) } else { (s.0, s.1 - 1) };
        SuperMatrix {
            row_shape: shrink(self.row_shape, i < self.row_shape.0),
            col_shape: shrink(self.col_shape, j < self.col_shape.0),
            m: self.m.select(&rows, &cols),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.row_shape == other.row_shape && self.col_shape == other.col_shape && self.m.approx_eq(&other.m, tol)
    }
}

/// The system `x A = y` for an unknown row vector `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperLinearSystem {
    pub matrix: SuperMatrix,
    pub rhs: Vec<GrassmannScalar>,
}

impl SuperLinearSystem {
    pub fn new(matrix: SuperMatrix, rhs: Vec<GrassmannScalar>) -> Result<Self> {
        let sys = SuperLinearSystem { matrix, rhs };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.matrix;
        if !a.is_square() {
            return Err(Error::Dimension("system matrix must be square".into()));
        }
        if self.rhs.len() != a.nrows() {
            return Err(Error::Dimension(format!("right-hand side has {} entries, matrix has {} rows", self.rhs.len(), a.nrows())));
        }
        if let Some(y) = self.rhs.iter().find(|y| y.n_generators() != a.n_generators()) {
            return Err(Error::Dimension(format!(
                "right-hand side over {} generators, matrix over {}",
                y.n_generators(),
                a.n_generators()
            )));
        }
        if !a.is_even() {
            return Err(Error::Parity("system matrix is not even".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SuperMatrixRepr {
    rows: [usize; 2],
    cols: [usize; 2],
    entries: Vec<Vec<GrassmannScalar>>,
}

impl TryFrom<SuperMatrixRepr> for SuperMatrix {
    type Error = Error;

    fn try_from(r: SuperMatrixRepr) -> Result<Self> {
        let n = r.entries.iter().flatten().map(GrassmannScalar::n_generators).max().unwrap_or(0);
        let entries = r.entries.into_iter().map(|row| row.into_iter().map(|x| x.embed(n)).collect()).collect();
        SuperMatrix::from_rows((r.rows[0], r.rows[1]), (r.cols[0], r.cols[1]), n, entries)
    }
}

impl From<SuperMatrix> for SuperMatrixRepr {
    fn from(a: SuperMatrix) -> Self {
        SuperMatrixRepr {
            rows: [a.row_shape.0, a.row_shape.1],
            cols: [a.col_shape.0, a.col_shape.1],
            entries: a.m.to_rows(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_form_round_trips() {
        let n = 2;
        let b = |i| GrassmannScalar::generator(n, i);
        let one = GrassmannScalar::one(n);
        let a = SuperMatrix::from_rows((1, 1), (1, 1), n, vec![vec![one.clone(), b(0)], vec![b(1), one]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let back: SuperMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        assert!(a.is_even());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let m = LambdaMatrix::identity(1, 2);
        assert!(matches!(SuperMatrix::new((1, 0), (1, 1), m), Err(Error::Dimension(_))));
    }

    #[test]
    fn minor_shrinks_the_right_block() {
        let a = SuperMatrix::identity((2, 2), 1);
        assert_eq!(a.minor(0, 1).row_shape(), (1, 2));
        assert_eq!(a.minor(3, 2).col_shape(), (2, 1));
    }
}
