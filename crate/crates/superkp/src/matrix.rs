//! Dense rectangular matrices with entries in a Grassmann algebra.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grassmann::GrassmannScalar;
use crate::linalg::{self, CMatrix};

/// Row-major matrix over `Λ`. No parity structure is attached; see
/// [`crate::supermatrix::SuperMatrix`] for the graded version.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaMatrix {
    n: usize,
    rows: usize,
    cols: usize,
    data: Vec<GrassmannScalar>,
}

/// Serialized as a list of rows.
impl Serialize for LambdaMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl LambdaMatrix {
    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        LambdaMatrix { n, rows, cols, data: vec![GrassmannScalar::zero(n); rows * cols] }
    }

    pub fn identity(n: usize, size: usize) -> Self {
        let mut m = Self::zeros(n, size, size);
        for i in 0..size {
            m.set(i, i, GrassmannScalar::one(n));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> GrassmannScalar>(n: usize, rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.n_generators(), n, "entry ({i},{j}) lives in a different algebra");
                data.push(x);
            }
        }
        LambdaMatrix { n, rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length and
    /// all entries the same number of generators `n`.
    pub fn from_rows(n: usize, rows: Vec<Vec<GrassmannScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for x in row {
                if x.n_generators() != n {
                    return Err(Error::Dimension(format!(
                        "entry with {} generators in a matrix over {n} generators",
                        x.n_generators()
                    )));
                }
                data.push(x);
            }
        }
        Ok(LambdaMatrix { n, rows: r, cols: c, data })
    }

    /// Lifts a complex matrix to `Λ`.
    pub fn from_complex(n: usize, m: &CMatrix) -> Self {
        Self::from_fn(n, m.nrows(), m.ncols(), |i, j| GrassmannScalar::scalar(n, m[(i, j)]))
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannScalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GrassmannScalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        assert_eq!(x.n_generators(), self.n);
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[GrassmannScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GrassmannScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<GrassmannScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &GrassmannScalar> {
        self.data.iter()
    }

    pub fn map<F: FnMut(&GrassmannScalar) -> GrassmannScalar>(&self, f: F) -> Self {
        LambdaMatrix { n: self.n, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn body(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).body())
    }

    pub fn soul(&self) -> Self {
        self.map(GrassmannScalar::soul)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Multiplies every entry on the left by `s`.
    pub fn left_scale(&self, s: &GrassmannScalar) -> Self {
        self.map(|x| s * x)
    }

    pub fn embed(&self, n: usize) -> Self {
        LambdaMatrix { n, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.embed(n)).collect() }
    }

    /// Matrix built from the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.n, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Block `[r0, r0 + nr) × [c0, c0 + nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(self.n, nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GrassmannScalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(GrassmannScalar::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= tol
    }

    pub fn trace(&self) -> GrassmannScalar {
        assert!(self.is_square());
        let mut acc = GrassmannScalar::zero(self.n);
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("matrices over {} and {} generators", self.n, other.n)));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if (self.n, self.rows, self.cols) != (other.n, other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        Ok(LambdaMatrix {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Row vector times matrix, with the vector on the left.
    pub fn left_apply(&self, v: &[GrassmannScalar]) -> Vec<GrassmannScalar> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = GrassmannScalar::zero(self.n);
                for (i, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !x.is_zero() && !a.is_zero() {
                        acc += x * a;
                    }
                }
                acc
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn column_apply(&self, v: &[GrassmannScalar]) -> Vec<GrassmannScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = GrassmannScalar::zero(self.n);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !x.is_zero() && !a.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix whose body is invertible, by the
    /// terminating series `Σ (−A₀⁻¹S)ᵏ A₀⁻¹` with `A = A₀ + S`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let body_inv = linalg::inverse(&self.body())
            .ok_or_else(|| Error::NotInvertible("matrix body is singular".into()))?;
        let body_inv = Self::from_complex(self.n, &body_inv);
        let step = (&body_inv * &self.soul()).scale(Complex64::new(-1.0, 0.0));
        let mut acc = Self::identity(self.n, self.rows);
        let mut power = acc.clone();
        loop {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(&acc * &body_inv)
    }
}

impl Mul<&LambdaMatrix> for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn mul(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add<&LambdaMatrix> for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn add(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&LambdaMatrix> for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn sub(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        self.checked_add(&-rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &LambdaMatrix {
    type Output = LambdaMatrix;
    fn neg(self) -> LambdaMatrix {
        self.map(|x| -x)
    }
}
