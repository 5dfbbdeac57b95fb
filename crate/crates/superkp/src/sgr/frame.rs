use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{gamma_inverse, HeisenbergElement, TruncationDiagnostics, TruncationWindow};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannScalar, Parity};
use crate::linalg;
use crate::matrix::LambdaMatrix;
use crate::random;
use crate::supermatrix::{CramerSolver, SuperMatrix};

/// Even frame: rows indexed by the whole window, columns by its negative part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedFrame {
    window: TruncationWindow,
    matrix: LambdaMatrix,
}

impl TruncatedFrame {
    pub fn new(window: TruncationWindow, matrix: LambdaMatrix) -> Result<Self> {
        let frame = Self::unchecked(window, matrix)?;
        let rank = linalg::rank(&frame.matrix.body(), linalg::SINGULAR_RTOL);
        if rank < window.negative_size() {
            return Err(Error::Domain(format!("frame columns are dependent: body rank {rank} < {}", window.negative_size())));
        }
        Ok(frame)
    }

    fn unchecked(window: TruncationWindow, matrix: LambdaMatrix) -> Result<Self> {
        if matrix.nrows() != window.size() || matrix.ncols() != window.negative_size() {
            return Err(Error::Dimension(format!(
                "frame must be {}x{} for M = {}, got {}x{}",
                window.size(),
                window.negative_size(),
                window.m(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for r in 0..matrix.nrows() {
            for c in 0..matrix.ncols() {
                let p = window.parity(r).add(window.parity(c));
                if !matrix.get(r, c).has_parity(p) {
                    return Err(Error::Parity(format!("frame entry at window positions ({r},{c}) is not {p:?}")));
                }
            }
        }
        Ok(TruncatedFrame { window, matrix })
    }

    /// The frame `(1, 0)ᵗ` spanning the negative part.
    pub fn standard(window: TruncationWindow, n: usize) -> Self {
        let matrix = LambdaMatrix::from_fn(n, window.size(), window.negative_size(), |r, c| {
            GrassmannScalar::real(n, if r == c { 1.0 } else { 0.0 })
        });
        TruncatedFrame { window, matrix }
    }

    /// Standard frame plus a seeded perturbation supported on indices with
    /// `|h| ≤ spread` in half units. Each entry is drawn from its own seed, so
    /// the frame does not depend on the window once the window contains the
    /// support.
    pub fn generic(window: TruncationWindow, n: usize, seed: u64, spread: i64, scale: f64) -> Result<Self> {
        let mut m = Self::standard(window, n).matrix;
        for r in 0..window.size() {
            let hr = window.half_index(r);
            for c in 0..window.negative_size() {
                let hc = window.half_index(c);
                if hr.abs() > spread || hc.abs() > spread {
                    continue;
                }
                let mut rng = random::rng(entry_seed(seed, hr, hc));
                let parity = window.parity(r).add(window.parity(c));
                let body = match parity {
                    Parity::Even => random::complex(&mut rng, scale),
                    Parity::Odd => Complex64::new(0.0, 0.0),
                };
                let x = &(m.get(r, c) + &GrassmannScalar::scalar(n, body)) + &random::soul(&mut rng, n, parity, scale);
                m.set(r, c, x);
            }
        }
        Self::new(window, m)
    }

    /// Span of `δ + z`, `θ` and `zⁱ, zⁱθ` for `i ≤ −1`, with `δ` even.
    pub fn delta_example(window: TruncationWindow, delta: &GrassmannScalar) -> Result<Self> {
        if !delta.is_even() {
            return Err(Error::Parity("δ must be even".into()));
        }
        let n = delta.n_generators();
        let mut m = Self::standard(window, n).matrix;
        let zero = window.position(0).expect("index 0 is in every window");
        let one = window.position(2).expect("index 1 is in every window");
        m.set(zero, zero, delta.clone());
        m.set(one, zero, GrassmannScalar::one(n));
        Self::new(window, m)
    }

    pub fn window(&self) -> TruncationWindow {
        self.window
    }

    pub fn matrix(&self) -> &LambdaMatrix {
        &self.matrix
    }

    pub fn n_generators(&self) -> usize {
        self.matrix.n_generators()
    }

    pub fn embed(&self, n: usize) -> Self {
        TruncatedFrame { window: self.window, matrix: self.matrix.embed(n) }
    }

    /// `op · W` for an even operator given in window order.
    pub fn transformed(&self, op: &LambdaMatrix) -> Result<Self> {
        Self::unchecked(self.window, op.checked_mul(&self.matrix)?)
    }

    /// `γ(t)⁻¹ W` together with its edge diagnostics.
    pub fn flowed(&self, t: &HeisenbergElement) -> Result<(Self, TruncationDiagnostics)> {
        let (g, diag) = gamma_inverse(&self.window, &t.embed(self.n_generators().max(t.n_generators())))?;
        let n = g.n_generators();
        Ok((self.embed(n).transformed(&g)?, diag))
    }

    /// Rows of the negative part, as a supermatrix with even indices first.
    pub fn negative_part(&self) -> SuperMatrix {
        let order = self.window.even_first();
        let m = self.window.m();
        SuperMatrix::new((m, m), (m, m), self.matrix.select(&order, &order)).expect("shape matches by construction")
    }

    /// Row at window position `pos` with columns ordered even first.
    pub fn row_even_first(&self, pos: usize) -> Vec<GrassmannScalar> {
        let row = self.matrix.row(pos);
        self.window.even_first().into_iter().map(|c| row[c].clone()).collect()
    }

    pub fn big_cell(&self) -> BigCell {
        let a = self.matrix.block(0, 0, self.window.negative_size(), self.window.negative_size());
        match a.inverse() {
            Ok(inv) => {
                let matrix = self.matrix.checked_mul(&inv).expect("same algebra");
                BigCell { in_big_cell: true, normalized: Some(TruncatedFrame { window: self.window, matrix }) }
            }
            Err(_) => BigCell { in_big_cell: false, normalized: None },
        }
    }

    /// Columns `0` and `−½` of the normalized frame, computed both by
    /// normalization and by the super Cramer rule on `A = W_−`.
    pub fn baker_vectors(&self) -> Result<BakerVectors> {
        let normalized = self
            .big_cell()
            .normalized
            .ok_or_else(|| Error::NotInvertible("frame is not in the big cell".into()))?;
        let w = self.window;
        let (col_even, col_odd) = (w.position(0).expect("in window"), w.position(-1).expect("in window"));
        let even = normalized.matrix.column(col_even);
        let odd = normalized.matrix.column(col_odd);

        let a = self.negative_part();
        let solver = CramerSolver::new(&a)?;
        let m = w.m();
        // Even-first positions of the indices 0 and −½.
        let even_unknown = solver.component(m - 1)?;
        let odd_unknown = solver.component(2 * m - 1)?;
        let mut route_difference: f64 = 0.0;
        let mut cramer_even = Vec::with_capacity(w.size());
        let mut cramer_odd = Vec::with_capacity(w.size());
        for pos in 0..w.size() {
            let y = self.row_even_first(pos);
            let xe = even_unknown.solve(&y);
            let xo = odd_unknown.solve(&y);
            route_difference = route_difference.max(xe.max_abs_diff(&even[pos])).max(xo.max_abs_diff(&odd[pos]));
            cramer_even.push(xe);
            cramer_odd.push(xo);
        }
        Ok(BakerVectors { window: w, even, odd, cramer_even, cramer_odd, route_difference })
    }
}

fn entry_seed(seed: u64, hr: i64, hc: i64) -> u64 {
    let key = ((hr as u64) << 32) ^ (hc as u64 & 0xffff_ffff);
    seed ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BigCell {
    pub in_big_cell: bool,
    /// `W A⁻¹` with `A = W_−`, present in the big cell.
    pub normalized: Option<TruncatedFrame>,
}

/// Even and odd Baker vectors in window order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BakerVectors {
    window: TruncationWindow,
    even: Vec<GrassmannScalar>,
    odd: Vec<GrassmannScalar>,
    cramer_even: Vec<GrassmannScalar>,
    cramer_odd: Vec<GrassmannScalar>,
    /// Largest coefficient difference between the two routes.
    pub route_difference: f64,
}

impl BakerVectors {
    pub fn even(&self) -> &[GrassmannScalar] {
        &self.even
    }

    pub fn odd(&self) -> &[GrassmannScalar] {
        &self.odd
    }

    pub fn cramer_even(&self) -> &[GrassmannScalar] {
        &self.cramer_even
    }

    pub fn cramer_odd(&self) -> &[GrassmannScalar] {
        &self.cramer_odd
    }

    /// Coefficient of `e_i` in the even vector, `i = h/2`.
    pub fn even_coefficient(&self, h: i64) -> GrassmannScalar {
        self.window.position(h).map_or_else(|| GrassmannScalar::zero(self.even[0].n_generators()), |p| self.even[p].clone())
    }

    pub fn odd_coefficient(&self, h: i64) -> GrassmannScalar {
        self.window.position(h).map_or_else(|| GrassmannScalar::zero(self.odd[0].n_generators()), |p| self.odd[p].clone())
    }

    pub fn even_function(&self) -> BakerFunction {
        BakerFunction::from_vector(&self.window, &self.even)
    }

    pub fn odd_function(&self) -> BakerFunction {
        BakerFunction::from_vector(&self.window, &self.odd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BakerTerm {
    pub power: i64,
    /// Coefficient of `z^power`.
    pub plain: GrassmannScalar,
    /// Coefficient of `z^power θ`, written to the left of `θ`.
    pub theta: GrassmannScalar,
}

/// `Σ_k zᵏ (a_k + b_k θ)` from a vector with `e_k = zᵏ`, `e_{k−½} = zᵏθ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BakerFunction {
    pub terms: Vec<BakerTerm>,
}

impl BakerFunction {
    fn from_vector(w: &TruncationWindow, v: &[GrassmannScalar]) -> Self {
        let n = v.first().map_or(0, GrassmannScalar::n_generators);
        let lo = -(w.m() as i64) + 1;
        let hi = w.m() as i64;
        let get = |h: i64| w.position(h).map_or_else(|| GrassmannScalar::zero(n), |p| v[p].clone());
        let terms = (lo..=hi).map(|k| BakerTerm { power: k, plain: get(2 * k), theta: get(2 * k - 1) }).collect();
        BakerFunction { terms }
    }

    pub fn term(&self, power: i64) -> Option<&BakerTerm> {
        self.terms.iter().find(|t| t.power == power)
    }

    /// Value at complex `z`, split as `(plain part, θ part)`.
    pub fn evaluate(&self, z: Complex64) -> (GrassmannScalar, GrassmannScalar) {
        let n = self.terms.first().map_or(0, |t| t.plain.n_generators());
        let mut plain = GrassmannScalar::zero(n);
        let mut theta = GrassmannScalar::zero(n);
        for t in &self.terms {
            let zk = z.powi(t.power as i32);
            plain += &t.plain.scale(zk);
            theta += &t.theta.scale(zk);
        }
        (plain, theta)
    }
}

/// Frame description accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrameSpec {
    Standard {
        n: usize,
    },
    Generic {
        n: usize,
        seed: u64,
        #[serde(default = "default_spread")]
        spread: i64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Delta {
        delta: GrassmannScalar,
    },
    /// Entries in window order, `4M` rows of `2M` scalars.
    Explicit {
        entries: Vec<Vec<GrassmannScalar>>,
    },
}

fn default_spread() -> i64 {
    4
}

fn default_scale() -> f64 {
    0.15
}

impl FrameSpec {
    pub fn build(&self, window: TruncationWindow) -> Result<TruncatedFrame> {
        match self {
            FrameSpec::Standard { n } => Ok(TruncatedFrame::standard(window, *n)),
            FrameSpec::Generic { n, seed, spread, scale } => TruncatedFrame::generic(window, *n, *seed, *spread, *scale),
            FrameSpec::Delta { delta } => TruncatedFrame::delta_example(window, delta),
            FrameSpec::Explicit { entries } => {
                let n = entries.iter().flatten().map(GrassmannScalar::n_generators).max().unwrap_or(0);
                let rows = entries.iter().map(|r| r.iter().map(|x| x.embed(n)).collect()).collect();
                TruncatedFrame::new(window, LambdaMatrix::from_rows(n, rows)?)
            }
        }
    }
}
