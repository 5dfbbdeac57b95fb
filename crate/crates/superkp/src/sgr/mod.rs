//! Finite-rank truncation of the super Grassmannian: frames over a window of
//! half-integer indices, multiplication operators in the basis
//! `e_i = zⁱ`, `e_{i−½} = zⁱθ`, Heisenberg flows, Baker vectors, tau
//! functions and the `gl_{∞|∞}` cocycle.
//!
//! Indices are stored in half units `h = 2i`. A window of size `M` holds
//! `−2M < h ≤ 2M`, ordered by increasing `h`; its first `2M` positions form
//! the negative part `h ≤ 0`.

mod cocycle;
mod frame;
mod tau;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannScalar, Parity};
use crate::matrix::LambdaMatrix;

pub use cocycle::{cocycle, cocycle_from_grading, heisenberg_supertrace, supertrace};
pub use frame::{BakerFunction, BakerVectors, BigCell, FrameSpec, TruncatedFrame};
pub use tau::{
    baker_tau_quotient_check, product_rule_residual, shifted_tau_even, shifted_tau_odd, tau, tau_star, QuotientReport,
    TauValue,
};

/// Half-integer index window `−M < i ≤ M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationWindow {
    m: usize,
}

impl TruncationWindow {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > 64 {
            return Err(Error::Domain(format!("window size {m} outside 1..=64")));
        }
        Ok(TruncationWindow { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of basis vectors in the window, `4M`.
    pub fn size(&self) -> usize {
        4 * self.m
    }

    /// Number of indices `i ≤ 0`, `2M`.
    pub fn negative_size(&self) -> usize {
        2 * self.m
    }

    /// Doubled index `2i` at a window position.
    pub fn half_index(&self, pos: usize) -> i64 {
        pos as i64 - 2 * self.m as i64 + 1
    }

    pub fn position(&self, h: i64) -> Option<usize> {
        let pos = h + 2 * self.m as i64 - 1;
        (0..self.size() as i64).contains(&pos).then_some(pos as usize)
    }

    /// Integer indices are even, half-integer indices odd.
    pub fn parity(&self, pos: usize) -> Parity {
        half_parity(self.half_index(pos))
    }

    /// Negative-part positions reordered with even indices first, each
    /// group in window order.
    pub fn even_first(&self) -> Vec<usize> {
        let neg = 0..self.negative_size();
        let even = neg.clone().filter(|&p| self.parity(p) == Parity::Even);
        let odd = neg.filter(|&p| self.parity(p) == Parity::Odd);
        even.chain(odd).collect()
    }
}

fn half_parity(h: i64) -> Parity {
    if h.rem_euclid(2) == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Key of a band: target line odd, source line odd, and the index drop
/// `h_source − h_target` in half units.
type BandKey = (bool, bool, i64);

/// Operator on `Λ[z, z⁻¹, θ]` spanned by `zᵏ`, `zᵏθ`, `zᵏ d/dθ` and
/// `zᵏ θ d/dθ`, stored band by band. The matrix entry from `e_s` to `e_t`
/// is the coefficient of the band `(t odd, s odd, h_s − h_t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    n: usize,
    bands: BTreeMap<BandKey, GrassmannScalar>,
}

impl Symbol {
    pub fn zero(n: usize) -> Self {
        Symbol { n, bands: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Symbol::z_power(n, 0, GrassmannScalar::one(n))
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    fn with_band(n: usize, key: BandKey, c: GrassmannScalar) -> Self {
        let mut s = Symbol::zero(n);
        s.push(key, &c);
        s
    }

    fn push(&mut self, key: BandKey, c: &GrassmannScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.bands.entry(key).or_insert_with(|| GrassmannScalar::zero(self.n));
        *slot += c;
        if slot.is_zero() {
            self.bands.remove(&key);
        }
    }

    /// `c zᵏ` acting on both lines.
    pub fn z_power(n: usize, k: i64, c: GrassmannScalar) -> Self {
        let mut s = Symbol::zero(n);
        s.push((false, false, -2 * k), &c);
        s.push((true, true, -2 * k), &c);
        s
    }

    /// `c z⁻ᵏ(1 − θ d/dθ)`, the integer line only.
    pub fn lambda(n: usize, k: i64, c: GrassmannScalar) -> Self {
        Symbol::with_band(n, (false, false, 2 * k), c)
    }

    /// `c z⁻ᵏ d/dθ`, from the half-integer line to the integer line.
    pub fn f(n: usize, k: i64, c: GrassmannScalar) -> Self {
        Symbol::with_band(n, (false, true, 2 * k - 1), c)
    }

    /// `c z⁻ᵏ θ d/dθ`, the half-integer line only.
    pub fn mu(n: usize, k: i64, c: GrassmannScalar) -> Self {
        Symbol::with_band(n, (true, true, 2 * k), c)
    }

    /// `c z⁻ᵏ θ`, from the integer line to the half-integer line.
    pub fn e(n: usize, k: i64, c: GrassmannScalar) -> Self {
        Symbol::with_band(n, (true, false, 2 * k + 1), c)
    }

    pub fn is_zero(&self) -> bool {
        self.bands.is_empty()
    }

    /// Largest `|h_s − h_t|` over the nonzero bands.
    pub fn band_width(&self) -> i64 {
        self.bands.keys().map(|k| k.2.abs()).max().unwrap_or(0)
    }

    /// Whether every band coefficient has the parity that makes the matrix even.
    pub fn is_even(&self) -> bool {
        self.bands.iter().all(|(&(t, s, _), c)| c.has_parity(if t == s { Parity::Even } else { Parity::Odd }))
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        let mut out = self.clone();
        for (k, c) in &other.bands {
            out.push(*k, c);
        }
        out
    }

    pub fn scale(&self, c: &GrassmannScalar) -> Symbol {
        let mut out = Symbol::zero(self.n);
        for (k, x) in &self.bands {
            out.push(*k, &(c * x));
        }
        out
    }

    /// Operator product `self ∘ other`; bands with `|h_s − h_t| > limit` are
    /// dropped.
    pub fn compose(&self, other: &Symbol, limit: i64) -> Symbol {
        let mut out = Symbol::zero(self.n);
        for (&(t, m, d1), a) in &self.bands {
            for (&(m2, s, d2), b) in &other.bands {
                if m != m2 || (d1 + d2).abs() > limit {
                    continue;
                }
                out.push((t, s, d1 + d2), &(a * b));
            }
        }
        out
    }

    /// `exp(self)` for a strictly index-lowering operator, summed until the
    /// powers leave a band of width `limit`.
    pub fn exp_lowering(&self, limit: i64) -> Result<Symbol> {
        if self.bands.keys().any(|k| k.2 <= 0) {
            return Err(Error::Domain("exponential needs a strictly index-lowering operator".into()));
        }
        let mut total = Symbol::identity(self.n);
        let mut term = Symbol::identity(self.n);
        let mut k = 1.0;
        loop {
            term = term.compose(self, limit).scale(&GrassmannScalar::real(self.n, 1.0 / k));
            if term.is_zero() {
                return Ok(total);
            }
            total = total.add(&term);
            k += 1.0;
        }
    }

    /// Matrix on the window in window order, with a flag raised when the
    /// band is wider than half the window.
    pub fn matrix(&self, w: &TruncationWindow) -> (LambdaMatrix, bool) {
        let size = w.size();
        let m = LambdaMatrix::from_fn(self.n, size, size, |t, s| {
            let key = (w.parity(t).is_odd(), w.parity(s).is_odd(), w.half_index(s) - w.half_index(t));
            self.bands.get(&key).cloned().unwrap_or_else(|| GrassmannScalar::zero(self.n))
        });
        (m, self.band_width() > w.negative_size() as i64)
    }
}

/// Flow index `i > 0` of the Jacobian Heisenberg flows: an integer `i`
/// multiplies `z^{−i}` with an even time, a half-integer `i − ½` multiplies
/// `z^{−i}θ` with an odd time. Stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowIndex(u32);

impl FlowIndex {
    pub fn from_half_units(h: u32) -> Result<Self> {
        if h == 0 {
            return Err(Error::Domain("flow indices are positive".into()));
        }
        Ok(FlowIndex(h))
    }

    pub fn half_units(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        half_parity(self.0 as i64)
    }

    fn generator(self, n: usize, c: GrassmannScalar) -> Symbol {
        match self.parity() {
            Parity::Even => Symbol::z_power(n, -(self.0 as i64) / 2, c),
            Parity::Odd => Symbol::e(n, (self.0 as i64 + 1) / 2, c),
        }
    }
}

impl fmt::Display for FlowIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for FlowIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("flow index {s:?} is not of the form \"k\" or \"k/2\""));
        let h = match s.trim().split_once('/') {
            None => s.trim().parse::<u32>().map_err(|_| bad())?.checked_mul(2).ok_or_else(bad)?,
            Some((num, "2")) => num.trim().parse::<u32>().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
        };
        FlowIndex::from_half_units(h)
    }
}

/// Times of the Jacobian Heisenberg flows, finitely many nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HeisenbergRepr", into = "HeisenbergRepr")]
pub struct HeisenbergElement {
    n: usize,
    times: BTreeMap<FlowIndex, GrassmannScalar>,
}

/// Largest ℓ¹ norm of the time bodies accepted by the flow exponential.
pub const MAX_FLOW_NORM: f64 = 1.0;

impl HeisenbergElement {
    pub fn zero(n: usize) -> Self {
        HeisenbergElement { n, times: BTreeMap::new() }
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    /// Sets the time of flow `index`; its parity must match the index.
    pub fn set(&mut self, index: FlowIndex, t: GrassmannScalar) -> Result<()> {
        if t.n_generators() != self.n {
            return Err(Error::Dimension(format!("flow time over {} generators, expected {}", t.n_generators(), self.n)));
        }
        if !t.has_parity(index.parity()) {
            return Err(Error::Parity(format!("time of flow {index} must be {:?}", index.parity())));
        }
        if t.is_zero() {
            self.times.remove(&index);
        } else {
            self.times.insert(index, t);
        }
        Ok(())
    }

    pub fn with(mut self, index: FlowIndex, t: GrassmannScalar) -> Result<Self> {
        self.set(index, t)?;
        Ok(self)
    }

    pub fn times(&self) -> impl Iterator<Item = (FlowIndex, &GrassmannScalar)> {
        self.times.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest flow index in half units, 0 when all times vanish.
    pub fn support(&self) -> u32 {
        self.times.keys().next_back().map_or(0, |k| k.0)
    }

    /// `Σ |body(t_i)|`.
    pub fn body_norm(&self) -> f64 {
        self.times.values().map(|t| t.body().norm()).sum()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, v) in &other.times {
            let sum = out.times.get(k).map_or_else(|| v.clone(), |x| x + v);
            out.set(*k, sum)?;
        }
        Ok(out)
    }

    pub fn embed(&self, n: usize) -> Self {
        HeisenbergElement { n, times: self.times.iter().map(|(k, v)| (*k, v.embed(n))).collect() }
    }

    /// `Σ t_i z^{−i} + t_{i−½} z^{−i}θ`.
    pub fn symbol(&self) -> Symbol {
        self.times.iter().fold(Symbol::zero(self.n), |acc, (k, t)| acc.add(&k.generator(self.n, t.clone())))
    }
}

#[derive(Serialize, Deserialize)]
struct HeisenbergTerm {
    index: String,
    value: GrassmannScalar,
}

#[derive(Serialize, Deserialize)]
struct HeisenbergRepr {
    n: usize,
    times: Vec<HeisenbergTerm>,
}

impl TryFrom<HeisenbergRepr> for HeisenbergElement {
    type Error = Error;

    fn try_from(r: HeisenbergRepr) -> Result<Self> {
        let mut out = HeisenbergElement::zero(r.n);
        for term in r.times {
            let index: FlowIndex = term.index.parse()?;
            if term.value.n_generators() > r.n {
                return Err(Error::Dimension(format!("flow {index} uses more than {} generators", r.n)));
            }
            let previous = out.times.get(&index).cloned().unwrap_or_else(|| GrassmannScalar::zero(r.n));
            out.set(index, &previous + &term.value.embed(r.n))?;
        }
        Ok(out)
    }
}

impl From<HeisenbergElement> for HeisenbergRepr {
    fn from(h: HeisenbergElement) -> Self {
        HeisenbergRepr {
            n: h.n,
            times: h.times.into_iter().map(|(k, v)| HeisenbergTerm { index: k.to_string(), value: v }).collect(),
        }
    }
}

/// Edge diagnostics attached to flowed frames.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationDiagnostics {
    pub window_m: usize,
    /// Largest flow index, in half units.
    pub flow_support: u32,
    pub band_width: i64,
    pub truncated: bool,
    pub warnings: Vec<String>,
}

/// Matrix of `γ(t)⁻¹ = exp(−Σ t_i z^{−i} − t_{i−½} z^{−i}θ)` on the window.
pub fn gamma_inverse(w: &TruncationWindow, t: &HeisenbergElement) -> Result<(LambdaMatrix, TruncationDiagnostics)> {
    let norm = t.body_norm();
    if norm > MAX_FLOW_NORM {
        return Err(Error::Domain(format!("flow times have body norm {norm} > {MAX_FLOW_NORM}")));
    }
    let limit = w.size() as i64;
    let minus = t.symbol().scale(&GrassmannScalar::real(t.n, -1.0));
    let g = if minus.is_zero() { Symbol::identity(t.n) } else { minus.exp_lowering(limit)? };
    let (m, _) = g.matrix(w);
    let mut warnings = Vec::new();
    let support = t.support();
    let steps = (support as usize + 1) / 2;
    if 2 * steps >= w.m() {
        warnings.push(format!("flow support {} reaches half the window M = {}", FlowIndex(support.max(1)), w.m()));
    }
    let diag = TruncationDiagnostics { window_m: w.m(), flow_support: support, band_width: g.band_width(), truncated: !warnings.is_empty(), warnings };
    Ok((m, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_indexing() {
        let w = TruncationWindow::new(3).unwrap();
        assert_eq!(w.size(), 12);
        assert_eq!(w.half_index(0), -5);
        assert_eq!(w.half_index(5), 0);
        assert_eq!(w.position(0), Some(5));
        assert_eq!(w.position(6), Some(11));
        assert_eq!(w.position(7), None);
        assert_eq!(w.parity(5), Parity::Even);
        assert_eq!(w.even_first(), vec![1, 3, 5, 0, 2, 4]);
    }

    #[test]
    fn identity_symbol_is_identity_matrix() {
        let w = TruncationWindow::new(3).unwrap();
        assert_eq!(Symbol::identity(1).matrix(&w).0, LambdaMatrix::identity(1, 12));
    }

    #[test]
    fn lowering_by_one_moves_both_lines() {
        let w = TruncationWindow::new(3).unwrap();
        let (m, flagged) = Symbol::z_power(0, -1, GrassmannScalar::one(0)).matrix(&w);
        assert!(!flagged);
        for s in 0..12 {
            for t in 0..12 {
                let expected = w.half_index(s) - w.half_index(t) == 2;
                assert_eq!(m.get(t, s).body().re == 1.0, expected, "({t},{s})");
            }
        }
    }

    #[test]
    fn lambda_plus_mu_is_a_power_of_z() {
        let w = TruncationWindow::new(4).unwrap();
        let one = GrassmannScalar::one(0);
        for k in 1..4 {
            let sum = Symbol::lambda(0, k, one.clone()).add(&Symbol::mu(0, k, one.clone()));
            assert_eq!(sum.matrix(&w).0, Symbol::z_power(0, -k, one.clone()).matrix(&w).0);
        }
    }

    #[test]
    fn composition_matches_matrix_product_inside_the_window() {
        let w = TruncationWindow::new(4).unwrap();
        let n = 2;
        let a = Symbol::z_power(n, -1, GrassmannScalar::real(n, 0.5)).add(&Symbol::e(n, 1, GrassmannScalar::generator(n, 0)));
        let b = Symbol::z_power(n, -2, GrassmannScalar::real(n, 0.3)).add(&Symbol::f(n, 1, GrassmannScalar::generator(n, 1)));
        let ab = a.compose(&b, 100).matrix(&w).0;
        let prod = &a.matrix(&w).0 * &b.matrix(&w).0;
        // Both operators lower indices, so no product term leaves and re-enters the window.
        assert!(ab.approx_eq(&prod, 1e-15));
    }

    #[test]
    fn flow_index_parsing() {
        assert_eq!("2".parse::<FlowIndex>().unwrap().half_units(), 4);
        assert_eq!("3/2".parse::<FlowIndex>().unwrap().half_units(), 3);
        assert!("0".parse::<FlowIndex>().is_err());
        assert!("1/3".parse::<FlowIndex>().is_err());
        assert_eq!(FlowIndex(3).to_string(), "3/2");
    }

    #[test]
    fn flow_times_respect_parity() {
        let n = 2;
        let t = HeisenbergElement::zero(n);
        assert!(t.clone().with(FlowIndex(2), GrassmannScalar::generator(n, 0)).is_err());
        assert!(t.with(FlowIndex(1), GrassmannScalar::generator(n, 0)).is_ok());
    }

    #[test]
    fn inverse_flow_undoes_the_flow() {
        let w = TruncationWindow::new(4).unwrap();
        let n = 2;
        let t = HeisenbergElement::zero(n)
            .with(FlowIndex(2), GrassmannScalar::real(n, 0.3))
            .unwrap()
            .with(FlowIndex(1), GrassmannScalar::generator(n, 1))
            .unwrap();
        let minus_t = HeisenbergElement::zero(n)
            .with(FlowIndex(2), GrassmannScalar::real(n, -0.3))
            .unwrap()
            .with(FlowIndex(1), -&GrassmannScalar::generator(n, 1))
            .unwrap();
        let (g, _) = gamma_inverse(&w, &t).unwrap();
        let (h, _) = gamma_inverse(&w, &minus_t).unwrap();
        assert!((&g * &h).approx_eq(&LambdaMatrix::identity(n, w.size()), 1e-14));
    }

    #[test]
    fn large_flows_are_rejected() {
        let w = TruncationWindow::new(4).unwrap();
        let t = HeisenbergElement::zero(0).with(FlowIndex(2), GrassmannScalar::real(0, 1.5)).unwrap();
        assert!(matches!(gamma_inverse(&w, &t), Err(Error::Domain(_))));
    }
}
