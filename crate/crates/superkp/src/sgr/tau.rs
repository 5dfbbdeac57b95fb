use num_complex::Complex64;
use serde::Serialize;

use super::{HeisenbergElement, Symbol, TruncatedFrame, TruncationDiagnostics, TruncationWindow};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannScalar;
use crate::linalg;
use crate::matrix::LambdaMatrix;
use crate::supermatrix::{berezinian, berezinian_star, SuperMatrix};

/// Value in `Λ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauValue {
    Finite(GrassmannScalar),
    Pole,
}

impl TauValue {
    pub fn finite(&self) -> Option<&GrassmannScalar> {
        match self {
            TauValue::Finite(x) => Some(x),
            TauValue::Pole => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Ber,
    BerStar,
}

fn evaluate(kind: Kind, a: &SuperMatrix) -> Result<Option<GrassmannScalar>> {
    if linalg::is_singular(&a.matrix().body()) {
        return Ok(None);
    }
    match kind {
        Kind::Ber => berezinian(a).map(Some),
        Kind::BerStar => berezinian_star(a).map(Some),
    }
}

fn ratio(kind: Kind, top: &TruncatedFrame, bottom: &TruncatedFrame) -> Result<TauValue> {
    let denominator = evaluate(kind, &bottom.negative_part())?
        .ok_or_else(|| Error::NotInvertible("frame is not in the big cell".into()))?;
    Ok(match evaluate(kind, &top.negative_part())? {
        Some(num) => TauValue::Finite(&num * &denominator.invert()?),
        None => TauValue::Pole,
    })
}

fn flowed_pair(frame: &TruncatedFrame, t: &HeisenbergElement, n: usize) -> Result<(TruncatedFrame, TruncatedFrame, TruncationDiagnostics)> {
    let base = frame.embed(n);
    let (moved, diag) = base.flowed(&t.embed(n))?;
    Ok((moved, base, diag))
}

/// `τ_W(t) = ber([γ(t)⁻¹ W]_−) / ber(W_−)`.
pub fn tau(frame: &TruncatedFrame, t: &HeisenbergElement) -> Result<(TauValue, TruncationDiagnostics)> {
    let n = frame.n_generators().max(t.n_generators());
    let (moved, base, diag) = flowed_pair(frame, t, n)?;
    Ok((ratio(Kind::Ber, &moved, &base)?, diag))
}

/// `τ*_W(t) = ber*([γ(t)⁻¹ W]_−) / ber*(W_−)`.
pub fn tau_star(frame: &TruncatedFrame, t: &HeisenbergElement) -> Result<(TauValue, TruncationDiagnostics)> {
    let n = frame.n_generators().max(t.n_generators());
    let (moved, base, diag) = flowed_pair(frame, t, n)?;
    Ok((ratio(Kind::BerStar, &moved, &base)?, diag))
}

/// `1 + Σ_k uᵏ [λ(k) + f(k) φ]` with `φ` the last of `n + 1` generators.
fn q_even(w: &TruncationWindow, n: usize, u: Complex64) -> LambdaMatrix {
    let phi = GrassmannScalar::generator(n + 1, n);
    let mut s = Symbol::identity(n + 1);
    for k in 1..=w.negative_size() as i64 {
        let uk = GrassmannScalar::scalar(n + 1, u.powi(k as i32));
        s = s.add(&Symbol::lambda(n + 1, k, uk.clone())).add(&Symbol::f(n + 1, k, &uk * &phi));
    }
    s.matrix(w).0
}

/// `1 + Σ_k uᵏ [μ(k) + e(k) ψ]` with `ψ`, standing for `∂/∂φ`, the last of
/// `n + 1` generators.
fn q_odd(w: &TruncationWindow, n: usize, u: Complex64) -> LambdaMatrix {
    let psi = GrassmannScalar::generator(n + 1, n);
    let mut s = Symbol::identity(n + 1);
    for k in 1..=w.negative_size() as i64 {
        let uk = GrassmannScalar::scalar(n + 1, u.powi(k as i32));
        s = s.add(&Symbol::mu(n + 1, k, uk.clone())).add(&Symbol::e(n + 1, k, &uk * &psi));
    }
    s.matrix(w).0
}

/// `τ_W(t; Q₀) = ber([Q₀ γ(t)⁻¹ W]_−) / ber(W_−)` over `Λ` with one extra odd
/// generator `φ` appended.
pub fn shifted_tau_even(frame: &TruncatedFrame, t: &HeisenbergElement, u: Complex64) -> Result<TauValue> {
    let n = frame.n_generators().max(t.n_generators());
    let (moved, base, _) = flowed_pair(frame, t, n + 1)?;
    let shifted = moved.transformed(&q_even(&frame.window(), n, u))?;
    ratio(Kind::Ber, &shifted, &base)
}

/// `ber*([Q₁ γ(t)⁻¹ W]_−) / ber*(W_−)` over `Λ` with one extra odd generator
/// `ψ` appended; the part linear in `ψ` is the `∂/∂φ` part.
pub fn shifted_tau_odd(frame: &TruncatedFrame, t: &HeisenbergElement, u: Complex64) -> Result<TauValue> {
    let n = frame.n_generators().max(t.n_generators());
    let (moved, base, _) = flowed_pair(frame, t, n + 1)?;
    let shifted = moved.transformed(&q_odd(&frame.window(), n, u))?;
    ratio(Kind::BerStar, &shifted, &base)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    /// `τ(t; Q₀)/τ(t)` against `1 + Σ uᵏ (c_k + φ c_{k−½})`.
    pub even_residual: f64,
    /// `τ*(t; Q₁)/τ*(t)` against `1 + Σ uᵏ (d_{k−½} + ψ d_k)`.
    pub odd_residual: f64,
    pub residual: f64,
    pub even_quotient: GrassmannScalar,
    pub odd_quotient: GrassmannScalar,
    pub diagnostics: TruncationDiagnostics,
}

/// Compares the Baker vectors of `γ(t)⁻¹ W` with quotients of shifted and
/// unshifted tau functions at the spectral value `u`.
pub fn baker_tau_quotient_check(frame: &TruncatedFrame, t: &HeisenbergElement, u: Complex64) -> Result<QuotientReport> {
    let n = frame.n_generators().max(t.n_generators());
    let (moved, _, diagnostics) = flowed_pair(frame, t, n)?;
    let baker = moved.baker_vectors()?;
    let pole = || Error::NotInvertible("flow leaves the big cell".into());

    let tau_t = tau(frame, t)?.0.finite().ok_or_else(pole)?.embed(n + 1);
    let tau_star_t = tau_star(frame, t)?.0.finite().ok_or_else(pole)?.embed(n + 1);
    let even_quotient = &shifted_tau_even(frame, t, u)?.finite().ok_or_else(pole)?.clone() * &tau_t.invert()?;
    let odd_quotient = &shifted_tau_odd(frame, t, u)?.finite().ok_or_else(pole)?.clone() * &tau_star_t.invert()?;

    let extra = GrassmannScalar::generator(n + 1, n);
    let mut even_expected = GrassmannScalar::one(n + 1);
    let mut odd_expected = GrassmannScalar::one(n + 1);
    for k in 1..=frame.window().m() as i64 {
        let uk = u.powi(k as i32);
        let c_int = baker.even_coefficient(2 * k).embed(n + 1);
        let c_half = baker.even_coefficient(2 * k - 1).embed(n + 1);
        even_expected += &(&c_int + &(&extra * &c_half)).scale(uk);
        let d_int = baker.odd_coefficient(2 * k).embed(n + 1);
        let d_half = baker.odd_coefficient(2 * k - 1).embed(n + 1);
        odd_expected += &(&d_half + &(&extra * &d_int)).scale(uk);
    }
    let even_residual = even_quotient.max_abs_diff(&even_expected);
    let odd_residual = odd_quotient.max_abs_diff(&odd_expected);
    Ok(QuotientReport {
        even_residual,
        odd_residual,
        residual: even_residual.max(odd_residual),
        even_quotient,
        odd_quotient,
        diagnostics,
    })
}

/// `max |τ(f + k) − τ(f) τ(k)|` over coefficients.
pub fn product_rule_residual(frame: &TruncatedFrame, f: &HeisenbergElement, k: &HeisenbergElement) -> Result<f64> {
    let n = frame.n_generators().max(f.n_generators()).max(k.n_generators());
    let (f, k) = (f.embed(n), k.embed(n));
    let pole = || Error::NotInvertible("flow leaves the big cell".into());
    let value = |t: &HeisenbergElement| -> Result<GrassmannScalar> { tau(frame, t)?.0.finite().cloned().ok_or_else(pole) };
    let joint = value(&f.checked_add(&k)?)?;
    Ok(joint.max_abs_diff(&(&value(&f)? * &value(&k)?)))
}

#[cfg(test)]
mod tests {
    use super::super::FlowIndex;
    use super::*;

    #[test]
    fn standard_frame_has_trivial_tau() {
        let w = TruncationWindow::new(4).unwrap();
        let f = TruncatedFrame::standard(w, 2);
        let t = HeisenbergElement::zero(2)
            .with(FlowIndex::from_half_units(2).unwrap(), GrassmannScalar::real(2, 0.4))
            .unwrap()
            .with(FlowIndex::from_half_units(1).unwrap(), GrassmannScalar::generator(2, 0))
            .unwrap();
        let value = tau(&f, &t).unwrap().0;
        assert!(value.finite().unwrap().approx_eq(&GrassmannScalar::one(2), 1e-14));
    }

    #[test]
    fn standard_frame_quotients_are_exact() {
        let w = TruncationWindow::new(3).unwrap();
        let f = TruncatedFrame::standard(w, 1);
        let report = baker_tau_quotient_check(&f, &HeisenbergElement::zero(1), Complex64::new(0.2, 0.0)).unwrap();
        assert!(report.residual < 1e-15);
        assert!(report.even_quotient.approx_eq(&GrassmannScalar::one(2), 1e-15));
    }

    #[test]
    fn pole_is_reported_when_the_flow_leaves_the_big_cell() {
        let w = TruncationWindow::new(3).unwrap();
        // The frame spanned by e_0 + e_1 and the rest of the negative part has
        // τ(t₁) = 1 − t₁, which vanishes at t₁ = 1.
        let mut m = TruncatedFrame::standard(w, 0).matrix().clone();
        m.set(w.position(2).unwrap(), w.position(0).unwrap(), GrassmannScalar::real(0, 1.0));
        let f = TruncatedFrame::new(w, m).unwrap();
        let at = |x: f64| HeisenbergElement::zero(0).with(FlowIndex::from_half_units(2).unwrap(), GrassmannScalar::real(0, x)).unwrap();
        assert!((tau(&f, &at(0.25)).unwrap().0.finite().unwrap().body() - 0.75).norm() < 1e-14);
        assert_eq!(tau(&f, &at(1.0)).unwrap().0, TauValue::Pole);
    }
}
