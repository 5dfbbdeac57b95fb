//! Genus-one super tau function from the odd theta function `Θ₁₁(z; τ)`.
//!
//! The Baker matrix of a deformed line bundle on a super elliptic curve with
//! odd modulus `δ`, Jacobian point `(a, α)` and shift `ζ` is assembled from
//! logarithmic derivatives of `Θ₁₁`; its Berezinian is compared with the
//! quotient `τ(a − ζ)/τ(a)` of the closed form `τ(a) = 1 − (αδ/2πi)[log Θ(a)]″`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::GrassmannScalar;
use crate::supermatrix::{berezinian, SuperMatrix};
use crate::theta::{theta_derivatives, Characteristic, ThetaContext};

/// `|Θ| / max(1, |Θ′|)` below this counts as a zero of the theta function.
pub const THETA_ZERO_TOL: f64 = 1e-10;

const TWO_PI_I: Complex64 = Complex64 { re: 0.0, im: 2.0 * PI };

/// Moduli `(τ, δ)` of the curve, the Jacobian point `(a, α)` and the shift `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperEllipticData {
    tau_modulus: Complex64,
    delta: GrassmannScalar,
    a: GrassmannScalar,
    alpha: GrassmannScalar,
    zeta: GrassmannScalar,
    ctx: ThetaContext,
}

impl SuperEllipticData {
    pub fn new(
        tau_modulus: Complex64,
        delta: GrassmannScalar,
        a: GrassmannScalar,
        alpha: GrassmannScalar,
        zeta: GrassmannScalar,
    ) -> Result<Self> {
        let n = delta.n_generators();
        if [&a, &alpha, &zeta].iter().any(|x| x.n_generators() != n) {
            return Err(Error::Dimension("all parameters must share one Grassmann algebra".into()));
        }
        if !delta.is_odd() || !alpha.is_odd() {
            return Err(Error::Parity("δ and α must be odd".into()));
        }
        if !a.is_even() || !zeta.is_even() {
            return Err(Error::Parity("a and ζ must be even".into()));
        }
        if !(tau_modulus.im > 0.0) {
            return Err(Error::Domain(format!("modulus must lie in the upper half plane, got {tau_modulus}")));
        }
        let ctx = ThetaContext::classical(DMatrix::from_element(1, 1, tau_modulus), n, Characteristic::OneOne)?;
        let data = SuperEllipticData { tau_modulus, delta, a, alpha, zeta, ctx };
        data.log_derivatives(&data.a)?;
        data.log_derivatives(&(&data.zeta - &data.a))?;
        Ok(data)
    }

    /// Two generators with `α = s β₁` and `δ = β₂`.
    pub fn standard(tau_modulus: Complex64, a: Complex64, zeta: Complex64, alpha_delta_scale: Complex64) -> Result<Self> {
        let n = 2;
        Self::new(
            tau_modulus,
            GrassmannScalar::generator(n, 1),
            GrassmannScalar::scalar(n, a),
            GrassmannScalar::generator(n, 0).scale(alpha_delta_scale),
            GrassmannScalar::scalar(n, zeta),
        )
    }

    pub fn tau_modulus(&self) -> Complex64 {
        self.tau_modulus
    }

    pub fn delta(&self) -> &GrassmannScalar {
        &self.delta
    }

    pub fn a(&self) -> &GrassmannScalar {
        &self.a
    }

    pub fn alpha(&self) -> &GrassmannScalar {
        &self.alpha
    }

    pub fn zeta(&self) -> &GrassmannScalar {
        &self.zeta
    }

    pub fn n_generators(&self) -> usize {
        self.delta.n_generators()
    }

    /// Same data with the even coordinate replaced.
    pub fn with_a(&self, a: GrassmannScalar) -> Result<Self> {
        Self::new(self.tau_modulus, self.delta.clone(), a, self.alpha.clone(), self.zeta.clone())
    }

    /// Same data with the odd parameters replaced.
    pub fn with_odd(&self, alpha: GrassmannScalar, delta: GrassmannScalar) -> Result<Self> {
        Self::new(self.tau_modulus, delta, self.a.clone(), alpha, self.zeta.clone())
    }

    /// `αδ / 2πi`.
    fn coupling(&self) -> GrassmannScalar {
        (&self.alpha * &self.delta).scale(TWO_PI_I.inv())
    }

    /// `([log Θ]′, [log Θ]″)` at `z`.
    fn log_derivatives(&self, z: &GrassmannScalar) -> Result<(GrassmannScalar, GrassmannScalar)> {
        let v = theta_derivatives(&self.ctx, std::slice::from_ref(z), &[vec![0], vec![1], vec![2]])?;
        let (t0, t1, t2) = (&v[0], &v[1], &v[2]);
        if t0.body().norm() < THETA_ZERO_TOL * t1.body().norm().max(1.0) {
            return Err(Error::Domain(format!("Θ₁₁ vanishes at {}", z.body())));
        }
        let inv = t0.invert()?;
        let l1 = t1 * &inv;
        let l2 = &(t2 * &inv) - &(&l1 * &l1);
        Ok((l1, l2))
    }
}

/// `[[B⁰⁰, B⁰¹], [B¹⁰, B¹¹]]` as a `(1|1)` supermatrix. The `δ`-dependent
/// part of `B⁰¹` is not known in closed form and is left out.
pub fn baker_matrix(d: &SuperEllipticData) -> Result<SuperMatrix> {
    let n = d.n_generators();
    let one = GrassmannScalar::one(n);
    let c = d.coupling();
    let (l1_a, l2_a) = d.log_derivatives(&d.a)?;
    let (l1_s, l2_s) = d.log_derivatives(&(&d.zeta - &d.a))?;
    let b00 = &one + &(&c * &(&(&l1_a * &l1_s) + &(&l1_a * &l1_a)));
    let b01 = &d.alpha * &l1_a;
    let b10 = &d.delta.scale(TWO_PI_I.inv()) * &(&l1_s + &l1_a);
    let b11 = &one + &(&c * &(&l2_a - &l2_s));
    SuperMatrix::from_rows((1, 1), (1, 1), n, vec![vec![b00, b01], vec![b10, b11]])
}

/// `(1 − (αδ/2πi)[log Θ(a − ζ)]″) / (1 − (αδ/2πi)[log Θ(a)]″)`.
pub fn tau_ratio(d: &SuperEllipticData) -> Result<GrassmannScalar> {
    let one = GrassmannScalar::one(d.n_generators());
    let c = d.coupling();
    let (_, l2_shift) = d.log_derivatives(&(&d.a - &d.zeta))?;
    let (_, l2_a) = d.log_derivatives(&d.a)?;
    let num = &one - &(&c * &l2_shift);
    let den = &one - &(&c * &l2_a);
    Ok(&num * &den.invert()?)
}

/// `τ(a) = 1 − (αδ/2πi)[log Θ(a)]″`.
pub fn tau_closed_form(d: &SuperEllipticData) -> Result<GrassmannScalar> {
    let (_, l2) = d.log_derivatives(&d.a)?;
    Ok(&GrassmannScalar::one(d.n_generators()) - &(&d.coupling() * &l2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticReport {
    pub tau_ratio: GrassmannScalar,
    pub tau_closed_form: GrassmannScalar,
    /// `max |ber(B)⁻¹ − ratio|` over coefficients.
    pub ber_check_residual: f64,
    /// Body of `ber(B)` with `αδ` switched off; should be 1.
    pub convention_factor: Complex64,
    /// `max |τ(a − ζ)/τ(a) − ratio|` over coefficients.
    pub closed_form_residual: f64,
}

/// Runs both comparisons for one set of data.
pub fn check(d: &SuperEllipticData) -> Result<EllipticReport> {
    let ratio = tau_ratio(d)?;
    let ber_inv = berezinian(&baker_matrix(d)?)?.invert()?;
    let n = d.n_generators();
    let plain = d.with_odd(GrassmannScalar::zero(n), d.delta.clone())?;
    let convention_factor = berezinian(&baker_matrix(&plain)?)?.body();
    let closed = tau_closed_form(d)?;
    let shifted = tau_closed_form(&d.with_a(&d.a - &d.zeta)?)?;
    let quotient = &shifted * &closed.invert()?;
    Ok(EllipticReport {
        ber_check_residual: ber_inv.max_abs_diff(&ratio),
        closed_form_residual: quotient.max_abs_diff(&ratio),
        tau_ratio: ratio,
        tau_closed_form: closed,
        convention_factor,
    })
}
