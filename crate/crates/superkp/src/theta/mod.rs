//! Riemann theta functions whose argument and period matrix carry
//! nilpotent parts, their z-derivatives, and super theta functions.
//!
//! `Θ[a,b](z; Z) = Σ_{n ∈ ℤ^g} exp(πi (n+a)ᵗ Z (n+a) + 2πi (n+a)ᵗ (z+b))`,
//! truncated to `|nⱼ| ≤ N`. Each term is computed exactly in `Λ` as
//! `exp(body) · exp(soul)`, the second factor being a terminating series.

mod super_theta;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use super_theta::{build_super_theta, check_multipliers, MultiplierReport, ShiftKind, ShiftResidual, SuperThetaFunction};

use crate::error::{Error, Result};
use crate::grassmann::{reorder_sign, GrassmannScalar};
use crate::linalg::CMatrix;
use crate::matrix::LambdaMatrix;

/// Highest total derivative order accepted by [`theta_derivative`].
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Theta characteristic: the plain function or the odd one with `a = b = (½, …, ½)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characteristic {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "11")]
    OneOne,
}

impl Characteristic {
    fn shift(self) -> f64 {
        match self {
            Characteristic::Zero => 0.0,
            Characteristic::OneOne => 0.5,
        }
    }
}

/// Period matrix (body and nilpotent part), truncation radius and characteristic.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaContext {
    genus: usize,
    z_red: CMatrix,
    z_soul: LambdaMatrix,
    truncation: usize,
    characteristic: Characteristic,
}

impl ThetaContext {
    /// Context with the default truncation radius. `z_soul` must have zero
    /// bodies and even entries; it fixes the number of generators.
    pub fn new(z_red: CMatrix, z_soul: LambdaMatrix, characteristic: Characteristic) -> Result<Self> {
        let g = z_red.nrows();
        if g == 0 || z_red.ncols() != g {
            return Err(Error::Dimension(format!("period matrix must be g×g with g ≥ 1, got {}x{}", g, z_red.ncols())));
        }
        if z_soul.nrows() != g || z_soul.ncols() != g {
            return Err(Error::Dimension("nilpotent part must match the period matrix".into()));
        }
        for x in z_soul.entries() {
            if x.body() != Complex64::new(0.0, 0.0) {
                return Err(Error::Invalid("nilpotent part of the period matrix has a nonzero body".into()));
            }
            if !x.is_even() {
                return Err(Error::Parity("period matrix entries must be even".into()));
            }
        }
        let lambda_min = min_imaginary_eigenvalue(&z_red);
        if !(lambda_min > 0.0) {
            return Err(Error::Domain(format!("imaginary part of the period matrix is not positive definite (λ_min = {lambda_min})")));
        }
        let truncation = default_truncation(lambda_min);
        Ok(ThetaContext { genus: g, z_red, z_soul, truncation, characteristic })
    }

    /// Context for a period matrix given entirely over `Λ`.
    pub fn from_period_matrix(z: &LambdaMatrix, characteristic: Characteristic) -> Result<Self> {
        Self::new(z.body(), z.soul(), characteristic)
    }

    /// Context over `Λ` with `n` generators and no nilpotent part.
    pub fn classical(z_red: CMatrix, n: usize, characteristic: Characteristic) -> Result<Self> {
        let g = z_red.nrows();
        Self::new(z_red, LambdaMatrix::zeros(n, g, g), characteristic)
    }

    pub fn with_truncation(mut self, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::Invalid("truncation radius must be at least 1".into()));
        }
        self.truncation = radius;
        Ok(self)
    }

    pub fn with_characteristic(mut self, characteristic: Characteristic) -> Self {
        self.characteristic = characteristic;
        self
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n_generators(&self) -> usize {
        self.z_soul.n_generators()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    pub fn reduced_period_matrix(&self) -> &CMatrix {
        &self.z_red
    }

    /// Full period matrix `Z_red + Z_soul` over `Λ`.
    pub fn period_matrix(&self) -> LambdaMatrix {
        let n = self.n_generators();
        &LambdaMatrix::from_complex(n, &self.z_red) + &self.z_soul
    }
}

/// Smallest eigenvalue of the symmetric part of `Im Z`.
fn min_imaginary_eigenvalue(z: &CMatrix) -> f64 {
    let im = DMatrix::from_fn(z.nrows(), z.ncols(), |i, j| 0.5 * (z[(i, j)].im + z[(j, i)].im));
    im.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `max(8, ⌈5/√λ_min⌉)`.
fn default_truncation(lambda_min: f64) -> usize {
    let r = (5.0 / lambda_min.sqrt()).ceil();
    if r.is_finite() {
        (r as usize).max(8)
    } else {
        8
    }
}

/// Theta function value.
pub fn theta(ctx: &ThetaContext, z: &[GrassmannScalar]) -> Result<GrassmannScalar> {
    let g = ctx.genus;
    Ok(theta_derivatives(ctx, z, &[vec![0; g]])?.remove(0))
}

/// `∂^order Θ`, differentiating the lattice sum term by term.
pub fn theta_derivative(ctx: &ThetaContext, z: &[GrassmannScalar], order: &[u32]) -> Result<GrassmannScalar> {
    Ok(theta_derivatives(ctx, z, &[order.to_vec()])?.remove(0))
}

/// Several derivatives at the same point, sharing one pass over the lattice.
pub fn theta_derivatives(ctx: &ThetaContext, z: &[GrassmannScalar], orders: &[Vec<u32>]) -> Result<Vec<GrassmannScalar>> {
    let g = ctx.genus;
    let n = ctx.n_generators();
    if z.len() != g {
        return Err(Error::Dimension(format!("argument has {} components, genus is {g}", z.len())));
    }
    for (j, zj) in z.iter().enumerate() {
        if zj.n_generators() != n {
            return Err(Error::Dimension(format!("argument component {j} has {} generators, expected {n}", zj.n_generators())));
        }
        if !zj.is_even() {
            return Err(Error::Parity(format!("argument component {j} is not even")));
        }
    }
    for d in orders {
        if d.len() != g {
            return Err(Error::Dimension(format!("derivative multi-index of length {} for genus {g}", d.len())));
        }
        if d.iter().sum::<u32>() > MAX_DERIVATIVE_ORDER {
            return Err(Error::Invalid(format!("derivative order above {MAX_DERIVATIVE_ORDER}")));
        }
    }

    let shift = ctx.characteristic.shift();
    let dim = 1usize << n;
    let z_body: Vec<Complex64> = z.iter().map(|x| x.body() + shift).collect();
    let pair_souls: Vec<Vec<(u32, Complex64)>> = ctx.z_soul.entries().map(|x| x.terms().to_vec()).collect();
    let arg_souls: Vec<Vec<(u32, Complex64)>> = z.iter().map(|x| x.soul().terms().to_vec()).collect();
    let has_soul = pair_souls.iter().chain(&arg_souls).any(|t| !t.is_empty());

    let radius = ctx.truncation as i64;
    let mut acc = vec![vec![Complex64::new(0.0, 0.0); dim]; orders.len()];
    let mut exponent_soul = vec![Complex64::new(0.0, 0.0); dim];
    let mut lattice = vec![-radius; g];
    let mut m = vec![0.0; g];
    loop {
        for (mj, &nj) in m.iter_mut().zip(&lattice) {
            *mj = nj as f64 + shift;
        }
        let mut body_exp = Complex64::new(0.0, 0.0);
        for j in 0..g {
            for k in 0..g {
                body_exp += ctx.z_red[(j, k)] * (m[j] * m[k]);
            }
            body_exp += z_body[j] * (2.0 * m[j]);
        }
        let prefactor = (I * PI * body_exp).exp();
        if prefactor.norm() > 0.0 {
            let weights: Vec<Complex64> = orders
                .iter()
                .map(|d| d.iter().zip(&m).fold(prefactor, |w, (&dk, &mk)| w * (I * 2.0 * PI * mk).powu(dk)))
                .collect();
            if has_soul {
                exponent_soul.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                for j in 0..g {
                    for k in 0..g {
                        let w = I * PI * (m[j] * m[k]);
                        for &(mask, c) in &pair_souls[j * g + k] {
                            exponent_soul[mask as usize] += w * c;
                        }
                    }
                    let w = I * 2.0 * PI * m[j];
                    for &(mask, c) in &arg_souls[j] {
                        exponent_soul[mask as usize] += w * c;
                    }
                }
                let e = nilpotent_exp(&exponent_soul);
                for (a, w) in acc.iter_mut().zip(&weights) {
                    for &(mask, c) in &e {
                        a[mask as usize] += w * c;
                    }
                }
            } else {
                for (a, w) in acc.iter_mut().zip(&weights) {
                    a[0] += w;
                }
            }
        }
        if !advance(&mut lattice, radius) {
            break;
        }
    }
    Ok(acc.iter().map(|a| GrassmannScalar::from_dense(n, a)).collect())
}

/// Odometer step over `[−radius, radius]^g`; false after the last point.
fn advance(lattice: &mut [i64], radius: i64) -> bool {
    for x in lattice.iter_mut() {
        if *x < radius {
            *x += 1;
            return true;
        }
        *x = -radius;
    }
    false
}

/// `exp(s)` for a dense nilpotent element `s` with zero body, returned sparsely.
fn nilpotent_exp(s: &[Complex64]) -> Vec<(u32, Complex64)> {
    let support: Vec<(u32, Complex64)> =
        s.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(m, c)| (m as u32, *c)).collect();
    let mut total = vec![Complex64::new(0.0, 0.0); s.len()];
    total[0] = Complex64::new(1.0, 0.0);
    let mut power = vec![(0u32, Complex64::new(1.0, 0.0))];
    let mut k = 1.0;
    let mut scratch = vec![Complex64::new(0.0, 0.0); s.len()];
    while !power.is_empty() {
        for &(a, ca) in &power {
            for &(b, cb) in &support {
                if a & b == 0 {
                    scratch[(a | b) as usize] += ca * cb * reorder_sign(a, b);
                }
            }
        }
        power.clear();
        for (m, c) in scratch.iter_mut().enumerate() {
            if c.norm() > 0.0 {
                let v = *c / k;
                power.push((m as u32, v));
                total[m] += v;
                *c = Complex64::new(0.0, 0.0);
            }
        }
        k += 1.0;
    }
    total.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(m, c)| (m as u32, *c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus_one(tau: Complex64, ch: Characteristic) -> ThetaContext {
        ThetaContext::classical(CMatrix::from_element(1, 1, tau), 2, ch).unwrap()
    }

    fn at(x: Complex64) -> Vec<GrassmannScalar> {
        vec![GrassmannScalar::scalar(2, x)]
    }

    #[test]
    fn odd_theta_vanishes_at_origin_with_nonzero_slope() {
        let ctx = genus_one(c(0.0, 1.0), Characteristic::OneOne);
        assert!(theta(&ctx, &at(c(0.0, 0.0))).unwrap().max_abs() < 1e-15);
        assert!(theta_derivative(&ctx, &at(c(0.0, 0.0)), &[1]).unwrap().body().norm() > 0.1);
    }

    #[test]
    fn integer_shift_invariance() {
        let ctx = genus_one(c(0.3, 1.1), Characteristic::Zero);
        let x = c(0.21, -0.13);
        let a = theta(&ctx, &at(x)).unwrap();
        let b = theta(&ctx, &at(x + 1.0)).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn known_value_of_jacobi_theta() {
        // θ₃(0 | i) = π^{1/4} / Γ(3/4).
        let ctx = genus_one(c(0.0, 1.0), Characteristic::Zero);
        let expected = PI.powf(0.25) / 1.225_416_702_465_177_6;
        assert!((theta(&ctx, &at(c(0.0, 0.0))).unwrap().body() - expected).norm() < 1e-14);
    }

    #[test]
    fn non_positive_imaginary_part_is_rejected() {
        let z = CMatrix::from_element(1, 1, c(0.0, -1.0));
        assert!(matches!(ThetaContext::classical(z, 0, Characteristic::Zero), Err(Error::Domain(_))));
    }

    #[test]
    fn default_truncation_formula() {
        assert_eq!(default_truncation(1.0), 8);
        assert_eq!(default_truncation(0.1), 16);
    }

    #[test]
    fn nilpotent_exp_matches_scalar_exp() {
        let n = 4;
        let s = GrassmannScalar::from_terms(n, [(0b0011, c(0.4, 0.1)), (0b1100, c(-0.2, 0.3)), (0b0110, c(1.0, 0.0))]);
        let dense = nilpotent_exp(&s.to_dense());
        assert!(GrassmannScalar::from_terms(n, dense).approx_eq(&s.exp(), 1e-15));
    }
}
