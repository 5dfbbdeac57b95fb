use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{theta_derivatives, Characteristic, ThetaContext};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannScalar;
use crate::matrix::LambdaMatrix;

/// Formal combination `Σ_J η_J Σ_d c_{J,d} ∂^d Θ(z; Z_e)` over subsets `J`
/// of the odd coordinates (bitmask) and derivative multi-indices `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperThetaFunction {
    ctx: ThetaContext,
    z_o: LambdaMatrix,
    alphas: Vec<usize>,
    terms: BTreeMap<u32, BTreeMap<Vec<u32>, GrassmannScalar>>,
}

impl SuperThetaFunction {
    pub fn context(&self) -> &ThetaContext {
        &self.ctx
    }

    pub fn odd_periods(&self) -> &LambdaMatrix {
        &self.z_o
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    /// Number of odd coordinates `η`.
    pub fn odd_dimension(&self) -> usize {
        self.z_o.ncols()
    }

    pub fn terms(&self) -> &BTreeMap<u32, BTreeMap<Vec<u32>, GrassmannScalar>> {
        &self.terms
    }

    /// Value at even `z` and odd `η`, both with entries in `Λ`.
    pub fn evaluate(&self, z: &[GrassmannScalar], eta: &[GrassmannScalar]) -> Result<GrassmannScalar> {
        let n = self.ctx.n_generators();
        if eta.len() != self.odd_dimension() {
            return Err(Error::Dimension(format!("{} odd coordinates given, expected {}", eta.len(), self.odd_dimension())));
        }
        if let Some(e) = eta.iter().find(|e| e.n_generators() != n) {
            return Err(Error::Dimension(format!("odd coordinate over {} generators, expected {n}", e.n_generators())));
        }
        let orders: Vec<Vec<u32>> = self.terms.values().flat_map(|m| m.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let values = theta_derivatives(&self.ctx, z, &orders)?;
        let lookup: BTreeMap<&Vec<u32>, &GrassmannScalar> = orders.iter().zip(&values).collect();
        let mut total = GrassmannScalar::zero(n);
        for (&mask, combo) in &self.terms {
            let mut eta_j = GrassmannScalar::one(n);
            for (a, e) in eta.iter().enumerate() {
                if mask & (1 << a) != 0 {
                    eta_j = &eta_j * e;
                }
            }
            if eta_j.is_zero() {
                continue;
            }
            for (d, c) in combo {
                total += &(&eta_j * c) * lookup[d];
            }
        }
        Ok(total)
    }
}

/// Applies `H_α = η_α + (1/2πi) Σ_k Z_{kα} ∂/∂z_k` for each listed `α`
/// (rightmost first) to the plain theta function of `ctx`.
pub fn build_super_theta(ctx: &ThetaContext, z_o: &LambdaMatrix, alphas: &[usize]) -> Result<SuperThetaFunction> {
    let g = ctx.genus();
    let n = ctx.n_generators();
    if z_o.nrows() != g || z_o.ncols() + 1 != g {
        return Err(Error::Dimension(format!("odd period matrix must be {g}×{}, got {}x{}", g - 1, z_o.nrows(), z_o.ncols())));
    }
    if z_o.n_generators() != n {
        return Err(Error::Dimension("odd period matrix lives over a different algebra".into()));
    }
    if z_o.entries().any(|x| !x.is_odd()) {
        return Err(Error::Parity("odd period matrix has a non-odd entry".into()));
    }
    let mut seen = 0u32;
    for &a in alphas {
        if a >= g - 1 {
            return Err(Error::Dimension(format!("odd coordinate index {a} out of range 0..{}", g - 1)));
        }
        if seen & (1 << a) != 0 {
            return Err(Error::Invalid(format!("odd coordinate index {a} repeated; its operator squares to zero")));
        }
        seen |= 1 << a;
    }

    let ctx = ctx.clone().with_characteristic(Characteristic::Zero);
    let inv_two_pi_i = Complex64::new(0.0, -1.0 / (2.0 * PI));
    let mut terms: BTreeMap<u32, BTreeMap<Vec<u32>, GrassmannScalar>> = BTreeMap::new();
    terms.entry(0).or_default().insert(vec![0; g], GrassmannScalar::one(n));
    for &alpha in alphas.iter().rev() {
        let mut next: BTreeMap<u32, BTreeMap<Vec<u32>, GrassmannScalar>> = BTreeMap::new();
        let mut push = |mask: u32, d: Vec<u32>, c: GrassmannScalar| {
            let slot = next.entry(mask).or_default().entry(d).or_insert_with(|| GrassmannScalar::zero(n));
            *slot += &c;
        };
        for (&mask, combo) in &terms {
            let degree_sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            for (d, c) in combo {
                if mask & (1 << alpha) == 0 {
                    let below = (mask & ((1 << alpha) - 1)).count_ones();
                    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                    push(mask | (1 << alpha), d.clone(), c * sign);
                }
                for k in 0..g {
                    let zka = z_o.get(k, alpha);
                    if zka.is_zero() {
                        continue;
                    }
                    let mut dk = d.clone();
                    dk[k] += 1;
                    push(mask, dk, (zka * c).scale(inv_two_pi_i * degree_sign));
                }
            }
        }
        for combo in next.values_mut() {
            combo.retain(|_, c| !c.is_zero());
        }
        next.retain(|_, combo| !combo.is_empty());
        terms = next;
    }
    Ok(SuperThetaFunction { ctx, z_o: z_o.clone(), alphas: alphas.to_vec(), terms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    /// `z_j ↦ z_j + δ_ij`.
    Unit,
    /// `z_j ↦ z_j + (Z_e)_ij`, `η_α ↦ η_α + (Z_o)_iα`.
    Period,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftResidual {
    pub kind: ShiftKind,
    pub index: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub shifts: Vec<ShiftResidual>,
    pub max_residual: f64,
}

/// Residuals of `H(z + e_i, η) = H(z, η)` and
/// `H(z + Z_e e_i, η + Z_o e_i) = e^{−πi(2z_i + (Z_e)_ii)} H(z, η)` for every `i`.
pub fn check_multipliers(f: &SuperThetaFunction, z: &[GrassmannScalar], eta: &[GrassmannScalar]) -> Result<MultiplierReport> {
    let g = f.ctx.genus();
    let n = f.ctx.n_generators();
    let z_e = f.ctx.period_matrix();
    let base = f.evaluate(z, eta)?;
    let mut shifts = Vec::with_capacity(2 * g);
    for i in 0..g {
        let mut z1 = z.to_vec();
        z1[i] = &z1[i] + &GrassmannScalar::one(n);
        let moved = f.evaluate(&z1, eta)?;
        shifts.push(ShiftResidual { kind: ShiftKind::Unit, index: i, residual: moved.max_abs_diff(&base) });

        let z2: Vec<GrassmannScalar> = z.iter().enumerate().map(|(j, x)| x + z_e.get(i, j)).collect();
        let eta2: Vec<GrassmannScalar> = eta.iter().enumerate().map(|(a, x)| x + f.z_o.get(i, a)).collect();
        let moved = f.evaluate(&z2, &eta2)?;
        let exponent = (&z[i].scale(Complex64::new(2.0, 0.0)) + z_e.get(i, i)).scale(Complex64::new(0.0, -PI));
        let expected = &exponent.exp() * &base;
        shifts.push(ShiftResidual { kind: ShiftKind::Period, index: i, residual: moved.max_abs_diff(&expected) });
    }
    let max_residual = shifts.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(MultiplierReport { shifts, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn context() -> ThetaContext {
        let z = CMatrix::from_row_slice(2, 2, &[c(0.1, 1.2), c(0.2, 0.3), c(0.2, 0.3), c(-0.1, 0.9)]);
        ThetaContext::classical(z, 3, Characteristic::Zero).unwrap()
    }

    #[test]
    fn empty_operator_product_is_plain_theta() {
        let f = build_super_theta(&context(), &LambdaMatrix::zeros(3, 2, 1), &[]).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[&0].len(), 1);
    }

    #[test]
    fn zero_odd_periods_give_eta_times_theta() {
        let f = build_super_theta(&context(), &LambdaMatrix::zeros(3, 2, 1), &[0]).unwrap();
        assert_eq!(f.terms().keys().copied().collect::<Vec<_>>(), vec![1]);
        assert!(f.terms()[&1][&vec![0, 0]].approx_eq(&GrassmannScalar::one(3), 0.0));
    }

    #[test]
    fn repeated_index_is_rejected() {
        let z = CMatrix::from_row_slice(3, 3, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let ctx = ThetaContext::classical(z, 2, Characteristic::Zero).unwrap();
        assert!(matches!(build_super_theta(&ctx, &LambdaMatrix::zeros(2, 3, 2), &[1, 1]), Err(Error::Invalid(_))));
        assert!(matches!(build_super_theta(&ctx, &LambdaMatrix::zeros(2, 3, 2), &[2]), Err(Error::Dimension(_))));
    }
}
