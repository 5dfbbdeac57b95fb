//! Seeded generators of random Grassmann elements and supermatrices.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grassmann::{GrassmannScalar, Parity};
use crate::matrix::LambdaMatrix;
use crate::supermatrix::{Shape, SuperMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with real and imaginary parts uniform in `[−scale, scale]`.
pub fn complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// Random element with every monomial of the requested parity populated
/// (`None` populates all monomials). The body is zero when `nilpotent`.
pub fn scalar<R: Rng>(rng: &mut R, n: usize, parity: Option<Parity>, scale: f64, nilpotent: bool) -> GrassmannScalar {
    let terms: Vec<(u32, Complex64)> = (0..1u32 << n)
        .filter(|&m| parity.map_or(true, |p| Parity::of_mask(m) == p))
        .filter(|&m| !(nilpotent && m == 0))
        .map(|m| (m, complex(rng, scale)))
        .collect();
    GrassmannScalar::from_terms(n, terms)
}

/// Random nilpotent element of the given parity.
pub fn soul<R: Rng>(rng: &mut R, n: usize, parity: Parity, scale: f64) -> GrassmannScalar {
    scalar(rng, n, Some(parity), scale, true)
}

/// Random complex matrix whose diagonal dominates, hence invertible.
fn dominant_body<R: Rng>(rng: &mut R, size: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let mut c = complex(rng, 0.5);
            if i == j {
                c += Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * (size as f64 + 1.0), 0.0);
            }
            v.push(c);
        }
    }
    v
}

/// Random even supermatrix of square shape with invertible body and souls of
/// coefficient size `soul_scale`.
pub fn even_supermatrix<R: Rng>(rng: &mut R, shape: Shape, n: usize, soul_scale: f64) -> SuperMatrix {
    let (k, l) = shape;
    let x = dominant_body(rng, k);
    let y = dominant_body(rng, l);
    let size = k + l;
    let m = LambdaMatrix::from_fn(n, size, size, |i, j| {
        let parity = if (i < k) == (j < k) { Parity::Even } else { Parity::Odd };
        let body = match (i < k, j < k) {
            (true, true) => x[i * k + j],
            (false, false) => y[(i - k) * l + (j - k)],
            _ => Complex64::new(0.0, 0.0),
        };
        &GrassmannScalar::scalar(n, body) + &soul(rng, n, parity, soul_scale)
    });
    SuperMatrix::new(shape, shape, m).expect("shape matches by construction")
}

/// Random row vector over `Λ`; entries mix both parities.
pub fn row_vector<R: Rng>(rng: &mut R, len: usize, n: usize, scale: f64) -> Vec<GrassmannScalar> {
    (0..len).map(|_| scalar(rng, n, None, scale, false)).collect()
}

/// Random symmetric `g×g` period matrix over `Λ`: real part in `[−½, ½]`,
/// imaginary part `imag_scale·I` plus a small symmetric perturbation, and an
/// even symmetric nilpotent part of size `soul_scale`.
pub fn symmetric_period_matrix<R: Rng>(rng: &mut R, g: usize, n: usize, imag_scale: f64, soul_scale: f64) -> LambdaMatrix {
    let mut m = LambdaMatrix::zeros(n, g, g);
    for i in 0..g {
        for j in i..g {
            let mut body = Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(-0.15..=0.15));
            if i == j {
                body.im += imag_scale;
            }
            let x = &GrassmannScalar::scalar(n, body) + &soul(rng, n, Parity::Even, soul_scale);
            m.set(i, j, x.clone());
            m.set(j, i, x);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_matrices_are_even_and_reproducible() {
        let a = even_supermatrix(&mut rng(3), (2, 2), 4, 0.5);
        let b = even_supermatrix(&mut rng(3), (2, 2), 4, 0.5);
        assert!(a.is_even());
        assert_eq!(a, b);
        assert!(soul(&mut rng(1), 4, Parity::Odd, 1.0).is_odd());
    }
}
