use num_complex::Complex64;
use proptest::prelude::*;
use superkp::elliptic::{baker_matrix, check, tau_closed_form, tau_ratio, SuperEllipticData};
use superkp::supermatrix::berezinian;
use superkp::GrassmannScalar;

const TAU: Complex64 = Complex64 { re: 0.0, im: 2.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid() -> Vec<(Complex64, Complex64)> {
    let mut out = Vec::new();
    for a in [c(0.21, 0.3), c(0.43, 0.7), c(0.37, -0.4)] {
        for zeta in [c(0.05, 0.02), c(0.12, -0.03), c(-0.08, 0.06)] {
            out.push((a, zeta));
        }
    }
    out
}

/// `[log Θ₁₁]″` from the Jacobi product
/// `Θ₁₁(z) ∝ sin(πz) Π_m (1 − 2 qᵐ cos 2πz + q^{2m})`, `q = e^{2πiτ}`,
/// by central differences of its logarithm.
fn log_theta_second_derivative(z: Complex64, tau: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let q = (Complex64::i() * 2.0 * pi * tau).exp();
    let log_product = |z: Complex64| {
        let mut s = (z * pi).sin().ln();
        let mut qm = q;
        for _ in 0..60 {
            s += (Complex64::new(1.0, 0.0) - qm * (z * 2.0 * pi).cos() * 2.0 + qm * qm).ln();
            qm *= q;
        }
        s
    };
    let h = 1e-4;
    (log_product(z + h) - log_product(z) * 2.0 + log_product(z - h)) / (h * h)
}

#[test]
fn ber_of_the_baker_matrix_inverts_the_ratio_on_a_grid() {
    for (a, zeta) in grid() {
        let d = SuperEllipticData::standard(TAU, a, zeta, c(1.0, 0.0)).unwrap();
        let report = check(&d).unwrap();
        assert!(report.ber_check_residual < 1e-6, "a = {a}, ζ = {zeta}: {}", report.ber_check_residual);
        assert!((report.convention_factor - 1.0).norm() < 1e-12);
        assert!(report.closed_form_residual < 1e-6);
        assert!(report.tau_ratio.coeff(0b11).norm() > 1e-6);
    }
}

#[test]
fn closed_form_matches_an_independent_product_formula() {
    let pi2i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    for (a, _) in grid() {
        let d = SuperEllipticData::standard(TAU, a, c(0.1, 0.0), c(1.0, 0.0)).unwrap();
        let tau = tau_closed_form(&d).unwrap();
        // α = β₁, δ = β₂, so the β₁β₂ coefficient is −[log Θ]″ / 2πi.
        let expected = -log_theta_second_derivative(a, TAU) / pi2i;
        assert!((tau.coeff(0b11) - expected).norm() < 1e-6, "a = {a}: {} vs {expected}", tau.coeff(0b11));
        assert!((tau.body() - 1.0).norm() < 1e-15);
    }
}

#[test]
fn ratio_is_trivial_without_the_nilpotent_coupling() {
    let d = SuperEllipticData::standard(TAU, c(0.3, 0.2), c(0.1, 0.0), c(1.0, 0.0)).unwrap();
    for (alpha, delta) in [
        (GrassmannScalar::zero(2), d.delta().clone()),
        (d.alpha().clone(), GrassmannScalar::zero(2)),
        (GrassmannScalar::generator(2, 0), GrassmannScalar::generator(2, 0)),
    ] {
        let d = d.with_odd(alpha, delta).unwrap();
        assert!(tau_ratio(&d).unwrap().approx_eq(&GrassmannScalar::one(2), 1e-15));
        assert!(tau_closed_form(&d).unwrap().approx_eq(&GrassmannScalar::one(2), 1e-15));
    }
}

#[test]
fn closed_form_is_doubly_periodic() {
    for (a, _) in grid() {
        let d = SuperEllipticData::standard(TAU, a, c(0.1, 0.0), c(1.0, 0.0)).unwrap();
        let base = tau_closed_form(&d).unwrap();
        for shift in [c(1.0, 0.0), TAU, c(-1.0, 0.0) - TAU] {
            let moved = d.with_a(&d.a().clone() + &GrassmannScalar::scalar(2, shift)).unwrap();
            assert!(tau_closed_form(&moved).unwrap().max_abs_diff(&base) < 1e-6, "a = {a}, shift = {shift}");
        }
    }
}

#[test]
fn nilpotent_even_coordinate_and_four_generators() {
    // a and ζ carry souls; α and δ are combinations of generators.
    let n = 4;
    let g = |i| GrassmannScalar::generator(n, i);
    let a = &GrassmannScalar::scalar(n, c(0.3, 0.25)) + &(&g(2) * &g(3)).scale(c(0.2, 0.0));
    let zeta = &GrassmannScalar::scalar(n, c(0.1, 0.05)) + &(&g(0) * &g(2)).scale(c(0.0, 0.3));
    let alpha = &g(0) + &g(2).scale(c(0.5, 0.0));
    let delta = &g(1) - &g(3).scale(c(0.0, 0.7));
    let d = SuperEllipticData::new(c(0.1, 1.3), delta, a, alpha, zeta).unwrap();
    let report = check(&d).unwrap();
    assert!(report.ber_check_residual < 1e-6);
    assert!(report.closed_form_residual < 1e-6);
    assert!(report.tau_ratio.odd_part().is_zero());
    assert!(report.tau_closed_form.odd_part().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ber_check_holds_for_random_points(ar in 0.1f64..0.9, ai in -0.6f64..0.6, zr in -0.15f64..0.15, zi in -0.1f64..0.1, s in 0.2f64..2.0) {
        let d = SuperEllipticData::standard(TAU, c(ar, ai), c(zr, zi), c(s, 0.3)).unwrap();
        let ber = berezinian(&baker_matrix(&d).unwrap()).unwrap();
        let ratio = tau_ratio(&d).unwrap();
        prop_assert!((&ber * &ratio).approx_eq(&GrassmannScalar::one(2), 1e-6));
    }
}
