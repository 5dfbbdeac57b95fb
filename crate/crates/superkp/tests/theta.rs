use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use superkp::linalg::CMatrix;
use superkp::matrix::LambdaMatrix;
use superkp::random;
use superkp::theta::{build_super_theta, check_multipliers, theta, theta_derivative, Characteristic, ThetaContext};
use superkp::{GrassmannScalar, Parity};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(n: usize, xs: &[Complex64]) -> Vec<GrassmannScalar> {
    xs.iter().map(|&x| GrassmannScalar::scalar(n, x)).collect()
}

fn genus_two() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.2, 1.1), c(0.15, 0.25), c(0.15, 0.25), c(-0.3, 0.95)])
}

fn body_value(ctx: &ThetaContext, xs: &[Complex64]) -> Complex64 {
    theta(ctx, &point(0, xs)).unwrap().body()
}

#[test]
fn derivatives_match_finite_differences() {
    let ctx = ThetaContext::classical(genus_two(), 0, Characteristic::Zero).unwrap();
    let x0 = [c(0.13, -0.07), c(-0.21, 0.11)];
    let h = 1e-4;
    let shifted = |k: usize, s: f64| {
        let mut x = x0;
        x[k] += s * h;
        body_value(&ctx, &x)
    };
    for k in 0..2 {
        let f = |s: f64| shifted(k, s);
        let first = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
        let second = (-f(2.0) + 16.0 * f(1.0) - 30.0 * f(0.0) + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * h * h);
        let mut d1 = vec![0, 0];
        d1[k] = 1;
        let mut d2 = vec![0, 0];
        d2[k] = 2;
        let exact1 = theta_derivative(&ctx, &point(0, &x0), &d1).unwrap().body();
        let exact2 = theta_derivative(&ctx, &point(0, &x0), &d2).unwrap().body();
        assert!((first - exact1).norm() < 1e-6 * exact1.norm().max(1.0));
        assert!((second - exact2).norm() < 1e-6 * exact2.norm().max(1.0));
    }
}

#[test]
fn logarithmic_derivative_of_odd_theta_has_a_simple_pole() {
    let ctx = ThetaContext::classical(CMatrix::from_element(1, 1, c(0.0, 1.0)), 0, Characteristic::OneOne).unwrap();
    let remainder = |x: f64| {
        let z = point(0, &[c(x, 0.0)]);
        let t = theta(&ctx, &z).unwrap().body();
        let dt = theta_derivative(&ctx, &z, &[1]).unwrap().body();
        dt / t - 1.0 / x
    };
    let r1 = remainder(1e-3);
    let r2 = remainder(2e-3);
    assert!(r1.norm() < 1e-2);
    // The remainder is odd and linear to leading order.
    assert!(((r2 / r1) - 2.0).norm() < 1e-4);
}

#[test]
fn truncation_is_stable() {
    for (g, seed) in [(1usize, 1u64), (2, 2), (3, 3)] {
        let mut rng = random::rng(seed);
        let z = random::symmetric_period_matrix(&mut rng, g, 2, 0.8, 0.3);
        let ctx = ThetaContext::from_period_matrix(&z, Characteristic::Zero).unwrap();
        let more = ctx.clone().with_truncation(ctx.truncation() + 2).unwrap();
        let x: Vec<GrassmannScalar> = (0..g).map(|_| &GrassmannScalar::scalar(2, random::complex(&mut rng, 0.3)) + &random::soul(&mut rng, 2, Parity::Even, 0.3)).collect();
        let a = theta(&ctx, &x).unwrap();
        let b = theta(&more, &x).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-10);
    }
}

#[test]
fn period_matrix_derivative_is_a_heat_operator() {
    let z = genus_two();
    let x0 = [c(0.05, 0.1), c(-0.2, 0.03)];
    let h = 1e-4;
    for (j, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let at = |s: f64| {
            let mut zz = z.clone();
            zz[(j, k)] += s * h;
            body_value(&ThetaContext::classical(zz, 0, Characteristic::Zero).unwrap(), &x0)
        };
        let fd = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
        let mut d = vec![0, 0];
        d[j] += 1;
        d[k] += 1;
        let ctx = ThetaContext::classical(z.clone(), 0, Characteristic::Zero).unwrap();
        let heat = theta_derivative(&ctx, &point(0, &x0), &d).unwrap().body() / (4.0 * PI * c(0.0, 1.0));
        assert!((fd - heat).norm() < 1e-6 * heat.norm().max(1.0), "entry ({j},{k})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn nilpotent_shift_is_a_first_order_taylor_step(seed in any::<u64>()) {
        let n = 2;
        let mut rng = random::rng(seed);
        let eps = &GrassmannScalar::generator(n, 0) * &GrassmannScalar::generator(n, 1);
        let z_red = random::symmetric_period_matrix(&mut rng, 2, 0, 1.0, 0.0).body();
        let v: Vec<Complex64> = (0..2).map(|_| random::complex(&mut rng, 1.0)).collect();
        let w: Vec<Complex64> = (0..4).map(|_| random::complex(&mut rng, 1.0)).collect();
        let x0: Vec<Complex64> = (0..2).map(|_| random::complex(&mut rng, 0.3)).collect();

        let soul = LambdaMatrix::from_fn(n, 2, 2, |j, k| eps.scale(w[2 * j + k]));
        let ctx = ThetaContext::new(z_red.clone(), soul, Characteristic::Zero).unwrap();
        let x: Vec<GrassmannScalar> = x0.iter().zip(&v).map(|(&b, &d)| &GrassmannScalar::scalar(n, b) + &eps.scale(d)).collect();
        let lifted = theta(&ctx, &x).unwrap();

        let plain = ThetaContext::classical(z_red, n, Characteristic::Zero).unwrap();
        let base = point(n, &x0);
        let mut slope = Complex64::new(0.0, 0.0);
        for j in 0..2 {
            let mut d = vec![0, 0];
            d[j] = 1;
            slope += v[j] * theta_derivative(&plain, &base, &d).unwrap().body();
            for k in 0..2 {
                let mut dd = vec![0, 0];
                dd[j] += 1;
                dd[k] += 1;
                slope += w[2 * j + k] * theta_derivative(&plain, &base, &dd).unwrap().body() / (4.0 * PI * c(0.0, 1.0));
            }
        }
        let expected = &theta(&plain, &base).unwrap() + &eps.scale(slope);
        prop_assert!(lifted.max_abs_diff(&expected) < 1e-9 * expected.max_abs().max(1.0));
    }
}

fn odd_periods<R: rand::Rng>(rng: &mut R, g: usize, n: usize, scale: f64) -> LambdaMatrix {
    LambdaMatrix::from_fn(n, g, g - 1, |_, _| random::soul(rng, n, Parity::Odd, scale))
}

#[test]
fn plain_theta_multipliers_hold_across_genera() {
    for g in 1..=3 {
        let mut rng = random::rng(40 + g as u64);
        let n = 2;
        let z = random::symmetric_period_matrix(&mut rng, g, n, 1.0, 0.2);
        let ctx = ThetaContext::from_period_matrix(&z, Characteristic::Zero).unwrap();
        let f = build_super_theta(&ctx, &LambdaMatrix::zeros(n, g, g - 1), &[]).unwrap();
        let x: Vec<GrassmannScalar> = (0..g).map(|_| &GrassmannScalar::scalar(n, random::complex(&mut rng, 0.3)) + &random::soul(&mut rng, n, Parity::Even, 0.2)).collect();
        let eta = vec![GrassmannScalar::zero(n); g - 1];
        let report = check_multipliers(&f, &x, &eta).unwrap();
        assert_eq!(report.shifts.len(), 2 * g);
        assert!(report.max_residual < 1e-8, "genus {g}: {}", report.max_residual);
    }
}

#[test]
fn super_theta_multipliers_with_odd_periods() {
    for g in [2usize, 3] {
        let n = 4;
        let mut rng = random::rng(70 + g as u64);
        let z = random::symmetric_period_matrix(&mut rng, g, n, 1.0, 0.2);
        let ctx = ThetaContext::from_period_matrix(&z, Characteristic::Zero).unwrap();
        let z_o = odd_periods(&mut rng, g, n, 0.3);
        let x: Vec<GrassmannScalar> = (0..g).map(|_| &GrassmannScalar::scalar(n, random::complex(&mut rng, 0.3)) + &random::soul(&mut rng, n, Parity::Even, 0.2)).collect();
        let eta: Vec<GrassmannScalar> = (0..g - 1).map(|_| random::soul(&mut rng, n, Parity::Odd, 0.5)).collect();
        let all: Vec<usize> = (0..g - 1).collect();
        for alphas in [vec![], vec![0], all.clone(), all.iter().rev().copied().collect()] {
            let f = build_super_theta(&ctx, &z_o, &alphas).unwrap();
            let report = check_multipliers(&f, &x, &eta).unwrap();
            assert!(report.max_residual < 1e-8, "genus {g}, alphas {alphas:?}: {}", report.max_residual);
        }
    }
}

#[test]
fn zero_odd_periods_reduce_to_eta_times_theta() {
    let n = 3;
    let g = 3;
    let mut rng = random::rng(5);
    let z = random::symmetric_period_matrix(&mut rng, g, n, 1.0, 0.0);
    let ctx = ThetaContext::from_period_matrix(&z, Characteristic::Zero).unwrap();
    let f = build_super_theta(&ctx, &LambdaMatrix::zeros(n, g, g - 1), &[1, 0]).unwrap();
    let x = point(n, &[c(0.1, 0.0), c(0.0, 0.2), c(-0.1, 0.1)]);
    let eta = vec![GrassmannScalar::generator(n, 0), GrassmannScalar::generator(n, 2)];
    let expected = &(&eta[1] * &eta[0]) * &theta(&ctx, &x).unwrap();
    assert!(f.evaluate(&x, &eta).unwrap().approx_eq(&expected, 1e-12));
    assert!(check_multipliers(&f, &x, &eta).unwrap().max_residual < 1e-8);
}

#[test]
fn wrong_shift_breaks_the_multiplier() {
    let n = 2;
    let ctx = ThetaContext::classical(genus_two(), n, Characteristic::Zero).unwrap();
    let x = point(n, &[c(0.1, 0.05), c(-0.2, 0.1)]);
    let base = theta(&ctx, &x).unwrap();
    let half = vec![&x[0] + &GrassmannScalar::real(n, 0.5), x[1].clone()];
    assert!(theta(&ctx, &half).unwrap().max_abs_diff(&base) > 1e-2);
}
