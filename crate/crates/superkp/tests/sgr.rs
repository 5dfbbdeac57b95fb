use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use superkp::matrix::LambdaMatrix;
use superkp::random;
use superkp::sgr::{
    baker_tau_quotient_check, cocycle, cocycle_from_grading, heisenberg_supertrace, product_rule_residual, tau, tau_star,
    FlowIndex, HeisenbergElement, Symbol, TauValue, TruncatedFrame, TruncationWindow,
};
use superkp::{GrassmannScalar, Parity};

fn window(m: usize) -> TruncationWindow {
    TruncationWindow::new(m).unwrap()
}

fn idx(s: &str) -> FlowIndex {
    s.parse().unwrap()
}

fn flows(seed: u64, n: usize) -> HeisenbergElement {
    let mut rng = random::rng(seed);
    let even = |scale: f64, rng: &mut rand_chacha::ChaCha8Rng| &GrassmannScalar::scalar(n, random::complex(rng, scale)) + &random::soul(rng, n, Parity::Even, 0.2);
    let t1 = even(0.3, &mut rng);
    let t2 = even(0.2, &mut rng);
    HeisenbergElement::zero(n)
        .with(idx("1"), t1)
        .unwrap()
        .with(idx("2"), t2)
        .unwrap()
        .with(idx("1/2"), random::soul(&mut rng, n, Parity::Odd, 0.3))
        .unwrap()
        .with(idx("3/2"), random::soul(&mut rng, n, Parity::Odd, 0.3))
        .unwrap()
}

fn unwrap_tau(v: TauValue) -> GrassmannScalar {
    v.finite().cloned().expect("finite tau")
}

#[test]
fn baker_vectors_agree_between_routes() {
    for (m, seed) in [(4usize, 1u64), (8, 2), (12, 3)] {
        let frame = TruncatedFrame::generic(window(m), 4, seed, 4, 0.15).unwrap();
        let b = frame.baker_vectors().unwrap();
        assert!(b.route_difference < 1e-9, "M = {m}: {}", b.route_difference);
        let (flowed, _) = frame.flowed(&flows(seed, 4)).unwrap();
        assert!(flowed.baker_vectors().unwrap().route_difference < 1e-9);
    }
}

#[test]
fn baker_function_starts_with_one() {
    let frame = TruncatedFrame::generic(window(6), 2, 5, 4, 0.15).unwrap();
    let b = frame.baker_vectors().unwrap();
    let w0 = b.even_function();
    let w1 = b.odd_function();
    assert!(w0.term(0).unwrap().plain.approx_eq(&GrassmannScalar::one(2), 1e-12));
    assert!(w0.term(0).unwrap().theta.max_abs() < 1e-12);
    assert!(w1.term(0).unwrap().theta.approx_eq(&GrassmannScalar::one(2), 1e-12));
    assert!(w1.term(0).unwrap().plain.max_abs() < 1e-12);
    for k in -5..0 {
        let t = w0.term(k).unwrap();
        assert!(t.plain.max_abs() < 1e-12 && t.theta.max_abs() < 1e-12);
    }
    assert!(w0.term(1).unwrap().plain.max_abs() > 1e-3);
}

#[test]
fn single_even_flow_on_a_simple_frame() {
    // Frame spanned by e_0 + a e_1 and the rest of the negative part: the
    // flow z⁻¹ turns the first column into (1 − a t) e_0 + a e_1 + …, so the
    // Baker coefficient of e_1 is a / (1 − a t).
    let w = window(5);
    let a = 0.4;
    let mut m = TruncatedFrame::standard(w, 0).matrix().clone();
    m.set(w.position(2).unwrap(), w.position(0).unwrap(), GrassmannScalar::real(0, a));
    let frame = TruncatedFrame::new(w, m).unwrap();
    for t in [0.0, 0.1, 0.3] {
        let flow = HeisenbergElement::zero(0).with(idx("1"), GrassmannScalar::real(0, t)).unwrap();
        let (moved, _) = frame.flowed(&flow).unwrap();
        let b = moved.baker_vectors().unwrap();
        let c1 = b.even_coefficient(2).body();
        assert!((c1 - a / (1.0 - a * t)).norm() < 1e-13);
        assert!(b.route_difference < 1e-13);
        assert!((unwrap_tau(tau(&frame, &flow).unwrap().0).body() - (1.0 - a * t)).norm() < 1e-13);
    }
}

#[test]
fn tau_and_tau_star_are_reciprocal() {
    for seed in 0..3 {
        let frame = TruncatedFrame::generic(window(8), 4, 10 + seed, 4, 0.15).unwrap();
        let t = flows(20 + seed, 4);
        let a = unwrap_tau(tau(&frame, &t).unwrap().0);
        let b = unwrap_tau(tau_star(&frame, &t).unwrap().0);
        assert!((&a * &b).approx_eq(&GrassmannScalar::one(4), 1e-10));
        let zero = unwrap_tau(tau(&frame, &HeisenbergElement::zero(4)).unwrap().0);
        assert!(zero.approx_eq(&GrassmannScalar::one(4), 1e-12));
    }
}

#[test]
fn quotient_identity_and_window_stability() {
    let t = flows(7, 3);
    let mut previous: Option<(GrassmannScalar, GrassmannScalar)> = None;
    for m in [12usize, 16] {
        let frame = TruncatedFrame::generic(window(m), 3, 42, 4, 0.15).unwrap();
        for u in [0.1, 0.2] {
            let report = baker_tau_quotient_check(&frame, &t, Complex64::new(u, 0.0)).unwrap();
            assert!(report.residual < 1e-8, "M = {m}, u = {u}: {} {}", report.even_residual, report.odd_residual);
            assert!(!report.diagnostics.truncated);
        }
        let value = unwrap_tau(tau(&frame, &t).unwrap().0);
        let quotient = baker_tau_quotient_check(&frame, &t, Complex64::new(0.2, 0.0)).unwrap().even_quotient;
        if let Some((v, q)) = &previous {
            assert!(value.max_abs_diff(v) < 1e-6);
            assert!(quotient.max_abs_diff(q) < 1e-6);
        }
        previous = Some((value, quotient));
    }
}

#[test]
fn product_rule_for_flows_that_preserve_the_frame() {
    // With a frame perturbation divisible by β₁β₂ and a time divisible by
    // β₁β₃, the second flow maps the frame into itself.
    let n = 4;
    let w = window(8);
    let eps = &GrassmannScalar::generator(n, 0) * &GrassmannScalar::generator(n, 1);
    let generic = TruncatedFrame::generic(w, n, 3, 4, 0.3).unwrap();
    let standard = TruncatedFrame::standard(w, n);
    let m = LambdaMatrix::from_fn(n, w.size(), w.negative_size(), |r, c| {
        let d = generic.matrix().get(r, c) - standard.matrix().get(r, c);
        standard.matrix().get(r, c) + &(&eps * &d)
    });
    let frame = TruncatedFrame::new(w, m).unwrap();
    let kappa = (&GrassmannScalar::generator(n, 0) * &GrassmannScalar::generator(n, 2)).scale(Complex64::new(0.7, 0.2));
    for k_index in ["1", "2", "3"] {
        let k = HeisenbergElement::zero(n).with(idx(k_index), kappa.clone()).unwrap();
        for seed in 0..3 {
            let f = flows(30 + seed, n);
            assert!(product_rule_residual(&frame, &f, &k).unwrap() < 1e-8);
        }
    }
    // A generic shift is not factorizable.
    let frame = TruncatedFrame::generic(w, n, 5, 4, 0.15).unwrap();
    let k = HeisenbergElement::zero(n).with(idx("1"), GrassmannScalar::real(n, 0.3)).unwrap();
    assert!(product_rule_residual(&frame, &flows(40, n), &k).unwrap() > 1e-6);
}

#[test]
fn delta_frame_is_outside_the_big_cell() {
    let n = 2;
    let delta = (&GrassmannScalar::generator(n, 0) * &GrassmannScalar::generator(n, 1)).scale(Complex64::new(0.5, 0.0));
    let frame = TruncatedFrame::delta_example(window(4), &delta).unwrap();
    assert!(!frame.big_cell().in_big_cell);
    assert!(tau(&frame, &HeisenbergElement::zero(n)).is_err());
}

fn random_heisenberg(rng: &mut impl Rng, n: usize, sign: i64, depth: i64) -> Symbol {
    let mut s = Symbol::zero(n);
    for k in 1..=depth {
        let c = GrassmannScalar::scalar(n, random::complex(rng, 1.0));
        let g = random::soul(rng, n, Parity::Odd, 1.0);
        s = s.add(&Symbol::z_power(n, sign * k, c)).add(&Symbol::e(n, -sign * k, g));
    }
    s
}

#[test]
fn commutator_of_heisenberg_halves_has_zero_supertrace() {
    let mut rng = random::rng(77);
    for (m, depth) in [(4usize, 2i64), (6, 3), (8, 5)] {
        let w = window(m);
        let f_minus = random_heisenberg(&mut rng, 3, -1, depth);
        let f_plus = random_heisenberg(&mut rng, 3, 1, depth);
        let s = heisenberg_supertrace(&w, &f_minus, &f_plus).unwrap();
        assert!(s.max_abs() < 1e-12, "M = {m}: {}", s.max_abs());
    }
    // Plain z⁻¹ against z.
    let w = window(4);
    let one = GrassmannScalar::one(0);
    let s = heisenberg_supertrace(&w, &Symbol::z_power(0, -1, one.clone()), &Symbol::z_power(0, 1, one)).unwrap();
    assert!(s.is_zero());
}

#[test]
fn cocycle_vanishes_on_heisenberg_pairs() {
    let mut rng = random::rng(78);
    let w = window(8);
    for _ in 0..3 {
        let x = random_heisenberg(&mut rng, 2, -1, 3).matrix(&w).0;
        let y = random_heisenberg(&mut rng, 2, -1, 2).matrix(&w).0;
        assert!(cocycle(&w, &x, &y).unwrap().max_abs() < 1e-12);
        let x = random_heisenberg(&mut rng, 2, 1, 3).matrix(&w).0;
        let y = random_heisenberg(&mut rng, 2, 1, 2).matrix(&w).0;
        assert!(cocycle(&w, &x, &y).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cocycle_block_formula_matches_the_grading_formula(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let w = window(3);
        let n = 2;
        let even = |rng: &mut rand_chacha::ChaCha8Rng| LambdaMatrix::from_fn(n, w.size(), w.size(), |r, c| {
            random::scalar(rng, n, Some(w.parity(r).add(w.parity(c))), 1.0, false)
        });
        let x = even(&mut rng);
        let y = even(&mut rng);
        let a = cocycle(&w, &x, &y).unwrap();
        let b = cocycle_from_grading(&w, &x, &y).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn random_frames_give_matching_baker_routes(seed in any::<u64>()) {
        let frame = TruncatedFrame::generic(window(5), 4, seed, 4, 0.15).unwrap();
        prop_assert!(frame.baker_vectors().unwrap().route_difference < 1e-9);
    }
}
