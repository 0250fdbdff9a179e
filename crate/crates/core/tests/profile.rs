use halfelastica::ode::OdeTol;
use halfelastica::profile::*;
use halfelastica::roots::{eta, Parameters};
use proptest::prelude::*;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn params(l: f64, e1: f64) -> Parameters {
    Parameters::new(l, e1).unwrap()
}

/// Five multipliers, five e₁ each, from near the circle to far out; covers
/// both generic regions, the complex-pair case and four real roots.
fn grid() -> Vec<Parameters> {
    let mut v = vec![params(-9.0 / 16.0, 2.0)];
    for l in [-1.0, -0.5, 0.0, 0.5, 1.1] {
        let et = eta(l);
        for f in [1.01, 1.3, 2.0, 4.0, 12.0] {
            v.push(params(l, et * f));
        }
    }
    v
}

// Frozen from a 30-digit evaluation.
#[test]
fn frozen_periods() {
    for (l, e1, w) in [
        (-9.0 / 16.0, 2.0, 2.4209598390840694),
        (0.0, 2.0, PI),
        (1.1, 1.5, 3.3775324465265262),
        (-0.5, 3.0, 2.8671139046258021),
        (-1.0, 4.0, 2.3210838036224298),
    ] {
        let got = period_omega(&params(l, e1)).unwrap();
        assert!(rel(got, w) < 1e-12, "({l}, {e1}): {got} vs {w}");
    }
}

#[test]
fn period_three_ways() {
    for p in grid() {
        let w = period_omega(&p).unwrap();
        let wq = period_omega_quadrature(&p, 1e-13).unwrap();
        let wo = period_ode(&p, OdeTol::default()).unwrap();
        assert!(rel(w, wq) < 1e-8, "quadrature at ({}, {})", p.lambda, p.e1);
        assert!(rel(w, wo) < 1e-6, "ode at ({}, {})", p.lambda, p.e1);
    }
}

#[test]
fn period_tolerance_refinement() {
    let p = params(-9.0 / 16.0, 2.0);
    let a = period_omega_quadrature(&p, 1e-8).unwrap();
    let b = period_omega_quadrature(&p, 1e-10).unwrap();
    assert!((a - b).abs() < 1e-7);
}

/// Near the circle the period tends to that of the linearized equation,
/// `2π/√(4 − 2λη³)`.
#[test]
fn period_near_circle() {
    for l in [-1.0, -0.2, 0.0, 0.7] {
        let et = eta(l);
        let w = period_omega_quadrature(&params(l, et * (1.0 + 1e-4)), 1e-13).unwrap();
        let lin = 2.0 * PI / (4.0 - 2.0 * l * et.powi(3)).sqrt();
        assert!(w.is_finite() && w > 0.0);
        assert!(rel(w, lin) < 1e-3, "lambda = {l}: {w} vs {lin}");
    }
}

#[test]
fn inverse_profile_endpoints() {
    for p in [params(-9.0 / 16.0, 2.0), params(-0.5, 3.0), params(1.1, 1.5)] {
        let w = period_omega(&p).unwrap();
        assert!(h_inverse(p.e2, &p).unwrap().abs() < 1e-12);
        assert!((h_inverse(p.e1, &p).unwrap() - w / 2.0).abs() < 1e-12);
        let mid = 0.5 * (p.e1 + p.e2);
        assert!((h_inverse(mid, &p).unwrap() - h_inverse_quadrature(mid, &p, 1e-13).unwrap()).abs() < 1e-8);
        assert!(h_inverse(p.e1 + 1e-3, &p).is_err());
        assert!(h_inverse(p.e2 - 1e-3, &p).is_err());
    }
}

#[test]
fn inverse_profile_round_trip() {
    let p = params(1.1, 1.5);
    let s = mu_samples(&p, 1, 0.01).unwrap();
    let half = s.per_period / 2;
    for i in (1..half).step_by(7) {
        let back = h_inverse(s.mu[i], &p).unwrap();
        assert!((back - s.s[i]).abs() < 1e-6, "s = {}", s.s[i]);
    }
}

#[test]
fn samples_layout() {
    let p = params(1.1, 1.46);
    let s = mu_samples(&p, 3, 0.01).unwrap();
    assert_eq!(s.per_period % 2, 0);
    assert_eq!(s.mu.len(), 3 * s.per_period + 1);
    assert!((s.step() * s.per_period as f64 - s.omega).abs() < 1e-12);
    assert!(s.s.windows(2).all(|w| w[1] > w[0]));
    assert!((s.mu[s.per_period / 2] - p.e1).abs() < 1e-7);
    assert!((s.mu[s.per_period] - p.e2).abs() < 1e-7);
    let lo = s.mu.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = s.mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((lo - p.e2).abs() < 1e-6 && (hi - p.e1).abs() < 1e-6);
    assert!(mu_samples(&p, 0, 0.01).is_err());
    assert!(mu_samples(&p, 1, 0.0).is_err());
}

#[test]
fn samples_per_period_rounds_to_even() {
    assert_eq!(samples_per_period(1.0, 0.3).unwrap(), 4);
    assert_eq!(samples_per_period(1.0, 0.25).unwrap(), 4);
    assert_eq!(samples_per_period(1.0, 10.0).unwrap(), 2);
}

#[test]
fn profile_is_even() {
    let p = params(-0.5, 3.0);
    for s in [0.3, 1.1, 2.0] {
        let (a, _) = profile_state(&p, s, OdeTol::default()).unwrap();
        let (b, _) = profile_state(&p, -s, OdeTol::default()).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn first_integral_over_ten_periods() {
    for p in [params(1.1, 1.2699767242718614), params(-0.5, 3.4992434505569747), params(-1.0, 4.0)] {
        let s = mu_samples(&p, 10, 0.01).unwrap();
        let bound = 1e-8 * p.e1.powi(6).max(1.0);
        let worst = (0..s.mu.len()).map(|i| conservation_residual(&p, s.mu[i], s.mudot[i]).abs()).fold(0.0, f64::max);
        assert!(worst < bound, "({}, {}): {worst:e}", p.lambda, p.e1);
        let first =
            (0..=s.per_period).map(|i| conservation_residual(&p, s.mu[i], s.mudot[i]).abs()).fold(0.0, f64::max);
        assert!(worst <= 10.0 * first.max(1e-14));
    }
}

// Frozen from a 30-digit evaluation.
#[test]
fn energy_values() {
    let e = bending_energy(&params(1.1, 1.2699767242718614), 5).unwrap();
    assert!(rel(e, 30.421996246462399) < 1e-12);
    let e = bending_energy(&params(-0.5, 3.4992434505569747), 8).unwrap();
    assert!(rel(e, 9.1889484878985347) < 1e-12);
}

#[test]
fn energy_properties() {
    let p = params(-0.5, 3.4992434505569747);
    let one = bending_energy(&p, 1).unwrap();
    assert!((bending_energy(&p, 3).unwrap() - 3.0 * one).abs() < 1e-12 * one.abs());
    assert!(rel(one, bending_energy_quadrature(&p, 1, 1e-13).unwrap()) < 1e-8);
    let p0 = params(0.0, 2.0);
    let d = elliptic_constants(&p0);
    let k = halfelastica::elliptic::complete_k_c(d.delta);
    let e0 = bending_energy(&p0, 2).unwrap();
    assert!(e0 > 0.0 && (e0 - 4.0 * (d.beta * k).re).abs() < 1e-12);
}

#[test]
fn elliptic_constants_cases() {
    let d = elliptic_constants(&params(-0.5, 3.4992434505569747));
    assert!(d.delta.im == 0.0 && d.delta.re > 0.0 && d.delta.re < 1.0);
    let c = elliptic_constants(&params(-9.0 / 16.0, 2.0));
    assert!(period_omega(&params(-9.0 / 16.0, 2.0)).unwrap().is_finite());
    assert!(c.delta.norm().is_finite());
    let near = elliptic_constants(&params(0.0, 1.0 + 1e-9));
    assert!(near.alpha.norm() < 1e-3);
}

#[test]
fn phase_oval() {
    let p = params(-0.5, 3.0);
    let pts = phase_curve(&p, 50);
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    assert!(first.1.abs() < 1e-12 && last.1.abs() < 1e-12);
    assert!(pts.iter().all(|&(x, _)| x > 0.0));
    for &(x, y) in &pts {
        assert!((y * y + x * x * p.q(x)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn period_closed_form_matches_quadrature(l in -3.0f64..3.0, f in 1e-3f64..1.0, t in 0.0f64..1.0) {
        let e1 = eta(l) * (1.0 + f) + 30.0 * t * t;
        let p = Parameters::new(l, e1).unwrap();
        let w = period_omega(&p).unwrap();
        prop_assert!(rel(w, period_omega_quadrature(&p, 1e-13).unwrap()) < 1e-8);
        let e = bending_energy(&p, 1).unwrap();
        prop_assert!((e - bending_energy_quadrature(&p, 1, 1e-13).unwrap()).abs() < 1e-8 * e.abs().max(1.0));
    }
}
