use halfelastica::geometry::*;
use halfelastica::ode::OdeTol;
use halfelastica::period::*;
use halfelastica::profile::{mu_samples, period_omega};
use halfelastica::roots::{eta, Parameters, Region};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn rot_x(a: f64) -> Matrix3<f64> {
    Matrix3::new(1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos())
}

fn closure(l: f64, m: u32, n: u32) -> ClosureResult {
    solve_closure(l, ClosureSpec::new(m, n).unwrap(), Scan::default()).unwrap().remove(0)
}

fn on_locus(m: u32, n: u32) -> ClosureResult {
    solve_exceptional_closure(ClosureSpec::new(m, n).unwrap(), -5.0, -1e-3, 300).unwrap().remove(0)
}

fn catalog() -> Vec<ClosureResult> {
    vec![
        closure(1.1, 2, 5),
        on_locus(4, 9),
        on_locus(2, 9),
        closure(-0.5, 3, 8),
        closure(-0.5, 3, 11),
        closure(-0.5, 2, 9),
    ]
}

/// Fourth-order central difference of the samples at index i.
fn derivative(g: &[Vector3<f64>], i: usize, h: f64) -> Vector3<f64> {
    (g[i - 2] - g[i - 1] * 8.0 + g[i + 1] * 8.0 - g[i + 2]) / (12.0 * h)
}

#[test]
fn standard_form_at_half_period() {
    for (l, e1) in [(1.1, 1.5), (-0.5, 3.0), (-9.0 / 16.0, 2.0)] {
        let p = Parameters::new(l, e1).unwrap();
        let c = synthesize_curve(&p, 1, 0.002).unwrap();
        let i = c.per_period / 2;
        let w = e1 * (e1 + 2.0 * l);
        let r = (1.0 + w * w).sqrt();
        assert!((c.gamma[i] - Vector3::new(1.0 / r, -w / r, 0.0)).norm() < 1e-12);
        assert!((derivative(&c.gamma, i, c.step()) - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-6);
        assert!(c.theta[i].abs() < 1e-15);
        let f = frenet_integrate(&p, 1, 0.002).unwrap();
        assert!((f.frames.as_ref().unwrap()[i] - initial_frame(&p)).norm() < 1e-14);
    }
}

#[test]
fn sphere_speed_and_curvature() {
    for r in [closure(1.1, 2, 5), closure(-0.5, 3, 8), on_locus(2, 9)] {
        let p = r.params;
        // The fourth-order stencil needs the finer step at the apex, where the
        // curvature peaks at e₁².
        let c = synthesize_curve(&p, 2, 0.002).unwrap();
        let h = c.step();
        for (i, g) in c.gamma.iter().enumerate() {
            assert!((g.norm() - 1.0).abs() < 1e-8);
            if i >= 2 && i + 2 < c.gamma.len() {
                assert!((derivative(&c.gamma, i, h).norm() - 1.0).abs() < 1e-6, "speed at s = {}", c.s[i]);
            }
        }
    }
}

/// Geodesic curvature from second-order differences at steps h and h/2: the
/// error is below 10⁻³ relative and shrinks by about four.
#[test]
fn curvature_recovery() {
    let p = closure(1.1, 2, 5).params;
    let c = synthesize_curve(&p, 1, 5e-4).unwrap();
    let h = c.step();
    let err = |k: usize| {
        let g = &c.gamma;
        let hk = h * k as f64;
        (k..g.len() - k)
            .step_by(k)
            .map(|i| {
                let d1 = (g[i + k] - g[i - k]) / (2.0 * hk);
                let d2 = (g[i + k] - g[i] * 2.0 + g[i - k]) / (hk * hk);
                let kappa = g[i].cross(&d1).dot(&d2) / d1.norm().powi(3);
                let mu2 = c.mu[i] * c.mu[i];
                (kappa - mu2).abs() / mu2
            })
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(4), err(2));
    assert!(coarse < 1e-3 && fine < coarse);
    let ratio = coarse / fine;
    assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
}

#[test]
fn angular_function() {
    for (l, e1) in [(1.1, 1.5), (-0.5, 3.0), (-9.0 / 16.0, 2.0)] {
        let p = Parameters::new(l, e1).unwrap();
        let c = synthesize_curve(&p, 2, 0.01).unwrap();
        let (n, half) = (c.per_period, c.per_period / 2);
        let psi = psi_closed_form(&p).unwrap();
        assert!((c.theta[n] - c.theta[0] - psi).abs() < 1e-7);
        assert!((c.theta[2 * n] - c.theta[n] - psi).abs() < 1e-7);
        for k in [1, 17, half] {
            assert!((c.theta[half + k] + c.theta[half - k]).abs() < 1e-7);
        }
    }
}

#[test]
fn radial_and_height() {
    for (l, e1) in [(1.1, 1.5), (-0.5, 3.0)] {
        let p = Parameters::new(l, e1).unwrap();
        let c = synthesize_curve(&p, 2, 0.01).unwrap();
        let n = c.per_period;
        for i in 0..c.s.len() {
            assert!((c.height[i].powi(2) + c.rho[i].powi(2) - 1.0).abs() < 1e-10);
            assert!(c.rho[i] > 0.0 && c.sigma[i] == 1);
        }
        let lo = c.height.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.height.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - 1.0 / (2.0 * p.xi * p.e1)).abs() < 1e-6 && (c.height[n / 2] - lo).abs() < 1e-9);
        assert!((hi - 1.0 / (2.0 * p.xi * p.e2)).abs() < 1e-6 && (c.height[n] - hi).abs() < 1e-9);
        assert!((c.rho[3] - c.rho[n + 3]).abs() < 1e-8);
    }
}

#[test]
fn exceptional_sign_flip_and_pole() {
    let p = on_locus(1, 3).params;
    let c = synthesize_curve(&p, 3, 0.01).unwrap();
    let n = c.per_period;
    for k in 0..=3 {
        assert!(c.rho[k * n].abs() < 1e-6);
        assert!((c.gamma[k * n] - Vector3::x()).norm() < 1e-6, "pole at period {k}");
    }
    for i in [5, n / 2, n - 5] {
        assert!((c.rho[i + n] + c.rho[i]).abs() < 1e-8);
        assert_eq!(c.sigma[i + n], -c.sigma[i]);
    }
    assert_eq!(sigma(true, 1), -1);
    assert_eq!(sigma(true, 2), 1);
    assert_eq!(sigma(false, 1), 1);
}

#[test]
fn equivariance_under_the_period() {
    for (l, e1) in [(1.1, 1.5), (-0.5, 3.0), (-9.0 / 16.0, 2.0)] {
        let p = Parameters::new(l, e1).unwrap();
        let c = synthesize_curve(&p, 2, 0.01).unwrap();
        let r = rot_x(-psi_hat(&p).unwrap());
        let n = c.per_period;
        let gap = (0..=n).map(|i| (c.gamma[i + n] - r * c.gamma[i]).norm()).fold(0.0, f64::max);
        assert!(gap < 1e-6, "({l}, {e1}): {gap:e}");
    }
}

#[test]
fn catalog_closes_and_counts_agree() {
    let expected_levels =
        [None, None, None, Some((-0.35803, 1e-5)), Some((-1.034733277145246906, 1e-9)), Some((-1.40323, 1e-5))];
    for (r, level) in catalog().into_iter().zip(expected_levels) {
        let (p, spec) = (r.params, r.spec);
        let c = synthesize_curve(&p, spec.n, 0.01).unwrap();
        let gap = (c.gamma[c.gamma.len() - 1] - c.gamma[0]).norm();
        assert!(gap < 1e-6, "{}/{} gap {gap:e}", spec.m, spec.n);
        let report = invariant_report(&p, spec, &c).unwrap();
        assert_eq!(report.symmetry_order, spec.n);
        let clusters = geometric_self_intersections(&c, SweepOptions::default()).unwrap();
        let sweep = sweep_counts(&clusters);
        assert_eq!(
            report.total_self_intersections() as usize,
            sweep.double_points + sweep.multiple_points,
            "{}/{}",
            spec.m,
            spec.n
        );
        match p.region {
            Region::NegativeType => {
                assert_eq!(report.linking_number, Some((spec.n - spec.m) as i64));
                assert_eq!(report.ordinary_double_points, (spec.n * (spec.n - spec.m - 1)) as u64);
                assert_eq!(report.tangential_double_points, 0);
            }
            Region::PositiveType => {
                assert_eq!(report.linking_number, Some(-(spec.m as i64)));
                assert!(report.ordinary_double_points >= (spec.n * spec.m) as u64);
                let (want, tol) = level.unwrap();
                assert!((report.theta_extremum.unwrap() * spec.n as f64 / PI - want).abs() < tol);
            }
            Region::Exceptional => {
                assert_eq!(report.turning_number, Some((spec.n - spec.m) as i64));
                assert_eq!(report.pole_multiplicity, spec.n);
                assert_eq!(report.axis_crossings, spec.n);
                assert_eq!(sweep.max_multiplicity, spec.n as usize);
            }
        }
    }
}

#[test]
fn positive_subcases() {
    let sub = |m, n| {
        let r = closure(-0.5, m, n);
        let c = synthesize_curve(&r.params, n, 0.01).unwrap();
        invariant_report(&r.params, r.spec, &c).unwrap()
    };
    let a = sub(3, 8);
    assert_eq!(a.positive_subcase, Some(PositiveSubcase::A));
    assert_eq!(a.ordinary_double_points, 24);
    let b = sub(2, 9);
    assert_eq!(b.positive_subcase, Some(PositiveSubcase::B));
    assert_eq!(b.ordinary_double_points, 36);
    // The extremum at 3/11 sits 0.035 past a level, far from tangency.
    let c = sub(3, 11);
    assert_eq!(c.positive_subcase, Some(PositiveSubcase::B));
    assert_eq!((c.ordinary_double_points, c.tangential_double_points), (55, 0));
}

#[test]
fn exceptional_counts() {
    for (m, n, ordinary) in [(4, 9, 0), (2, 9, 18), (1, 3, 0)] {
        let r = on_locus(m, n);
        let c = synthesize_curve(&r.params, n, 0.01).unwrap();
        let rep = invariant_report(&r.params, r.spec, &c).unwrap();
        assert_eq!(rep.ordinary_double_points, ordinary, "{m}/{n}");
        assert_eq!(rep.linking_number, None);
        assert_eq!(exceptional_turning_number(r.spec), (n - m) as i64);
    }
}

#[test]
fn open_curve_is_rejected() {
    let p = Parameters::new(-0.5, 3.0).unwrap();
    let c = synthesize_curve(&p, 8, 0.01).unwrap();
    assert!(invariant_report(&p, ClosureSpec::new(3, 8).unwrap(), &c).is_err());
}

#[test]
fn frenet_matches_closed_form() {
    for r in [closure(1.1, 2, 5), on_locus(2, 9), on_locus(4, 9)] {
        let p = r.params;
        let f = frenet_integrate(&p, 3, 0.01).unwrap();
        let c = synthesize_curve(&p, 3, 0.01).unwrap();
        let gap = f.gamma.iter().zip(&c.gamma).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(gap < 1e-6, "({}, {}): {gap:e}", p.lambda, p.e1);
        for m in f.frames.as_ref().unwrap() {
            assert!((m.determinant() - 1.0).abs() < 1e-9);
            assert!(orthogonality_residual(m) < 1e-7);
        }
    }
}

#[test]
fn polar_projection_restores_rotation() {
    let m = rot_x(0.4) + Matrix3::from_element(1e-6);
    let q = polar_project(&m);
    assert!(orthogonality_residual(&q) < 1e-14);
    assert!((q - rot_x(0.4)).norm() < 1e-5);
}

#[test]
fn monodromy_of_closures() {
    for r in catalog() {
        let (p, n) = (r.params, r.spec.n);
        let (m, angle) = monodromy(&p).unwrap();
        let ex = Vector3::x();
        assert!((m * ex - ex).norm() < 1e-8 && (m.transpose() * ex - ex).norm() < 1e-8);
        let d = (angle - r.psi_hat).rem_euclid(TAU);
        assert!(d.min(TAU - d) < 1e-7);
        let mut power = Matrix3::<f64>::identity();
        for _ in 0..n {
            power *= m;
        }
        assert!((power - Matrix3::identity()).norm() < n as f64 * 1e-6);
    }
    let (_, angle) = monodromy(&closure(1.1, 2, 5).params).unwrap();
    assert!((angle - 4.0 * PI / 5.0).abs() < 1e-6);
}

#[test]
fn frames_follow_monodromy_powers() {
    let p = closure(1.1, 2, 5).params;
    let f = frenet_integrate(&p, 3, 0.01).unwrap();
    let frames = f.frames.unwrap();
    let (m, _) = monodromy(&p).unwrap();
    let k = 2 * f.per_period;
    for i in [3, 101, f.per_period - 9] {
        assert!((frames[i + k] - m * m * frames[i]).norm() < 1e-5);
    }
    assert!((frames[5 * f.per_period / 3] - frames[0]).norm() > 1e-3);
}

#[test]
fn closure_frames_return() {
    for r in [closure(1.1, 2, 5), on_locus(1, 3)] {
        let f = frenet_integrate(&r.params, r.spec.n, 0.01).unwrap();
        let fr = f.frames.unwrap();
        assert!((fr[fr.len() - 1] - fr[0]).norm() < 1e-5);
    }
}

#[test]
fn momentum_is_conserved() {
    for r in catalog() {
        let p = r.params;
        let f = frenet_integrate(&p, 3, 0.01).unwrap();
        let j = momentum(&f).unwrap();
        assert!(j.drift < 1e-6, "drift {:e}", j.drift);
        assert!((j.mean.norm() - p.xi).abs() < 1e-6);
        assert!((j.mean / j.mean.norm() - Vector3::x()).norm() < 1e-6);
    }
    let p = closure(1.1, 2, 5).params;
    let j = momentum(&synthesize_curve(&p, 3, 0.01).unwrap()).unwrap();
    assert!(j.drift < 1e-6 && (j.mean.norm() - p.xi).abs() < 1e-6);
}

/// On the locus `f = σ√(4ξ²μ² − 1)` crosses zero at every period with the
/// same slope from both sides, of modulus `√(e₂(e₁−e₂)(e₂−e₃)(e₂−e₄)/2)`,
/// which equals one there.
#[test]
fn gluing_is_c1() {
    for (m, n) in [(4, 9), (2, 9), (1, 3)] {
        let p = on_locus(m, n).params;
        let g = gluing_slopes(&p, 1e-4, OdeTol::default()).unwrap();
        assert!((g.left - g.right).abs() < 1e-6, "{m}/{n}: {g:?}");
        assert!((g.left.abs() - g.limit).abs() < 1e-6);
        assert!((g.limit - 1.0).abs() < 1e-9);
    }
    assert!(gluing_slopes(&Parameters::new(-0.5, 3.0).unwrap(), 1e-4, OdeTol::default()).is_err());
}

#[test]
fn grid_uses_even_division() {
    let p = Parameters::new(1.1, 1.5).unwrap();
    let h = grid_step(&p, 0.01).unwrap();
    let n = (period_omega(&p).unwrap() / h).round() as usize;
    assert_eq!(n % 2, 0);
    assert!(h <= 0.01);
    let theta = angular_theta(&p, &mu_samples(&p, 1, 0.01).unwrap(), OdeTol::default()).unwrap();
    assert_eq!(theta[n / 2], 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_curves_are_unit_and_agree(l in -2.0f64..2.0, f in 0.02f64..1.0, t in 0.0f64..1.0) {
        let e1 = eta(l) * (1.0 + f) + 6.0 * t * t;
        let p = Parameters::new(l, e1).unwrap();
        let c = synthesize_curve(&p, 1, 0.02).unwrap();
        for i in 0..c.s.len() {
            prop_assert!((c.gamma[i].norm() - 1.0).abs() < 1e-10);
            prop_assert!((c.height[i].powi(2) + c.rho[i].powi(2) - 1.0).abs() < 1e-10);
        }
        let fr = frenet_integrate(&p, 1, 0.02).unwrap();
        let gap = fr.gamma.iter().zip(&c.gamma).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-6);
    }
}
