//! Planar critical curves, kept as a negative control: their curvature is
//! periodic but the curves only close up to a translation.
//!
//! The profile satisfies `μ̇² + μ⁴(μ − e₁)(μ − e₂) = 0`. Comparing with the
//! Euler–Lagrange equation fixes the multiplier and the constant of the
//! conservation law: `λ = −(e₁ + e₂)/4`, `d = (e₁ − e₂)²/16`.

use crate::error::{Error, Result};
use crate::ode::{self, OdeTol};
use crate::quad::tanh_sinh;
use crate::solve::brent;
use nalgebra::{Vector2, Vector3};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarParams {
    pub e1: f64,
    pub e2: f64,
    pub lambda: f64,
    pub d: f64,
}

impl PlanarParams {
    /// Convex parameters `e₁ > e₂ > 0`.
    pub fn new(e1: f64, e2: f64) -> Result<Self> {
        if !(e1 > e2 && e2 > 0.0 && e1.is_finite()) {
            return Err(Error::Domain(format!("convex planar curves need e1 > e2 > 0, got ({e1}, {e2})")));
        }
        Ok(PlanarParams { e1, e2, lambda: -(e1 + e2) / 4.0, d: (e1 - e2).powi(2) / 16.0 })
    }
}

fn check_convex(e1: f64, e2: f64) -> Result<()> {
    PlanarParams::new(e1, e2).map(|_| ())
}

/// `ω = π(e₁ + e₂)/(e₁e₂)^{3/2}`.
pub fn planar_period(e1: f64, e2: f64) -> Result<f64> {
    check_convex(e1, e2)?;
    Ok(PI * (e1 + e2) / (e1 * e2).powf(1.5))
}

/// `∫_{e₂}^{e₁} g(μ) dμ / √((e₁ − μ)(μ − e₂))`.
fn chord_integral(e1: f64, e2: f64, g: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    Ok(tanh_sinh(|mu, da, db| g(mu) / (da * db).sqrt(), e2, e1, tol)?.value)
}

pub fn planar_period_quadrature(e1: f64, e2: f64, tol: f64) -> Result<f64> {
    check_convex(e1, e2)?;
    Ok(2.0 * chord_integral(e1, e2, |mu| 1.0 / (mu * mu), tol)?)
}

/// `½∫₀^ω μ ds = π/√(e₁e₂)`.
pub fn planar_half_mean(e1: f64, e2: f64) -> Result<f64> {
    check_convex(e1, e2)?;
    Ok(PI / (e1 * e2).sqrt())
}

pub fn planar_half_mean_quadrature(e1: f64, e2: f64, tol: f64) -> Result<f64> {
    check_convex(e1, e2)?;
    chord_integral(e1, e2, |mu| 1.0 / mu, tol)
}

/// `γ(ω) − γ(0) = −π(e₁ − e₂)/(e₁e₂)^{3/2}·(1, 0)`.
pub fn planar_displacement(e1: f64, e2: f64) -> Vector2<f64> {
    Vector2::new(-PI * (e1 - e2) / (e1 * e2).powf(1.5), 0.0)
}

/// The displacement assembled from its two quadratures,
/// `√(1/d)·(λω + ½∫₀^ω μ ds, 0)`.
pub fn planar_displacement_quadrature(p: &PlanarParams, tol: f64) -> Result<Vector2<f64>> {
    let w = planar_period_quadrature(p.e1, p.e2, tol)?;
    let half = planar_half_mean_quadrature(p.e1, p.e2, tol)?;
    Ok(Vector2::new((p.lambda * w + half) / p.d.sqrt(), 0.0))
}

/// `(μ, μ̇, x)` with `μ̈ = (2μ̇² + (e₁+e₂)μ⁵/2 − μ⁶)/μ` and `ẋ = λ + μ/2`.
fn planar_rhs(p: PlanarParams) -> impl Fn(&Vector3<f64>) -> Vector3<f64> {
    let s = p.e1 + p.e2;
    move |y: &Vector3<f64>| {
        let (mu, v) = (y[0], y[1]);
        let mu5 = mu.powi(5);
        Vector3::new(v, (2.0 * v * v + 0.5 * s * mu5 - mu5 * mu) / mu, p.lambda + 0.5 * mu)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    pub s: Vec<f64>,
    pub mu: Vec<f64>,
    pub mudot: Vec<f64>,
    pub points: Vec<Vector2<f64>>,
}

/// `γ(s) = √(1/d)·(λs + ½∫₀^s μ, −1/(2μ(s)))` on `[0, span]` with
/// `μ(0) = e₂`; the step is shrunk so that it divides `span`.
pub fn planar_curve(p: &PlanarParams, span: f64, step: f64) -> Result<PlanarCurve> {
    planar_curve_with(p, span, step, OdeTol::default())
}

pub fn planar_curve_with(p: &PlanarParams, span: f64, step: f64, tol: OdeTol) -> Result<PlanarCurve> {
    if !(span > 0.0 && step > 0.0 && span.is_finite()) {
        return Err(Error::Domain(format!("need span > 0 and step > 0, got {span}, {step}")));
    }
    // A ratio within round-off of an integer is taken as that integer.
    let n = (span / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let f = planar_rhs(*p);
    let ys = ode::grid(&f, Vector3::new(p.e2, 0.0, 0.0), h, n, tol)?;
    let scale = 1.0 / p.d.sqrt();
    Ok(PlanarCurve {
        s: (0..=n).map(|i| i as f64 * h).collect(),
        mu: ys.iter().map(|y| y[0]).collect(),
        mudot: ys.iter().map(|y| y[1]).collect(),
        points: ys.iter().map(|y| Vector2::new(y[2], -0.5 / y[0]) * scale).collect(),
    })
}

/// First return of μ̇ to zero from below, found on the ODE flow.
pub fn planar_period_ode(p: &PlanarParams, tol: OdeTol) -> Result<f64> {
    let f = planar_rhs(*p);
    let guess = planar_period(p.e1, p.e2)?;
    let pts = ode::steps(&f, 0.0, Vector3::new(p.e2, 0.0, 0.0), 1.5 * guess, tol)?;
    let k = pts
        .windows(2)
        .position(|w| w[0].0 > 0.0 && w[0].1[1] < 0.0 && w[1].1[1] >= 0.0)
        .ok_or_else(|| Error::Numerical("planar profile did not return within 1.5 periods".into()))?;
    let (a, ya) = pts[k];
    let b = pts[k + 1].0;
    let g = |t: f64| ode::advance(&f, a, ya, t, tol).map(|y| y[1]).unwrap_or(f64::NAN);
    brent(g, a, b, 0.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Inverse of μ where it increases towards its maximum (`s < 0`).
    Plus,
    /// Inverse of μ where it decreases away from its maximum (`s > 0`).
    Minus,
}

fn check_branch(m: f64, e1: f64, e2: f64) -> Result<()> {
    if !(e1 > 0.0 && e2 < 0.0) {
        return Err(Error::Domain(format!("non-convex branch needs e1 > 0 > e2, got ({e1}, {e2})")));
    }
    if !(m > 0.0 && m <= e1) {
        return Err(Error::Domain(format!("branch function is defined for 0 < m <= e1, got {m}")));
    }
    Ok(())
}

/// Arc length at which the non-convex profile, maximal (`= e₁`) at `s = 0`,
/// takes the value `m`. Unbounded as `m → 0⁺`, so μ never returns.
///
/// The radicand `(e₁ − μ)(μ − e₂)` is positive on all of `(e₂, e₁)`, but the
/// integrand has a non-integrable `1/μ²` at the origin, so `m ≤ 0` is rejected.
pub fn planar_h_branch(m: f64, e1: f64, e2: f64, branch: Branch) -> Result<f64> {
    check_branch(m, e1, e2)?;
    let a = e1 * e2.abs();
    let bracket =
        (a * (e1 - m) * (m - e2)).sqrt() - (e1 + e2) * m * (e2.abs() * (e1 - m) / (e1 * (m - e2))).sqrt().atanh();
    let magnitude = bracket / (a.powf(1.5) * m);
    Ok(match branch {
        Branch::Plus => -magnitude,
        Branch::Minus => magnitude,
    })
}

pub fn planar_h_branch_quadrature(m: f64, e1: f64, e2: f64, branch: Branch, tol: f64) -> Result<f64> {
    check_branch(m, e1, e2)?;
    if m == e1 {
        return Ok(0.0);
    }
    let est = tanh_sinh(|mu, _, db| 1.0 / (mu * mu * (db * (mu - e2)).sqrt()), m, e1, tol)?;
    Ok(match branch {
        Branch::Plus => -est.value,
        Branch::Minus => est.value,
    })
}
