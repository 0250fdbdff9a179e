//! The μ-invariant `μ = √κ`: elliptic constants, the inverse function h,
//! the least period ω, the bending energy, ODE samples of μ(s) and the phase
//! curve `y² = −x²Q(x)`.
//!
//! Phase convention: `μ(0) = e₂`, `μ̇(0) = 0`, so `μ(ω/2) = e₁`.

use crate::elliptic::{complete_k_c, complete_pi_c, incomplete_k_sin, incomplete_pi_sin};
use crate::error::{Error, Result};
use crate::ode::{self, OdeTol};
use crate::quad::tanh_sinh;
use crate::roots::Parameters;
use crate::solve::brent;
use nalgebra::Vector2;
use num_complex::Complex64 as C;

pub const DEFAULT_QUAD_TOL: f64 = 1e-13;

/// Constants of the elliptic reduction. Complex when e₃, e₄ are a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticData {
    pub alpha: C,
    pub beta: C,
    pub delta: C,
    pub zeta: C,
    pub zeta_plus: C,
    pub zeta_minus: C,
}

pub fn elliptic_constants(p: &Parameters) -> EllipticData {
    let (e1, e2, e3, e4, xi) = (C::new(p.e1, 0.0), C::new(p.e2, 0.0), p.e3, p.e4, p.xi);
    let alpha = (e2 - e1) / (e2 - e4);
    let beta = 2.0 / ((e1 - e3) * (e2 - e4)).sqrt();
    let delta = (e1 - e2) * (e3 - e4) / ((e1 - e3) * (e2 - e4));
    let zeta = e4 * (e2 - e1) / (e1 * (e2 - e4));
    let zeta_plus = -(e1 - e2) * (2.0 * xi * e4 - 1.0) / ((e2 - e4) * (2.0 * xi * e1 - 1.0));
    let zeta_minus = -(e1 - e2) * (2.0 * xi * e4 + 1.0) / ((e2 - e4) * (2.0 * xi * e1 + 1.0));
    EllipticData { alpha, beta, delta, zeta, zeta_plus, zeta_minus }
}

/// Accepts a complex closed-form value whose imaginary part is round-off.
pub(crate) fn real_part(z: C, what: &str) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Numerical(format!("{what} is not finite: {z}")));
    }
    if z.im.abs() >= 1e-8 * z.re.abs().max(1.0) {
        return Err(Error::Numerical(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `∫_y^{e₁} dx/(x√(−Q(x)))` through the elliptic reduction.
fn tail_closed_form(p: &Parameters, d: &EllipticData, y: f64) -> C {
    let (e1, e2, e4) = (C::new(p.e1, 0.0), C::new(p.e2, 0.0), p.e4);
    let yc = C::new(y, 0.0);
    let s = ((e2 - e4) * (e1 - yc) / ((e1 - e2) * (yc - e4))).sqrt();
    d.beta / e1
        * (d.alpha / d.zeta * incomplete_k_sin(s, d.delta)
            - (d.alpha - d.zeta) / d.zeta * incomplete_pi_sin(d.zeta, s, d.delta))
}

pub fn period_omega(p: &Parameters) -> Result<f64> {
    let d = elliptic_constants(p);
    let w = 2.0 * d.beta / p.e1
        * (d.alpha / d.zeta * complete_k_c(d.delta) - (d.alpha - d.zeta) / d.zeta * complete_pi_c(d.zeta, d.delta));
    real_part(w, "omega")
}

/// `∫_{a}^{b} g(μ) dμ / √(−Q(μ))` for `e₂ ≤ a < b ≤ e₁`, keeping the square-root
/// endpoint factors exact when the limits are the roots themselves.
pub(crate) fn root_integral<G: Fn(f64) -> f64>(p: &Parameters, a: f64, b: f64, g: G, tol: f64) -> Result<f64> {
    let (e1, e2) = (p.e1, p.e2);
    let est = tanh_sinh(
        |mu, da, db| {
            let to_e1 = if b == e1 { db } else { e1 - mu };
            let from_e2 = if a == e2 { da } else { mu - e2 };
            g(mu) / (to_e1 * from_e2 * p.quadratic_factor(mu)).sqrt()
        },
        a,
        b,
        tol,
    )?;
    Ok(est.value)
}

pub fn period_omega_quadrature(p: &Parameters, tol: f64) -> Result<f64> {
    Ok(2.0 * root_integral(p, p.e2, p.e1, |mu| 1.0 / mu, tol)?)
}

fn check_range(y: f64, p: &Parameters) -> Result<()> {
    if !(p.e2..=p.e1).contains(&y) {
        return Err(Error::Domain(format!("h is defined on [{}, {}], got {y}", p.e2, p.e1)));
    }
    Ok(())
}

/// Arc length `s ∈ [0, ω/2]` at which the profile reaches `y`.
pub fn h_inverse(y: f64, p: &Parameters) -> Result<f64> {
    check_range(y, p)?;
    let omega = period_omega(p)?;
    let tail = real_part(tail_closed_form(p, &elliptic_constants(p), y), "h")?;
    Ok(0.5 * omega - tail)
}

pub fn h_inverse_quadrature(y: f64, p: &Parameters, tol: f64) -> Result<f64> {
    check_range(y, p)?;
    if y == p.e2 {
        return Ok(0.0);
    }
    root_integral(p, p.e2, y, |mu| 1.0 / mu, tol)
}

/// The Euler–Lagrange equation as a first-order system in `(μ, μ̇)`; ξ does
/// not appear, it is fixed by the initial state.
pub fn profile_rhs(lambda: f64) -> impl Fn(&Vector2<f64>) -> Vector2<f64> {
    move |y: &Vector2<f64>| {
        let (mu, v) = (y[0], y[1]);
        let mu2 = mu * mu;
        let mu4 = mu2 * mu2;
        Vector2::new(v, (2.0 * v * v + mu2 - 2.0 * lambda * mu4 * mu - mu4 * mu2) / mu)
    }
}

/// `(μ(s), μ̇(s))` for any real s by direct integration from `(e₂, 0)`.
pub fn profile_state(p: &Parameters, s: f64, tol: OdeTol) -> Result<(f64, f64)> {
    let f = profile_rhs(p.lambda);
    let y = ode::advance(&f, 0.0, Vector2::new(p.e2, 0.0), s, tol)?;
    Ok((y[0], y[1]))
}

/// Least period located as the first return of `μ̇` from negative to
/// non-negative values, refined by Brent on the integrated flow.
pub fn period_ode(p: &Parameters, tol: OdeTol) -> Result<f64> {
    let f = profile_rhs(p.lambda);
    let y0 = Vector2::new(p.e2, 0.0);
    let mut horizon = 1.0;
    for _ in 0..40 {
        let path = ode::steps(&f, 0.0, y0, horizon, tol)?;
        let mut seen_negative = false;
        for w in path.windows(2).skip(1) {
            let (ta, ya) = w[0];
            let (tb, yb) = w[1];
            if ya[1] < 0.0 {
                seen_negative = true;
            }
            if seen_negative && ya[1] < 0.0 && yb[1] >= 0.0 {
                let g = |t: f64| match ode::advance(&f, ta, ya, t, tol) {
                    Ok(y) => y[1],
                    Err(_) => f64::NAN,
                };
                return brent(g, ta, tb, 0.0, 0.0);
            }
        }
        horizon *= 2.0;
    }
    Err(Error::Integration("no return of the profile found".into()))
}

/// `μ̇² + μ²Q(μ)`, zero along exact solutions.
pub fn conservation_residual(p: &Parameters, mu: f64, mudot: f64) -> f64 {
    mudot * mudot + mu * mu * p.q(mu)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples {
    pub s: Vec<f64>,
    pub mu: Vec<f64>,
    pub mudot: Vec<f64>,
    pub omega: f64,
    pub lambda: f64,
    pub e1: f64,
    /// Grid points per period; the step is `omega / per_period`.
    pub per_period: usize,
}

impl ProfileSamples {
    pub fn step(&self) -> f64 {
        self.omega / self.per_period as f64
    }
}

/// Even number of grid intervals per period closest to (not coarser than) `step`.
pub fn samples_per_period(omega: f64, step: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let n = (omega / step * (1.0 - 1e-12)).ceil().max(2.0) as usize;
    Ok(n + n % 2)
}

pub fn mu_samples(p: &Parameters, n_periods: u32, step: f64) -> Result<ProfileSamples> {
    mu_samples_with(p, n_periods, step, OdeTol::default())
}

/// Samples of the profile on `[0, n_periods·ω]`. The step is shrunk to `ω/N`
/// with N even so that every half period lands on the grid.
pub fn mu_samples_with(p: &Parameters, n_periods: u32, step: f64, tol: OdeTol) -> Result<ProfileSamples> {
    if n_periods == 0 {
        return Err(Error::Domain("n_periods must be at least 1".into()));
    }
    let omega = period_omega(p)?;
    let per_period = samples_per_period(omega, step)?;
    let h = omega / per_period as f64;
    let total = per_period * n_periods as usize;
    let f = profile_rhs(p.lambda);
    let ys = ode::grid(&f, Vector2::new(p.e2, 0.0), h, total, tol)?;
    Ok(ProfileSamples {
        s: (0..=total).map(|i| i as f64 * h).collect(),
        mu: ys.iter().map(|y| y[0]).collect(),
        mudot: ys.iter().map(|y| y[1]).collect(),
        omega,
        lambda: p.lambda,
        e1: p.e1,
        per_period,
    })
}

/// Total bending energy `∫(μ + λ) ds` over n periods.
pub fn bending_energy(p: &Parameters, n: u32) -> Result<f64> {
    let d = elliptic_constants(p);
    let one = real_part(2.0 * d.beta * complete_k_c(d.delta), "energy")?;
    Ok(n as f64 * (one + p.lambda * period_omega(p)?))
}

pub fn bending_energy_quadrature(p: &Parameters, n: u32, tol: f64) -> Result<f64> {
    let one = 2.0 * root_integral(p, p.e2, p.e1, |_| 1.0, tol)?;
    Ok(n as f64 * (one + p.lambda * period_omega_quadrature(p, tol)?))
}

/// The oval of `y² = −x²Q(x)` in `x > 0`: the upper arc from `(e₂, 0)` to
/// `(e₁, 0)` and back along the lower arc, with Chebyshev spacing in x.
pub fn phase_curve(p: &Parameters, n_points: usize) -> Vec<(f64, f64)> {
    let n = n_points.max(2);
    let upper: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            let half = 0.5 * (p.e1 - p.e2);
            let (from_e2, to_e1) = (half * (1.0 - t.cos()), half * (1.0 + t.cos()));
            let x = if i == n - 1 { p.e1 } else { p.e2 + from_e2 };
            let y = x * p.minus_q_factored(x, to_e1, from_e2).max(0.0).sqrt();
            (x, if i == 0 || i == n - 1 { 0.0 } else { y })
        })
        .collect();
    let mut loop_pts = upper.clone();
    loop_pts.extend(upper.iter().rev().skip(1).map(|&(x, y)| (x, -y)));
    loop_pts
}
