//! Legendre elliptic integrals of the first, second and third kind, and the
//! Jacobi amplitude.
//!
//! The parameter δ is the usual `m` (so `K(δ) = ∫₀^{π/2} dθ/√(1−δ sin²θ)`),
//! and the characteristic ζ enters as `1/(1−ζ sin²θ)`. Integrals are reduced
//! to Carlson forms; the complex entry points (`*_c`, `*_sin`) serve the
//! closed forms whose constants become complex when the quartic has a
//! conjugate root pair.

pub mod carlson;

use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_PI_2;

fn cr(x: f64) -> C {
    C::new(x, 0.0)
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

pub fn complete_k(delta: f64) -> Result<f64> {
    if !(delta < 1.0) {
        return Err(domain(format!("K(delta) requires delta < 1, got {delta}")));
    }
    Ok(carlson::rf(cr(0.0), cr(1.0 - delta), cr(1.0)).re)
}

pub fn complete_e(delta: f64) -> Result<f64> {
    if !(delta <= 1.0) {
        return Err(domain(format!("E(delta) requires delta <= 1, got {delta}")));
    }
    if delta == 1.0 {
        return Ok(1.0);
    }
    let (x, y, z) = (cr(0.0), cr(1.0 - delta), cr(1.0));
    Ok((carlson::rf(x, y, z) - delta / 3.0 * carlson::rd(x, y, z)).re)
}

pub fn complete_pi(zeta: f64, delta: f64) -> Result<f64> {
    if !(delta < 1.0) || !(zeta < 1.0) {
        return Err(domain(format!("Pi(zeta, delta) requires zeta < 1 and delta < 1, got ({zeta}, {delta})")));
    }
    Ok(complete_pi_c(cr(zeta), cr(delta)).re)
}

pub fn incomplete_k(phi: f64, delta: f64) -> Result<f64> {
    let s = check_amplitude(phi)?;
    if !(delta * s * s < 1.0) {
        return Err(domain(format!("K(phi, delta) requires delta sin^2(phi) < 1, got ({phi}, {delta})")));
    }
    let c = phi.cos();
    Ok(s * carlson::rf(cr(c * c), cr(1.0 - delta * s * s), cr(1.0)).re)
}

pub fn incomplete_pi(zeta: f64, phi: f64, delta: f64) -> Result<f64> {
    let s = check_amplitude(phi)?;
    let s2 = s * s;
    if !(delta * s2 < 1.0) || !(zeta * s2 < 1.0) {
        return Err(domain(format!(
            "Pi(zeta, phi, delta) requires delta sin^2(phi) < 1 and zeta sin^2(phi) < 1, got ({zeta}, {phi}, {delta})"
        )));
    }
    let c = phi.cos();
    let (x, y, z) = (cr(c * c), cr(1.0 - delta * s2), cr(1.0));
    let rf = carlson::rf(x, y, z);
    let rj = carlson::rj(x, y, z, cr(1.0 - zeta * s2));
    Ok(s * rf.re + zeta * s * s2 / 3.0 * rj.re)
}

/// A few ulps past π/2 are accepted and clamped, so `am(K(δ), δ)` round-trips.
fn check_amplitude(phi: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2 * (1.0 + 4.0 * f64::EPSILON)).contains(&phi) {
        return Err(domain(format!("amplitude must lie in [0, pi/2], got {phi}")));
    }
    Ok(phi.min(FRAC_PI_2).sin())
}

/// Jacobi amplitude by the descending Landen (AGM) scheme, valid for every
/// real `u` and every `delta < 1`.
pub fn jacobi_am(u: f64, delta: f64) -> Result<f64> {
    if !(delta < 1.0) {
        return Err(domain(format!("am(u, delta) requires delta < 1, got {delta}")));
    }
    if !u.is_finite() {
        return Err(domain(format!("am(u, delta) requires finite u, got {u}")));
    }
    if delta == 0.0 {
        return Ok(u);
    }
    let mut a = 1.0;
    let mut b = (1.0 - delta).sqrt();
    let mut steps: Vec<(f64, f64)> = Vec::new();
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        steps.push((a, c));
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    let mut phi = 2f64.powi(steps.len() as i32) * a * u;
    for &(an, cn) in steps.iter().rev() {
        phi = 0.5 * (phi + (cn / an * phi.sin()).asin());
    }
    Ok(phi)
}

pub fn jacobi_sn(u: f64, delta: f64) -> Result<f64> {
    Ok(jacobi_am(u, delta)?.sin())
}

pub fn complete_k_c(delta: C) -> C {
    carlson::rf(cr(0.0), 1.0 - delta, cr(1.0))
}

pub fn complete_pi_c(zeta: C, delta: C) -> C {
    let (x, y, z) = (cr(0.0), 1.0 - delta, cr(1.0));
    carlson::rf(x, y, z) + zeta / 3.0 * carlson::rj(x, y, z, 1.0 - zeta)
}

/// Incomplete first-kind integral written in terms of `s = sin φ`, so that it
/// continues analytically to complex `s` and `delta`.
pub fn incomplete_k_sin(s: C, delta: C) -> C {
    let s2 = s * s;
    s * carlson::rf(1.0 - s2, 1.0 - delta * s2, cr(1.0))
}

pub fn incomplete_pi_sin(zeta: C, s: C, delta: C) -> C {
    let s2 = s * s;
    let (x, y, z) = (1.0 - s2, 1.0 - delta * s2, cr(1.0));
    s * carlson::rf(x, y, z) + zeta * s * s2 / 3.0 * carlson::rj(x, y, z, 1.0 - zeta * s2)
}
