//! The jump Ψ (rotation of the curve about its axis over one period), its
//! regularization Ψ̂, the boundary function p(λ), and the closure solver
//! `Ψ̂ = 2πm/n`.

use crate::elliptic::carlson::{rf, rj};
use crate::error::{Error, Result};
use crate::profile::{elliptic_constants, real_part, DEFAULT_QUAD_TOL};
use crate::quad::gauss_kronrod;
use crate::roots::{eta, Parameters, Region};
use crate::solve::brent;
use num_complex::Complex64 as C;
use std::f64::consts::{PI, TAU};

/// `p(λ) = −√((1+η⁴)/(3+η⁴))`.
pub fn p_of_lambda(lambda: f64) -> f64 {
    let e4 = eta(lambda).powi(4);
    -((1.0 + e4) / (3.0 + e4)).sqrt()
}

/// The same function written through `λη³` instead of `η⁴`.
pub fn p_of_lambda_alt(lambda: f64) -> f64 {
    let le3 = lambda * eta(lambda).powi(3);
    -((1.0 - le3) / (2.0 - le3)).sqrt()
}

/// Characteristic numbers guaranteed to close for this λ.
pub fn admissible_interval(lambda: f64) -> (f64, f64) {
    (1.0 + p_of_lambda(lambda), 0.5)
}

/// `2ξt − 1` for a root t of Q, via `4ξ²t² − 1 = t²(t + 2λ)²`.
fn two_xi_t_minus_one(p: &Parameters, t: f64) -> f64 {
    let w = t * (t + 2.0 * p.lambda);
    w * w / (2.0 * p.xi * t + 1.0)
}

/// Complete third-kind integral with the complement `1 − ζ` supplied separately.
fn pi_complement(zeta: C, zeta_c: C, delta: C) -> C {
    let (x, y, z) = (C::new(0.0, 0.0), 1.0 - delta, C::new(1.0, 0.0));
    rf(x, y, z) + zeta / 3.0 * rj(x, y, z, zeta_c)
}

/// The three terms `(I, II, III)` of the closed form. II is left at zero on
/// the locus, where its characteristic reaches 1.
fn psi_terms(p: &Parameters) -> (C, C, C) {
    let d = elliptic_constants(p);
    let (l, xi, e1, e2) = (p.lambda, p.xi, p.e1, p.e2);
    let e4 = p.e4;
    let gap = p.locus_gap();
    let a1m = two_xi_t_minus_one(p, e1);
    let a1p = 2.0 * e1 * xi + 1.0;
    let zp_c = (e1 - e4) * two_xi_t_minus_one(p, e2) / ((e2 - e4) * a1m);
    let k = crate::elliptic::complete_k_c(d.delta);
    let pi_m = pi_complement(d.zeta_minus, 1.0 - d.zeta_minus, d.delta);
    let four_pi_xi = 4.0 * PI * xi;
    let i = d.beta / four_pi_xi
        * (-2.0 + d.alpha * (-gap / (d.zeta_plus * a1m) + (1.0 - 4.0 * l * xi) / (d.zeta_minus * a1p)))
        * k;
    let ii = if p.chi() {
        C::new(0.0, 0.0)
    } else {
        d.beta * (d.alpha - d.zeta_plus) * gap / (four_pi_xi * d.zeta_plus * a1m)
            * pi_complement(d.zeta_plus, zp_c, d.delta)
    };
    let iii = d.beta * (d.alpha - d.zeta_minus) * (4.0 * l * xi - 1.0) / (four_pi_xi * d.zeta_minus * a1p) * pi_m;
    (i, ii, iii)
}

/// `Ψ = 2π(I + (1−χ)II + III)`, χ the exceptional indicator of `p.region`.
pub fn psi_closed_form(p: &Parameters) -> Result<f64> {
    let (i, ii, iii) = psi_terms(p);
    let total = i + ii + iii;
    real_part(TAU * total, "psi")
}

/// `Ψ = 4ξ∫_{e₂}^{e₁} μ(μ+2λ)/((1−4ξ²μ²)√(−Q)) dμ`, integrated in the angle
/// `μ = e₂ + (e₁−e₂)(1−cos φ)/2` that absorbs both square-root endpoints.
pub fn psi_quadrature(p: &Parameters, tol: f64) -> Result<f64> {
    if p.region == Region::Exceptional {
        return Err(Error::ExceptionalPath);
    }
    let (l, xi, e1, e2) = (p.lambda, p.xi, p.e1, p.e2);
    // Near the locus both μ + 2λ and 2ξμ − 1 nearly vanish at μ = e₂; build
    // them from μ − e₂ and the exact root identity to keep them accurate.
    let base = two_xi_t_minus_one(p, e2);
    let shift = e2 + 2.0 * l;
    let est = gauss_kronrod(
        |phi| {
            let half = (0.5 * phi).sin();
            let d = (e1 - e2) * half * half;
            let mu = e2 + d;
            -mu * (shift + d) / ((base + 2.0 * xi * d) * (1.0 + 2.0 * xi * mu) * p.quadratic_factor(mu).sqrt())
        },
        0.0,
        PI,
        tol,
    )?;
    Ok(4.0 * xi * est.value)
}

/// Ψ by the closed form, regularized on the exceptional locus (`+π`) and
/// reduced to `[0, 2π)`.
pub fn psi_hat(p: &Parameters) -> Result<f64> {
    let psi = psi_closed_form(p)?;
    Ok(regularize(psi, p.region))
}

pub fn regularize(psi: f64, region: Region) -> f64 {
    let shifted = if region == Region::Exceptional { psi + PI } else { psi };
    let r = shifted.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureSpec {
    pub m: u32,
    pub n: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ClosureSpec {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || m >= n || gcd(m, n) != 1 {
            return Err(Error::InvalidSpec { m, n });
        }
        Ok(ClosureSpec { m, n })
    }

    pub fn q(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// The sufficient condition `1 + p(λ) < q < 1/2`.
    pub fn guaranteed_for(&self, lambda: f64) -> bool {
        let (lo, hi) = admissible_interval(lambda);
        lo < self.q() && self.q() < hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureResult {
    pub params: Parameters,
    pub spec: ClosureSpec,
    pub psi_hat: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    pub e1_max: f64,
    pub points: usize,
}

impl Default for Scan {
    fn default() -> Self {
        Scan { e1_max: 1e3, points: 400 }
    }
}

pub const CLOSURE_TOL: f64 = 1e-10;

/// Log-spaced abscissae in `e₁ − η_λ` from `η·10⁻⁶` to `e1_max − η`.
pub fn scan_grid(lambda: f64, scan: Scan) -> Result<Vec<f64>> {
    let et = eta(lambda);
    if !(scan.e1_max > et * (1.0 + 1e-6)) || scan.points < 2 {
        return Err(Error::Domain(format!("scan needs e1_max > eta = {et} and at least two points, got {scan:?}")));
    }
    let (lo, hi) = ((et * 1e-6).ln(), (scan.e1_max - et).ln());
    Ok((0..scan.points)
        .map(|k| {
            if k + 1 == scan.points {
                scan.e1_max
            } else {
                et + (lo + (hi - lo) * k as f64 / (scan.points - 1) as f64).exp()
            }
        })
        .collect())
}

/// Brackets of a sign change of `g` along `xs`, skipping the `2π` wraps of Ψ̂.
fn brackets(xs: &[f64], gs: &[f64]) -> Vec<(f64, f64)> {
    xs.windows(2)
        .zip(gs.windows(2))
        .filter(|(_, g)| g[0].is_finite() && g[1].is_finite())
        .filter(|(_, g)| (g[0] <= 0.0) != (g[1] <= 0.0) && (g[1] - g[0]).abs() < PI)
        .map(|(x, _)| (x[0], x[1]))
        .collect()
}

fn residual_fn(lambda: f64, q: f64) -> impl Fn(f64) -> f64 {
    move |e1| match Parameters::new(lambda, e1).and_then(|p| psi_hat(&p)) {
        Ok(v) => v - TAU * q,
        Err(_) => f64::NAN,
    }
}

/// Every root of `Ψ̂_λ(e₁) = 2πq` bracketed by the scan, refined to machine
/// precision in e₁. An empty list means q is not attained in the scan range.
pub fn solve_closure(lambda: f64, spec: ClosureSpec, scan: Scan) -> Result<Vec<ClosureResult>> {
    let spec = ClosureSpec::new(spec.m, spec.n)?;
    let q = spec.q();
    let xs = scan_grid(lambda, scan)?;
    let g = residual_fn(lambda, q);
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for (a, b) in brackets(&xs, &gs) {
        let e1 = brent(&g, a, b, 0.0, 0.0)?;
        let params = Parameters::new(lambda, e1)?;
        let ph = psi_hat(&params)?;
        out.push(ClosureResult { params, spec, psi_hat: ph, residual: (ph - TAU * q).abs(), bracket: (a, b) });
    }
    Ok(out)
}

/// Closure on the exceptional locus: λ is the unknown and `e₁ = u_λ`.
/// The scan is log-spaced in `|λ|` over `[lambda_min, lambda_max]` (both negative).
pub fn solve_exceptional_closure(
    spec: ClosureSpec,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
) -> Result<Vec<ClosureResult>> {
    let spec = ClosureSpec::new(spec.m, spec.n)?;
    if !(lambda_min < lambda_max && lambda_max < 0.0) || points < 2 {
        return Err(Error::Domain(format!(
            "exceptional scan needs lambda_min < lambda_max < 0, got [{lambda_min}, {lambda_max}]"
        )));
    }
    let q = spec.q();
    let g = |l: f64| match Parameters::exceptional(l).and_then(|p| psi_hat(&p)) {
        Ok(v) => v - TAU * q,
        Err(_) => f64::NAN,
    };
    let (lo, hi) = ((-lambda_max).ln(), (-lambda_min).ln());
    let xs: Vec<f64> = (0..points).map(|k| -(lo + (hi - lo) * k as f64 / (points - 1) as f64).exp()).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for (a, b) in brackets(&xs, &gs) {
        let l = brent(g, a, b, 0.0, 0.0)?;
        let params = Parameters::exceptional(l)?;
        let ph = psi_hat(&params)?;
        out.push(ClosureResult { params, spec, psi_hat: ph, residual: (ph - TAU * q).abs(), bracket: (a, b) });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRow {
    pub e1: f64,
    pub psi: f64,
    pub psi_hat: f64,
    pub region: Region,
}

pub fn period_map_table(lambda: f64, grid: &[f64]) -> Result<Vec<PeriodRow>> {
    grid.iter()
        .map(|&e1| {
            let p = Parameters::new(lambda, e1)?;
            let psi = psi_closed_form(&p)?;
            Ok(PeriodRow { e1, psi, psi_hat: regularize(psi, p.region), region: p.region })
        })
        .collect()
}

/// Ψ by quadrature off the locus, by the closed form on it.
pub fn psi_any(p: &Parameters) -> Result<f64> {
    match psi_quadrature(p, DEFAULT_QUAD_TOL) {
        Err(Error::ExceptionalPath) => psi_closed_form(p),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_forms_agree() {
        for l in [-2.0, -0.5, 0.0, 0.7, 3.0] {
            assert!((p_of_lambda(l) - p_of_lambda_alt(l)).abs() < 1e-12);
        }
        assert!((p_of_lambda(0.0) + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(ClosureSpec::new(2, 4).is_err());
        assert!(ClosureSpec::new(0, 3).is_err());
        assert!(ClosureSpec::new(3, 3).is_err());
        assert!(ClosureSpec::new(3, 8).is_ok());
    }

    #[test]
    fn regularization_range() {
        assert_eq!(regularize(-TAU, Region::NegativeType), 0.0);
        assert!((regularize(-PI / 2.0, Region::Exceptional) - PI / 2.0).abs() < 1e-15);
    }
}
