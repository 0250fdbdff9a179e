//! Scalar algebra of the problem: the circle quartic `μ⁴ + 2λμ³ − 1` (η_λ),
//! the exceptional cubic (u_λ), the conservation-law quartic
//! `Q(t) = t⁴ + 4λt³ + 4(λ² − ξ²)t² + 1`, the ξ–e₁ relation, and the region
//! trichotomy of the parameter plane.

use crate::error::{Error, Result};
use crate::solve::{bracket_upward, brent};
use num_complex::Complex64 as C;
use std::fmt;

pub const DEFAULT_REGION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    NegativeType,
    Exceptional,
    PositiveType,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::NegativeType => "negative",
            Region::Exceptional => "exceptional",
            Region::PositiveType => "positive",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The exceptional abscissa u_λ; λ ≥ 0 has no exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UStar {
    Finite(f64),
    Infinity,
}

impl UStar {
    pub fn finite(self) -> Option<f64> {
        match self {
            UStar::Finite(u) => Some(u),
            UStar::Infinity => None,
        }
    }
}

pub fn circle_quartic(lambda: f64, mu: f64) -> f64 {
    mu * mu * mu * (mu + 2.0 * lambda) - 1.0
}

pub fn exceptional_cubic(lambda: f64, e: f64) -> f64 {
    let l2 = lambda * lambda;
    ((4.0 * l2 * e + 8.0 * l2 * lambda) * e - 1.0) * e + 2.0 * lambda
}

/// Curvature-square-root η_λ of the critical circle.
pub fn eta(lambda: f64) -> f64 {
    let f = |mu: f64| circle_quartic(lambda, mu);
    let (lo, hi) = bracket_upward(f, 0.0, 1.0).expect("circle quartic changes sign on (0, inf)");
    brent(f, lo, hi, 0.0, 0.0).expect("bracket verified")
}

pub fn u_star(lambda: f64) -> UStar {
    if lambda >= 0.0 {
        return UStar::Infinity;
    }
    let f = |e: f64| exceptional_cubic(lambda, e);
    let (lo, hi) = bracket_upward(f, 0.0, 1.0).expect("exceptional cubic changes sign on (0, inf)");
    UStar::Finite(brent(f, lo, hi, 0.0, 0.0).expect("bracket verified"))
}

pub fn xi_of(lambda: f64, e1: f64) -> Result<f64> {
    if !(e1 > 0.0) || !e1.is_finite() {
        return Err(Error::Domain(format!("xi requires e1 > 0, got {e1}")));
    }
    Ok(1f64.hypot(e1 * (e1 + 2.0 * lambda)) / (2.0 * e1))
}

/// Infimum of admissible momentum lengths, ξ at the circle.
pub fn eta_hat(lambda: f64) -> f64 {
    let e = eta(lambda);
    1f64.hypot(e * (e + 2.0 * lambda)) / (2.0 * e)
}

pub fn q_poly(lambda: f64, xi: f64, t: C) -> C {
    let c2 = 4.0 * (lambda * lambda - xi * xi);
    ((t + 4.0 * lambda) * t + c2) * t * t + 1.0
}

fn q_poly_deriv(lambda: f64, xi: f64, t: C) -> C {
    let c2 = 4.0 * (lambda * lambda - xi * xi);
    ((4.0 * t + 12.0 * lambda) * t + 2.0 * c2) * t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticRoots {
    pub e2: f64,
    pub e3: C,
    pub e4: C,
}

impl QuarticRoots {
    pub fn is_real(&self) -> bool {
        self.e3.im == 0.0
    }
}

/// Roots of the monic cubic `t³ + a t² + b t + c`: one real root first, then
/// either two real roots or a conjugate pair.
fn cubic_roots(a: f64, b: f64, c: f64) -> [C; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let u = (-q / 2.0 - q.signum() * disc.sqrt()).cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let re = -(u + v) / 2.0 - shift;
        let im = 3f64.sqrt() / 2.0 * (u - v);
        [C::new(u + v - shift, 0.0), C::new(re, im.abs()), C::new(re, -im.abs())]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = if p == 0.0 { 0.0 } else { (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0) };
        let phi = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [
            C::new(r * phi.cos() - shift, 0.0),
            C::new(r * (phi - tau).cos() - shift, 0.0),
            C::new(r * (phi - 2.0 * tau).cos() - shift, 0.0),
        ]
    }
}

fn polish(lambda: f64, xi: f64, mut t: C) -> C {
    for _ in 0..3 {
        let f = q_poly(lambda, xi, t);
        let df = q_poly_deriv(lambda, xi, t);
        if df.norm() == 0.0 {
            break;
        }
        let next = t - f / df;
        if q_poly(lambda, xi, next).norm() < f.norm() {
            t = next;
        } else {
            break;
        }
    }
    t
}

/// The remaining roots of Q once e₁ is known: deflation by `(t − e₁)` and the
/// closed-form cubic, each root polished by Newton on Q itself.
pub fn quartic_roots(lambda: f64, e1: f64) -> Result<QuarticRoots> {
    let eta = eta(lambda);
    if !(e1 > eta) || !e1.is_finite() {
        return Err(Error::Admissibility { lambda, e1, eta });
    }
    let xi = xi_of(lambda, e1)?;
    let c2 = 4.0 * (lambda * lambda - xi * xi);
    let b2 = 4.0 * lambda + e1;
    let b1 = c2 + e1 * b2;
    let b0 = -1.0 / e1;
    let mut roots = cubic_roots(b2, b1, b0).map(|r| polish(lambda, xi, r));
    roots.sort_by(|x, y| y.re.total_cmp(&x.re));
    let real_tol = 1e-12 * e1.max(1.0);
    let e2_idx = roots
        .iter()
        .position(|r| r.im.abs() <= real_tol && r.re > 0.0 && r.re < e1)
        .ok_or(Error::Admissibility { lambda, e1, eta })?;
    let e2 = roots[e2_idx].re;
    let rest: Vec<C> = roots.iter().enumerate().filter(|(i, _)| *i != e2_idx).map(|(_, r)| *r).collect();
    let (e3, e4) = if rest[0].im.abs() <= real_tol && rest[1].im.abs() <= real_tol {
        let (x, y) = (rest[0].re, rest[1].re);
        (C::new(x.max(y), 0.0), C::new(x.min(y), 0.0))
    } else {
        let re = 0.5 * (rest[0].re + rest[1].re);
        let im = 0.5 * (rest[0].im.abs() + rest[1].im.abs());
        (C::new(re, im), C::new(re, -im))
    };
    Ok(QuarticRoots { e2, e3, e4 })
}

pub fn classify(lambda: f64, e1: f64) -> Result<Region> {
    classify_with(lambda, e1, DEFAULT_REGION_TOL)
}

/// Region from the sign of `4λξ + 1`; exceptional within `tol` of zero.
pub fn classify_with(lambda: f64, e1: f64, tol: f64) -> Result<Region> {
    let eta = eta(lambda);
    if !(e1 > eta) {
        return Err(Error::Admissibility { lambda, e1, eta });
    }
    let s = 4.0 * lambda * xi_of(lambda, e1)? + 1.0;
    Ok(if lambda < 0.0 && s.abs() <= tol {
        Region::Exceptional
    } else if s > 0.0 {
        Region::NegativeType
    } else {
        Region::PositiveType
    })
}

/// A point (λ, e₁) of the admissible domain with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub lambda: f64,
    pub e1: f64,
    pub xi: f64,
    pub e2: f64,
    pub e3: C,
    pub e4: C,
    pub region: Region,
}

impl Parameters {
    pub fn new(lambda: f64, e1: f64) -> Result<Self> {
        Self::with_region_tol(lambda, e1, DEFAULT_REGION_TOL)
    }

    pub fn with_region_tol(lambda: f64, e1: f64, tol: f64) -> Result<Self> {
        let roots = quartic_roots(lambda, e1)?;
        let region = classify_with(lambda, e1, tol)?;
        Ok(Parameters { lambda, e1, xi: xi_of(lambda, e1)?, e2: roots.e2, e3: roots.e3, e4: roots.e4, region })
    }

    /// The exceptional point `e₁ = u_λ` for `λ < 0`.
    pub fn exceptional(lambda: f64) -> Result<Self> {
        let u = u_star(lambda)
            .finite()
            .ok_or_else(|| Error::Domain(format!("no exceptional point for lambda = {lambda} >= 0")))?;
        let mut p = Self::new(lambda, u)?;
        p.region = Region::Exceptional;
        Ok(p)
    }

    pub fn chi(&self) -> bool {
        self.region == Region::Exceptional
    }

    pub fn has_real_roots(&self) -> bool {
        self.e3.im == 0.0
    }

    pub fn q(&self, t: f64) -> f64 {
        q_poly(self.lambda, self.xi, C::new(t, 0.0)).re
    }

    /// `−Q(μ) = (e₁ − μ)(μ − e₂)·[(μ − e₃)(μ − e₄)]`, factored so that it stays
    /// accurate next to the simple roots.
    pub fn minus_q_factored(&self, mu: f64, to_e1: f64, from_e2: f64) -> f64 {
        to_e1 * from_e2 * self.quadratic_factor(mu)
    }

    /// `(μ − e₃)(μ − e₄)`, which is positive on `[e₂, e₁]`.
    pub fn quadratic_factor(&self, mu: f64) -> f64 {
        let s = (self.e3 + self.e4).re;
        let p = (self.e3 * self.e4).re;
        mu * mu - s * mu + p
    }

    /// `4λξ + 1`, whose sign separates the two generic regions.
    pub fn locus_gap(&self) -> f64 {
        4.0 * self.lambda * self.xi + 1.0
    }
}
