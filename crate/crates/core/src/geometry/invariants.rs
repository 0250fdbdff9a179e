//! Topological invariants of a closed curve, counted from the angular
//! function over one half-period.
//!
//! Between `ω/2` and `ω` the angular function runs from 0 to `Ψ/2`, possibly
//! through one interior extremum where `μ = −2λ`. Every crossing of a level
//! `πj/n` on that arc is one orbit of `n` double points under the dihedral
//! symmetry; a level touched exactly at the extremum gives tangential points.

use super::{theta_rate, CurveSamples};
use crate::error::{Error, Result};
use crate::period::{psi_closed_form, regularize, ClosureSpec};
use crate::profile::{root_integral, DEFAULT_QUAD_TOL};
use crate::roots::{Parameters, Region};
use std::f64::consts::{PI, TAU};

/// Residual `|Ψ̂ − 2πq|` (mod 2π) above which a curve counts as open.
pub const CLOSED_TOL: f64 = 1e-8;
/// Distance of the extremal angle from a level below which the touching
/// points are reported as tangential.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositiveSubcase {
    /// The extremum stays above the first level: `nm` points.
    A,
    /// `k ≥ 1` levels lie beyond the extremum: `n(m + 2k)` points.
    B,
    /// As B, and the extremum sits exactly on the next level.
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub region: Region,
    pub m: u32,
    pub n: u32,
    pub symmetry_order: u32,
    pub linking_number: Option<i64>,
    pub turning_number: Option<i64>,
    pub ordinary_double_points: u64,
    pub tangential_double_points: u64,
    pub pole_multiplicity: u32,
    pub axis_crossings: u32,
    /// `θ(ω) = Ψ/2`, snapped to the exact closure value.
    pub theta_end: f64,
    /// Interior extremum of θ on `(ω/2, ω)`, if any.
    pub theta_extremum: Option<f64>,
    /// `n·|θ_extremum|/π`; integer values mean tangency.
    pub extremum_level: Option<f64>,
    pub positive_subcase: Option<PositiveSubcase>,
    /// `−n·(θ(ω) − θ(ω/2))/π` read off the sampled curve, before rounding.
    pub linking_raw: Option<f64>,
    pub closure_residual: f64,
}

/// θ at the sole interior critical point `μ = −2λ`, when it lies in `(e₂, e₁)`.
pub fn theta_extremum(p: &Parameters) -> Result<Option<f64>> {
    let mu_star = -2.0 * p.lambda;
    if p.region == Region::Exceptional || !(p.e2 < mu_star && mu_star < p.e1) {
        return Ok(None);
    }
    let rate = theta_rate(p);
    root_integral(p, mu_star, p.e1, |mu| rate(mu) / mu, DEFAULT_QUAD_TOL).map(Some)
}

/// Number of levels `πj/n` strictly between `a` and `b`; ends within
/// rounding of a level count as on it.
fn levels_between(a: f64, b: f64, n: u32) -> u64 {
    const EPS: f64 = 1e-9;
    let (lo, hi) = (a.min(b) * n as f64 / PI, a.max(b) * n as f64 / PI);
    let first = (lo + EPS).floor() as i64 + 1;
    let last = (hi - EPS).ceil() as i64 - 1;
    (last - first + 1).max(0) as u64
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Turning number of the planar projection for a closed curve on the locus,
/// from `q − 1/2 = m̂/n̂` in lowest terms.
pub fn exceptional_turning_number(spec: ClosureSpec) -> i64 {
    let (num, den) = (2 * spec.m as i64 - spec.n as i64, 2 * spec.n as i64);
    let g = gcd(num, den);
    let (mh, nh) = (num / g, den / g);
    if nh % 2 == 1 {
        return nh - 2 * mh;
    }
    let k = nh / 2;
    if k % 2 == 1 {
        (k - mh) / 2
    } else {
        k - mh
    }
}

fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Invariants of the closed curve with parameters `p` and rotation index
/// `spec`. `curve` must cover at least one period; it supplies the sampled
/// linking number.
pub fn invariant_report(p: &Parameters, spec: ClosureSpec, curve: &CurveSamples) -> Result<InvariantReport> {
    let spec = ClosureSpec::new(spec.m, spec.n)?;
    let (m, n) = (spec.m, spec.n);
    let psi = psi_closed_form(p)?;
    let target = TAU * spec.q();
    let residual = wrapped_distance(regularize(psi, p.region), target);
    if residual > CLOSED_TOL {
        return Err(Error::NotClosed(residual));
    }
    let snapped = psi + (target - regularize(psi, p.region) + PI).rem_euclid(TAU) - PI;
    let theta_end = 0.5 * snapped;
    let ext = theta_extremum(p)?;

    let mut tangential = 0;
    let ordinary_half = match ext {
        None => levels_between(0.0, theta_end, n),
        Some(mut t) => {
            let lvl = t.abs() * n as f64 / PI;
            if (lvl - lvl.round()).abs() * PI / (n as f64) < TANGENCY_TOL && lvl.round() >= 1.0 {
                tangential = n as u64;
                t = t.signum() * lvl.round() * PI / n as f64;
            }
            levels_between(0.0, t, n) + levels_between(t, theta_end, n)
        }
    };
    let ordinary = n as u64 * ordinary_half;

    let positive_subcase = match (p.region, ext) {
        (Region::PositiveType, Some(t)) => {
            let k = levels_between(0.0, t, n);
            Some(if tangential > 0 {
                PositiveSubcase::C
            } else if k == 0 {
                PositiveSubcase::A
            } else {
                PositiveSubcase::B
            })
        }
        _ => None,
    };

    let per = curve.per_period;
    if curve.theta.len() <= per {
        return Err(Error::Domain("invariants need at least one sampled period".into()));
    }
    let exceptional = p.region == Region::Exceptional;
    let raw = -(n as f64) * (curve.theta[per] - curve.theta[per / 2]) / PI;

    Ok(InvariantReport {
        region: p.region,
        m,
        n,
        symmetry_order: n,
        linking_number: (!exceptional).then(|| raw.round() as i64),
        turning_number: exceptional.then(|| exceptional_turning_number(spec)),
        ordinary_double_points: ordinary,
        tangential_double_points: tangential,
        pole_multiplicity: if exceptional { n } else { 0 },
        axis_crossings: if exceptional { n } else { 0 },
        theta_end,
        theta_extremum: ext,
        extremum_level: ext.map(|t| t.abs() * n as f64 / PI),
        positive_subcase,
        linking_raw: (!exceptional).then_some(raw),
        closure_residual: residual,
    })
}

impl InvariantReport {
    /// Ordinary plus tangential double points, and the pole counted once.
    pub fn total_self_intersections(&self) -> u64 {
        self.ordinary_double_points + self.tangential_double_points + u64::from(self.pole_multiplicity > 0)
    }
}
