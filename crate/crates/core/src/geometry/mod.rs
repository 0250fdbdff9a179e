//! The spherical curve: synthesis from the profile by the angular, radial and
//! height functions, the Frenet frame flow, the monodromy and the momentum.
//!
//! Arc length runs over `[0, n·ω]` with `μ(0) = e₂`; the angular function is
//! based at `ω/2`, where `μ = e₁` and the standard initial frame sits.

pub mod intersect;
pub mod invariants;

use crate::error::{Error, Result};
use crate::ode::{self, OdeTol};
use crate::profile::{mu_samples_with, period_omega, profile_rhs, samples_per_period, ProfileSamples};
use crate::roots::{Parameters, Region};
use nalgebra::{Matrix3, SVector, Vector2, Vector3};

pub use intersect::{
    geometric_self_intersections, sweep_counts, Crossing, IntersectionCluster, SweepCounts, SweepOptions,
};
pub use invariants::{exceptional_turning_number, invariant_report, theta_extremum, InvariantReport, PositiveSubcase};

/// `θ'` as a function of μ. Off the locus the vanishing factors `μ + 2λ` and
/// `2ξμ − 1` are assembled from `μ − e₂` so they stay accurate near `e₂`; on
/// the locus the common factor is cancelled.
pub fn theta_rate(p: &Parameters) -> impl Fn(f64) -> f64 {
    let (l, xi, e2) = (p.lambda, p.xi, p.e2);
    let exceptional = p.region == Region::Exceptional;
    let base = {
        let w = e2 * (e2 + 2.0 * l);
        w * w / (2.0 * xi * e2 + 1.0)
    };
    let shift = e2 + 2.0 * l;
    move |mu: f64| {
        if exceptional {
            -2.0 * xi * mu * mu * 4.0 * l * l / (mu - 2.0 * l)
        } else {
            let d = mu - e2;
            -2.0 * xi * mu * mu * (shift + d) / ((base + 2.0 * xi * d) * (1.0 + 2.0 * xi * mu))
        }
    }
}

/// `(2ξμ − 1)(2ξμ + 1)`, the radicand of the radial function.
///
/// On the locus the radicand vanishes at `e₂`, where a square root would
/// magnify the error of μ. In the lower half of the range `μ − e₂` is then
/// taken from the first integral, `μ̇² = μ²(e₁ − μ)(μ − e₂)(μ − e₃)(μ − e₄)`,
/// which is accurate relative to its own size.
fn radial_radicand(p: &Parameters, mu: f64, mudot: f64) -> f64 {
    let (l, xi, e2) = (p.lambda, p.xi, p.e2);
    if p.region == Region::Exceptional {
        let d = if mu - e2 < 0.5 * (p.e1 - e2) {
            mudot * mudot / (mu * mu * (p.e1 - mu) * p.quadratic_factor(mu))
        } else {
            mu - e2
        };
        return 2.0 * xi * d * (2.0 * xi * mu + 1.0);
    }
    let w = e2 * (e2 + 2.0 * l);
    let base = w * w / (2.0 * xi * e2 + 1.0);
    (base + 2.0 * xi * (mu - e2)) * (2.0 * xi * mu + 1.0)
}

/// Angular function on the profile grid, normalized so that `θ(ω/2) = 0`.
pub fn angular_theta(p: &Parameters, profile: &ProfileSamples, tol: OdeTol) -> Result<Vec<f64>> {
    let rate = theta_rate(p);
    let rhs = profile_rhs(p.lambda);
    let f = |y: &SVector<f64, 3>| {
        let d = rhs(&Vector2::new(y[0], y[1]));
        SVector::<f64, 3>::new(d[0], d[1], rate(y[0]))
    };
    let n = profile.s.len() - 1;
    let ys = ode::grid(&f, SVector::<f64, 3>::new(p.e2, 0.0, 0.0), profile.step(), n, tol)?;
    let base = ys[profile.per_period / 2][2];
    Ok(ys.iter().map(|y| y[2] - base).collect())
}

/// The sign σ on the `k`-th period: `+1`, or `(−1)^k` on the exceptional locus.
pub fn sigma(chi: bool, period_index: usize) -> i8 {
    if chi && period_index % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Radial function, height function and σ on the profile grid.
pub fn radial_height(p: &Parameters, profile: &ProfileSamples) -> Result<(Vec<f64>, Vec<f64>, Vec<i8>)> {
    let chi = p.chi();
    let mut rho = Vec::with_capacity(profile.mu.len());
    let mut height = Vec::with_capacity(profile.mu.len());
    let mut sig = Vec::with_capacity(profile.mu.len());
    for (i, &mu) in profile.mu.iter().enumerate() {
        let r2 = radial_radicand(p, mu, profile.mudot[i]);
        if r2 < -1e-10 {
            return Err(Error::Numerical(format!("4xi^2 mu^2 - 1 = {r2:e} < 0 at sample {i}")));
        }
        let sg = sigma(chi, i / profile.per_period);
        let two_xi_mu = 2.0 * p.xi * mu;
        rho.push(sg as f64 * r2.max(0.0).sqrt() / two_xi_mu);
        height.push(1.0 / two_xi_mu);
        sig.push(sg);
    }
    Ok((rho, height, sig))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    pub s: Vec<f64>,
    pub gamma: Vec<Vector3<f64>>,
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub height: Vec<f64>,
    pub sigma: Vec<i8>,
    pub mu: Vec<f64>,
    pub mudot: Vec<f64>,
    pub frames: Option<Vec<Matrix3<f64>>>,
    pub params: Parameters,
    pub chi: bool,
    pub omega: f64,
    pub per_period: usize,
    pub n_periods: u32,
}

impl CurveSamples {
    pub fn step(&self) -> f64 {
        self.omega / self.per_period as f64
    }
}

pub fn synthesize_curve(p: &Parameters, n_periods: u32, step: f64) -> Result<CurveSamples> {
    synthesize_curve_with(p, n_periods, step, OdeTol::default())
}

/// `γ = (h, −ρ cos θ, ρ sin θ)` on `[0, n_periods·ω]`.
pub fn synthesize_curve_with(p: &Parameters, n_periods: u32, step: f64, tol: OdeTol) -> Result<CurveSamples> {
    let profile = mu_samples_with(p, n_periods, step, tol)?;
    let theta = angular_theta(p, &profile, tol)?;
    let (rho, height, sigma) = radial_height(p, &profile)?;
    let gamma =
        (0..theta.len()).map(|i| Vector3::new(height[i], -rho[i] * theta[i].cos(), rho[i] * theta[i].sin())).collect();
    Ok(CurveSamples {
        s: profile.s,
        gamma,
        theta,
        rho,
        height,
        sigma,
        mu: profile.mu,
        mudot: profile.mudot,
        frames: None,
        params: *p,
        chi: p.chi(),
        omega: profile.omega,
        per_period: profile.per_period,
        n_periods,
    })
}

/// The standard frame at `s = ω/2`: `(γ, γ̇, γ × γ̇)` as columns.
pub fn initial_frame(p: &Parameters) -> Matrix3<f64> {
    let a = p.e1 * (p.e1 + 2.0 * p.lambda);
    let r = 1f64.hypot(a);
    let e1 = Vector3::new(1.0 / r, -a / r, 0.0);
    let e2 = Vector3::new(0.0, 0.0, -1.0);
    Matrix3::from_columns(&[e1, e2, e1.cross(&e2)])
}

type FrameState = SVector<f64, 11>;

fn pack(mu: f64, mudot: f64, f: &Matrix3<f64>) -> FrameState {
    let mut y = FrameState::zeros();
    y[0] = mu;
    y[1] = mudot;
    y.fixed_rows_mut::<9>(2).copy_from_slice(f.as_slice());
    y
}

fn unpack(y: &FrameState) -> Matrix3<f64> {
    Matrix3::from_column_slice(y.fixed_rows::<9>(2).as_slice())
}

/// `Ḟ = F·K(μ)` with `K = [[0,−1,0],[1,0,−μ²],[0,μ²,0]]`, carried with the profile.
fn frame_rhs(lambda: f64) -> impl Fn(&FrameState) -> FrameState {
    let rhs = profile_rhs(lambda);
    move |y: &FrameState| {
        let d = rhs(&Vector2::new(y[0], y[1]));
        let k2 = y[0] * y[0];
        let k = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, -k2, 0.0, k2, 0.0);
        pack(d[0], d[1], &(unpack(y) * k))
    }
}

pub fn orthogonality_residual(f: &Matrix3<f64>) -> f64 {
    (f.transpose() * f - Matrix3::identity()).abs().max()
}

/// Nearest rotation (polar factor) to an almost-orthogonal matrix.
pub fn polar_project(f: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = f.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    u * vt
}

pub const REORTHONORMALIZE_AT: f64 = 1e-9;

/// Frames on the grid `i·h`, `i = 0..=total`, integrated outward from index
/// `start` in half-period chunks and re-orthonormalized between chunks when
/// the drift exceeds [`REORTHONORMALIZE_AT`].
fn frame_grid(
    p: &Parameters,
    h: f64,
    start: usize,
    total: usize,
    chunk: usize,
    tol: OdeTol,
) -> Result<Vec<FrameState>> {
    let f = frame_rhs(p.lambda);
    let y0 = pack(p.e1, 0.0, &initial_frame(p));
    let mut out = vec![FrameState::zeros(); total + 1];
    out[start] = y0;
    for (dir, end) in [(1.0, total), (-1.0, 0)] {
        let mut i = start;
        let mut y = y0;
        while i != end {
            let len = chunk.min(if dir > 0.0 { end - i } else { i - end });
            let ys = ode::grid(&f, y, dir * h, len, tol)?;
            for (j, yj) in ys.iter().enumerate().skip(1) {
                let idx = if dir > 0.0 { i + j } else { i - j };
                out[idx] = *yj;
            }
            i = if dir > 0.0 { i + len } else { i - len };
            y = out[i];
            let fr = unpack(&y);
            if orthogonality_residual(&fr) > REORTHONORMALIZE_AT {
                y = pack(y[0], y[1], &polar_project(&fr));
                out[i] = y;
            }
        }
    }
    Ok(out)
}

pub fn frenet_integrate(p: &Parameters, n_periods: u32, step: f64) -> Result<CurveSamples> {
    frenet_integrate_with(p, n_periods, step, OdeTol::default())
}

/// Curve from the Frenet flow: `gamma` is the first frame column; the
/// remaining fields come from the closed-form construction on the same grid.
pub fn frenet_integrate_with(p: &Parameters, n_periods: u32, step: f64, tol: OdeTol) -> Result<CurveSamples> {
    let mut curve = synthesize_curve_with(p, n_periods, step, tol)?;
    let n = curve.per_period;
    let total = n * n_periods as usize;
    let states = frame_grid(p, curve.step(), n / 2, total, n / 2, tol)?;
    let frames: Vec<Matrix3<f64>> = states.iter().map(unpack).collect();
    curve.gamma = frames.iter().map(|f| f.column(0).into_owned()).collect();
    curve.frames = Some(frames);
    Ok(curve)
}

/// Frames at `s = 0` and `s = ω` by single adaptive runs from `ω/2`.
pub fn frames_at_period_ends(p: &Parameters, tol: OdeTol) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
    let omega = period_omega(p)?;
    let f = frame_rhs(p.lambda);
    let y0 = pack(p.e1, 0.0, &initial_frame(p));
    let a = ode::advance(&f, 0.5 * omega, y0, 0.0, tol)?;
    let b = ode::advance(&f, 0.5 * omega, y0, omega, tol)?;
    Ok((unpack(&a), unpack(&b)))
}

/// `𝔪 = F(ω)·F(0)ᵀ` and its rotation angle about Ox in `[0, 2π)`; the
/// matrix is the rotation by `−Ψ̂` in the (y, z) plane.
pub fn monodromy(p: &Parameters) -> Result<(Matrix3<f64>, f64)> {
    monodromy_with(p, OdeTol::default())
}

pub fn monodromy_with(p: &Parameters, tol: OdeTol) -> Result<(Matrix3<f64>, f64)> {
    let (f0, fw) = frames_at_period_ends(p, tol)?;
    let m = fw * f0.transpose();
    let angle = m[(1, 2)].atan2(m[(1, 1)]).rem_euclid(std::f64::consts::TAU);
    Ok((m, angle))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Momentum {
    pub j: Vec<Vector3<f64>>,
    pub mean: Vector3<f64>,
    pub drift: f64,
}

/// `𝒥 = γ/(2μ) − μ̇γ̇/(2μ²) + (μ/2 + λ) γ×γ̇` per sample. Uses the frames when
/// present, otherwise fourth-order central differences for γ̇ (the two
/// samples at each end are then dropped).
pub fn momentum(curve: &CurveSamples) -> Result<Momentum> {
    let l = curve.params.lambda;
    let at = |g: &Vector3<f64>, t: &Vector3<f64>, mu: f64, mudot: f64| {
        g / (2.0 * mu) - t * (mudot / (2.0 * mu * mu)) + g.cross(t) * (0.5 * mu + l)
    };
    let j: Vec<Vector3<f64>> = match &curve.frames {
        Some(frames) => frames
            .iter()
            .enumerate()
            .map(|(i, f)| at(&f.column(0).into_owned(), &f.column(1).into_owned(), curve.mu[i], curve.mudot[i]))
            .collect(),
        None => {
            let g = &curve.gamma;
            if g.len() < 5 {
                return Err(Error::Domain("momentum needs at least five samples".into()));
            }
            let h = curve.step();
            (2..g.len() - 2)
                .map(|i| {
                    let t = (g[i - 2] - g[i - 1] * 8.0 + g[i + 1] * 8.0 - g[i + 2]) / (12.0 * h);
                    at(&g[i], &t, curve.mu[i], curve.mudot[i])
                })
                .collect()
        }
    };
    let mean = j.iter().sum::<Vector3<f64>>() / j.len() as f64;
    let drift = j.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    Ok(Momentum { j, mean, drift })
}

/// Grid step honoring the even-division rule for a requested step.
pub fn grid_step(p: &Parameters, step: f64) -> Result<f64> {
    let omega = period_omega(p)?;
    Ok(omega / samples_per_period(omega, step)? as f64)
}

/// One-sided slopes of `f = σ·√(4ξ²μ² − 1)` at `s = ω` on the locus, where
/// `f` changes sign with σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluingSlopes {
    pub left: f64,
    pub right: f64,
    /// `√(e₂(e₁ − e₂)(e₂ − e₃)(e₂ − e₄)/2)`, the limit of `|ḟ|` at `e₂`.
    pub limit: f64,
}

/// Slopes from Richardson-extrapolated difference quotients over `δ` and `2δ`.
pub fn gluing_slopes(p: &Parameters, delta: f64, tol: OdeTol) -> Result<GluingSlopes> {
    if p.region != Region::Exceptional {
        return Err(Error::Domain("gluing slopes are defined on the exceptional locus".into()));
    }
    let omega = period_omega(p)?;
    let f = |s: f64| -> Result<f64> {
        let (mu, mudot) = crate::profile::profile_state(p, s, tol)?;
        let k = (s / omega).floor() as usize;
        Ok(sigma(true, k) as f64 * radial_radicand(p, mu, mudot).max(0.0).sqrt())
    };
    let quotient = |side: f64| -> Result<f64> {
        let d1 = (f(omega + side * delta)? - 0.0) / (side * delta);
        let d2 = (f(omega + side * 2.0 * delta)? - 0.0) / (side * 2.0 * delta);
        Ok(2.0 * d1 - d2)
    };
    let limit = (p.e2 * (p.e1 - p.e2) * p.quadratic_factor(p.e2) / 2.0).sqrt();
    Ok(GluingSlopes { left: quotient(-1.0)?, right: quotient(1.0)?, limit })
}
