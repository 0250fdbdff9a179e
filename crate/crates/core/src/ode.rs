//! Thin layer over the Dormand–Prince 8(5,3) integrator: fixed output grids in
//! either time direction and single-shot advances.
//!
//! Only autonomous systems are accepted. The upstream tableau evaluates its
//! twelfth stage at the start of the step instead of the end, which is harmless
//! exactly when the right-hand side does not depend on time; every system in
//! this crate is written in autonomous form (the profile rides along in the
//! state).

use crate::error::{Error, Result};
use nalgebra::SVector;
use ode_solvers::{Dop853, OutputType, System};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTol {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for OdeTol {
    fn default() -> Self {
        OdeTol { rtol: 1e-12, atol: 1e-12 }
    }
}

/// `dy/dτ = dir·f(y)`, so the solver always sees increasing `τ`.
struct Reversible<'a, const D: usize> {
    f: &'a dyn Fn(&SVector<f64, D>) -> SVector<f64, D>,
    dir: f64,
}

impl<const D: usize> System<f64, SVector<f64, D>> for Reversible<'_, D> {
    fn system(&self, _x: f64, y: &SVector<f64, D>, dy: &mut SVector<f64, D>) {
        *dy = (self.f)(y) * self.dir;
    }
}

#[allow(clippy::too_many_arguments)]
fn solver<'a, const D: usize>(
    f: &'a dyn Fn(&SVector<f64, D>) -> SVector<f64, D>,
    dir: f64,
    x0: f64,
    x1: f64,
    h0: f64,
    y0: SVector<f64, D>,
    tol: OdeTol,
) -> Dop853<f64, SVector<f64, D>, Reversible<'a, D>> {
    Dop853::from_param(
        Reversible { f, dir },
        x0,
        x1,
        x1 - x0,
        y0,
        tol.rtol,
        tol.atol,
        0.9,
        0.0,
        0.333,
        6.0,
        x1 - x0,
        h0,
        10_000_000,
        u32::MAX,
        OutputType::Sparse,
    )
}

fn integration_error(e: ode_solvers::dop_shared::IntegrationError) -> Error {
    Error::Integration(format!("{e:?}"))
}

/// States at `i·step` past the initial state for `i = 0..=n`; a negative `step` integrates backward.
///
/// Each grid interval is its own adaptive run started from the previous
/// interval's last full step, so every sample is a genuine step endpoint.
pub fn grid<const D: usize>(
    f: &dyn Fn(&SVector<f64, D>) -> SVector<f64, D>,
    y0: SVector<f64, D>,
    step: f64,
    n: usize,
    tol: OdeTol,
) -> Result<Vec<SVector<f64, D>>> {
    if n > 0 && !(step != 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("grid step must be finite and nonzero, got {step}")));
    }
    let h = step.abs();
    let dir = step.signum();
    let mut out = Vec::with_capacity(n + 1);
    out.push(y0);
    let mut y = y0;
    let mut h0 = 0.0;
    for i in 0..n {
        let (x0, x1) = (h * i as f64, h * (i + 1) as f64);
        let mut s = solver(f, dir, x0, x1, h0, y, tol);
        s.integrate().map_err(integration_error)?;
        let xs = s.x_out();
        if xs.len() >= 3 {
            h0 = xs[xs.len() - 2] - xs[xs.len() - 3];
        } else if xs.len() == 2 {
            h0 = xs[1] - xs[0];
        }
        y = *s.y_out().last().ok_or_else(|| Error::Integration("empty solver output".into()))?;
        out.push(y);
    }
    Ok(out)
}

/// The state at `t1` starting from `y0` at `t0` (either direction).
pub fn advance<const D: usize>(
    f: &dyn Fn(&SVector<f64, D>) -> SVector<f64, D>,
    t0: f64,
    y0: SVector<f64, D>,
    t1: f64,
    tol: OdeTol,
) -> Result<SVector<f64, D>> {
    if t1 == t0 {
        return Ok(y0);
    }
    let span = (t1 - t0).abs();
    let mut s = solver(f, (t1 - t0).signum(), 0.0, span, 0.0, y0, tol);
    s.integrate().map_err(integration_error)?;
    s.y_out().last().copied().ok_or_else(|| Error::Integration("empty solver output".into()))
}

/// Accepted step endpoints `(t, y)` of one adaptive run, in the direction of travel.
pub fn steps<const D: usize>(
    f: &dyn Fn(&SVector<f64, D>) -> SVector<f64, D>,
    t0: f64,
    y0: SVector<f64, D>,
    t1: f64,
    tol: OdeTol,
) -> Result<Vec<(f64, SVector<f64, D>)>> {
    let span = (t1 - t0).abs();
    let dir = (t1 - t0).signum();
    let mut s = solver(f, dir, 0.0, span, 0.0, y0, tol);
    s.integrate().map_err(integration_error)?;
    let (xs, ys) = s.results().get();
    Ok(xs.iter().zip(ys).map(|(x, y)| (t0 + dir * x, *y)).collect())
}
