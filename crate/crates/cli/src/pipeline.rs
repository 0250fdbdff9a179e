use crate::error::{CliError, CliResult};
use halfelastica::geometry::{
    geometric_self_intersections, invariant_report, sweep_counts, synthesize_curve_with, CurveSamples, InvariantReport,
    SweepCounts, SweepOptions,
};
use halfelastica::ode::OdeTol;
use halfelastica::period::{solve_closure, solve_exceptional_closure, ClosureResult, ClosureSpec, Scan};
use halfelastica::profile::bending_energy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub tol_ode: f64,
    pub tol_quad: f64,
    pub scan_max: f64,
    pub step: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config { tol_ode: 1e-12, tol_quad: 1e-13, scan_max: 1e3, step: 0.01 }
    }
}

impl Config {
    pub fn ode(&self) -> OdeTol {
        OdeTol { rtol: self.tol_ode, atol: self.tol_ode }
    }

    pub fn scan(&self) -> Scan {
        Scan { e1_max: self.scan_max, ..Scan::default() }
    }
}

/// Where the closure root is sought.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// Fixed multiplier, unknown e₁.
    Multiplier(f64),
    /// On the exceptional locus, unknown λ in the given (negative) range.
    Exceptional { lambda_min: f64, lambda_max: f64 },
}

pub const EXCEPTIONAL_RANGE: (f64, f64) = (-5.0, -1e-3);
const EXCEPTIONAL_SCAN_POINTS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    pub closure: ClosureResult,
    pub curve: CurveSamples,
    pub report: InvariantReport,
    pub sweep: SweepCounts,
    pub energy: f64,
    pub closure_gap: f64,
}

pub fn find_closure(target: Target, spec: ClosureSpec, root: usize, cfg: &Config) -> CliResult<ClosureResult> {
    let roots = match target {
        Target::Multiplier(l) => solve_closure(l, spec, cfg.scan())?,
        Target::Exceptional { lambda_min, lambda_max } => {
            solve_exceptional_closure(spec, lambda_min, lambda_max, EXCEPTIONAL_SCAN_POINTS)?
        }
    };
    let count = roots.len();
    roots.into_iter().nth(root).ok_or_else(|| {
        CliError::NotFound(if count == 0 {
            "no closure root in scan range".to_string()
        } else {
            format!("root index {root} requested, only {count} found")
        })
    })
}

/// Solve, synthesize over `n` periods, count invariants both ways.
pub fn close_curve(target: Target, spec: ClosureSpec, root: usize, cfg: &Config) -> CliResult<ClosedCurve> {
    let closure = find_closure(target, spec, root, cfg)?;
    let p = closure.params;
    let curve = synthesize_curve_with(&p, spec.n, cfg.step, cfg.ode())?;
    let report = invariant_report(&p, spec, &curve)?;
    let clusters = geometric_self_intersections(&curve, SweepOptions::default())?;
    let last = curve.gamma.len() - 1;
    Ok(ClosedCurve {
        closure,
        closure_gap: (curve.gamma[last] - curve.gamma[0]).norm(),
        energy: bending_energy(&p, spec.n)?,
        sweep: sweep_counts(&clusters),
        report,
        curve,
    })
}
