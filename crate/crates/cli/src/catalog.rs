//! Worked examples with their reference integer invariants.

use crate::error::CliResult;
use crate::pipeline::{close_curve, ClosedCurve, Config, Target, EXCEPTIONAL_RANGE};
use halfelastica::period::ClosureSpec;
use halfelastica::roots::Region;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub region: Region,
    pub linking: Option<i64>,
    pub turning: Option<i64>,
    pub ordinary: Option<u64>,
    pub tangential: Option<u64>,
    pub pole: u32,
    /// Reference two-decimal multiplier for cases solved on the locus.
    pub lambda_2dp: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    /// `(λ, m, n)` as labelled.
    pub label: (f64, u32, u32),
    pub target: Target,
    /// Rotation index actually solved for.
    pub m: u32,
    pub n: u32,
    pub expected: Expected,
}

const EXC: Target = Target::Exceptional { lambda_min: EXCEPTIONAL_RANGE.0, lambda_max: EXCEPTIONAL_RANGE.1 };

const fn generic(region: Region, linking: i64, ordinary: Option<u64>, tangential: Option<u64>) -> Expected {
    Expected { region, linking: Some(linking), turning: None, ordinary, tangential, pole: 0, lambda_2dp: None }
}

const fn locus(turning: i64, ordinary: Option<u64>, pole: u32, lambda: f64) -> Expected {
    Expected {
        region: Region::Exceptional,
        linking: None,
        turning: Some(turning),
        ordinary,
        tangential: Some(0),
        pole,
        lambda_2dp: Some(lambda),
    }
}

/// The six worked examples, then the three threefold strings. For the
/// middle threefold string the labelled `q = 2/3` is solved as its mirror
/// `1/3`, the value taken by the period map in `[0, 2π)` on the locus.
pub fn fixtures() -> Vec<Fixture> {
    use Region::*;
    let f = |name, label, target, m, n, expected| Fixture { name, label, target, m, n, expected };
    vec![
        f("ex1-negative-2-5", (1.1, 2, 5), Target::Multiplier(1.1), 2, 5, generic(NegativeType, 3, Some(10), Some(0))),
        f("ex2-locus-4-9", (-0.11, 4, 9), EXC, 4, 9, locus(5, Some(0), 9, -0.11)),
        f("ex3-locus-2-9", (-0.45, 2, 9), EXC, 2, 9, locus(7, Some(18), 9, -0.45)),
        f(
            "ex4-positive-3-8",
            (-0.5, 3, 8),
            Target::Multiplier(-0.5),
            3,
            8,
            generic(PositiveType, -3, Some(24), Some(0)),
        ),
        f(
            "ex5-positive-3-11",
            (-0.5, 3, 11),
            Target::Multiplier(-0.5),
            3,
            11,
            generic(PositiveType, -3, Some(33), Some(11)),
        ),
        f(
            "ex6-positive-2-9",
            (-0.5, 2, 9),
            Target::Multiplier(-0.5),
            2,
            9,
            generic(PositiveType, -2, Some(36), Some(0)),
        ),
        f("threefold-left", (-1.1, 1, 3), Target::Multiplier(-1.1), 1, 3, generic(PositiveType, -1, None, None)),
        f("threefold-middle", (-0.27, 2, 3), EXC, 1, 3, locus(2, None, 3, -0.27)),
        f("threefold-right", (0.1, 1, 3), Target::Multiplier(0.1), 1, 3, generic(NegativeType, 2, Some(3), Some(0))),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub what: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub fixture: Fixture,
    pub closed: ClosedCurve,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check<T: PartialEq + std::fmt::Debug>(what: &'static str, expected: T, computed: T) -> Check {
    Check { what, pass: expected == computed, expected: format!("{expected:?}"), computed: format!("{computed:?}") }
}

pub fn run_fixture(fx: &Fixture, cfg: &Config) -> CliResult<Outcome> {
    let spec = ClosureSpec::new(fx.m, fx.n)?;
    let closed = close_curve(fx.target, spec, 0, cfg)?;
    let r = &closed.report;
    let e = fx.expected;
    let mut checks = vec![check("region", e.region, r.region)];
    if e.linking.is_some() {
        checks.push(check("linking", e.linking, r.linking_number));
    }
    if e.turning.is_some() {
        checks.push(check("turning", e.turning, r.turning_number));
    }
    if let Some(o) = e.ordinary {
        checks.push(check("ordinary", o, r.ordinary_double_points));
    }
    if let Some(t) = e.tangential {
        checks.push(check("tangential", t, r.tangential_double_points));
    }
    checks.push(check("pole", e.pole, r.pole_multiplicity));
    checks.push(check(
        "sweep total",
        r.total_self_intersections() as usize,
        closed.sweep.double_points + closed.sweep.multiple_points,
    ));
    if let Some(l) = e.lambda_2dp {
        let got = (closed.closure.params.lambda * 100.0).round() / 100.0;
        checks.push(check("lambda (2 dp)", format!("{l:.2}"), format!("{got:.2}")));
    }
    Ok(Outcome { fixture: *fx, closed, checks })
}

pub fn summary_table(results: &[(Fixture, CliResult<Outcome>)]) -> String {
    let mut s = format!("{:<20} {:<14} {:<12} {:<12} status\n", "fixture", "check", "expected", "computed");
    for (fx, o) in results {
        match o {
            Ok(o) => {
                for c in &o.checks {
                    let st = if c.pass { "ok" } else { "MISMATCH" };
                    s.push_str(&format!("{:<20} {:<14} {:<12} {:<12} {st}\n", fx.name, c.what, c.expected, c.computed));
                }
            }
            Err(e) => s.push_str(&format!("{:<20} error: {e}\n", fx.name)),
        }
    }
    s
}
