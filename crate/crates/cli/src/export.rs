//! JSON and CSV records. Floats are written with 17 significant digits so a
//! record parses back to the same bits.

use crate::error::CliResult;
use crate::pipeline::{ClosedCurve, Config};
use halfelastica::geometry::{CurveSamples, InvariantReport, PositiveSubcase, SweepCounts};
use halfelastica::period::{psi_hat, PeriodRow};
use halfelastica::profile::bending_energy;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use std::path::Path;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub lambda: f64,
    pub e1: f64,
    pub xi: f64,
    pub omega: f64,
    pub region: String,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub q: Option<f64>,
    pub psi_hat: f64,
    /// Bending energy of the sampled span.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub mu: f64,
    pub mudot: f64,
    pub gamma: [f64; 3],
    pub theta: f64,
    pub rho: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub double_points: usize,
    pub near_tangential: usize,
    pub multiple_points: usize,
    pub max_multiplicity: usize,
}

impl From<SweepCounts> for SweepRecord {
    fn from(c: SweepCounts) -> Self {
        SweepRecord {
            double_points: c.double_points,
            near_tangential: c.near_tangential,
            multiple_points: c.multiple_points,
            max_multiplicity: c.max_multiplicity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantsRecord {
    pub region: String,
    pub m: u32,
    pub n: u32,
    pub symmetry_order: u32,
    pub linking_number: Option<i64>,
    pub turning_number: Option<i64>,
    pub ordinary_double_points: u64,
    pub tangential_double_points: u64,
    pub pole_multiplicity: u32,
    pub axis_crossings: u32,
    pub theta_end: f64,
    pub theta_extremum: Option<f64>,
    pub extremum_level: Option<f64>,
    pub positive_subcase: Option<String>,
    pub closure_residual: f64,
    pub closure_gap: f64,
    pub sweep: SweepRecord,
}

pub fn subcase_label(s: PositiveSubcase) -> &'static str {
    match s {
        PositiveSubcase::A => "a",
        PositiveSubcase::B => "b",
        PositiveSubcase::C => "c",
    }
}

impl InvariantsRecord {
    pub fn new(r: &InvariantReport, closure_gap: f64, sweep: SweepCounts) -> Self {
        InvariantsRecord {
            region: r.region.as_str().to_string(),
            m: r.m,
            n: r.n,
            symmetry_order: r.symmetry_order,
            linking_number: r.linking_number,
            turning_number: r.turning_number,
            ordinary_double_points: r.ordinary_double_points,
            tangential_double_points: r.tangential_double_points,
            pole_multiplicity: r.pole_multiplicity,
            axis_crossings: r.axis_crossings,
            theta_end: r.theta_end,
            theta_extremum: r.theta_extremum,
            extremum_level: r.extremum_level,
            positive_subcase: r.positive_subcase.map(|s| subcase_label(s).to_string()),
            closure_residual: r.closure_residual,
            closure_gap,
            sweep: sweep.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub tol_ode: f64,
    pub tol_quad: f64,
    pub scan_max: f64,
    pub requested_step: f64,
    pub step: f64,
    pub per_period: usize,
    pub n_periods: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub schema: u32,
    /// `"closed"` or `"curve"`.
    pub kind: String,
    pub meta: Meta,
    pub samples: Vec<Sample>,
    pub invariants: Option<InvariantsRecord>,
    pub provenance: Provenance,
}

fn samples(c: &CurveSamples) -> Vec<Sample> {
    (0..c.s.len())
        .map(|i| Sample {
            s: c.s[i],
            mu: c.mu[i],
            mudot: c.mudot[i],
            gamma: [c.gamma[i].x, c.gamma[i].y, c.gamma[i].z],
            theta: c.theta[i],
            rho: c.rho[i],
            height: c.height[i],
        })
        .collect()
}

fn provenance(c: &CurveSamples, cfg: &Config) -> Provenance {
    Provenance {
        tool: "halfelastica".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        tol_ode: cfg.tol_ode,
        tol_quad: cfg.tol_quad,
        scan_max: cfg.scan_max,
        requested_step: cfg.step,
        step: c.step(),
        per_period: c.per_period,
        n_periods: c.n_periods,
    }
}

pub fn closed_record(c: &ClosedCurve, cfg: &Config) -> ExportRecord {
    let p = c.closure.params;
    let spec = c.closure.spec;
    ExportRecord {
        schema: SCHEMA,
        kind: "closed".into(),
        meta: Meta {
            lambda: p.lambda,
            e1: p.e1,
            xi: p.xi,
            omega: c.curve.omega,
            region: p.region.as_str().into(),
            m: Some(spec.m),
            n: Some(spec.n),
            q: Some(spec.q()),
            psi_hat: c.closure.psi_hat,
            energy: c.energy,
        },
        samples: samples(&c.curve),
        invariants: Some(InvariantsRecord::new(&c.report, c.closure_gap, c.sweep)),
        provenance: provenance(&c.curve, cfg),
    }
}

pub fn curve_record(c: &CurveSamples, cfg: &Config) -> CliResult<ExportRecord> {
    let p = c.params;
    Ok(ExportRecord {
        schema: SCHEMA,
        kind: "curve".into(),
        meta: Meta {
            lambda: p.lambda,
            e1: p.e1,
            xi: p.xi,
            omega: c.omega,
            region: p.region.as_str().into(),
            m: None,
            n: None,
            q: None,
            psi_hat: psi_hat(&p)?,
            energy: bending_energy(&p, c.n_periods)?,
        },
        samples: samples(c),
        invariants: None,
        provenance: provenance(c, cfg),
    })
}

/// Compact JSON whose floats carry 17 significant digits; non-finite values
/// become `null`.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub const PERIOD_MAP_HEADER: &str = "e1,psi,psi_hat,region";

pub fn period_map_csv(rows: &[PeriodRow]) -> String {
    let mut s = String::from(PERIOD_MAP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{:.16e},{:.16e},{:.16e},{}\n", r.e1, r.psi, r.psi_hat, r.region.as_str()));
    }
    s
}

pub fn samples_csv(r: &ExportRecord) -> String {
    let mut s = String::from("s,mu,mudot,x,y,z,theta,rho,height\n");
    for p in &r.samples {
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.s, p.mu, p.mudot, p.gamma[0], p.gamma[1], p.gamma[2], p.theta, p.rho, p.height
        ));
    }
    s
}

/// Write through a sibling temporary file and rename into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
