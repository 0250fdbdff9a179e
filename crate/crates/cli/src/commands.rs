use crate::catalog::{fixtures, run_fixture, summary_table, Fixture, Outcome};
use crate::error::{CliError, CliResult};
use crate::export::{
    closed_record, curve_record, period_map_csv, samples_csv, to_json, write_atomic, ExportRecord, InvariantsRecord,
    SweepRecord, SCHEMA,
};
use crate::pipeline::{close_curve, Config, Target};
use crate::svg;
use halfelastica::geometry::{
    geometric_self_intersections, invariant_report, sweep_counts, synthesize_curve_with, CurveSamples, SweepOptions,
};
use halfelastica::period::{period_map_table, psi_hat, regularize, ClosureSpec};
use halfelastica::planar::{
    planar_curve_with, planar_displacement, planar_h_branch, planar_period, Branch, PlanarParams,
};
use halfelastica::profile::{
    bending_energy, conservation_residual, period_omega, period_omega_quadrature, phase_curve,
};
use halfelastica::roots::{eta, Parameters, Region};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Text for standard output and the files written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

impl Output {
    fn add(&mut self, out: Option<&Path>, name: &str, contents: String) -> CliResult<()> {
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(name);
                write_atomic(&path, contents.as_bytes())?;
                self.stdout.push_str(&format!("wrote {}\n", path.display()));
                self.files.push(path);
            }
            None => self.stdout.push_str(&contents),
        }
        Ok(())
    }

    /// Files that only make sense on disk (figures) are skipped without `--out`.
    fn add_file(&mut self, out: Option<&Path>, name: &str, contents: String) -> CliResult<()> {
        if out.is_some() {
            self.add(out, name, contents)?;
        }
        Ok(())
    }
}

fn record_text(r: &ExportRecord, format: Format) -> CliResult<(String, &'static str)> {
    Ok(match format {
        Format::Json => (to_json(r)?, "json"),
        Format::Csv => (samples_csv(r), "csv"),
    })
}

pub fn projection_svg(c: &CurveSamples) -> String {
    let pts: Vec<(f64, f64)> = c.gamma.iter().map(|g| (g.y, g.z)).collect();
    svg::polylines(&[(&pts, false)])
}

pub fn phase_svg(p: &Parameters) -> String {
    svg::polylines(&[(&phase_curve(p, 400), true)])
}

fn stem(kind: &str, lambda: f64, a: impl std::fmt::Display, b: impl std::fmt::Display) -> String {
    format!("{kind}_l{lambda}_{a}_{b}")
}

pub fn cmd_close(
    target: Target,
    spec: ClosureSpec,
    root: usize,
    cfg: &Config,
    format: Format,
    out: Option<&Path>,
) -> CliResult<Output> {
    let spec = ClosureSpec::new(spec.m, spec.n)?;
    let closed = close_curve(target, spec, root, cfg)?;
    let rec = closed_record(&closed, cfg);
    let name = stem("close", closed.closure.params.lambda, spec.m, spec.n);
    let (text, ext) = record_text(&rec, format)?;
    let mut o = Output::default();
    o.add(out, &format!("{name}.{ext}"), text)?;
    o.add_file(out, &format!("{name}_projection.svg"), projection_svg(&closed.curve))?;
    o.add_file(out, &format!("{name}_phase.svg"), phase_svg(&closed.closure.params))?;
    Ok(o)
}

pub fn cmd_curve(
    lambda: f64,
    e1: f64,
    periods: u32,
    cfg: &Config,
    format: Format,
    out: Option<&Path>,
) -> CliResult<Output> {
    let p = Parameters::new(lambda, e1)?;
    let c = synthesize_curve_with(&p, periods, cfg.step, cfg.ode())?;
    let rec = curve_record(&c, cfg)?;
    let name = stem("curve", lambda, e1, periods);
    let (text, ext) = record_text(&rec, format)?;
    let mut o = Output::default();
    o.add(out, &format!("{name}.{ext}"), text)?;
    o.add_file(out, &format!("{name}_projection.svg"), projection_svg(&c))?;
    o.add_file(out, &format!("{name}_phase.svg"), phase_svg(&p))?;
    Ok(o)
}

/// `steps` values of e₁ from `e1_min` to `e1_max`, linearly or geometrically spaced.
pub fn period_map_grid(lambda: f64, e1_min: f64, e1_max: f64, steps: usize, log: bool) -> CliResult<Vec<f64>> {
    let h = eta(lambda);
    if !(e1_min > h && e1_max > e1_min && e1_max.is_finite()) || steps < 2 {
        return Err(CliError::Usage(format!(
            "need eta = {h} < e1-min < e1-max and at least 2 steps, got [{e1_min}, {e1_max}] with {steps}"
        )));
    }
    let t = |k: usize| k as f64 / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if log { e1_min * (e1_max / e1_min).powf(t(k)) } else { e1_min + (e1_max - e1_min) * t(k) })
        .collect())
}

#[derive(Serialize)]
struct PeriodMapJson {
    schema: u32,
    lambda: f64,
    rows: Vec<PeriodMapRow>,
}

#[derive(Serialize)]
struct PeriodMapRow {
    e1: f64,
    psi: f64,
    psi_hat: f64,
    region: &'static str,
}

pub fn cmd_period_map(
    lambda: f64,
    e1_min: f64,
    e1_max: f64,
    steps: usize,
    log: bool,
    format: Format,
    out: Option<&Path>,
) -> CliResult<Output> {
    let grid = period_map_grid(lambda, e1_min, e1_max, steps, log)?;
    let rows = period_map_table(lambda, &grid)?;
    let name = format!("period_map_l{lambda}");
    let mut o = Output::default();
    match format {
        Format::Csv => o.add(out, &format!("{name}.csv"), period_map_csv(&rows))?,
        Format::Json => {
            let j = PeriodMapJson {
                schema: SCHEMA,
                lambda,
                rows: rows
                    .iter()
                    .map(|r| PeriodMapRow { e1: r.e1, psi: r.psi, psi_hat: r.psi_hat, region: r.region.as_str() })
                    .collect(),
            };
            o.add(out, &format!("{name}.json"), to_json(&j)?)?
        }
    }
    Ok(o)
}

/// Runs every fixture (concurrently) and writes one record and two figures
/// per fixture plus `summary.txt`. The flag is true when all checks pass.
pub fn cmd_catalog(cfg: &Config, out: &Path) -> CliResult<(Output, bool)> {
    std::fs::create_dir_all(out)?;
    let fx = fixtures();
    let results: Vec<(Fixture, CliResult<Outcome>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = fx
            .iter()
            .map(|f| {
                scope.spawn(move || {
                    let o = run_fixture(f, cfg)?;
                    let rec = closed_record(&o.closed, cfg);
                    write_atomic(&out.join(format!("{}.json", f.name)), to_json(&rec)?.as_bytes())?;
                    write_atomic(
                        &out.join(format!("{}_projection.svg", f.name)),
                        projection_svg(&o.closed.curve).as_bytes(),
                    )?;
                    write_atomic(
                        &out.join(format!("{}_phase.svg", f.name)),
                        phase_svg(&o.closed.closure.params).as_bytes(),
                    )?;
                    Ok(o)
                })
            })
            .collect();
        fx.iter().zip(handles).map(|(f, h)| (*f, h.join().expect("fixture thread panicked"))).collect()
    });
    let table = summary_table(&results);
    write_atomic(&out.join("summary.txt"), table.as_bytes())?;
    let all = results.iter().all(|(_, r)| r.as_ref().is_ok_and(Outcome::pass));
    let mut o = Output { stdout: table, files: vec![out.join("summary.txt")] };
    for (f, _) in &results {
        for suffix in [".json", "_projection.svg", "_phase.svg"] {
            let p = out.join(format!("{}{suffix}", f.name));
            if p.exists() {
                o.files.push(p);
            }
        }
    }
    Ok((o, all))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRow {
    pub m: f64,
    pub h_plus: f64,
    pub h_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarRecord {
    pub schema: u32,
    pub kind: String,
    pub e1: f64,
    pub e2: f64,
    pub lambda: Option<f64>,
    pub d: Option<f64>,
    pub omega: Option<f64>,
    pub displacement: Option<[f64; 2]>,
    pub samples: Vec<[f64; 4]>,
    pub branch: Vec<BranchRow>,
}

/// Table of `h±` on `(0, e₁]`, geometrically refined towards 0.
pub fn branch_table(e1: f64, e2: f64, rows: usize) -> CliResult<Vec<BranchRow>> {
    (0..rows)
        .map(|k| {
            let m = e1 * 1e-3f64.powf(k as f64 / (rows - 1) as f64);
            Ok(BranchRow {
                m,
                h_plus: planar_h_branch(m, e1, e2, Branch::Plus)?,
                h_minus: planar_h_branch(m, e1, e2, Branch::Minus)?,
            })
        })
        .collect()
}

pub fn cmd_planar(e1: f64, e2: f64, branch: bool, periods: u32, cfg: &Config, out: Option<&Path>) -> CliResult<Output> {
    let mut o = Output::default();
    if branch {
        let table = branch_table(e1, e2, 41)?;
        let rec = PlanarRecord {
            schema: SCHEMA,
            kind: "planar-branch".into(),
            e1,
            e2,
            lambda: None,
            d: None,
            omega: None,
            displacement: None,
            samples: vec![],
            branch: table.clone(),
        };
        let name = format!("planar_branch_{e1}_{e2}");
        o.add(out, &format!("{name}.json"), to_json(&rec)?)?;
        let plus: Vec<(f64, f64)> = table.iter().map(|r| (r.h_plus, r.m)).collect();
        let minus: Vec<(f64, f64)> = table.iter().map(|r| (r.h_minus, r.m)).collect();
        o.add_file(out, &format!("{name}.svg"), svg::polylines(&[(&plus, false), (&minus, false)]))?;
        return Ok(o);
    }
    let p = PlanarParams::new(e1, e2)?;
    let w = planar_period(e1, e2)?;
    let c = planar_curve_with(&p, periods.max(1) as f64 * w, cfg.step, cfg.ode())?;
    let disp = planar_displacement(e1, e2);
    let rec = PlanarRecord {
        schema: SCHEMA,
        kind: "planar".into(),
        e1,
        e2,
        lambda: Some(p.lambda),
        d: Some(p.d),
        omega: Some(w),
        displacement: Some([disp.x, disp.y]),
        samples: (0..c.s.len()).map(|i| [c.s[i], c.mu[i], c.points[i].x, c.points[i].y]).collect(),
        branch: vec![],
    };
    let name = format!("planar_{e1}_{e2}");
    o.add(out, &format!("{name}.json"), to_json(&rec)?)?;
    let pts: Vec<(f64, f64)> = c.points.iter().map(|v| (v.x, v.y)).collect();
    let a = c.points[0];
    let arrow = [(a.x, a.y), (a.x + disp.x, a.y + disp.y)];
    o.add_file(out, &format!("{name}.svg"), svg::polylines(&[(&pts, false), (&arrow, false)]))?;
    Ok(o)
}

struct Verifier {
    failures: Vec<String>,
    checks: usize,
}

impl Verifier {
    fn check(&mut self, what: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(format!("{what}: {}", detail()));
        }
    }

    fn close(&mut self, what: &str, a: f64, b: f64, tol: f64) {
        self.check(what, (a - b).abs() <= tol, || format!("{a} vs {b} (tol {tol:e})"));
    }
}

fn rel_tol(x: f64, r: f64) -> f64 {
    r * x.abs().max(1.0)
}

fn curve_from_record(rec: &ExportRecord, p: Parameters) -> CurveSamples {
    use halfelastica::geometry::sigma;
    let per = rec.provenance.per_period;
    let s = &rec.samples;
    CurveSamples {
        s: s.iter().map(|x| x.s).collect(),
        gamma: s.iter().map(|x| x.gamma.into()).collect(),
        theta: s.iter().map(|x| x.theta).collect(),
        rho: s.iter().map(|x| x.rho).collect(),
        height: s.iter().map(|x| x.height).collect(),
        sigma: (0..s.len()).map(|i| sigma(p.chi(), i / per.max(1))).collect(),
        mu: s.iter().map(|x| x.mu).collect(),
        mudot: s.iter().map(|x| x.mudot).collect(),
        frames: None,
        params: p,
        chi: p.chi(),
        omega: rec.meta.omega,
        per_period: per,
        n_periods: rec.provenance.n_periods,
    }
}

fn verify_curve_record(rec: &ExportRecord, cfg: &Config, v: &mut Verifier) -> CliResult<()> {
    let m = &rec.meta;
    v.check("schema", rec.schema == SCHEMA, || format!("{}", rec.schema));
    let p = if m.region == Region::Exceptional.as_str() {
        let p = Parameters::exceptional(m.lambda)?;
        v.close("e1 = u_lambda", p.e1, m.e1, rel_tol(m.e1, 1e-12));
        p
    } else {
        Parameters::new(m.lambda, m.e1)?
    };
    v.check("region", p.region.as_str() == m.region, || format!("{} vs {}", p.region, m.region));
    v.close("xi", p.xi, m.xi, rel_tol(m.xi, 1e-13));
    let omega = period_omega(&p)?;
    v.close("omega closed form", omega, m.omega, rel_tol(omega, 1e-12));
    v.close("omega quadrature", period_omega_quadrature(&p, cfg.tol_quad)?, m.omega, rel_tol(omega, 1e-8));
    v.close("psi_hat", psi_hat(&p)?, m.psi_hat, 1e-10);

    let prov = &rec.provenance;
    let total = prov.per_period * prov.n_periods as usize;
    v.check("sample count", rec.samples.len() == total + 1, || format!("{} vs {}", rec.samples.len(), total + 1));
    v.close("grid step", prov.step, m.omega / prov.per_period as f64, rel_tol(prov.step, 1e-14));
    v.close("energy", bending_energy(&p, prov.n_periods)?, m.energy, rel_tol(m.energy, 1e-10));
    let h = prov.step;
    let cons_tol = 1e-8 * p.e1.powi(6).max(1.0);
    let (mut grid_err, mut norm_err, mut form_err, mut cons, mut monotone) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, true);
    for (i, x) in rec.samples.iter().enumerate() {
        if i > 0 && x.s <= rec.samples[i - 1].s {
            monotone = false;
        }
        grid_err = grid_err.max((x.s - i as f64 * h).abs());
        let g = x.gamma;
        norm_err = norm_err.max(((g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt() - 1.0).abs());
        let formed = [1.0 / (2.0 * p.xi * x.mu), -x.rho * x.theta.cos(), x.rho * x.theta.sin()];
        let e = (0..3).map(|k| (formed[k] - g[k]).abs()).fold((x.height - formed[0]).abs(), f64::max);
        form_err = form_err.max(e);
        cons = cons.max(conservation_residual(&p, x.mu, x.mudot).abs());
    }
    v.check("s strictly increasing", monotone, String::new);
    v.check("s on grid", grid_err <= 1e-9 * m.omega * prov.n_periods as f64, || format!("{grid_err:e}"));
    v.check("unit sphere", norm_err <= 1e-9, || format!("{norm_err:e}"));
    v.check("standard form", form_err <= 1e-12, || format!("{form_err:e}"));
    v.check("first integral", cons <= cons_tol, || format!("{cons:e} > {cons_tol:e}"));

    if rec.kind == "closed" {
        let (mm, nn) = (m.m.unwrap_or(0), m.n.unwrap_or(0));
        let spec = ClosureSpec::new(mm, nn)?;
        let d = (regularize(halfelastica::period::psi_closed_form(&p)?, p.region) - TAU * spec.q()).rem_euclid(TAU);
        let res = d.min(TAU - d);
        v.check("closure residual", res < 1e-8, || format!("{res:e}"));
        let (a, b) = (rec.samples[0].gamma, rec.samples[rec.samples.len() - 1].gamma);
        let gap = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        v.check("closure gap", gap < 1e-6, || format!("{gap:e}"));
        let curve = curve_from_record(rec, p);
        let report = invariant_report(&p, spec, &curve)?;
        let sweep = sweep_counts(&geometric_self_intersections(&curve, SweepOptions::default())?);
        let fresh = InvariantsRecord::new(&report, gap, sweep);
        match &rec.invariants {
            None => v.check("invariants present", false, String::new),
            Some(old) => {
                let ints = |r: &InvariantsRecord| {
                    (
                        r.region.clone(),
                        r.symmetry_order,
                        r.linking_number,
                        r.turning_number,
                        r.ordinary_double_points,
                        r.tangential_double_points,
                        r.pole_multiplicity,
                        r.axis_crossings,
                        r.positive_subcase.clone(),
                    )
                };
                v.check("integer invariants", ints(old) == ints(&fresh), || {
                    format!("{:?} vs {:?}", ints(old), ints(&fresh))
                });
                let sw = |s: &SweepRecord| (s.double_points, s.multiple_points, s.max_multiplicity);
                v.check("sweep counts", sw(&old.sweep) == sw(&fresh.sweep), || {
                    format!("{:?} vs {:?}", sw(&old.sweep), sw(&fresh.sweep))
                });
            }
        }
    }
    Ok(())
}

fn verify_planar_record(rec: &PlanarRecord, v: &mut Verifier) -> CliResult<()> {
    v.check("schema", rec.schema == SCHEMA, || format!("{}", rec.schema));
    if rec.kind == "planar-branch" {
        for r in &rec.branch {
            v.close("h+", planar_h_branch(r.m, rec.e1, rec.e2, Branch::Plus)?, r.h_plus, rel_tol(r.h_plus, 1e-12));
            v.close("h-", planar_h_branch(r.m, rec.e1, rec.e2, Branch::Minus)?, r.h_minus, rel_tol(r.h_minus, 1e-12));
        }
        return Ok(());
    }
    let p = PlanarParams::new(rec.e1, rec.e2)?;
    let w = planar_period(rec.e1, rec.e2)?;
    v.close("omega", w, rec.omega.unwrap_or(f64::NAN), rel_tol(w, 1e-12));
    let disp = planar_displacement(rec.e1, rec.e2);
    let d = rec.displacement.unwrap_or([f64::NAN; 2]);
    v.close("displacement", disp.x, d[0], rel_tol(disp.x, 1e-12));
    let s = &rec.samples;
    if s.len() > 1 {
        let step = s[1][0] - s[0][0];
        let per = (w / step).round() as usize;
        if (per as f64 * step - w).abs() < 1e-9 * w {
            for i in 0..s.len().saturating_sub(per) {
                let (a, b) = (s[i], s[i + per]);
                v.close("translation", b[2] - a[2], disp.x, 1e-6);
                v.close("translation y", b[3] - a[3], 0.0, 1e-6);
            }
        }
        let lo = -0.5 / (p.d.sqrt() * p.e2);
        let hi = -0.5 / (p.d.sqrt() * p.e1);
        let ok = s.iter().all(|x| x[3] >= lo - 1e-9 && x[3] <= hi + 1e-9);
        v.check("height range", ok, || format!("outside [{lo}, {hi}]"));
    }
    Ok(())
}

/// Re-derive every numeric invariant of an exported record.
pub fn cmd_verify(path: &Path, cfg: &Config) -> CliResult<Output> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let kind = value.get("kind").and_then(|k| k.as_str()).unwrap_or_default().to_string();
    let mut v = Verifier { failures: vec![], checks: 0 };
    match kind.as_str() {
        "closed" | "curve" => verify_curve_record(&serde_json::from_value(value)?, cfg, &mut v)?,
        "planar" | "planar-branch" => verify_planar_record(&serde_json::from_value(value)?, &mut v)?,
        other => return Err(CliError::Usage(format!("unknown record kind {other:?}"))),
    }
    if v.failures.is_empty() {
        Ok(Output { stdout: format!("{}: {} checks passed\n", path.display(), v.checks), files: vec![] })
    } else {
        Err(CliError::Mismatch(format!(
            "{}: {} of {} checks failed\n{}",
            path.display(),
            v.failures.len(),
            v.checks,
            v.failures.join("\n")
        )))
    }
}
