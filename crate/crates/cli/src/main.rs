use clap::{Args, Parser, Subcommand, ValueEnum};
use halfelastica::period::ClosureSpec;
use halfelastica_cli::commands::{self, Format};
use halfelastica_cli::pipeline::{Config, Target, EXCEPTIONAL_RANGE};
use halfelastica_cli::{CliError, CliResult};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "halfelastica", version, about = "Closed square-root elasticae on the unit sphere")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Relative and absolute tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_ode: f64,
    /// Tolerance of the quadrature cross-checks.
    #[arg(long, global = true, default_value_t = 1e-13)]
    tol_quad: f64,
    /// Upper end of the e1 scan for closure roots.
    #[arg(long, global = true, default_value_t = 1e3)]
    scan_max: f64,
    /// Directory for output files; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Fmt>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the closure condition for m/n and export the closed curve.
    Close {
        #[arg(long, allow_negative_numbers = true, required_unless_present = "exceptional")]
        lambda: Option<f64>,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Solve on the exceptional locus, with the multiplier as unknown.
        #[arg(long)]
        exceptional: bool,
        /// Which root to take when several are found, in order of e1.
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Export an open curve for given (lambda, e1).
    Curve {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        e1: f64,
        #[arg(long, default_value_t = 1)]
        periods: u32,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Tabulate the period map over a range of e1.
    PeriodMap {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        e1_min: f64,
        #[arg(long)]
        e1_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Geometric instead of linear spacing.
        #[arg(long)]
        log: bool,
    },
    /// Run the worked examples and compare their invariants.
    Catalog {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Planar curves: period, displacement and samples, or the branch functions.
    Planar {
        #[arg(long, allow_negative_numbers = true)]
        e1: f64,
        #[arg(long, allow_negative_numbers = true)]
        e2: f64,
        /// Tabulate h+ and h- for e1 > 0 > e2.
        #[arg(long)]
        branch: bool,
        #[arg(long, default_value_t = 3)]
        periods: u32,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Re-check an exported JSON record.
    Verify { file: PathBuf },
}

fn run(cli: Cli) -> CliResult<(String, i32)> {
    let c = &cli.common;
    let mut cfg = Config { tol_ode: c.tol_ode, tol_quad: c.tol_quad, scan_max: c.scan_max, ..Config::default() };
    let fmt = |default| match c.format {
        Some(Fmt::Json) => Format::Json,
        Some(Fmt::Csv) => Format::Csv,
        None => default,
    };
    let out = c.out.as_deref();
    let o = match cli.cmd {
        Cmd::Close { lambda, m, n, exceptional, root, step } => {
            cfg.step = step;
            let target = match (exceptional, lambda) {
                (true, _) => Target::Exceptional { lambda_min: EXCEPTIONAL_RANGE.0, lambda_max: EXCEPTIONAL_RANGE.1 },
                (false, Some(l)) => Target::Multiplier(l),
                (false, None) => return Err(CliError::Usage("--lambda is required".into())),
            };
            commands::cmd_close(target, ClosureSpec { m, n }, root, &cfg, fmt(Format::Json), out)?
        }
        Cmd::Curve { lambda, e1, periods, step } => {
            cfg.step = step;
            commands::cmd_curve(lambda, e1, periods, &cfg, fmt(Format::Json), out)?
        }
        Cmd::PeriodMap { lambda, e1_min, e1_max, steps, log } => {
            commands::cmd_period_map(lambda, e1_min, e1_max, steps, log, fmt(Format::Csv), out)?
        }
        Cmd::Catalog { step } => {
            cfg.step = step;
            let dir = out.map(PathBuf::from).unwrap_or_else(|| PathBuf::from("catalog"));
            let (o, ok) = commands::cmd_catalog(&cfg, &dir)?;
            return Ok((o.stdout, if ok { 0 } else { 4 }));
        }
        Cmd::Planar { e1, e2, branch, periods, step } => {
            cfg.step = step;
            commands::cmd_planar(e1, e2, branch, periods, &cfg, out)?
        }
        Cmd::Verify { file } => commands::cmd_verify(&file, &cfg)?,
    };
    Ok((o.stdout, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            // A closed pipe on the reading side is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("halfelastica: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
