//! `lumpspace`: verification suites and volume evaluators with JSON and CSV output.
//!
//! Exit status: 0 all checks pass, 1 a check fails, 2 usage error, 3 I/O error.

mod commands;
mod error;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{GridSpec, MuRange};
use error::{usage, CliError};
use report::Report;

const THREADS_VAR: &str = "LUMPSPACE_THREADS";

#[derive(Parser)]
#[command(name = "lumpspace", version, about = "Geometry of degree-one lumps on CP^k: verification and volumes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare quadrature against closed forms.
    #[command(subcommand)]
    Verify(Verify),
    /// Evaluate volumes.
    #[command(subcommand)]
    Volume(Volume),
    /// Tabulate measured quantities over a range of μ.
    #[command(subcommand)]
    Sweep(Sweep),
}

#[derive(Subcommand)]
enum Verify {
    /// L² Gram entries of the canonical tangent directions.
    Metric(GridArgs),
    /// Both closedness conditions of the Kähler form.
    Kahler(KahlerArgs),
    /// Gram-determinant volume factor.
    VolumeForm(GridArgs),
}

#[derive(Subcommand)]
enum Volume {
    /// Total volume of the L² metric, or the Fubini-Study metric with --c.
    Total(TotalArgs),
    /// Volume of the cylinder [1, μ z^d].
    Cylinder(CylinderArgs),
    /// Vortex-type volume formula.
    Baptista(BaptistaArgs),
}

#[derive(Subcommand)]
enum Sweep {
    /// Measured profile functions A, B against their closed forms.
    Profile(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Tolerance on relative error (absolute when the expected value is 0).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Curvatures {
    /// Curvature of the domain sphere.
    #[arg(long, default_value_t = 4.0)]
    c1: f64,
    /// Curvature of the target CP^k.
    #[arg(long, default_value_t = 4.0)]
    c2: f64,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    mu: f64,
    #[command(flatten)]
    curv: Curvatures,
    /// Base quadrature grid NRxNT; NR is raised automatically for large μ.
    #[arg(long, default_value = "128x128")]
    grid: GridSpec,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct KahlerArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Orbit parameter; may be repeated.
    #[arg(long, conflicts_with = "mu_range")]
    mu: Vec<f64>,
    /// Log-spaced μ values start:stop:count.
    #[arg(long)]
    mu_range: Option<MuRange>,
    #[command(flatten)]
    curv: Curvatures,
    /// Curvature of the Fubini-Study comparison metric.
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TotalArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[command(flatten)]
    curv: Curvatures,
    /// Use the Fubini-Study metric of this curvature instead of L².
    #[arg(long)]
    c: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CylinderArgs {
    /// Degree of the polynomial z^d.
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[command(flatten)]
    curv: Curvatures,
    /// Base point |μ| of the cylinder.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BaptistaArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Genus of the domain.
    #[arg(long, default_value_t = 0)]
    g: usize,
    #[arg(long, default_value_t = 4.0)]
    c2: f64,
    /// Area of the domain.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    vol_sigma: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Log-spaced μ values start:stop:count.
    #[arg(long, default_value = "1.05:100:40")]
    mu_range: MuRange,
    #[command(flatten)]
    curv: Curvatures,
    #[arg(long, default_value = "128x128")]
    grid: GridSpec,
    /// Write the CSV table here; without it the table goes to stdout.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Numerical(format!("cannot start thread pool: {e}")))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Writes the report to `json` if given, else to stdout (or stderr when stdout carries CSV).
fn emit(report: &Report, json: Option<&Path>, stdout_taken: bool) -> Result<(), CliError> {
    match json {
        Some(path) => {
            let mut f = create(path)?;
            report.write_json(&mut f).and_then(|_| f.flush()).map_err(|e| CliError::io(path, e))?;
            if stdout_taken {
                eprintln!("{}", report.summary());
            } else {
                println!("{}", report.summary());
            }
        }
        None if stdout_taken => report.write_json(io::stderr().lock()).map_err(|e| CliError::io("<stderr>", e))?,
        None => report.write_json(io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e))?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let start = Instant::now();
    let finish = |mut report: Report, json: Option<&Path>, stdout_taken: bool| -> Result<bool, CliError> {
        report.runtime_ms = start.elapsed().as_millis() as u64;
        emit(&report, json, stdout_taken)?;
        Ok(report.pass())
    };
    match cli.command {
        Command::Verify(Verify::Metric(a)) => {
            let r = commands::verify_metric(a.k, a.mu, a.curv.c1, a.curv.c2, a.grid, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Verify(Verify::VolumeForm(a)) => {
            let r = commands::verify_volume_form(a.k, a.mu, a.curv.c1, a.curv.c2, a.grid, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Verify(Verify::Kahler(a)) => {
            let mus = match (a.mu_range, a.mu.is_empty()) {
                (Some(range), _) => range.values(),
                (None, true) => vec![1.5, 2.0, 5.0],
                (None, false) => a.mu.clone(),
            };
            let r = commands::verify_kahler(a.k, &mus, a.curv.c1, a.curv.c2, a.c, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Volume(Volume::Total(a)) => {
            let r = commands::volume_total(a.k, a.curv.c1, a.curv.c2, a.c, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Volume(Volume::Cylinder(a)) => {
            let r = commands::volume_cylinder(a.d, a.curv.c1, a.curv.c2, a.mu, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Volume(Volume::Baptista(a)) => {
            let r = commands::volume_baptista(a.d, a.k, a.g, a.c2, a.vol_sigma, a.common.tol)?;
            finish(r, a.common.json.as_deref(), false)
        }
        Command::Sweep(Sweep::Profile(a)) => {
            let (r, rows) =
                commands::sweep_profile(a.k, a.mu_range, a.curv.c1, a.curv.c2, a.grid, a.common.tol)?;
            match &a.csv {
                Some(path) => {
                    let f = create(path)?;
                    commands::write_csv(&rows, f).map_err(|e| CliError::io(path, e.into()))?;
                }
                None => commands::write_csv(&rows, io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e.into()))?,
            }
            finish(r, a.common.json.as_deref(), a.csv.is_none())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lumpspace: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
