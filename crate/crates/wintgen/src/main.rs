use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wintgen::commands::{self, DEFAULT_SEED};
use wintgen::config::{Mode, OutputFormat, RunConfig, RunConfigFile, DEFAULT_TOL};
use wintgen::model_file::ModelFile;
use wintgen::report::Report;
use wintgen::{resolve_jobs, CliError};
use wintgen_core::grid::GridSpec;

/// Pointwise curvature checks for Wintgen ideal submanifolds.
///
/// Exit codes: 0 all checks passed, 1 a mathematical check failed,
/// 2 invalid input or configuration.
#[derive(Parser)]
#[command(name = "wintgen", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Arithmetic: exact rationals (default) or f64 with a tolerance.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Zero threshold in float mode; ignored in exact mode.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    out: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (default: WINTGEN_JOBS, else all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nonzero components of one tensor plus scalar invariants.
    Compute {
        #[arg(long)]
        model: PathBuf,
        /// R, Ricc, C, Rperp, gwRicc, RC, CR, RR, CC, RRicc, RCmCR, QgR, QgC, QgRicc, QgGR, QSR, QSC, QSGS or P.
        #[arg(long, default_value = "R")]
        tensor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check a theorem, corollary, identity or table audit over a grid.
    Verify {
        /// T1..T27, C1..C9, TB, TC, TD, TE, TEii, identity:commutation,
        /// audit:tables, audit:basic, audit:derived, audit:nullity.
        id: String,
        /// Grid file, or `default`.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Dependence verdicts for every derivation/Tachibana pair of a model.
    Conditions {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Gap in the DDVV inequality for a model or for random models.
    Ddvv {
        #[arg(long, conflicts_with = "random")]
        model: Option<PathBuf>,
        /// Number of random general models.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Condition matrix at every grid point.
    Sweep {
        #[arg(long, default_value = "default")]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
}

fn config(common: &Common, grid: &str, base: &GridSpec) -> Result<RunConfig, CliError> {
    let file = RunConfigFile::load(grid)?;
    let tol = common.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Input(format!("tolerance must be a finite nonnegative number, got {tol}")));
    }
    Ok(RunConfig {
        mode: common.mode.or(file.mode).unwrap_or(Mode::Exact),
        tol,
        grid: file.grid(base)?,
        output: common.out.or(file.output).unwrap_or(OutputFormat::Json),
        jobs: resolve_jobs(common.jobs.or(file.parallelism))?,
    })
}

struct Finished {
    report: Report,
    ok: bool,
    format: OutputFormat,
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<Finished, CliError> {
    let default = GridSpec::default_grid();
    let (res, common, cfg) = match cli.cmd {
        Cmd::Compute { model, tensor, common } => {
            let cfg = config(&common, "default", &default)?;
            (commands::compute(&ModelFile::load(&model)?, &tensor, cfg.mode)?, common, cfg)
        }
        Cmd::Verify { id, grid, seed, common } => {
            // the table audits use a single codimension unless told otherwise
            let base = if id.starts_with("audit:") { GridSpec::audit_grid() } else { default };
            let cfg = config(&common, &grid, &base)?;
            (commands::verify(&id, &cfg, seed.unwrap_or(DEFAULT_SEED))?, common, cfg)
        }
        Cmd::Conditions { model, common } => {
            let cfg = config(&common, "default", &default)?;
            (commands::conditions(&ModelFile::load(&model)?, &cfg)?, common, cfg)
        }
        Cmd::Ddvv { model, random, n, m, seed, common } => {
            let cfg = config(&common, "default", &default)?;
            let res = match (model, random) {
                (Some(path), None) => commands::ddvv_model(&ModelFile::load(&path)?)?,
                (None, Some(count)) => commands::ddvv_random(count, n, m, seed.unwrap_or(DEFAULT_SEED), cfg.tol)?,
                _ => return Err(CliError::Input("ddvv needs --model or --random".into())),
            };
            (res, common, cfg)
        }
        Cmd::Sweep { grid, common } => {
            let cfg = config(&common, &grid, &default)?;
            (commands::sweep(&cfg)?, common, cfg)
        }
    };
    let (report, ok) = res;
    Ok(Finished { report, ok, format: cfg.output, output: common.output })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let done = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("wintgen: {e}");
            return ExitCode::from(2);
        }
    };
    let mut stderr = std::io::stderr();
    let written = match &done.output {
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| done.report.write(done.format, &mut f, &mut stderr).and_then(|_| f.flush())),
        None => done.report.write(done.format, &mut std::io::stdout().lock(), &mut stderr),
    };
    if let Err(e) = written {
        eprintln!("wintgen: {}", CliError::Io(e.to_string()));
        return ExitCode::from(2);
    }
    if done.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
