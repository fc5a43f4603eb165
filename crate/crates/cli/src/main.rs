//! `eqkit`: batch front end. Every run prints one JSON report on stdout and
//! exits with a code naming the failure class (see `error::exit`).

mod commands;
mod error;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Angle, Ctx, Method};
use error::{exit, CliError};
use report::{ErrorInfo, RunReport};

#[derive(Parser)]
#[command(name = "eqkit", version, about = "Equiangular matrix factorizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Threshold scale for the residual checks in the report.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Prefix for output files, e.g. `out/run1-` gives `out/run1-S.csv`.
    #[arg(long, global = true, default_value = "eqkit-")]
    out: String,

    /// Seed for synthetic inputs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AngleArgs {
    /// Angle between columns, in degrees.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Cosine of the angle between columns.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
}

impl AngleArgs {
    fn angle(&self) -> Angle {
        match (self.theta, self.alpha) {
            (Some(t), _) => Angle::Degrees(t),
            (_, Some(a)) => Angle::Cos(a),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SdstArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Report the largest alpha for which the coefficient polynomial of the
    /// input's spectrum still has only real roots.
    #[arg(long)]
    find_alpha_bound: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fast,
    Generic,
}

#[derive(Subcommand)]
enum Command {
    /// SR decomposition A = S R; writes S.csv and R.csv.
    Sr {
        input: PathBuf,
        #[command(flatten)]
        angle: AngleArgs,
    },
    /// Inverse of an equiangular matrix; writes inverse.csv. With --bench,
    /// times both methods over a size sweep and writes bench.csv.
    Inverse {
        #[arg(required_unless_present = "bench")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "fast")]
        method: MethodArg,
        #[arg(long)]
        bench: bool,
        /// Sizes for --bench.
        #[arg(long, value_delimiter = ',', default_values_t = eqkit_bench::DEFAULT_SIZES)]
        sizes: Vec<usize>,
    },
    /// Symmetric factorization A = S D S^T; writes S.csv and D.csv.
    Sdst {
        input: PathBuf,
        #[command(flatten)]
        mode: SdstArgs,
    },
    /// Doubly equiangular matrix from a nonsingular input; writes S.csv.
    Dea {
        input: PathBuf,
        #[command(flatten)]
        angle: AngleArgs,
    },
    /// Simplex equiangular tight frame of n+1 vectors in R^n; writes frame.csv.
    Frame {
        #[arg(long)]
        n: usize,
    },
    /// Classifies a matrix: doubly equiangular, equiangular, or neither.
    Check { input: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sr { .. } => "sr",
            Command::Inverse { .. } => "inverse",
            Command::Sdst { .. } => "sdst",
            Command::Dea { .. } => "dea",
            Command::Frame { .. } => "frame",
            Command::Check { .. } => "check",
        }
    }
}

fn dispatch(cli: &Cli, report: &mut RunReport) -> Result<(), CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let ctx = Ctx { tol: cli.tol, out: cli.out.clone() };
    report.param("tol", cli.tol);
    match &cli.command {
        Command::Sr { input, angle } => commands::sr(input, angle.angle(), &ctx, report),
        Command::Inverse { bench: true, sizes, .. } => commands::inverse_bench(sizes, cli.seed, &ctx, report),
        Command::Inverse { input, method, .. } => {
            let method = match method {
                MethodArg::Fast => Method::Fast,
                MethodArg::Generic => Method::Generic,
            };
            let input = input.as_ref().ok_or_else(|| CliError::Usage("missing input".into()))?;
            commands::inverse(input, method, &ctx, report)
        }
        Command::Sdst { input, mode } => match (mode.theta, mode.alpha) {
            (Some(t), _) => commands::sdst(input, Angle::Degrees(t), &ctx, report),
            (_, Some(a)) => commands::sdst(input, Angle::Cos(a), &ctx, report),
            _ => commands::sdst_bound(input, &ctx, report),
        },
        Command::Dea { input, angle } => commands::dea_cmd(input, angle.angle(), &ctx, report),
        Command::Frame { n } => commands::frame(*n, &ctx, report),
        Command::Check { input } => commands::check(input, &ctx, report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let start = Instant::now();
    let mut report = RunReport::new(cli.command.name());
    let result = dispatch(&cli, &mut report);
    let verify_start = report.wall_seconds.compute;
    report.wall_seconds.total = start.elapsed().as_secs_f64();
    report.wall_seconds.verify = (report.wall_seconds.total - verify_start).max(0.0);
    let code = match result {
        Ok(()) if report.all_pass() => exit::OK,
        Ok(()) => exit::THRESHOLD,
        Err(e) => {
            for p in report.outputs.drain(..) {
                let _ = std::fs::remove_file(p);
            }
            eprintln!("eqkit {}: {e}", report.command);
            let code = e.exit_code();
            report.error = Some(ErrorInfo { kind: e.kind().into(), message: e.to_string() });
            code
        }
    };
    report.ok = code == exit::OK;
    report.exit_code = code;
    match serde_json::to_string_pretty(&report) {
        Ok(s) => {
            use std::io::Write;
            // a closed pipe on stdout is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{s}");
        }
        Err(e) => {
            eprintln!("eqkit: cannot serialize report: {e}");
            return ExitCode::from(exit::OTHER as u8);
        }
    }
    ExitCode::from(code as u8)
}
