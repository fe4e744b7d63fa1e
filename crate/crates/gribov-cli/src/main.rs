//! Command-line front end: solve/sweep/verify workflows with reproducible
//! CSV output.
//!
//! Exit status: 0 on success, 1 on validation errors (bad flags, parameters
//! outside the theory, output collisions), 2 on numerical failure
//! (non-convergence, overflow), 3 when `verify` finds a failing criterion.
//!
//! All computations are deterministic for fixed flags; there is no
//! configuration beyond the flags and no randomness anywhere.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gribov_spectra::discretize::limit_frame_rule;
use gribov_spectra::report;
use gribov_spectra::studies::TAIL_NODES;
use gribov_spectra::verify::{run_all, VerifyOptions};
use gribov_spectra::{
    hs_norm, power_iteration, sweep_mu, truncation_bound, GribovError, KernelFrame, Matrix64,
    Params64, Rule64,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERDICT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gribov-spectra",
    version,
    about = "Spectral analysis of the inverse Gribov operator on the negative imaginary axis",
    after_help = "All runs are seedless and deterministic: identical flags on a fixed \
                  platform produce byte-identical CSV output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Native,
    Limit,
    Plain,
}

impl From<FrameArg> for KernelFrame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Native => KernelFrame::NativeWeighted,
            FrameArg::Limit => KernelFrame::LimitWeighted,
            FrameArg::Plain => KernelFrame::Plain,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Quadrature grid size.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Power-iteration relative tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Truncation tail weight for limit-frame domains.
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
    /// Accept parameters outside the weighted-space theory (recorded in output).
    #[arg(long)]
    allow_out_of_theory: bool,
}

#[derive(Args)]
struct ParamArgs {
    /// Four coupling λ' (≥ 0; 0 selects the half-line limit operator).
    #[arg(long)]
    lambda_prime: f64,
    /// Intercept μ.
    #[arg(long)]
    mu: f64,
    /// Triple coupling λ (> 0).
    #[arg(long)]
    lambda: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Dominant eigenpair: spectral radius of the inverse and the smallest
    /// eigenvalue, with gap and residual.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        /// Kernel frame for the assembly.
        #[arg(long, value_enum, default_value = "native")]
        frame: FrameArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the intercept μ and record (μ, Ω, σ, gap, kernel probe).
    SweepMu {
        /// Four coupling λ' (> 0 for the native sweep).
        #[arg(long)]
        lambda_prime: f64,
        /// Triple coupling λ.
        #[arg(long)]
        lambda: f64,
        /// Strictly increasing μ grid.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
        mu_grid: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// λ'→0 study: Ω and Hilbert–Schmidt convergence toward the limit
    /// operator on [0, Y_max].
    LimitStudy {
        /// Intercept μ.
        #[arg(long)]
        mu: f64,
        /// Triple coupling λ.
        #[arg(long)]
        lambda: f64,
        /// Strictly increasing ρ' grid (λ' = λ/ρ').
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        rho_prime_grid: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Hilbert–Schmidt norm of the symmetrized kernel.
    Hsnorm {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "native")]
        frame: FrameArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Debug dump of the assembled matrix (row-major entries with kernel values).
    KernelDump {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "native")]
        frame: FrameArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the full property suite and gate on the verdict (exit 3 on FAIL).
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not validation failures
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VALIDATION)
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::from(EXIT_NUMERICAL)
            }
        }
    }
}

fn derive_params(args: &ParamArgs, common: &CommonArgs) -> Result<Params64, GribovError> {
    if common.allow_out_of_theory {
        Params64::derive_exploratory(args.lambda_prime, args.mu, args.lambda)
    } else {
        Params64::derive(args.lambda_prime, args.mu, args.lambda)
    }
}

fn frame_rule(
    p: &Params64,
    frame: KernelFrame,
    common: &CommonArgs,
) -> Result<Rule64, GribovError> {
    match frame {
        KernelFrame::NativeWeighted | KernelFrame::Plain => {
            let (rho_prime, _) = p.native()?;
            Rule64::gauss(common.n, 0.0, rho_prime)
        }
        KernelFrame::LimitWeighted => {
            let y_max = truncation_bound(p.mu(), p.lambda(), common.eps)?;
            limit_frame_rule(p, common.n, y_max, TAIL_NODES)
        }
    }
}

/// Writes the CSV to the requested destination (path collisions rejected
/// unless --force) and returns the text summary for stdout.
fn emit(common: &CommonArgs, csv: Vec<u8>, summary: String) -> Result<(), GribovError> {
    match &common.output {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| GribovError::InvalidArgument(format!("cannot write output: {e}")))?;
        }
        None => {
            std::io::stdout()
                .write_all(&csv)
                .map_err(|e| GribovError::InvalidArgument(format!("stdout: {e}")))?;
            println!();
        }
    }
    print!("{summary}");
    Ok(())
}

fn check_output_path(common: &CommonArgs) -> Result<(), GribovError> {
    if let Some(path) = &common.output {
        if path.exists() && !common.force {
            return Err(GribovError::InvalidArgument(format!(
                "output path {} exists (use --force to overwrite)",
                path.display()
            )));
        }
    }
    Ok(())
}

fn run(cmd: Command) -> Result<ExitCode, GribovError> {
    match &cmd {
        Command::Solve { common, .. }
        | Command::SweepMu { common, .. }
        | Command::LimitStudy { common, .. }
        | Command::Hsnorm { common, .. }
        | Command::KernelDump { common, .. }
        | Command::Verify { common } => check_output_path(common)?,
    }
    match cmd {
        Command::Solve {
            params,
            frame,
            common,
        } => {
            let p = derive_params(&params, &common)?;
            let frame: KernelFrame = frame.into();
            let rule = frame_rule(&p, frame, &common)?;
            let m = Matrix64::assemble(&p, frame, &rule)?;
            let r = power_iteration(&m, common.tol, 100_000)?;
            let mut csv = Vec::new();
            report::write_solve_csv(&p, frame, common.n, common.tol, &r, &mut csv)
                .map_err(io_err)?;
            emit(&common, csv, report::solve_summary(&p, frame, common.n, &r))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepMu {
            lambda_prime,
            lambda,
            mu_grid,
            common,
        } => {
            let study = sweep_mu(lambda_prime, lambda, &mu_grid, common.n)?;
            let mut csv = Vec::new();
            report::write_study_csv(&study, &mut csv).map_err(io_err)?;
            emit(&common, csv, report::study_summary(&study))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::LimitStudy {
            mu,
            lambda,
            rho_prime_grid,
            common,
        } => {
            let study = gribov_spectra::lambda_prime_limit(
                mu,
                lambda,
                &rho_prime_grid,
                common.n,
                common.eps,
            )?;
            let mut csv = Vec::new();
            report::write_study_csv(&study, &mut csv).map_err(io_err)?;
            emit(&common, csv, report::study_summary(&study))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hsnorm {
            params,
            frame,
            common,
        } => {
            let p = derive_params(&params, &common)?;
            let frame: KernelFrame = frame.into();
            let rule = frame_rule(&p, frame, &common)?;
            let hs = hs_norm(&p, frame, &rule)?;
            let mut csv = Vec::new();
            report::write_hsnorm_csv(&p, frame, common.n, hs, &mut csv).map_err(io_err)?;
            emit(
                &common,
                csv,
                format!("hs_norm ({} frame, n={}): {hs:e}\n", frame.name(), common.n),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::KernelDump {
            params,
            frame,
            common,
        } => {
            let p = derive_params(&params, &common)?;
            let frame: KernelFrame = frame.into();
            let rule = frame_rule(&p, frame, &common)?;
            let m = Matrix64::assemble(&p, frame, &rule)?;
            let mut csv = Vec::new();
            report::write_matrix_csv(&m, &mut csv).map_err(io_err)?;
            emit(
                &common,
                csv,
                format!(
                    "kernel dump: {} frame, n={}, {} entries\n",
                    frame.name(),
                    common.n,
                    m.n() * m.n()
                ),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common } => {
            let opts = VerifyOptions {
                n: common.n,
                tol: common.tol,
                eps: common.eps,
            };
            let verdict = run_all(&opts)?;
            let mut csv = Vec::new();
            report::write_verify_csv(&verdict, &mut csv).map_err(io_err)?;
            emit(&common, csv, report::verify_summary(&verdict))?;
            if verdict.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_VERDICT))
            }
        }
    }
}

fn io_err(e: std::io::Error) -> GribovError {
    GribovError::InvalidArgument(format!("serialization failed: {e}"))
}
