//! `hausmom` — command-line driver for the `hausmom` library.
//!
//! Every command reads and writes small JSON files (see [`io`] for the
//! formats), prints its result to stdout, and reports diagnostics on stderr.
//! Exit codes are part of the interface:
//!
//! * `0` — success, or a positive verdict (`check` on an in-class file),
//! * `1` — usage error, unreadable or malformed input,
//! * `2` — negative verdict: the input is well-formed but fails a
//!   mathematical requirement (not in the moment class, canonical data out
//!   of range, a weight that is not PSD, ...).

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hausmom::Tol64;

/// How a command run can fail. The variant decides the exit code.
pub(crate) enum Failure {
    /// Bad usage or unreadable/malformed input — exit 1.
    Invalid(String),
    /// Well-formed input that fails a mathematical requirement — exit 2.
    Reject(String),
}

pub(crate) type CmdResult = Result<(), Failure>;

/// Matrix-valued Hausdorff moment sequences on a compact interval.
#[derive(Parser)]
#[command(name = "hausmom", version, about, max_term_width = 100)]
struct Cli {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, value_name = "REL")]
    tol_rank: Option<f64>,

    /// Absolute slack for positive-semidefiniteness verdicts.
    #[arg(long, global = true, value_name = "ABS")]
    tol_psd: Option<f64>,

    /// Absolute threshold below which matrices count as equal.
    #[arg(long, global = true, value_name = "ABS")]
    tol_eq: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a moment sequence for class membership and report
    /// determinant/rank data of the four Hankel families.
    Check {
        /// Sequence file with kind "moments".
        file: PathBuf,
    },

    /// Map a moment sequence to its matricial canonical moments.
    Canonical {
        /// Sequence file with kind "moments".
        file: PathBuf,
    },

    /// Rebuild the moment sequence from its canonical moments.
    Reconstruct {
        /// Sequence file with kind "canonical".
        file: PathBuf,
    },

    /// Append moments to an in-class sequence by choosing a point of each
    /// successive extension interval.
    Extend {
        /// Sequence file with kind "moments".
        file: PathBuf,

        /// Scalar extension parameter λ in [0, 1]; λ = ½ is the central
        /// extension. Used for every step. [default: 0.5]
        #[arg(long, conflicts_with = "matrix")]
        lambda: Option<f64>,

        /// Matrix file holding a Hermitian extension parameter K with
        /// 0 ≼ K ≼ I; used for every step.
        #[arg(long, value_name = "FILE")]
        matrix: Option<PathBuf>,

        /// Number of extension steps.
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },

    /// Push the sequence through the substitution x ↦ θ·x + η and report
    /// the image interval.
    Transform {
        /// Sequence file with kind "moments".
        file: PathBuf,

        /// Dilation θ ≠ 0 (θ < 0 reverses the interval).
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,

        /// Translation η.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eta: f64,
    },

    /// Structural classification: degeneracy, centrality, symmetry, and
    /// interior flags.
    Classify {
        /// Sequence file with kind "moments".
        file: PathBuf,
    },

    /// Draw a random in-class moment sequence from the moment space.
    Sample {
        /// Matrix size q ≥ 1.
        #[arg(long, default_value_t = 1)]
        q: usize,

        /// Largest moment index of the sampled sequence.
        #[arg(long, default_value_t = 4)]
        kappa: usize,

        /// PRNG seed; equal seeds reproduce the draw exactly.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Probability, per spectral coordinate, of pinning a canonical
        /// moment to an endpoint of its admissible range.
        #[arg(long, default_value_t = 0.0)]
        boundary_bias: f64,

        /// Lower endpoint of the interval.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,

        /// Upper endpoint of the interval.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        beta: f64,

        /// Scale of the total mass s_0.
        #[arg(long, default_value_t = 1.0)]
        s0_scale: f64,
    },

    /// Power moments of a molecular (finitely supported) matrix measure.
    Moments {
        /// Measure file (nodes and PSD weight matrices).
        file: PathBuf,

        /// Largest moment index to produce.
        #[arg(long)]
        kappa: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let informational = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if informational { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };

    let defaults = Tol64::default();
    let tol = match Tol64::new(
        cli.tol_rank.unwrap_or(defaults.rank_rel()),
        cli.tol_psd.unwrap_or(defaults.psd_abs()),
        cli.tol_eq.unwrap_or(defaults.eq_abs()),
    ) {
        Ok(tol) => tol,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };

    let result = match &cli.command {
        Command::Check { file } => commands::check(file, tol),
        Command::Canonical { file } => commands::canonical(file, tol),
        Command::Reconstruct { file } => commands::reconstruct(file, tol),
        Command::Extend { file, lambda, matrix, steps } => {
            commands::extend(file, *lambda, matrix.as_deref(), *steps, tol)
        }
        Command::Transform { file, theta, eta } => commands::transform(file, *theta, *eta, tol),
        Command::Classify { file } => commands::classify(file, tol),
        Command::Sample { q, kappa, seed, boundary_bias, alpha, beta, s0_scale } => commands::sample(
            commands::SampleArgs {
                q: *q,
                kappa: *kappa,
                seed: *seed,
                boundary_bias: *boundary_bias,
                alpha: *alpha,
                beta: *beta,
                s0_scale: *s0_scale,
            },
            tol,
        ),
        Command::Moments { file, kappa } => commands::moments(file, *kappa, tol),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Reject(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(2)
        }
    }
}
