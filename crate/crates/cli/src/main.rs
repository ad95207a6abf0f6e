//! `qe`: verify quasi-Einstein structures, curvature identities and
//! pp-wave conditions from metric documents.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exit status for a verification failure.
const EXIT_FAILED: u8 = 1;
/// Exit status for unreadable or invalid input.
const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "qe", version, about = "Tensor-calculus verifier for quasi-Einstein metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the nonzero Christoffel, Riemann, Ricci, scalar, Weyl and
    /// divergence-of-Weyl components of a metric document.
    Curvature {
        file: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check whether the document's potential and mu define a
    /// quasi-Einstein structure, and run the applicable structure checks.
    Check {
        file: PathBuf,
        /// Point for the causal character, e.g. `u=0.5,x1=1`; unspecified
        /// coordinates keep their default values.
        #[arg(long, value_name = "k=v,...")]
        point: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Integrate the potential equation of a pp-wave document.
    Solve {
        file: PathBuf,
        /// Integration interval; initial data is imposed at its left end.
        #[arg(long, value_name = "a,b", default_value = "0,1")]
        interval: String,
        #[arg(long, default_value_t = qe_core::ppwave::DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        f0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        fp0: f64,
        /// Write the trajectory here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full verification suite over the corpus.
    Suite {
        /// Seed of the sampled zero test and the random profiles.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Corpus directory (defaults to the corpus shipped with the tool).
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Flip the sign of the computed Weyl tensor in the closed-form
        /// calibration (self-test of the calibration).
        #[arg(long, hide = true)]
        inject_weyl_sign_error: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curvature { file, json } => commands::curvature(&file, json.as_deref()),
        Command::Check { file, point, json } => commands::check(&file, point.as_deref(), json.as_deref()),
        Command::Solve { file, interval, step, f0, fp0, csv, json } => {
            commands::solve(&file, &interval, step, f0, fp0, csv.as_deref(), json.as_deref())
        }
        Command::Suite { seed, json, corpus, inject_weyl_sign_error } => {
            commands::suite(seed, json.as_deref(), corpus.as_deref(), inject_weyl_sign_error)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
