//! `pnkit`: run probabilistic normed space experiments from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pnkit_core::{PnError, TNorm};

#[derive(Parser)]
#[command(name = "pnkit", version, about = "Probabilistic normed spaces and approximate fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a triangle function to two d.d.f.s and print the result.
    Tau {
        #[arg(long, default_value = "M")]
        tnorm: TNorm,
        /// `eps:a` or a JSON jump list such as `[[1.0,0.5],[2.0,0.5]]`.
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Evaluate a d.d.f. and optionally compare it with another.
    Ddf {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: Option<String>,
        /// Points to evaluate at.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        at: Vec<f64>,
    },
    /// Check the PN-space axioms on seeded random vector pairs.
    CheckAxioms {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        /// Half-width of the cube the vectors are drawn from.
        #[arg(long, default_value_t = 10.0)]
        range: f64,
    },
    /// Probabilistic diameter of a finite point set.
    Diameter {
        #[arg(long)]
        config: PathBuf,
        /// JSON list of points, e.g. `[[0.1],[0.4]]`.
        #[arg(long)]
        points: String,
    },
    /// Strong t-continuity test, followed by the pairwise consequence on certified maps.
    Continuity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Evenly spaced sample points per axis.
        #[arg(long, default_value_t = 17)]
        samples: usize,
        #[arg(long, default_value_t = 4096)]
        probe_budget: usize,
        /// Random distinct pairs checked once the map is certified.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    /// Measure of discontinuity: exact, estimated, and their agreement.
    Psi {
        #[arg(long)]
        config: PathBuf,
    },
    /// Approximate fixed point and hull-containment searches.
    Fixpoint {
        #[arg(long)]
        config: PathBuf,
    },
    /// Full existence check; writes report.json and curves.csv.
    #[command(name = "verify-t34")]
    VerifyT34 {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the scenario family of a config as a JSON list of maps.
    GenScenarios {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Why a command stopped; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Theorem(String),
    Other(String),
}

impl From<PnError> for Failure {
    fn from(e: PnError) -> Self {
        match e {
            PnError::InvalidArgument(_) | PnError::Precondition(_) => Failure::Validation(e.to_string()),
            PnError::TheoremViolation(_) => Failure::Theorem(e.to_string()),
            PnError::Internal(_) => Failure::Other(e.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("PNKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Validation(format!("PNKIT_THREADS = {raw:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Other(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Tau { tnorm, f, g } => commands::tau(tnorm, &f, &g),
        Command::Ddf { f, g, at } => commands::ddf(&f, g.as_deref(), &at),
        Command::CheckAxioms { config, pairs, range } => commands::check_axioms(&config, pairs, range),
        Command::Diameter { config, points } => commands::diameter(&config, &points),
        Command::Continuity { config, t, samples, probe_budget, pairs } => {
            commands::continuity(&config, t, samples, probe_budget, pairs)
        }
        Command::Psi { config } => commands::psi(&config),
        Command::Fixpoint { config } => commands::fixpoint(&config),
        Command::VerifyT34 { config, out } => commands::verify_t34(&config, out),
        Command::GenScenarios { config, seed, out } => commands::gen_scenarios(&config, seed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Theorem(m)) => {
            eprintln!("theorem violation: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
