//! Command-line front end for the symspace library: envelope tables,
//! Monte-Carlo volume comparison, exact-oracle validation sweeps, and orbit
//! growth reports, all emitted as CSV/JSON with deterministic bytes.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod report;

pub use config::RunConfig;
pub use report::fmt_float;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config; exits with status 2.
    Usage(String),
    /// Numeric or I/O failure during a run; exits with status 3.
    Computation(String),
}

impl CliError {
    pub fn computation(e: impl std::fmt::Display) -> Self {
        CliError::Computation(e.to_string())
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Computation(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Computation(_) => "computation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Computation(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "symspace",
    version,
    about = "Kernel envelopes, volume densities and orbit growth on noncompact symmetric spaces"
)]
struct Cli {
    /// JSON experiment config; flags override its fields
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Catalog space label (H3R, H2C, SL3R, ...)
    #[arg(long, global = true, value_name = "LABEL")]
    space: Option<String>,
    /// RNG seed; required by Monte-Carlo commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file: CSV for table commands, JSON report for lattice
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in space catalog
    Spaces,
    /// Tabulate kernel envelopes over an (r, s) or (r, t) grid
    Envelope {
        #[command(subcommand)]
        kind: EnvelopeKind,
    },
    /// Monte-Carlo check of the ball-volume envelope
    Volume,
    /// Sweep exact kernels against envelopes and check frozen ratio baselines
    Validate,
    /// Orbit growth and critical exponents of a discrete matrix group
    Lattice,
}

#[derive(Debug, Subcommand)]
enum EnvelopeKind {
    /// Green kernel envelope e^{-rho(x+) - Re(s) d}
    Green,
    /// Heat kernel envelope with the polynomial factor phi_t
    Heat,
}

/// Parses argv (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.trim_end());
            emit_error_record("usage", rendered.trim());
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            emit_error_record(err.kind(), err.message());
            err.exit_code()
        }
    }
}

/// One machine-readable line on stderr per failure; key order is stable.
fn emit_error_record(kind: &str, message: &str) {
    let record = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{record}");
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let Cli { config, space, seed, threads, out, command } = cli;
    let mut cfg = RunConfig::load(config.as_deref())?;
    cfg.apply_flags(space, seed, threads, out);
    match cfg.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Computation(format!("cannot build thread pool: {e}")))?;
            pool.install(|| execute(&command, &cfg))
        }
        None => execute(&command, &cfg),
    }
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::Spaces => commands::spaces::run(cfg),
        Command::Envelope { kind } => {
            let kind = match kind {
                EnvelopeKind::Green => commands::envelope::Kind::Green,
                EnvelopeKind::Heat => commands::envelope::Kind::Heat,
            };
            commands::envelope::run(cfg, kind)
        }
        Command::Volume => commands::volume::run(cfg),
        Command::Validate => commands::validate::run(cfg),
        Command::Lattice => commands::lattice::run(cfg),
    }
}
