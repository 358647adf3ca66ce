//! Command-line driver: every verification and simulation of `dfs-core` as a
//! subcommand emitting one JSON report.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error.

mod qkd;
mod report;
mod tables;
mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use qkd::{cmd_qkd, exclusion_csv, QkdArgs};
pub use report::{round_sig15, RunReport};
pub use tables::{cmd_multiplicity, cmd_photonic_table};
pub use verify::{cmd_verify, Suite, VerifyArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dfs_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Verification never gets far enough to fail on bad input, so every
    /// error is a usage error.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "dfs",
    version,
    about = "Decoherence-free subspaces under collective noise and particle loss"
)]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spin multiplicities K^j_n of n spin-1/2 particles.
    Multiplicity {
        #[arg(long)]
        n: u32,
        /// Single spin, e.g. 1, 3/2 or 1.5.
        #[arg(long)]
        j: Option<String>,
    },
    /// Run an invariant suite.
    Verify(VerifyArgs),
    /// Simulate trine-state key distribution.
    Qkd(QkdArgs),
    /// Detection statistics of the photonic readout, with and without loss.
    PhotonicTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    pub fn is_on(self) -> bool {
        self == Switch::On
    }
}

pub fn execute(command: &Command) -> CliResult<RunReport> {
    match command {
        Command::Multiplicity { n, j } => cmd_multiplicity(*n, j.as_deref()),
        Command::Verify(args) => cmd_verify(args),
        Command::Qkd(args) => cmd_qkd(args),
        Command::PhotonicTable => cmd_photonic_table(),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

/// Runs a parsed command line, printing the report; returns the exit code.
pub fn run(cli: Cli) -> u8 {
    let start = Instant::now();
    let result = execute(&cli.command).and_then(|mut report| {
        if cli.timing {
            report.elapsed = Some(start.elapsed().as_secs_f64());
        }
        let text = report.render();
        if let Some(path) = &cli.output {
            write_file(path, &text)?;
        }
        Ok((report, text))
    });
    match result {
        Ok((report, text)) => {
            let mut out = std::io::stdout().lock();
            // a closed stdout is not worth a panic
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
