//! Command-line front end for `ergcftp`: single-model sampling, parameter
//! grid sweeps, biased-net sweeps and oracle validation.

pub mod biasednet;
pub mod heatmap;
pub mod oracle;
pub mod sample;
pub mod space;
pub mod summary;
pub mod sweep;

use std::fs;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use ergcftp::cftp::DEFAULT_MAX_DEPTH;
use ergcftp::CftpConfig;

pub use space::SpaceArgs;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const SAMPLING: i32 = 2;
    pub const VALIDATION: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, unwritable output.
    Usage(anyhow::Error),
    /// No replication produced a draw.
    Sampling(anyhow::Error),
    /// An oracle check failed.
    Validation(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Sampling(_) => exit::SAMPLING,
            CliError::Validation(_) => exit::VALIDATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Sampling(e) => write!(f, "{e:#}"),
            CliError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ergcftp", version, about = "Perfect sampling of random graph models by coupling from the past")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw exact samples from an ERG or biased-net model file.
    Sample(sample::SampleArgs),
    /// Summarize draws over a two-parameter grid of an ERG model.
    Sweep(sweep::SweepArgs),
    /// Sweep a biased-net model over its sibling parameter or its size.
    Biasednet(biasednet::BiasednetArgs),
    /// Compare sampler output with exact enumeration on a small space.
    Oracle(oracle::OracleArgs),
}

/// Sampler flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Base seed; replication r of a run uses stream r of its seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of draws (per grid cell for sweeps).
    #[arg(long)]
    pub draws: Option<usize>,
    /// Deepest start time, in single-dyad updates, before giving up.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl RunArgs {
    pub fn config(&self, seed: u64) -> CftpConfig {
        CftpConfig::seeded(seed).with_max_depth(self.max_depth)
    }
}

pub const DEFAULT_SEED: u64 = 1;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sample(a) => sample::run(&a),
        Command::Sweep(a) => sweep::run(&a),
        Command::Biasednet(a) => biasednet::run(&a),
        Command::Oracle(a) => oracle::run(&a),
    }
}

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(anyhow::anyhow!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(anyhow::anyhow!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text)
        .map_err(|e| CliError::Usage(anyhow::anyhow!("cannot write {}: {e}", path.display())))
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(anyhow::anyhow!(msg.into()))
}
