//! Command-line front end: JSON configs in, CSV and JSON artifacts out.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod output;

use config::ExperimentConfig;

/// Environment variable consulted for the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "SOFTCOVER_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(e: impl Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<softcover::Error> for CliError {
    fn from(e: softcover::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "softcover", version, about = "Likelihood-encoder source coding experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trial count override.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Blocklength override.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output directory (default: the config's `out`, else `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point-to-point rate-distortion curve.
    Rd(CommonArgs),
    /// Wyner-Ziv rate-distortion curve.
    WzRate(CommonArgs),
    /// Berger-Tung corner points and time sharing.
    BtCorner(CommonArgs),
    /// Point-to-point likelihood-encoder simulation.
    SimP2p(CommonArgs),
    /// Wyner-Ziv scheme simulation.
    SimWz(CommonArgs),
    /// Berger-Tung scheme simulation.
    SimBt(CommonArgs),
    /// Soft-covering total-variation sweep.
    Softcover(CommonArgs),
    /// Exact checks of the encoder identities (shipped fixtures without a config).
    VerifyIdentities(CommonArgs),
    /// Writes the codebook of one block of a simulation config.
    DumpCodebook {
        #[command(flatten)]
        common: CommonArgs,
        /// Codebook block index.
        #[arg(long, default_value_t = 0)]
        block: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rd(_) => "rd",
            Command::WzRate(_) => "wz-rate",
            Command::BtCorner(_) => "bt-corner",
            Command::SimP2p(_) => "sim-p2p",
            Command::SimWz(_) => "sim-wz",
            Command::SimBt(_) => "sim-bt",
            Command::Softcover(_) => "softcover",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::DumpCodebook { .. } => "dump-codebook",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::Rd(c)
            | Command::WzRate(c)
            | Command::BtCorner(c)
            | Command::SimP2p(c)
            | Command::SimWz(c)
            | Command::SimBt(c)
            | Command::Softcover(c)
            | Command::VerifyIdentities(c) => c,
            Command::DumpCodebook { common, .. } => common,
        }
    }

    /// Config scheme names this subcommand accepts.
    fn accepts(&self) -> &'static [&'static str] {
        match self {
            Command::Rd(_) => &["rd"],
            Command::WzRate(_) => &["wz-rate"],
            Command::BtCorner(_) => &["bt-corner"],
            Command::SimP2p(_) => &["p2p"],
            Command::SimWz(_) => &["wz"],
            Command::SimBt(_) => &["bt"],
            Command::Softcover(_) => &["softcover"],
            Command::VerifyIdentities(_) => &["verify-identities"],
            Command::DumpCodebook { .. } => &["p2p", "wz", "bt"],
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("{THREADS_ENV}={v} is not a thread count")))?,
            ),
            _ => None,
        },
    };
    if n == Some(0) {
        return Err(CliError::Config("thread count must be at least 1".into()));
    }
    Ok(n)
}

fn execute(command: &Command) -> Result<(), CliError> {
    let common = command.common();
    let threads = thread_count(common.threads)?;
    let config = match &common.config {
        Some(path) => {
            let mut cfg = ExperimentConfig::load(path)?;
            if !command.accepts().contains(&cfg.scheme()) {
                return Err(CliError::Config(format!(
                    "{} expects a config with scheme {:?}, got {:?}",
                    command.name(),
                    command.accepts(),
                    cfg.scheme()
                )));
            }
            let notes = cfg.apply_overrides(common.seed, common.trials, common.n);
            Some((cfg, notes))
        }
        None if matches!(command, Command::VerifyIdentities(_)) => None,
        None => return Err(CliError::Config(format!("{} requires --config", command.name()))),
    };
    let out: PathBuf = common
        .out
        .clone()
        .or_else(|| config.as_ref().and_then(|(c, _)| c.out().map(Path::to_path_buf)))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out.display())))?;

    let run = || -> Result<(), CliError> {
        let Some((cfg, notes)) = &config else {
            let notes: Vec<String> =
                [common.seed.map(|_| "--seed"), common.trials.map(|_| "--trials"), common.n.map(|_| "--n")]
                    .into_iter()
                    .flatten()
                    .map(|f| format!("{f} has no effect on the shipped fixtures"))
                    .collect();
            return commands::verify_identities(None, None, &notes, &out);
        };
        match (command, cfg) {
            (Command::Rd(_), ExperimentConfig::Rd(s)) => commands::rd(cfg, s, notes, &out),
            (Command::WzRate(_), ExperimentConfig::WzRate(s)) => commands::wz_rate(cfg, s, notes, &out),
            (Command::BtCorner(_), ExperimentConfig::BtCorner(s)) => commands::bt_corner(cfg, s, notes, &out),
            (Command::Softcover(_), ExperimentConfig::Softcover(s)) => commands::softcover(cfg, s, notes, &out),
            (Command::VerifyIdentities(_), ExperimentConfig::VerifyIdentities(s)) => {
                commands::verify_identities(Some(cfg), Some(s), notes, &out)
            }
            (Command::DumpCodebook { block, .. }, _) => commands::dump_codebook(cfg, *block, &out),
            _ => commands::simulate(command.name(), cfg, notes, &out),
        }
    };
    match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Parses `args` (including the program name) and runs; returns the process exit code.
pub fn run_cli<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("softcover {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
