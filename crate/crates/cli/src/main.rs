//! The `harakat` command-line diacritizer.
//!
//! Exit codes: 0 on success, 1 on runtime errors, 2 on usage errors
//! (including missing input files, rejected before any output is
//! written).

mod commands;
mod config;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// A usage-level failure: wrong arguments, missing inputs. Exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage_error<T>(message: impl Into<String>) -> anyhow::Result<T> {
    Err(anyhow::Error::new(UsageError(message.into())))
}

#[derive(Parser)]
#[command(
    name = "harakat",
    version,
    about = "Arabic diacritic recovery: biLSTM core-word and case-ending models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Key-value config file (TOML); command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a core-word or case-ending model and its resource tables.
    Train(commands::train::TrainArgs),
    /// Diacritize text with trained models.
    Diacritize(commands::diacritize::DiacritizeArgs),
    /// Score a hypothesis (or a model run) against a reference.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Render case-ending confusion and distribution tables.
    Report(commands::report::ReportArgs),
    /// Dump encoded feature rows for inspection.
    DumpFeatures(commands::dump::DumpFeaturesArgs),
    /// Dump the transliteration table as TSV.
    DumpCodec(commands::dump::DumpCodecArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => commands::train::run(args),
        Command::Diacritize(args) => commands::diacritize::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Report(args) => commands::report::run(args),
        Command::DumpFeatures(args) => commands::dump::run_features(args),
        Command::DumpCodec(args) => commands::dump::run_codec(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
