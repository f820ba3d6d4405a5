//! Library half of the `anth` binary: argument parsing, the subcommands and
//! their renderings. [`run`] is what `main` calls; tests drive it directly.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod input;
pub mod report;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "anth",
    version,
    about = "Exact anthyphairesis of quadratic surds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Maximum number of division steps.
    #[arg(long, env = "ANTH_MAX_STEPS", global = true)]
    pub steps: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand N, sqrt(P/Q) or (P+sqrt(D))/Q.
    Expand {
        input: String,
        #[arg(long)]
        pell: bool,
        #[arg(long)]
        negative_pell: bool,
    },
    /// Book X style division table for sqrt(N).
    Trace {
        n: String,
        /// Compare the rendered table with this file.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// One record per non-square N <= N_MAX.
    Sweep {
        n_max: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        pell: bool,
    },
    /// Fundamental solution of x^2 - N*y^2 = 1.
    Pell {
        n: String,
        #[arg(long)]
        negative_pell: bool,
    },
    /// The first COUNT convergents.
    Approx {
        input: String,
        #[arg(default_value_t = 10)]
        count: usize,
    },
    /// Run every invariant check for one N or sqrt(P/Q).
    Verify { input: String },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("step limit of {0} reached")]
    StepLimit(u64),
    #[error("golden mismatch: {0}")]
    Golden(String),
    #[error("{0}")]
    Falsified(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::StepLimit(_) => 3,
            CliError::Golden(_) => 4,
            CliError::Falsified(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<anth_core::Error> for CliError {
    fn from(e: anth_core::Error) -> Self {
        use anth_core::Error as E;
        match e {
            E::StepLimit { limit } => CliError::StepLimit(limit),
            E::Falsified(msg) => CliError::Falsified(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<input::ParseError> for CliError {
    fn from(e: input::ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Output of one command: the report body plus an exit code that may be
/// non-zero even when a report was produced (sweep and verify failures).
pub struct Outcome {
    pub body: String,
    pub exit: Result<(), CliError>,
}

impl Outcome {
    pub fn ok(body: String) -> Self {
        Self { body, exit: Ok(()) }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = commands::dispatch(&cli, stderr);
    let written = match (&outcome, &cli.out) {
        (Ok(o), Some(path)) => std::fs::write(path, &o.body).map_err(CliError::from),
        (Ok(o), None) => stdout.write_all(o.body.as_bytes()).map_err(CliError::from),
        (Err(_), _) => Ok(()),
    };
    let result = outcome.and_then(|o| written.and(o.exit));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
