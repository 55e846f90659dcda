use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ssiarch::{run, CliError, Command, OutputFormat, RunConfig, ScopeArg};
use ssiarch_core::Severity;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FailOn {
    Error,
    Warning,
    Info,
}

impl From<FailOn> for Severity {
    fn from(f: FailOn) -> Self {
        match f {
            FailOn::Error => Severity::Error,
            FailOn::Warning => Severity::Warning,
            FailOn::Info => Severity::Info,
        }
    }
}

/// Checks DI/SSI architecture models against the NFR knowledge base.
#[derive(Debug, Parser)]
#[command(name = "ssiarch", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Architecture model in the ssiarch DSL.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,

    /// Knowledge-base extension file; repeatable, merged in order.
    #[arg(long = "kb", value_name = "PATH", num_args = 1..)]
    kb: Vec<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Lowest severity that makes the exit code nonzero.
    #[arg(long, value_enum, default_value = "error")]
    fail_on: FailOn,

    #[arg(long, value_enum)]
    scope: Option<ScopeArg>,

    /// Compare the dependency table with rule-derived dependencies.
    #[arg(long)]
    diff: bool,

    /// Scenario file for `simulate`.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        command: cli.command,
        model_path: cli.model,
        kb_extension_paths: cli.kb,
        output_format: cli.format,
        fail_on: cli.fail_on.into(),
        scope: cli.scope,
        diff: cli.diff,
        scenario_path: cli.scenario,
        no_color: std::env::var_os("SSIARCH_NO_COLOR").is_some(),
    };
    match run(&config) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.output.as_bytes()).is_err() {
                return ExitCode::from(CliError::EXIT_CODE as u8);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("ssiarch: {e}");
            ExitCode::from(CliError::EXIT_CODE as u8)
        }
    }
}
