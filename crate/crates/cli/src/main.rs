//! `qihe`: command-line front end for `qihe-core`.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing criterion, 2 on
//! validation or argument errors, 3 when the capacity limit is exceeded and 64
//! on malformed command lines.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qihe_core::qcore::set_max_dimension;
use qihe_core::thermo::{ThermalContext, Units};
use qihe_core::Error;

use args::{Cli, Command, UnitsArg};
use commands::Env;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Capacity { .. }) => 3,
            CliError::Core(_) | CliError::Io(_) => 2,
            CliError::Usage(_) => 64,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let config = cli.config;
    if config.capacity < 4 {
        return Err(Error::Argument(format!(
            "capacity must be at least 4, got {}",
            config.capacity
        ))
        .into());
    }
    set_max_dimension(config.capacity);
    let units = match config.units {
        UnitsArg::Natural => Units::Natural,
        UnitsArg::Si => Units::Si,
    };
    let ctx = ThermalContext::new(config.temperature, units)?;
    let format = config.output;
    let env = Env { config, ctx };

    let (output, ok) = match &cli.command {
        Command::Work(a) => (commands::work(a, &env)?, true),
        Command::Carnot(a) => (commands::carnot(a)?, true),
        Command::Protocol(a) => (commands::protocol(a, &env)?, true),
        Command::Holevo(a) => (commands::holevo(a)?, true),
        Command::Tradeoff(a) => (commands::tradeoff(a, &env)?, true),
        Command::Typical(a) => (commands::typical(a)?, true),
        Command::Refactor(a) => (commands::refactor(a, &env)?, true),
        Command::Verify(a) => commands::verify(a, &env)?,
    };
    Ok((output.render(format), ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{text}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
