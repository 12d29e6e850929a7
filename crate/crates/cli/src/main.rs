//! `msd`: command-line front end for the distillation simulator.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};
use output::Provenance;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) | CliError::Io(_) => 2,
            CliError::Check(_) => 3,
        }
    }
}

impl From<msd_core::Error> for CliError {
    fn from(e: msd_core::Error) -> Self {
        use msd_core::Error::*;
        match e {
            Parse { .. }
            | PauliSyntax(_)
            | InvalidCode(_)
            | UnknownCode(_)
            | ParameterOutOfRange { .. }
            | BracketInvalid(_)
            | TooManyQubits { .. }
            | GuardExceeded { .. }
            | NotCss(_)
            | NonCommuting { .. }
            | DependentGenerators(_) => CliError::Usage(e.to_string()),
            Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn run(cli: &Cli, prov: &Provenance) -> Result<(), CliError> {
    match &cli.command {
        Command::Iterate(a) => commands::iterate_cmd(a, prov),
        Command::Flow(a) => commands::flow_cmd(a, prov),
        Command::Threshold(a) => commands::threshold_cmd(a, prov),
        Command::Deviation(a) => commands::deviation_cmd(a, prov),
        Command::Convergence(a) => commands::convergence_cmd(a, prov),
        Command::Cost(a) => commands::cost_cmd(a, prov),
        Command::StandardForm(a) => commands::standard_form_cmd(a, prov),
        Command::OracleCheck(a) => commands::oracle_cmd(a, prov),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let prov = Provenance::new(&argv);
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| run(&cli, &prov)),
            Err(e) => Err(CliError::Usage(format!("--jobs: {e}"))),
        },
        None => run(&cli, &prov),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("msd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
