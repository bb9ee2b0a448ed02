mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(tailcovar::Error),
}

impl From<tailcovar::Error> for CliError {
    fn from(e: tailcovar::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.category(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) => 1,
        }
    }

    fn report(&self) {
        let message = match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        };
        let body = serde_json::json!({ "error": self.category(), "message": message });
        eprintln!("{body}");
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let ctx = Ctx {
        seed: cli.seed,
        format: cli.output.into(),
    };
    match &cli.command {
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Grid(a) => commands::grid(&ctx, a),
        Command::Truth(a) => commands::truth_cmd(&ctx, a),
        Command::Estimate(a) => commands::estimate(&ctx, a),
        Command::Rolling(a) => commands::rolling(&ctx, a),
        Command::Hillplot(a) => commands::hillplot(&ctx, a),
        Command::Etaplot(a) => commands::etaplot(&ctx, a),
        Command::Sample(a) => commands::sample(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            err.report();
            return ExitCode::from(err.exit_code());
        }
    };
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}
