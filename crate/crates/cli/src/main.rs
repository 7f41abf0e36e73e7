use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod output;
mod problem;
mod run;

use config::ConfigError;
use run::RunError;

/// Conservation laws on curved backgrounds.
#[derive(Parser)]
#[command(name = "curvedflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write CSV files plus summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides CURVEDFLOW_OUT and the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check a configuration, printing it with all defaults filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the CSV schemas.
    Schemas,
}

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_UNREADABLE: u8 = 4;
const EXIT_INVALID: u8 = 5;

fn exit_code(e: &RunError) -> u8 {
    match e {
        RunError::Config(ConfigError::Read { .. }) => EXIT_UNREADABLE,
        RunError::Config(ConfigError::Parse(_)) => EXIT_PARSE,
        RunError::Config(ConfigError::Invalid(_)) | RunError::Problem(_) => EXIT_INVALID,
        RunError::Io(_) => EXIT_IO,
    }
}

fn fail(e: RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Schemas => {
            for (file, header, about) in output::SCHEMAS {
                println!("{file}\n  {header}\n  {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let cfg = match config::parse_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            if let Err(e) = run::prepare(&cfg) {
                return fail(e);
            }
            print!("{}", toml::to_string(&cfg).expect("config serializes"));
            ExitCode::SUCCESS
        }
        Command::Run { config, out } => {
            let cfg = match config::parse_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            let dir = out
                .or_else(|| std::env::var_os("CURVEDFLOW_OUT").map(PathBuf::from))
                .unwrap_or_else(|| cfg.out_dir.clone());
            match run::execute(&cfg, &dir) {
                Ok(summary) => {
                    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
                    if summary.failed() {
                        eprintln!("error: {}", summary.error.as_deref().unwrap_or("solver failed"));
                        ExitCode::from(EXIT_NUMERICAL)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
