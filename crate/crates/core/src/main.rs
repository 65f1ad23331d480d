use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nled::scenario::{load_config, run_file};

#[derive(Parser)]
#[command(name = "nled", version, about = "Photon dispersion in nonlinear electrodynamics backgrounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the sweep table and report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// CSV sweep output, overriding `outputs.csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON report output, overriding `outputs.json`.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Validate a scenario without running it.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, csv, json } => run_file(&config, csv, json).map(|_| ()),
        Command::Check { config } => load_config(&config).map(|_| println!("ok")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nled: {}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
