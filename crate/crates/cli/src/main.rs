use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghzsim_cli::{cmd_run, cmd_sweep, cmd_validate, load_config, Overrides};

/// Three-qubit GHZ preparation under a secular Lindblad bath.
#[derive(Parser)]
#[command(name = "ghzsim", version)]
struct Cli {
    /// JSON config file. Missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path, overrides `output_path` from the config.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Propagation method: expm or rk4.
    #[arg(long, global = true, value_parser = ["expm", "rk4"])]
    method: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol once and print the metrics.
    Run,
    /// Sweep omega/g and write one CSV row per point.
    Sweep,
    /// Check the closed-form dissipators against the generic builder.
    Validate,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let ov = Overrides {
        output: cli.output,
        method: cli.method,
    };
    let result = load_config(cli.config.as_deref(), &ov).and_then(|cfg| match cli.command {
        Command::Run => cmd_run(&cfg, io::stdout().lock()).map(|_| true),
        Command::Sweep => cmd_sweep(&cfg, io::stdout().lock(), io::stderr().lock()).map(|_| true),
        Command::Validate => cmd_validate(&cfg, io::stdout().lock()),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
