//! `agora` — drive the privacy-leakage pipeline: build a population,
//! simulate the platform, contaminate snapshots, evaluate held-out agents,
//! detect leaks, and aggregate reports.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use agora_cli::config::CliConfig;
use agora_cli::stages::{
    run_all, run_analyze, run_detect, run_inject, run_population, run_simulate, run_testbed,
    Paths,
};
use agora_cli::CliError;

#[derive(Parser)]
#[command(name = "agora", version, about = "Agent social-platform privacy pipeline")]
struct Cli {
    /// Root RNG seed; every stage derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// JSON config file; omitted fields take desk-scale defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for all pipeline artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate population and held-out profiles, personas, and subreddits.
    Population,
    /// Run the organic multi-agent simulation; writes the base snapshot.
    Simulate,
    /// Contaminate the base snapshot at each configured nudge level.
    Inject,
    /// Run the frozen-snapshot evaluation matrix over held-out personas.
    Testbed,
    /// Classify simulated content against ground-truth profiles.
    Detect,
    /// Aggregate verdicts and results into CSV tables and a summary.
    Analyze,
    /// Run every stage in order.
    All,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    config.validate()?;
    std::fs::create_dir_all(&cli.out)?;
    let paths = Paths::new(&cli.out);
    match cli.command {
        Command::Population => run_population(&paths, &config, cli.seed),
        Command::Simulate => run_simulate(&paths, &config, cli.seed),
        Command::Inject => run_inject(&paths, &config, cli.seed),
        Command::Testbed => run_testbed(&paths, &config, cli.seed),
        Command::Detect => run_detect(&paths, &config, cli.seed),
        Command::Analyze => run_analyze(&paths, &config, cli.seed),
        Command::All => run_all(&paths, &config, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("agora: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
