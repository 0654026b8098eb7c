//! Command-line harness: dataset generation, single learning runs, grid
//! sweeps, and the self-test suite.
//!
//! Exit codes: 0 success (or an accepting verdict), 1 usage and I/O
//! errors, 2 the testers rejected the data.

mod config;
mod gen;
mod learn;
mod report;
mod selftest;
mod sweep;

use std::error::Error;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "halflearn",
    version,
    about = "Tester-learner for halfspaces under Gaussian marginals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic labeled dataset.
    Gen(GenArgs),
    /// Run the boosted learner on a dataset file.
    Learn(LearnArgs),
    /// Run a budget x threshold grid of trials; write CSV and JSON reports.
    Sweep(SweepArgs),
    /// Check the statistical invariants the learner relies on.
    Selftest,
}

#[derive(Args)]
struct GenArgs {
    /// Config file of key=value lines; flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long)]
    d: Option<String>,
    /// Number of points.
    #[arg(long)]
    n: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<String>,
    /// Corruption budget in [0, 0.5).
    #[arg(long)]
    budget: Option<String>,
    /// Truth boundary offset along the direction.
    #[arg(long)]
    threshold: Option<String>,
    /// Label adversary: boundary, tail, or random.
    #[arg(long)]
    adversary: Option<String>,
    /// Marginal: gaussian, scaled:<f>, mixture:<s>, or cube:<h>.
    #[arg(long)]
    marginal: Option<String>,
    /// Output path.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct LearnArgs {
    /// Dataset file in the gen output format.
    dataset: PathBuf,
    /// Config file of key=value lines; flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Target excess error.
    #[arg(long)]
    epsilon: Option<String>,
    /// Failure probability for the boosted verdict.
    #[arg(long)]
    tau: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Config file of key=value lines; flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long)]
    d: Option<String>,
    /// Points per trial.
    #[arg(long)]
    n: Option<String>,
    /// Target excess error.
    #[arg(long)]
    epsilon: Option<String>,
    /// Failure probability bound carried into each trial's config.
    #[arg(long)]
    tau: Option<String>,
    /// Master seed; each trial derives its own from the grid position.
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated corruption budgets (one grid axis).
    #[arg(long)]
    budget: Option<String>,
    /// Comma-separated boundary offsets (the other grid axis).
    #[arg(long)]
    threshold: Option<String>,
    /// Label adversary: boundary, tail, or random.
    #[arg(long)]
    adversary: Option<String>,
    /// Marginal: gaussian, scaled:<f>, mixture:<s>, or cube:<h>.
    #[arg(long)]
    marginal: Option<String>,
    /// Trials per grid cell.
    #[arg(long)]
    trials: Option<String>,
    /// Report base path; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: Option<String>,
    /// Record real wall-clock times in the CSV (costs byte reproducibility).
    #[arg(long)]
    timing: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };

    let result: Result<i32, Box<dyn Error>> = match &cli.command {
        Command::Gen(args) => build_config(&args.config, &gen_overrides(args))
            .map_err(Into::into)
            .and_then(|cfg| gen::run(&cfg)),
        Command::Learn(args) => build_config(&args.config, &learn_overrides(args))
            .map_err(Into::into)
            .and_then(|cfg| learn::run(&args.dataset, &cfg)),
        Command::Sweep(args) => build_config(&args.config, &sweep_overrides(args))
            .map_err(Into::into)
            .and_then(|cfg| sweep::run(&cfg, args.timing)),
        Command::Selftest => return selftest::run(),
    };

    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn build_config(
    file: &Option<PathBuf>,
    overrides: &[(&str, &Option<String>)],
) -> Result<ExperimentConfig, config::ConfigError> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = file {
        cfg.apply_file(path)?;
    }
    cfg.apply_overrides(overrides)?;
    Ok(cfg)
}

fn gen_overrides(a: &GenArgs) -> Vec<(&'static str, &Option<String>)> {
    vec![
        ("d", &a.d),
        ("n", &a.n),
        ("seed", &a.seed),
        ("budget", &a.budget),
        ("threshold", &a.threshold),
        ("adversary", &a.adversary),
        ("marginal", &a.marginal),
        ("out", &a.out),
    ]
}

fn learn_overrides(a: &LearnArgs) -> Vec<(&'static str, &Option<String>)> {
    vec![
        ("epsilon", &a.epsilon),
        ("tau", &a.tau),
        ("seed", &a.seed),
    ]
}

fn sweep_overrides(a: &SweepArgs) -> Vec<(&'static str, &Option<String>)> {
    vec![
        ("d", &a.d),
        ("n", &a.n),
        ("epsilon", &a.epsilon),
        ("tau", &a.tau),
        ("seed", &a.seed),
        ("budget", &a.budget),
        ("threshold", &a.threshold),
        ("adversary", &a.adversary),
        ("marginal", &a.marginal),
        ("trials", &a.trials),
        ("out", &a.out),
    ]
}
