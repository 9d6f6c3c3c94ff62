use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mucb_intervals::experiment::{format_trace, replay, run_experiment, RunOptions};
use mucb_intervals::{validate_config, Error, ExperimentConfig};

/// Simulate decentralized multiplayer bandits under reward asymmetry.
#[derive(Parser)]
#[command(name = "mucb", version)]
struct Cli {
    /// Worker threads for independent runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every policy and repetition of an experiment and write CSVs,
    /// summary.json and the regret plot.
    Run {
        config: PathBuf,
        /// Write every round to the CSVs instead of the checkpoint grid.
        #[arg(long)]
        dense: bool,
        /// Skip the plot.
        #[arg(long)]
        no_plots: bool,
    },
    /// Check a config and list every problem found.
    Validate { config: PathBuf },
    /// Rerun one repetition and print its action and elimination log.
    Replay {
        config: PathBuf,
        /// Repetition index (the CSV run_id) to rerun.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only this policy label.
        #[arg(long)]
        policy: Option<String>,
        /// Print one line per round.
        #[arg(long)]
        trace: bool,
    },
}

fn report(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::FAILURE;
        }
    }
    match cli.command {
        Command::Validate { config } => match validate_config(&config) {
            Ok(diags) if diags.is_empty() => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Ok(diags) => {
                for d in &diags {
                    eprintln!("{}: {d}", config.display());
                }
                ExitCode::from(2)
            }
            Err(e) => report(e),
        },
        Command::Run { config, dense, no_plots } => {
            let result = ExperimentConfig::load(&config)
                .and_then(|c| run_experiment(&c, RunOptions { dense, no_plots }));
            match result {
                Ok(rep) => {
                    for p in &rep.summary.policies {
                        println!(
                            "{:<20} runs={:<4} final median regret {:.3} [{:.3}, {:.3}]",
                            p.label, p.runs, p.final_median_regret, p.final_lower_regret, p.final_upper_regret
                        );
                    }
                    for f in &rep.files {
                        println!("wrote {}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => report(e),
            }
        }
        Command::Replay { config, seed, policy, trace } => {
            let result = ExperimentConfig::load(&config).and_then(|c| replay(&c, policy.as_deref(), seed));
            match result {
                Ok(runs) => {
                    for (label, env, record) in &runs {
                        print!("{}", format_trace(label, env, record, trace));
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => report(e),
            }
        }
    }
}
