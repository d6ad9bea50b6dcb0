//! `labelprop`: run, sweep and score label-propagation community detection.

mod common;
mod detect;
mod info;
mod score;
mod sweep;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "labelprop",
    version,
    about = "Label-propagation community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities in one graph and write `vertex<TAB>community` lines.
    Detect(detect::DetectArgs),
    /// Run a parameter grid over several graphs and emit one CSV row per run.
    Sweep(sweep::SweepArgs),
    /// Compute the modularity of a community assignment.
    Score(score::ScoreArgs),
    /// Print vertex count, edge count and average degree of a graph.
    Info(info::InfoArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(args) => detect::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Score(args) => score::run(args),
        Command::Info(args) => info::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
