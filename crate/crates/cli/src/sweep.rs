use std::path::{Path, PathBuf};

use anyhow::{ensure, Result};
use clap::{Args, ValueEnum};

use crate::common::{
    elapsed_ms, load, output, Algorithm, GraphOptions, Order, RunConfig, THREADS_ENV,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strict,
    NonStrict,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::NonStrict => "non-strict",
        }
    }
}

pub const HEADER: [&str; 11] = [
    "graph",
    "algorithm",
    "mode",
    "tolerance",
    "max_labels",
    "memory_size",
    "workers",
    "seed",
    "iterations",
    "elapsed_ms",
    "modularity",
];

#[derive(Args)]
pub struct SweepArgs {
    /// Algorithms to sweep, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "rak")]
    algorithm: Vec<Algorithm>,
    /// Graph files; a file that fails to load is skipped with a warning.
    graphs: Vec<PathBuf>,
    /// Tolerance grid for rak and copra.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.05,0.01,0.001,0.0001"
    )]
    tolerances: Vec<f64>,
    /// Tolerance grid for slpa, where the tolerance only drives the early stop.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    slpa_tolerances: Vec<f64>,
    /// COPRA labels-per-vertex grid.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    max_labels: Vec<usize>,
    /// SLPA memory size grid.
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    memory_sizes: Vec<usize>,
    /// Tie-breaking modes for rak and slpa.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "strict,non-strict"
    )]
    modes: Vec<Mode>,
    /// Worker counts.
    #[arg(long, value_delimiter = ',', env = THREADS_ENV, default_value = "1")]
    workers: Vec<usize>,
    /// Runs per combination; repetition `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    #[arg(long, default_value_t = 1)]
    seed: u32,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    /// Vertex visit order; each algorithm's own default when absent.
    #[arg(long, value_enum)]
    order: Option<Order>,
    /// CSV destination; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    options: GraphOptions,
}

/// Parameter combinations for one algorithm, in emission order.
fn configs(args: &SweepArgs, algorithm: Algorithm) -> Vec<(Option<Mode>, RunConfig)> {
    let base = RunConfig {
        algorithm,
        tolerance: algorithm.default_tolerance(),
        strict: true,
        workers: 1,
        seed: args.seed,
        max_iterations: args.max_iterations,
        max_labels: 0,
        memory_size: 0,
        order: args.order.map_or(algorithm.default_order(), Into::into),
    };
    let mut out = Vec::new();
    let modes: Vec<Option<Mode>> = match algorithm {
        Algorithm::Copra => vec![None],
        _ => args.modes.iter().copied().map(Some).collect(),
    };
    let tolerances = match algorithm {
        Algorithm::Slpa => &args.slpa_tolerances,
        _ => &args.tolerances,
    };
    let max_labels: &[usize] = match algorithm {
        Algorithm::Copra => &args.max_labels,
        _ => &[0],
    };
    let memory_sizes: &[usize] = match algorithm {
        Algorithm::Slpa => &args.memory_sizes,
        _ => &[0],
    };
    for &tolerance in tolerances {
        for &max_labels in max_labels {
            for &memory_size in memory_sizes {
                for &mode in &modes {
                    for &workers in &args.workers {
                        for r in 0..args.repetitions {
                            let config = RunConfig {
                                tolerance,
                                strict: mode != Some(Mode::NonStrict),
                                workers,
                                seed: args.seed.wrapping_add(r),
                                max_labels,
                                memory_size,
                                ..base.clone()
                            };
                            out.push((mode, config));
                        }
                    }
                }
            }
        }
    }
    out
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .unwrap_or(path.as_os_str())
        .to_string_lossy()
        .into_owned()
}

pub fn run(args: SweepArgs) -> Result<()> {
    ensure!(args.repetitions >= 1, "repetitions must be at least 1");
    for (name, empty) in [
        ("tolerances", args.tolerances.is_empty()),
        ("slpa-tolerances", args.slpa_tolerances.is_empty()),
        ("max-labels", args.max_labels.is_empty()),
        ("memory-sizes", args.memory_sizes.is_empty()),
        ("modes", args.modes.is_empty()),
        ("workers", args.workers.is_empty()),
    ] {
        ensure!(!empty, "the {name} grid is empty");
    }
    let plan: Vec<_> = args
        .algorithm
        .iter()
        .flat_map(|&a| configs(&args, a))
        .collect();
    for (_, config) in &plan {
        config.check()?;
    }

    let mut csv = csv::Writer::from_writer(output(args.output.as_ref())?);
    csv.write_record(HEADER)?;
    csv.flush()?;
    for path in &args.graphs {
        let graph = match load(path, args.options) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("warning: skipping {}: {e:#}", path.display());
                continue;
            }
        };
        let name = graph_name(path);
        for (mode, config) in &plan {
            let result = config.run(&graph);
            let blank_unless = |used: bool, value: usize| {
                if used {
                    value.to_string()
                } else {
                    String::new()
                }
            };
            csv.write_record([
                name.clone(),
                config.algorithm.name().to_string(),
                mode.map_or("", Mode::name).to_string(),
                config.tolerance.to_string(),
                blank_unless(config.algorithm == Algorithm::Copra, config.max_labels),
                blank_unless(config.algorithm == Algorithm::Slpa, config.memory_size),
                config.workers.to_string(),
                config.seed.to_string(),
                result.iterations.to_string(),
                format!("{:.3}", elapsed_ms(&result)),
                result.modularity.to_string(),
            ])?;
            csv.flush()?;
        }
    }
    Ok(())
}
