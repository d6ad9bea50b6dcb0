use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crate::common::{
    elapsed_ms, load, output, Algorithm, GraphOptions, Order, RunConfig, THREADS_ENV,
};

#[derive(Args)]
pub struct DetectArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Graph file; `.mtx` is read as MatrixMarket, anything else as an edge list.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the assignment; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Convergence tolerance; defaults to 0.05 for rak and slpa, 0.01 for copra.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Break ties by the first heaviest label (the default).
    #[arg(long, overrides_with = "non_strict")]
    strict: bool,
    /// Break ties uniformly at random.
    #[arg(long)]
    non_strict: bool,
    #[arg(long, env = THREADS_ENV, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 1)]
    seed: u32,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    /// COPRA: labels kept per vertex.
    #[arg(long, default_value_t = 8)]
    max_labels: usize,
    /// SLPA: memory slots per vertex.
    #[arg(long, default_value_t = 20)]
    memory_size: usize,
    /// Vertex visit order; rak defaults to shuffled, the others to index.
    #[arg(long, value_enum)]
    order: Option<Order>,
    #[command(flatten)]
    graph: GraphOptions,
}

pub fn run(args: DetectArgs) -> Result<()> {
    let config = RunConfig {
        algorithm: args.algorithm,
        tolerance: args.tolerance.unwrap_or(args.algorithm.default_tolerance()),
        strict: !args.non_strict || args.strict,
        workers: args.threads,
        seed: args.seed,
        max_iterations: args.max_iterations,
        max_labels: args.max_labels,
        memory_size: args.memory_size,
        order: args
            .order
            .map_or(args.algorithm.default_order(), Into::into),
    };
    config.check()?;
    let graph = load(&args.input, args.graph)?;
    let result = config.run(&graph);

    let mut out = output(args.output.as_ref())?;
    let mut tsv = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_writer(&mut out);
    for (v, &c) in result.assignment.labels().iter().enumerate() {
        tsv.write_record([v.to_string(), c.to_string()])?;
    }
    tsv.flush()?;
    drop(tsv);
    out.flush()?;

    eprintln!(
        "algorithm={} vertices={} communities={} iterations={} elapsed_ms={:.3} modularity={}",
        config.algorithm.name(),
        graph.vertex_count(),
        result.assignment.community_count(),
        result.iterations,
        elapsed_ms(&result),
        result.modularity,
    );
    Ok(())
}
