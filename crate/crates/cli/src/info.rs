use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use labelprop::graph::{preprocess_with, PreprocessOptions};
use labelprop::io::read_graph;

#[derive(Args)]
pub struct InfoArgs {
    graph: PathBuf,
}

/// Statistics of the symmetrized input: `edges` counts arcs between distinct
/// vertices (each undirected edge twice), and `avg_degree` is `edges / vertices`.
/// Self-loops present in the file are reported separately.
pub fn run(args: InfoArgs) -> Result<()> {
    let raw =
        read_graph(&args.graph).with_context(|| format!("cannot load {}", args.graph.display()))?;
    let loops = raw.self_loop_count();
    let g = preprocess_with(
        &raw,
        PreprocessOptions {
            unit_weights: false,
            self_loops: false,
        },
    );
    let vertices = g.vertex_count();
    let edges = g.edge_count();
    let avg = if vertices == 0 {
        0.0
    } else {
        edges as f64 / vertices as f64
    };
    println!("vertices\t{vertices}");
    println!("edges\t{edges}");
    println!("avg_degree\t{avg:.2}");
    println!("self_loops\t{loops}");
    Ok(())
}
