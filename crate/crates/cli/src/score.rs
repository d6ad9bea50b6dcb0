use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use labelprop::{modularity, CommunityAssignment, VertexId};

use crate::common::{load, GraphOptions};

#[derive(Args)]
pub struct ScoreArgs {
    /// Graph file, preprocessed the same way as for `detect`.
    graph: PathBuf,
    /// `vertex<TAB>community` lines covering every vertex exactly once.
    assignment: PathBuf,
    /// Decimal places printed.
    #[arg(long, default_value_t = 6)]
    precision: usize,
    #[command(flatten)]
    options: GraphOptions,
}

pub fn run(args: ScoreArgs) -> Result<()> {
    let graph = load(&args.graph, args.options)?;
    let assignment = read_assignment(&args.assignment, graph.vertex_count())?;
    println!("{:.*}", args.precision, modularity(&graph, &assignment));
    Ok(())
}

/// Community ids in the file may be any unsigned integers; they are compacted
/// to `0..k` in first-seen order.
fn read_assignment(path: &PathBuf, vertex_count: usize) -> Result<CommunityAssignment> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut labels: Vec<Option<VertexId>> = vec![None; vertex_count];
    let mut ids: HashMap<u64, VertexId> = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 2 {
            bail!("line {line}: expected `vertex<TAB>community`");
        }
        let vertex: usize = record[0]
            .trim()
            .parse()
            .with_context(|| format!("line {line}: bad vertex id"))?;
        let community: u64 = record[1]
            .trim()
            .parse()
            .with_context(|| format!("line {line}: bad community id"))?;
        if vertex >= vertex_count {
            bail!("line {line}: vertex {vertex} is not in the graph ({vertex_count} vertices)");
        }
        if labels[vertex].is_some() {
            bail!("duplicate vertex {vertex} at line {line}");
        }
        let next = ids.len() as VertexId;
        labels[vertex] = Some(*ids.entry(community).or_insert(next));
    }
    if let Some(missing) = labels.iter().position(Option::is_none) {
        bail!("missing vertex {missing}");
    }
    Ok(CommunityAssignment::new(
        labels.into_iter().flatten().collect(),
    ))
}
