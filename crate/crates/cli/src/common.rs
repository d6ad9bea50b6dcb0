//! Pieces shared by the subcommands: graph loading and algorithm dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use labelprop::copra::{copra_detect, CopraParams};
use labelprop::graph::{preprocess_with, PreprocessOptions};
use labelprop::io::read_graph;
use labelprop::rak::{rak_detect, RakParams};
use labelprop::slpa::{slpa_detect, SlpaParams};
use labelprop::{DetectionResult, Graph, VisitOrder};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "LABELPROP_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Rak,
    Copra,
    Slpa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rak => "rak",
            Algorithm::Copra => "copra",
            Algorithm::Slpa => "slpa",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Algorithm::Rak => RakParams::default().tolerance,
            Algorithm::Copra => CopraParams::default().tolerance,
            Algorithm::Slpa => SlpaParams::default().tolerance,
        }
    }

    pub fn default_order(self) -> VisitOrder {
        match self {
            Algorithm::Rak => RakParams::default().order,
            Algorithm::Copra => CopraParams::default().order,
            Algorithm::Slpa => SlpaParams::default().order,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Index,
    Shuffled,
}

impl From<Order> for VisitOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Index => VisitOrder::Index,
            Order::Shuffled => VisitOrder::Shuffled,
        }
    }
}

/// Preprocessing switches accepted by every subcommand that loads a graph.
#[derive(Args, Clone, Copy, Debug)]
pub struct GraphOptions {
    /// Do not add a self-loop to every vertex.
    #[arg(long)]
    pub no_self_loops: bool,
    /// Keep input edge weights instead of setting them all to 1.
    #[arg(long)]
    pub keep_weights: bool,
}

impl GraphOptions {
    pub fn preprocess(self) -> PreprocessOptions {
        PreprocessOptions {
            unit_weights: !self.keep_weights,
            self_loops: !self.no_self_loops,
        }
    }
}

pub fn load(path: &Path, options: GraphOptions) -> Result<Graph> {
    let raw = read_graph(path).with_context(|| format!("cannot load {}", path.display()))?;
    Ok(preprocess_with(&raw, options.preprocess()))
}

/// Every knob of one detection run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub tolerance: f64,
    pub strict: bool,
    pub workers: usize,
    pub seed: u32,
    pub max_iterations: usize,
    pub max_labels: usize,
    pub memory_size: usize,
    pub order: VisitOrder,
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        match self.algorithm {
            Algorithm::Rak => self.rak().validate()?,
            Algorithm::Copra => self.copra().validate()?,
            Algorithm::Slpa => self.slpa().validate()?,
        }
        Ok(())
    }

    fn rak(&self) -> RakParams {
        RakParams {
            tolerance: self.tolerance,
            strict: self.strict,
            max_iterations: self.max_iterations,
            workers: self.workers,
            seed: self.seed,
            order: self.order,
        }
    }

    fn copra(&self) -> CopraParams {
        CopraParams {
            tolerance: self.tolerance,
            max_labels: self.max_labels,
            max_iterations: self.max_iterations,
            workers: self.workers,
            seed: self.seed,
            order: self.order,
        }
    }

    fn slpa(&self) -> SlpaParams {
        SlpaParams {
            memory_size: self.memory_size,
            tolerance: self.tolerance,
            strict: self.strict,
            workers: self.workers,
            seed: self.seed,
            order: self.order,
        }
    }

    /// Call [`RunConfig::check`] first; the detectors panic on bad parameters.
    pub fn run(&self, graph: &Graph) -> DetectionResult {
        match self.algorithm {
            Algorithm::Rak => rak_detect(graph, &self.rak()),
            Algorithm::Copra => copra_detect(graph, &self.copra()),
            Algorithm::Slpa => slpa_detect(graph, &self.slpa()),
        }
    }
}

/// Buffered writer to `path`, or to standard output when `path` is absent or `-`.
pub fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn elapsed_ms(result: &DetectionResult) -> f64 {
    result.elapsed.as_secs_f64() * 1e3
}
