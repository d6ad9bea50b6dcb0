//! RAK label propagation (also known as LPA).
//!
//! Every vertex starts in its own community. In each iteration, vertices are
//! visited once and each adopts the label carrying the most interconnecting
//! weight among its arcs. Updates are asynchronous: a vertex reads whatever its
//! neighbors hold right now, including labels written earlier in the same
//! iteration. Iteration stops when at most `tolerance` of the vertices changed
//! label, or after `max_iterations`.
//!
//! On a preprocessed graph the vertex's self-loop feeds its own current label,
//! so a vertex always keeps a vote for where it already is.
//!
//! By default each iteration visits the vertices in a fresh seeded random
//! order. With strict tie-breaking and a fixed index order, a tie at the first
//! vertex of a dense group is always resolved toward the lower-id neighbor
//! outside the group, and that label then sweeps through every following group
//! in the same pass. [`VisitOrder::Index`] restores the fixed order.

use std::sync::atomic::{AtomicU32, Ordering};
use std::time::Instant;

use crate::detect::{
    check_tolerance, converged, DetectionResult, ParamError, Schedule, VisitOrder,
};
use crate::graph::{CommunityAssignment, Graph, VertexId};
use crate::prng::{worker_seed, XorShift32};
use crate::quality::modularity;
use crate::tally::{choose_max_label, LabelTally};

#[derive(Clone, Debug, PartialEq)]
pub struct RakParams {
    /// Stop once the fraction of vertices that changed label is at most this.
    pub tolerance: f64,
    /// Break weight ties by first-seen label instead of at random.
    pub strict: bool,
    pub max_iterations: usize,
    /// Worker threads; 1 runs sequentially.
    pub workers: usize,
    pub seed: u32,
    pub order: VisitOrder,
}

impl Default for RakParams {
    fn default() -> Self {
        RakParams {
            tolerance: 0.05,
            strict: true,
            max_iterations: 100,
            workers: 1,
            seed: 1,
            order: VisitOrder::default(),
        }
    }
}

impl RakParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        check_tolerance(self.tolerance)?;
        if self.max_iterations == 0 {
            return Err(ParamError::MaxIterations);
        }
        if self.workers == 0 {
            return Err(ParamError::Workers);
        }
        Ok(())
    }
}

struct Worker {
    tally: LabelTally,
    rng: XorShift32,
    changed: usize,
}

/// Runs RAK on a preprocessed graph.
///
/// Panics on invalid parameters. Debug builds also reject asymmetric graphs.
pub fn rak_detect(graph: &Graph, params: &RakParams) -> DetectionResult {
    run(graph, params, None)
}

/// [`rak_detect`] that calls `observer(iteration, labels)` after every
/// iteration, with 1-based iteration numbers.
pub fn rak_detect_observed<F>(graph: &Graph, params: &RakParams, mut observer: F) -> DetectionResult
where
    F: FnMut(usize, &[VertexId]),
{
    run(graph, params, Some(&mut observer))
}

type IterationObserver<'a> = dyn FnMut(usize, &[VertexId]) + 'a;

fn run(
    graph: &Graph,
    params: &RakParams,
    mut observer: Option<&mut IterationObserver>,
) -> DetectionResult {
    if let Err(e) = params.validate() {
        panic!("invalid RAK parameters: {e}");
    }
    debug_assert!(
        graph.is_symmetric(),
        "RAK needs a symmetric (preprocessed) graph"
    );

    let n = graph.vertex_count();
    let start = Instant::now();
    let labels: Vec<AtomicU32> = (0..n as VertexId).map(AtomicU32::new).collect();
    let mut workers: Vec<Worker> = (0..params.workers as u32)
        .map(|k| Worker {
            tally: LabelTally::new(n),
            rng: XorShift32::new(worker_seed(params.seed, k)),
            changed: 0,
        })
        .collect();

    let mut schedule = Schedule::new(params.order, n, params.seed);
    let mut iterations = 0;
    while n > 0 && iterations < params.max_iterations {
        for w in &mut workers {
            w.changed = 0;
        }
        schedule.run(n, &mut workers, |worker, v| {
            for (u, weight) in graph.arcs(v) {
                worker
                    .tally
                    .add(labels[u as usize].load(Ordering::Relaxed), weight);
            }
            if worker.tally.is_empty() {
                return;
            }
            let best = choose_max_label(&worker.tally, params.strict, &mut worker.rng);
            worker.tally.clear();
            if labels[v as usize].load(Ordering::Relaxed) != best {
                labels[v as usize].store(best, Ordering::Relaxed);
                worker.changed += 1;
            }
        });
        iterations += 1;

        let changed: usize = workers.iter().map(|w| w.changed).sum();
        debug_assert!(changed <= n);
        if let Some(observer) = observer.as_mut() {
            let snapshot: Vec<VertexId> =
                labels.iter().map(|l| l.load(Ordering::Relaxed)).collect();
            observer(iterations, &snapshot);
        }
        if converged(changed, n, params.tolerance) {
            break;
        }
    }

    let assignment =
        CommunityAssignment::new(labels.into_iter().map(AtomicU32::into_inner).collect());
    let elapsed = start.elapsed();
    DetectionResult {
        modularity: modularity(graph, &assignment),
        assignment,
        iterations,
        elapsed,
    }
}
