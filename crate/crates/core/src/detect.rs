//! Pieces shared by the three detectors: results, parameter errors and the
//! vertex-parallel iteration driver.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{CommunityAssignment, VertexId};
use crate::prng::XorShift32;

/// Vertices handed to a worker per grab in parallel runs.
pub const CHUNK_SIZE: usize = 1024;

/// Order in which an iteration visits the vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VisitOrder {
    /// `0, 1, ..., n-1` every iteration.
    Index,
    /// A fresh seeded permutation every iteration.
    #[default]
    Shuffled,
}

/// Visit order for one run; owns the permutation and its generator.
pub(crate) struct Schedule {
    order: Option<(Vec<VertexId>, XorShift32)>,
}

impl Schedule {
    /// The shuffle stream is derived from the run seed but kept apart from the
    /// worker streams.
    pub(crate) fn new(kind: VisitOrder, vertex_count: usize, seed: u32) -> Self {
        let order = match kind {
            VisitOrder::Index => None,
            VisitOrder::Shuffled => Some((
                (0..vertex_count as VertexId).collect(),
                XorShift32::new(crate::prng::worker_seed(seed, u32::MAX)),
            )),
        };
        Schedule { order }
    }

    /// Runs one iteration's worth of visits.
    pub(crate) fn run<S, F>(&mut self, vertex_count: usize, states: &mut [S], visit: F)
    where
        S: Send,
        F: Fn(&mut S, VertexId) + Sync,
    {
        match &mut self.order {
            None => for_each_vertex(vertex_count, states, visit),
            Some((order, rng)) => {
                shuffle(order, rng);
                for_each_in_order(order, states, visit);
            }
        }
    }
}

/// Outcome of one detection run.
#[derive(Clone, Debug)]
pub struct DetectionResult {
    pub assignment: CommunityAssignment,
    /// Iterations actually performed.
    pub iterations: usize,
    /// Wall-clock time of the propagation loop only.
    pub elapsed: Duration,
    pub modularity: f64,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParamError {
    #[error("tolerance must lie in (0, 1], got {0}")]
    Tolerance(f64),
    #[error("max_iterations must be at least 1")]
    MaxIterations,
    #[error("workers must be at least 1")]
    Workers,
    #[error("max_labels must be at least 1")]
    MaxLabels,
    #[error("memory_size must be at least 2, got {0}")]
    MemorySize(usize),
}

pub(crate) fn check_tolerance(tolerance: f64) -> Result<(), ParamError> {
    if tolerance > 0.0 && tolerance <= 1.0 {
        Ok(())
    } else {
        Err(ParamError::Tolerance(tolerance))
    }
}

/// Runs `visit` once for every vertex in `0..vertex_count`.
///
/// With a single worker state the vertices are visited in index order on the
/// calling thread. Otherwise one scoped thread runs per state, and threads grab
/// chunks of [`CHUNK_SIZE`] consecutive vertices from a shared cursor until the
/// range is exhausted. Each thread only ever touches its own state.
pub(crate) fn for_each_vertex<S, F>(vertex_count: usize, states: &mut [S], visit: F)
where
    S: Send,
    F: Fn(&mut S, VertexId) + Sync,
{
    for_each_position(vertex_count, states, |state, position| {
        visit(state, position as VertexId)
    });
}

/// [`for_each_vertex`] following `order`: position `i` visits `order[i]`.
pub(crate) fn for_each_in_order<S, F>(order: &[VertexId], states: &mut [S], visit: F)
where
    S: Send,
    F: Fn(&mut S, VertexId) + Sync,
{
    for_each_position(order.len(), states, |state, position| {
        visit(state, order[position])
    });
}

fn for_each_position<S, F>(vertex_count: usize, states: &mut [S], visit: F)
where
    S: Send,
    F: Fn(&mut S, usize) + Sync,
{
    if let [state] = states {
        for position in 0..vertex_count {
            visit(state, position);
        }
        return;
    }
    let cursor = AtomicUsize::new(0);
    thread::scope(|scope| {
        for state in states.iter_mut() {
            let cursor = &cursor;
            let visit = &visit;
            scope.spawn(move || loop {
                let start = cursor.fetch_add(CHUNK_SIZE, Ordering::Relaxed);
                if start >= vertex_count {
                    break;
                }
                let end = (start + CHUNK_SIZE).min(vertex_count);
                for position in start..end {
                    visit(state, position);
                }
            });
        }
    });
}

/// Fisher–Yates shuffle of `order` driven by `rng`.
pub(crate) fn shuffle(order: &mut [VertexId], rng: &mut XorShift32) {
    for i in (1..order.len()).rev() {
        let j = rng.next_bounded(i as u32 + 1) as usize;
        order.swap(i, j);
    }
}

/// Fraction test shared by RAK and COPRA: stop once at most `tolerance` of the
/// vertices changed.
#[inline]
pub(crate) fn converged(changed: usize, vertex_count: usize, tolerance: f64) -> bool {
    changed as f64 / vertex_count as f64 <= tolerance
}
