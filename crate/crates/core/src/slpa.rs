//! SLPA: speaker-listener label propagation with a fixed label memory.
//!
//! Each vertex remembers a history of labels, starting with its own id. In each
//! iteration every vertex listens: each neighbor (the vertex's own self-loop
//! excluded) speaks a label drawn uniformly from its memory, the spoken labels
//! are weighted by arc weight, and the heaviest one is appended to the
//! listener's memory. A vertex with no one to listen to appends its own most
//! popular label.
//!
//! A memory of `memory_size` slots allows at most `memory_size - 1`
//! iterations. The run stops early once at least `(1 - tolerance)` of the
//! vertices appended the same label as in the previous iteration. Each vertex's
//! community is the most frequent label in its memory.

use std::sync::atomic::{AtomicU32, Ordering};
use std::time::Instant;

use crate::detect::{check_tolerance, DetectionResult, ParamError, Schedule, VisitOrder};
use crate::graph::{CommunityAssignment, Graph, VertexId};
use crate::prng::{worker_seed, XorShift32};
use crate::quality::modularity;
use crate::tally::{choose_max_label, LabelTally};

#[derive(Clone, Debug, PartialEq)]
pub struct SlpaParams {
    /// Slots per vertex; bounds the run to `memory_size - 1` iterations.
    pub memory_size: usize,
    /// Early stop once at most this fraction of vertices appended a label
    /// different from their previous one.
    pub tolerance: f64,
    /// Listener takes the first heaviest label instead of a random one.
    pub strict: bool,
    pub workers: usize,
    pub seed: u32,
    pub order: VisitOrder,
}

impl Default for SlpaParams {
    fn default() -> Self {
        SlpaParams {
            memory_size: 20,
            tolerance: 0.05,
            strict: true,
            workers: 1,
            seed: 1,
            order: VisitOrder::Index,
        }
    }
}

impl SlpaParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        check_tolerance(self.tolerance)?;
        if self.memory_size < 2 {
            return Err(ParamError::MemorySize(self.memory_size));
        }
        if self.workers == 0 {
            return Err(ParamError::Workers);
        }
        Ok(())
    }
}

/// A vertex's label history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMemory {
    slots: Vec<VertexId>,
}

impl LabelMemory {
    /// Panics if `slots` is empty.
    pub fn new(slots: Vec<VertexId>) -> Self {
        assert!(!slots.is_empty(), "a label memory holds at least one label");
        LabelMemory { slots }
    }

    /// Recorded labels, oldest first. Slot 0 is the owner's id.
    pub fn slots(&self) -> &[VertexId] {
        &self.slots
    }

    pub fn filled(&self) -> usize {
        self.slots.len()
    }

    pub fn most_popular_label(&self) -> VertexId {
        modal_label(&self.slots)
    }
}

/// Most popular label of a memory; ties go to the smallest label id.
pub fn most_popular_label(memory: &LabelMemory) -> VertexId {
    memory.most_popular_label()
}

fn modal_label(slots: &[VertexId]) -> VertexId {
    assert!(!slots.is_empty(), "empty label memory has no popular label");
    let mut sorted = slots.to_vec();
    sorted.sort_unstable();
    let mut best = (sorted[0], 0usize);
    for run in sorted.chunk_by(|a, b| a == b) {
        if run.len() > best.1 {
            best = (run[0], run.len());
        }
    }
    best.0
}

/// Memories of all vertices in one flat slot array.
///
/// Only the owner's worker appends to a memory. The slot is written before the
/// fill count is bumped with release ordering, and readers load the fill count
/// with acquire ordering, so a reader never sees an unwritten slot.
struct MemoryStore {
    memory_size: usize,
    slots: Vec<AtomicU32>,
    filled: Vec<AtomicU32>,
}

impl MemoryStore {
    fn new(vertex_count: usize, memory_size: usize) -> Self {
        let slots: Vec<AtomicU32> = (0..vertex_count * memory_size)
            .map(|i| AtomicU32::new((i / memory_size) as VertexId))
            .collect();
        MemoryStore {
            memory_size,
            slots,
            filled: (0..vertex_count).map(|_| AtomicU32::new(1)).collect(),
        }
    }

    #[inline]
    fn speak(&self, v: VertexId, rng: &mut XorShift32) -> VertexId {
        let filled = self.filled[v as usize].load(Ordering::Acquire);
        let slot = rng.next_bounded(filled) as usize;
        self.slots[v as usize * self.memory_size + slot].load(Ordering::Relaxed)
    }

    /// Owner-side view of `v`'s memory.
    fn snapshot(&self, v: VertexId) -> Vec<VertexId> {
        let filled = self.filled[v as usize].load(Ordering::Acquire) as usize;
        let base = v as usize * self.memory_size;
        self.slots[base..base + filled]
            .iter()
            .map(|s| s.load(Ordering::Relaxed))
            .collect()
    }

    /// Appends `label` and reports whether it repeats the previous append.
    fn append(&self, v: VertexId, label: VertexId) -> bool {
        let filled = self.filled[v as usize].load(Ordering::Relaxed) as usize;
        debug_assert!(filled < self.memory_size, "memory of vertex {v} is full");
        let base = v as usize * self.memory_size;
        let repeats = filled >= 2 && self.slots[base + filled - 1].load(Ordering::Relaxed) == label;
        self.slots[base + filled].store(label, Ordering::Relaxed);
        self.filled[v as usize].store(filled as u32 + 1, Ordering::Release);
        repeats
    }
}

struct Worker {
    tally: LabelTally,
    rng: XorShift32,
    repeated: usize,
}

/// Runs SLPA on a preprocessed graph.
///
/// Panics on invalid parameters. Debug builds also reject asymmetric graphs.
pub fn slpa_detect(graph: &Graph, params: &SlpaParams) -> DetectionResult {
    slpa_detect_with_memories(graph, params).0
}

/// [`slpa_detect`] that also returns every vertex's final memory.
pub fn slpa_detect_with_memories(
    graph: &Graph,
    params: &SlpaParams,
) -> (DetectionResult, Vec<LabelMemory>) {
    if let Err(e) = params.validate() {
        panic!("invalid SLPA parameters: {e}");
    }
    debug_assert!(
        graph.is_symmetric(),
        "SLPA needs a symmetric (preprocessed) graph"
    );

    let n = graph.vertex_count();
    let start = Instant::now();
    let store = MemoryStore::new(n, params.memory_size);
    let mut workers: Vec<Worker> = (0..params.workers as u32)
        .map(|k| Worker {
            tally: LabelTally::new(n),
            rng: XorShift32::new(worker_seed(params.seed, k)),
            repeated: 0,
        })
        .collect();

    let mut schedule = Schedule::new(params.order, n, params.seed);
    let mut iterations = 0;
    while n > 0 && iterations < params.memory_size - 1 {
        for w in &mut workers {
            w.repeated = 0;
        }
        schedule.run(n, &mut workers, |worker, v| {
            for (u, weight) in graph.arcs(v) {
                if u == v {
                    continue;
                }
                let spoken = store.speak(u, &mut worker.rng);
                worker.tally.add(spoken, weight);
            }
            let heard = if worker.tally.is_empty() {
                modal_label(&store.snapshot(v))
            } else {
                choose_max_label(&worker.tally, params.strict, &mut worker.rng)
            };
            worker.tally.clear();
            if store.append(v, heard) {
                worker.repeated += 1;
            }
        });
        iterations += 1;

        let repeated: usize = workers.iter().map(|w| w.repeated).sum();
        if repeated as f64 >= (1.0 - params.tolerance) * n as f64 {
            break;
        }
    }

    let memories: Vec<LabelMemory> = (0..n as VertexId)
        .map(|v| LabelMemory::new(store.snapshot(v)))
        .collect();
    let assignment = CommunityAssignment::new(
        memories
            .iter()
            .map(LabelMemory::most_popular_label)
            .collect(),
    );
    let elapsed = start.elapsed();
    let result = DetectionResult {
        modularity: modularity(graph, &assignment),
        assignment,
        iterations,
        elapsed,
    };
    (result, memories)
}
