//! COPRA: multi-label propagation projected to disjoint communities.
//!
//! Each vertex carries a set of `(label, belonging)` pairs whose belongings sum
//! to 1. A vertex update gathers its neighbors' sets weighted by arc weight,
//! normalizes, keeps labels whose belonging reaches `1 / max_labels` and
//! renormalizes. If nothing reaches the threshold a single heaviest label is
//! kept (picked at random among ties); a vertex with nothing to hear from joins
//! its own community.
//!
//! The vertex's own arc (the self-loop added by preprocessing) is skipped while
//! gathering, so its current set never votes for itself. Updates are
//! asynchronous. The run stops once at most `tolerance` of the vertices changed
//! their best label; the best labels are the final communities.

use std::sync::atomic::{AtomicU32, AtomicU64, AtomicU8, Ordering};
use std::time::Instant;

use crate::detect::{
    check_tolerance, converged, DetectionResult, ParamError, Schedule, VisitOrder,
};
use crate::graph::{CommunityAssignment, Graph, VertexId};
use crate::prng::{worker_seed, XorShift32};
use crate::quality::modularity;
use crate::tally::LabelTally;

#[derive(Clone, Debug, PartialEq)]
pub struct CopraParams {
    /// Stop once the fraction of vertices whose best label changed is at most
    /// this.
    pub tolerance: f64,
    /// Upper bound on labels per vertex; the keep threshold is its inverse.
    pub max_labels: usize,
    pub max_iterations: usize,
    pub workers: usize,
    pub seed: u32,
    pub order: VisitOrder,
}

impl Default for CopraParams {
    fn default() -> Self {
        CopraParams {
            tolerance: 0.01,
            max_labels: 8,
            max_iterations: 100,
            workers: 1,
            seed: 1,
            order: VisitOrder::Index,
        }
    }
}

impl CopraParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        check_tolerance(self.tolerance)?;
        if self.max_labels == 0 {
            return Err(ParamError::MaxLabels);
        }
        if self.max_iterations == 0 {
            return Err(ParamError::MaxIterations);
        }
        if self.workers == 0 {
            return Err(ParamError::Workers);
        }
        Ok(())
    }
}

/// Labels held by one vertex, sorted by label id, belongings summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexLabelSet {
    entries: Vec<(VertexId, f64)>,
    best: VertexId,
}

impl VertexLabelSet {
    /// The set `{(label, 1.0)}`.
    pub fn single(label: VertexId) -> Self {
        VertexLabelSet {
            entries: vec![(label, 1.0)],
            best: label,
        }
    }

    /// Builds a set from raw pairs: sorts by label and caches the best label.
    /// Belongings are taken as given.
    ///
    /// Panics if `entries` is empty.
    pub fn from_entries(mut entries: Vec<(VertexId, f64)>) -> Self {
        assert!(!entries.is_empty(), "a label set needs at least one entry");
        entries.sort_unstable_by_key(|&(l, _)| l);
        let best = best_of(&entries);
        VertexLabelSet { entries, best }
    }

    pub fn entries(&self) -> &[(VertexId, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn belonging_sum(&self) -> f64 {
        self.entries.iter().map(|&(_, b)| b).sum()
    }

    /// Label with the largest belonging; ties go to the smallest label id.
    pub fn best_label(&self) -> VertexId {
        self.best
    }
}

/// Entries must be sorted by label, so the first maximum is the smallest id.
fn best_of(entries: &[(VertexId, f64)]) -> VertexId {
    let mut best = entries[0];
    for &e in &entries[1..] {
        if e.1 > best.1 {
            best = e;
        }
    }
    best.0
}

/// Turns gathered label weights into a label set.
///
/// Returns `None` for an empty tally; the caller then joins the vertex to its
/// own community.
pub fn collect_and_threshold(
    tally: &LabelTally,
    max_labels: usize,
    rng: &mut XorShift32,
) -> Option<VertexLabelSet> {
    let mut out = VertexLabelSet::single(0);
    collect_and_threshold_into(tally, max_labels, rng, &mut out).then_some(out)
}

/// Allocation-reusing form of [`collect_and_threshold`]; returns false and
/// leaves `out` untouched for an empty tally.
pub(crate) fn collect_and_threshold_into(
    tally: &LabelTally,
    max_labels: usize,
    rng: &mut XorShift32,
    out: &mut VertexLabelSet,
) -> bool {
    if tally.is_empty() {
        return false;
    }
    let total = tally.total();
    let threshold = 1.0 / max_labels as f64;
    let kept = &mut out.entries;
    kept.clear();
    kept.extend(tally.iter().filter(|&(_, w)| w / total >= threshold));

    if kept.is_empty() {
        let max = tally.max_weight();
        let tied = tally.iter().filter(|&(_, w)| w == max).map(|(l, _)| l);
        let count = tied.clone().count();
        let pick = if count > 1 {
            rng.next_bounded(count as u32) as usize
        } else {
            0
        };
        let label = tied
            .clone()
            .nth(pick)
            .expect("pick is within the tie count");
        kept.push((label, 1.0));
        out.best = label;
        return true;
    }

    if kept.len() > max_labels {
        // Only reachable through rounding right at the threshold.
        kept.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        kept.truncate(max_labels);
    }
    let kept_total: f64 = kept.iter().map(|&(_, w)| w).sum();
    for entry in kept.iter_mut() {
        entry.1 /= kept_total;
    }
    kept.sort_unstable_by_key(|&(l, _)| l);
    out.best = best_of(kept);
    true
}

/// Best label of a set; ties go to the smallest label id.
pub fn best_label(set: &VertexLabelSet) -> VertexId {
    set.best_label()
}

/// Per-vertex label sets shared between workers.
///
/// Every vertex owns two fixed-capacity buffers. A writer fills the inactive
/// buffer and then flips the vertex's active index with release ordering, so a
/// reader that loads the index with acquire ordering sees a complete set. Each
/// vertex is written at most once per iteration and iterations are separated by
/// a thread join, so a writer never overwrites a buffer that a reader may still
/// be scanning.
struct LabelSetStore {
    capacity: usize,
    labels: Vec<AtomicU32>,
    belongings: Vec<AtomicU64>,
    lengths: Vec<AtomicU32>,
    active: Vec<AtomicU8>,
}

impl LabelSetStore {
    fn new(vertex_count: usize, capacity: usize) -> Self {
        let slots = 2 * vertex_count * capacity;
        let store = LabelSetStore {
            capacity,
            labels: (0..slots).map(|_| AtomicU32::new(0)).collect(),
            belongings: (0..slots).map(|_| AtomicU64::new(0)).collect(),
            lengths: (0..2 * vertex_count).map(|_| AtomicU32::new(0)).collect(),
            active: (0..vertex_count).map(|_| AtomicU8::new(0)).collect(),
        };
        for v in 0..vertex_count {
            let base = 2 * v * capacity;
            store.labels[base].store(v as VertexId, Ordering::Relaxed);
            store.belongings[base].store(1.0f64.to_bits(), Ordering::Relaxed);
            store.lengths[2 * v].store(1, Ordering::Relaxed);
        }
        store
    }

    #[inline]
    fn for_each(&self, v: VertexId, mut f: impl FnMut(VertexId, f64)) {
        let v = v as usize;
        let buffer = self.active[v].load(Ordering::Acquire) as usize;
        let len = self.lengths[2 * v + buffer].load(Ordering::Relaxed) as usize;
        let base = (2 * v + buffer) * self.capacity;
        for i in base..base + len {
            let label = self.labels[i].load(Ordering::Relaxed);
            let belonging = f64::from_bits(self.belongings[i].load(Ordering::Relaxed));
            f(label, belonging);
        }
    }

    fn publish(&self, v: VertexId, entries: &[(VertexId, f64)]) {
        debug_assert!(!entries.is_empty() && entries.len() <= self.capacity);
        let v = v as usize;
        let buffer = 1 - self.active[v].load(Ordering::Relaxed) as usize;
        let base = (2 * v + buffer) * self.capacity;
        for (i, &(label, belonging)) in entries.iter().enumerate() {
            self.labels[base + i].store(label, Ordering::Relaxed);
            self.belongings[base + i].store(belonging.to_bits(), Ordering::Relaxed);
        }
        self.lengths[2 * v + buffer].store(entries.len() as u32, Ordering::Relaxed);
        self.active[v].store(buffer as u8, Ordering::Release);
    }
}

struct Worker {
    tally: LabelTally,
    rng: XorShift32,
    scratch: VertexLabelSet,
    changed: usize,
}

/// Runs COPRA on a preprocessed graph.
///
/// Panics on invalid parameters. Debug builds also reject asymmetric graphs.
pub fn copra_detect(graph: &Graph, params: &CopraParams) -> DetectionResult {
    run(graph, params, None)
}

/// [`copra_detect`] that calls `observer(vertex, new_set)` after every vertex
/// update. With several workers the observer runs concurrently.
pub fn copra_detect_observed<F>(graph: &Graph, params: &CopraParams, observer: F) -> DetectionResult
where
    F: Fn(VertexId, &VertexLabelSet) + Sync,
{
    run(graph, params, Some(&observer))
}

type UpdateObserver<'a> = dyn Fn(VertexId, &VertexLabelSet) + Sync + 'a;

fn run(graph: &Graph, params: &CopraParams, observer: Option<&UpdateObserver>) -> DetectionResult {
    if let Err(e) = params.validate() {
        panic!("invalid COPRA parameters: {e}");
    }
    debug_assert!(
        graph.is_symmetric(),
        "COPRA needs a symmetric (preprocessed) graph"
    );

    let n = graph.vertex_count();
    let start = Instant::now();
    let store = LabelSetStore::new(n, params.max_labels);
    let best: Vec<AtomicU32> = (0..n as VertexId).map(AtomicU32::new).collect();
    let mut workers: Vec<Worker> = (0..params.workers as u32)
        .map(|k| Worker {
            tally: LabelTally::new(n),
            rng: XorShift32::new(worker_seed(params.seed, k)),
            scratch: VertexLabelSet::single(0),
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
                if u == v {
                    continue;
                }
                let tally = &mut worker.tally;
                store.for_each(u, |label, belonging| tally.add(label, belonging * weight));
            }
            let set = &mut worker.scratch;
            if !collect_and_threshold_into(&worker.tally, params.max_labels, &mut worker.rng, set) {
                *set = VertexLabelSet::single(v);
            }
            worker.tally.clear();
            store.publish(v, set.entries());
            if let Some(observer) = observer {
                observer(v, set);
            }
            if best[v as usize].load(Ordering::Relaxed) != set.best_label() {
                best[v as usize].store(set.best_label(), Ordering::Relaxed);
                worker.changed += 1;
            }
        });
        iterations += 1;

        let changed: usize = workers.iter().map(|w| w.changed).sum();
        if converged(changed, n, params.tolerance) {
            break;
        }
    }

    let assignment =
        CommunityAssignment::new(best.into_iter().map(AtomicU32::into_inner).collect());
    let elapsed = start.elapsed();
    DetectionResult {
        modularity: modularity(graph, &assignment),
        assignment,
        iterations,
        elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preprocess, Merge};
    use std::sync::Mutex;

    fn tally_of(entries: &[(VertexId, f64)]) -> LabelTally {
        let mut t = LabelTally::new(16);
        for &(l, w) in entries {
            t.add(l, w);
        }
        t
    }

    fn close(a: &[(VertexId, f64)], b: &[(VertexId, f64)]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() < 1e-12)
    }

    #[test]
    fn both_above_threshold() {
        let set =
            collect_and_threshold(&tally_of(&[(1, 0.6), (2, 0.4)]), 4, &mut XorShift32::new(1))
                .unwrap();
        assert!(close(set.entries(), &[(1, 0.6), (2, 0.4)]));
        assert_eq!(set.best_label(), 1);
    }

    #[test]
    fn drop_and_renormalize() {
        let set = collect_and_threshold(
            &tally_of(&[(1, 0.5), (2, 0.3), (3, 0.2)]),
            4,
            &mut XorShift32::new(1),
        )
        .unwrap();
        assert!(close(set.entries(), &[(1, 0.625), (2, 0.375)]), "{set:?}");
    }

    #[test]
    fn unnormalized_weights_are_normalized_first() {
        let set = collect_and_threshold(
            &tally_of(&[(1, 5.0), (2, 3.0), (3, 2.0)]),
            4,
            &mut XorShift32::new(1),
        )
        .unwrap();
        assert!(close(set.entries(), &[(1, 0.625), (2, 0.375)]));
    }

    #[test]
    fn none_above_threshold_falls_back_to_a_random_best() {
        let tally = tally_of(&[(1, 0.2), (2, 0.2), (3, 0.2), (4, 0.2), (5, 0.2)]);
        let mut rng = XorShift32::new(9);
        let mut seen = [false; 6];
        for _ in 0..200 {
            let set = collect_and_threshold(&tally, 4, &mut rng).unwrap();
            assert_eq!(set.len(), 1);
            assert_eq!(set.entries()[0].1, 1.0);
            seen[set.best_label() as usize] = true;
        }
        assert_eq!(seen, [false, true, true, true, true, true]);
    }

    #[test]
    fn empty_tally_yields_none() {
        assert!(collect_and_threshold(&LabelTally::new(4), 4, &mut XorShift32::new(1)).is_none());
    }

    #[test]
    fn best_label_rules() {
        assert_eq!(
            best_label(&VertexLabelSet::from_entries(vec![(7, 0.6), (2, 0.4)])),
            7
        );
        assert_eq!(
            best_label(&VertexLabelSet::from_entries(vec![(7, 0.5), (2, 0.5)])),
            2
        );
        assert_eq!(best_label(&VertexLabelSet::single(3)), 3);
    }

    fn undirected(n: usize, edges: &[(u32, u32)]) -> Graph {
        let arcs = edges.iter().map(|&(u, v)| (u, v, 1.0));
        preprocess(&Graph::from_arcs(n, arcs, Merge::Sum))
    }

    #[test]
    fn path_middle_vertex_first_update() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        let params = CopraParams {
            max_labels: 2,
            max_iterations: 1,
            ..CopraParams::default()
        };
        let updates = Mutex::new(Vec::new());
        copra_detect_observed(&g, &params, |v, set| {
            updates.lock().unwrap().push((v, set.clone()))
        });
        let updates = updates.into_inner().unwrap();
        // vertex 0 hears only vertex 1; vertex 1 then hears {1} from 0 and {2} from 2
        assert_eq!(updates[0], (0, VertexLabelSet::single(1)));
        assert_eq!(updates[1].0, 1);
        assert!(close(updates[1].1.entries(), &[(1, 0.5), (2, 0.5)]));
    }

    #[test]
    fn path_middle_vertex_from_initial_state() {
        let mut tally = LabelTally::new(3);
        tally.add(0, 1.0);
        tally.add(2, 1.0);
        let set = collect_and_threshold(&tally, 2, &mut XorShift32::new(1)).unwrap();
        assert!(close(set.entries(), &[(0, 0.5), (2, 0.5)]));
    }

    #[test]
    fn two_triangles_single_label() {
        let g = undirected(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        for seed in 1..20 {
            let params = CopraParams {
                max_labels: 1,
                seed,
                ..CopraParams::default()
            };
            let r = copra_detect(&g, &params);
            let l = r.assignment.labels();
            assert!(
                l[0] == l[1] && l[1] == l[2] && l[3] == l[4] && l[4] == l[5],
                "{l:?}"
            );
            assert_ne!(l[0], l[3]);
        }
    }

    #[test]
    fn lone_vertex_joins_itself() {
        let g = undirected(1, &[]);
        let r = copra_detect(&g, &CopraParams::default());
        assert_eq!(r.assignment.labels(), &[0]);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn store_round_trip() {
        let store = LabelSetStore::new(3, 4);
        let mut got = Vec::new();
        store.for_each(2, |l, b| got.push((l, b)));
        assert_eq!(got, vec![(2, 1.0)]);
        store.publish(2, &[(0, 0.25), (1, 0.75)]);
        got.clear();
        store.for_each(2, |l, b| got.push((l, b)));
        assert_eq!(got, vec![(0, 0.25), (1, 0.75)]);
        store.publish(2, &[(1, 1.0)]);
        got.clear();
        store.for_each(2, |l, b| got.push((l, b)));
        assert_eq!(got, vec![(1, 1.0)]);
    }
}
