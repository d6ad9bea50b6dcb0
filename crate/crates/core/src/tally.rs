//! Per-worker label accumulator.

use crate::graph::VertexId;
use crate::prng::XorShift32;

/// Maps label → accumulated weight for one vertex scan.
///
/// Backed by a dense weight array over the whole label space plus the list of
/// touched labels, so `add` is O(1) and `clear` only resets what was touched.
/// Labels are remembered in first-seen order, which is the neighbor scan order
/// when the tally is filled from a CSR row. Each worker owns its own tally.
#[derive(Clone, Debug)]
pub struct LabelTally {
    weights: Vec<f64>,
    keys: Vec<VertexId>,
}

impl LabelTally {
    /// A tally for labels in `0..label_space`.
    pub fn new(label_space: usize) -> Self {
        LabelTally {
            weights: vec![0.0; label_space],
            keys: Vec::new(),
        }
    }

    /// Adds `weight` to `label`. Weights must be positive.
    #[inline]
    pub fn add(&mut self, label: VertexId, weight: f64) {
        debug_assert!(weight > 0.0, "tally weights must be positive, got {weight}");
        let slot = &mut self.weights[label as usize];
        if *slot == 0.0 {
            self.keys.push(label);
        }
        *slot += weight;
    }

    #[inline]
    pub fn get(&self, label: VertexId) -> f64 {
        self.weights[label as usize]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Entries in first-seen order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + Clone + '_ {
        self.keys.iter().map(|&k| (k, self.weights[k as usize]))
    }

    pub fn total(&self) -> f64 {
        self.iter().map(|(_, w)| w).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.iter().map(|(_, w)| w).fold(0.0, f64::max)
    }

    #[inline]
    pub fn clear(&mut self) {
        for &k in &self.keys {
            self.weights[k as usize] = 0.0;
        }
        self.keys.clear();
    }
}

/// Picks the heaviest label in `tally`.
///
/// Strict mode returns the first maximum in first-seen order. Non-strict mode
/// picks uniformly among all labels tied at the maximum; the generator is only
/// consulted when there is more than one. Ties are exact float equality.
///
/// Panics on an empty tally.
pub fn choose_max_label(tally: &LabelTally, strict: bool, rng: &mut XorShift32) -> VertexId {
    assert!(
        !tally.is_empty(),
        "cannot choose a label from an empty tally"
    );
    let max = tally.max_weight();
    let mut tied = tally.iter().filter(|&(_, w)| w == max).map(|(l, _)| l);
    if strict {
        return tied.next().expect("maximum is attained");
    }
    let count = tied.clone().count();
    if count == 1 {
        return tied.next().expect("maximum is attained");
    }
    let pick = rng.next_bounded(count as u32) as usize;
    tied.nth(pick).expect("pick is within the tie count")
}
