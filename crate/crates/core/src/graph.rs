//! Compressed sparse row graphs.
//!
//! Every detector in this crate reads a [`Graph`]: an immutable, undirected,
//! weighted adjacency structure in CSR form. Undirected edges are stored as two
//! arcs, one per direction; a self-loop is stored as a single arc.
//!
//! Degree convention: a self-loop of weight `w` contributes `2w` to the degree
//! of its vertex and `2w` to [`Graph::total_weight`]. With this convention the
//! sum of all degrees equals the total weight, and the modularity of the
//! partition that puts every vertex into one community is exactly zero.

use std::fmt;

/// Dense, zero-based vertex identifier.
pub type VertexId = u32;

/// How [`Graph::from_arcs`] combines repeated `(source, target)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Merge {
    /// Add the weights of repeated arcs.
    Sum,
    /// Keep the largest weight among repeated arcs.
    Max,
}

/// Immutable weighted graph in CSR form.
///
/// Rows are sorted by target, so scanning a vertex's neighbors visits them in
/// ascending id order. Strict tie-breaking in the detectors relies on this
/// order.
#[derive(Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    weights: Vec<f64>,
    total_weight: f64,
}

impl Graph {
    /// The graph with no vertices.
    pub fn empty() -> Self {
        Graph {
            offsets: vec![0],
            neighbors: Vec::new(),
            weights: Vec::new(),
            total_weight: 0.0,
        }
    }

    /// Builds a graph on `vertex_count` vertices from a list of arcs.
    ///
    /// Arcs are stored exactly as given (no symmetrization); repeated arcs are
    /// combined according to `merge`.
    ///
    /// Panics if an endpoint is out of range or a weight is not positive and
    /// finite. The loaders in [`crate::io`] validate input before getting here.
    pub fn from_arcs<I>(vertex_count: usize, arcs: I, merge: Merge) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        assert!(
            vertex_count <= VertexId::MAX as usize,
            "vertex count {vertex_count} does not fit in a 32-bit id"
        );
        let mut arcs: Vec<(VertexId, VertexId, f64)> = arcs.into_iter().collect();
        for &(u, v, w) in &arcs {
            assert!(
                (u as usize) < vertex_count && (v as usize) < vertex_count,
                "arc ({u}, {v}) out of range for {vertex_count} vertices"
            );
            assert!(w > 0.0 && w.is_finite(), "arc ({u}, {v}) has weight {w}");
        }
        arcs.sort_unstable_by_key(|&(u, v, _)| (u, v));

        let mut offsets = vec![0usize; vertex_count + 1];
        let mut neighbors = Vec::with_capacity(arcs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(arcs.len());
        let mut last: Option<(VertexId, VertexId)> = None;
        for (u, v, w) in arcs {
            if last == Some((u, v)) {
                let slot = weights.last_mut().expect("repeated arc has a predecessor");
                *slot = match merge {
                    Merge::Sum => *slot + w,
                    Merge::Max => slot.max(w),
                };
                continue;
            }
            last = Some((u, v));
            offsets[u as usize + 1] += 1;
            neighbors.push(v);
            weights.push(w);
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }

        let mut graph = Graph {
            offsets,
            neighbors,
            weights,
            total_weight: 0.0,
        };
        graph.total_weight = (0..graph.vertex_count() as VertexId)
            .map(|v| graph.degree_weight(v))
            .sum();
        graph
    }

    /// Number of vertices.
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs. Each undirected edge counts twice, each
    /// self-loop once.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Sum of all degrees (`2m` in modularity notation).
    #[inline]
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    #[inline]
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Neighbor ids of `v`, ascending.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Arc weights of `v`, parallel to [`Graph::neighbors`].
    #[inline]
    pub fn weights(&self, v: VertexId) -> &[f64] {
        let v = v as usize;
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    /// `(neighbor, weight)` pairs of `v` in scan order.
    #[inline]
    pub fn arcs(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.neighbors(v)
            .iter()
            .copied()
            .zip(self.weights(v).iter().copied())
    }

    /// Every stored arc as `(source, target, weight)`.
    pub fn all_arcs(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |u| self.arcs(u).map(move |(v, w)| (u, v, w)))
    }

    /// Weighted degree of `v`; a self-loop counts twice.
    ///
    /// Panics if `v` is out of range.
    pub fn degree_weight(&self, v: VertexId) -> f64 {
        assert!(
            (v as usize) < self.vertex_count(),
            "vertex {v} out of range for {} vertices",
            self.vertex_count()
        );
        self.arcs(v)
            .map(|(u, w)| if u == v { 2.0 * w } else { w })
            .sum()
    }

    /// Weight of the self-loop on `v`, if present.
    pub fn self_loop(&self, v: VertexId) -> Option<f64> {
        self.neighbors(v)
            .binary_search(&v)
            .ok()
            .map(|i| self.weights(v)[i])
    }

    pub fn self_loop_count(&self) -> usize {
        (0..self.vertex_count() as VertexId)
            .filter(|&v| self.self_loop(v).is_some())
            .count()
    }

    /// Weight of arc `u -> v`, if present.
    pub fn arc_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.weights(u)[i])
    }

    /// True when every non-loop arc `(u, v, w)` has a reverse arc `(v, u, w)`.
    pub fn is_symmetric(&self) -> bool {
        self.all_arcs()
            .all(|(u, v, w)| u == v || self.arc_weight(v, u) == Some(w))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count())
            .field("edge_count", &self.edge_count())
            .field("total_weight", &self.total_weight)
            .finish()
    }
}

/// Switches for [`preprocess_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreprocessOptions {
    /// Force every arc weight to 1.
    pub unit_weights: bool,
    /// Give every vertex exactly one self-loop of weight 1. When off, existing
    /// self-loops are dropped.
    pub self_loops: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            unit_weights: true,
            self_loops: true,
        }
    }
}

/// Standard preprocessing: undirected, unit weights, one unit self-loop per
/// vertex.
pub fn preprocess(graph: &Graph) -> Graph {
    preprocess_with(graph, PreprocessOptions::default())
}

/// Symmetrizes `graph` and normalizes its self-loops.
///
/// An arc present in only one direction gets its reverse. When both directions
/// are present with different weights, the larger weight is used for both.
/// Existing self-loops are always discarded; with `self_loops` on, each vertex
/// then receives a fresh self-loop of weight 1.
pub fn preprocess_with(graph: &Graph, options: PreprocessOptions) -> Graph {
    let n = graph.vertex_count();
    let mut arcs = Vec::with_capacity(2 * graph.edge_count() + n);
    for (u, v, w) in graph.all_arcs() {
        if u == v {
            continue;
        }
        let w = if options.unit_weights { 1.0 } else { w };
        arcs.push((u, v, w));
        arcs.push((v, u, w));
    }
    if options.self_loops {
        arcs.extend((0..n as VertexId).map(|v| (v, v, 1.0)));
    }
    Graph::from_arcs(n, arcs, Merge::Max)
}

/// One community label per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommunityAssignment {
    labels: Vec<VertexId>,
}

impl CommunityAssignment {
    /// Wraps a label vector. Labels are expected to be vertex ids, i.e. smaller
    /// than the vertex count; [`CommunityAssignment::validate`] checks that.
    pub fn new(labels: Vec<VertexId>) -> Self {
        CommunityAssignment { labels }
    }

    /// Every vertex in its own community.
    pub fn singletons(vertex_count: usize) -> Self {
        CommunityAssignment::new((0..vertex_count as VertexId).collect())
    }

    /// Every vertex in community 0.
    pub fn all_in_one(vertex_count: usize) -> Self {
        CommunityAssignment::new(vec![0; vertex_count])
    }

    #[inline]
    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> VertexId {
        self.labels[v as usize]
    }

    pub fn into_labels(self) -> Vec<VertexId> {
        self.labels
    }

    /// Number of distinct labels.
    pub fn community_count(&self) -> usize {
        let mut seen = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Size of the largest community.
    pub fn largest_community(&self) -> usize {
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted
            .chunk_by(|a, b| a == b)
            .map(<[_]>::len)
            .max()
            .unwrap_or(0)
    }

    /// Checks that the assignment covers `vertex_count` vertices and every
    /// label is a vertex id.
    pub fn validate(&self, vertex_count: usize) -> bool {
        self.labels.len() == vertex_count
            && self.labels.iter().all(|&l| (l as usize) < vertex_count)
    }
}
