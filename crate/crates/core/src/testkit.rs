//! Synthetic graphs and reference oracles for the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{preprocess, CommunityAssignment, Graph, Merge, VertexId};

/// Largest graph [`brute_modularity`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 256;

/// Recipe for a generated graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SyntheticGraph {
    /// `count` cliques of `size` vertices with no edges between them.
    DisjointCliques { count: usize, size: usize },
    /// Cliques in a cycle; the last vertex of clique `i` is joined to the
    /// first vertex of clique `i + 1 (mod count)`.
    RingOfCliques { count: usize, size: usize },
    /// Erdős–Rényi `G(n, p)`.
    Gnp { n: usize, p: f64, seed: u64 },
    /// Hub 0 joined to `leaves` leaves.
    Star { leaves: usize },
    /// `0 - 1 - ... - (n-1)`.
    Path { n: usize },
}

/// Generates `recipe` and preprocesses it (unit weights, unit self-loops).
///
/// Deterministic for a fixed recipe.
pub fn gen_graph(recipe: SyntheticGraph) -> Graph {
    preprocess(&gen_raw(recipe))
}

/// Generates `recipe` as undirected unit-weight edges without self-loops.
pub fn gen_raw(recipe: SyntheticGraph) -> Graph {
    let (n, edges) = match recipe {
        SyntheticGraph::DisjointCliques { count, size } => {
            (count * size, clique_edges(count, size))
        }
        SyntheticGraph::RingOfCliques { count, size } => {
            let mut edges = clique_edges(count, size);
            if count > 1 && size > 0 {
                for c in 0..count {
                    let last = c * size + size - 1;
                    let next = ((c + 1) % count) * size;
                    edges.push((last, next));
                }
            }
            (count * size, edges)
        }
        SyntheticGraph::Gnp { n, p, seed } => {
            assert!(
                (0.0..=1.0).contains(&p),
                "edge probability {p} outside [0, 1]"
            );
            (n, gnp_edges(n, p, seed))
        }
        SyntheticGraph::Star { leaves } => (leaves + 1, (1..=leaves).map(|l| (0, l)).collect()),
        SyntheticGraph::Path { n } => (n, (1..n).map(|v| (v - 1, v)).collect()),
    };
    let arcs = edges.into_iter().flat_map(|(u, v)| {
        [
            (u as VertexId, v as VertexId, 1.0),
            (v as VertexId, u as VertexId, 1.0),
        ]
    });
    Graph::from_arcs(n, arcs, Merge::Max)
}

fn clique_edges(count: usize, size: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(count * size * size.saturating_sub(1) / 2);
    for c in 0..count {
        let base = c * size;
        for i in 0..size {
            for j in i + 1..size {
                edges.push((base + i, base + j));
            }
        }
    }
    edges
}

/// Geometric skipping over the pairs `u < v` (Batagelj–Brandes).
fn gnp_edges(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if n < 2 || p <= 0.0 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        return edges;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.gen::<f64>();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges
}

/// Uniformly random assignment of `n` vertices to labels `0..communities`.
pub fn random_assignment(n: usize, communities: usize, seed: u64) -> CommunityAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = communities.clamp(1, n.max(1)) as VertexId;
    CommunityAssignment::new((0..n).map(|_| rng.gen_range(0..k)).collect())
}

/// Ground-truth assignment for disjoint or ringed cliques: vertex `v` belongs
/// to clique `v / size`.
pub fn clique_partition(count: usize, size: usize) -> CommunityAssignment {
    CommunityAssignment::new((0..count * size).map(|v| (v / size) as VertexId).collect())
}

/// True when `a` and `b` group the vertices identically, whatever the label
/// values.
pub fn same_partition(a: &CommunityAssignment, b: &CommunityAssignment) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut forward = std::collections::HashMap::new();
    let mut backward = std::collections::HashMap::new();
    a.labels()
        .iter()
        .zip(b.labels())
        .all(|(&x, &y)| *forward.entry(x).or_insert(y) == y && *backward.entry(y).or_insert(x) == x)
}

/// Modularity by direct double sum over vertex pairs on a dense adjacency
/// matrix: `Q = (1/W) Σ_{u,v} [A_uv − d_u d_v / W] δ(c_u, c_v)`, with a
/// self-loop entering `A_vv` twice.
///
/// Panics above [`BRUTE_FORCE_LIMIT`] vertices.
pub fn brute_modularity(graph: &Graph, assignment: &CommunityAssignment) -> f64 {
    let n = graph.vertex_count();
    assert!(
        n <= BRUTE_FORCE_LIMIT,
        "brute-force modularity limited to {BRUTE_FORCE_LIMIT} vertices, got {n}"
    );
    assert_eq!(assignment.len(), n);

    let mut adjacency = vec![vec![0.0f64; n]; n];
    for (u, row) in adjacency.iter_mut().enumerate() {
        for (v, w) in graph.arcs(u as VertexId) {
            let v = v as usize;
            row[v] += if u == v { 2.0 * w } else { w };
        }
    }
    let degree: Vec<f64> = adjacency.iter().map(|row| row.iter().sum()).collect();
    let total: f64 = degree.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let labels = assignment.labels();
    let mut q = 0.0;
    for u in 0..n {
        for v in 0..n {
            if labels[u] == labels[v] {
                q += adjacency[u][v] - degree[u] * degree[v] / total;
            }
        }
    }
    q / total
}
