//! Newman–Girvan modularity.

use crate::graph::{CommunityAssignment, Graph};

/// Modularity of `assignment` on `graph`, resolution 1.
///
/// `Q = Σ_c [ w_c / W − (d_c / W)² ]`, where `W` is the graph's total weight,
/// `w_c` the weight of arcs with both ends in community `c` (self-loops counted
/// twice) and `d_c` the summed degree of `c`'s members. One pass over arcs and
/// one over vertices. A graph with no weight scores 0.
///
/// Panics if the assignment length differs from the vertex count.
pub fn modularity(graph: &Graph, assignment: &CommunityAssignment) -> f64 {
    let n = graph.vertex_count();
    assert_eq!(
        assignment.len(),
        n,
        "assignment covers {} vertices, graph has {n}",
        assignment.len()
    );
    let total = graph.total_weight();
    if n == 0 || total == 0.0 {
        return 0.0;
    }
    let labels = assignment.labels();
    let slots = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut internal = vec![0.0f64; slots];
    let mut degree = vec![0.0f64; slots];

    for (u, &cu) in labels.iter().enumerate() {
        let u = u as u32;
        for (v, w) in graph.arcs(u) {
            let w = if u == v { 2.0 * w } else { w };
            degree[cu as usize] += w;
            if labels[v as usize] == cu {
                internal[cu as usize] += w;
            }
        }
    }

    internal
        .iter()
        .zip(&degree)
        .filter(|(_, &d)| d > 0.0)
        .map(|(&inside, &d)| inside / total - (d / total) * (d / total))
        .sum()
}
