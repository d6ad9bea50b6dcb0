use labelprop::graph::{preprocess_with, Merge, PreprocessOptions};
use labelprop::testkit::{brute_modularity, gen_graph, gen_raw, random_assignment, SyntheticGraph};
use labelprop::{modularity, CommunityAssignment, Graph};
use proptest::prelude::*;

fn gnp() -> impl Strategy<Value = Graph> {
    (
        0usize..=64,
        prop::sample::select(vec![0.05, 0.2, 0.5]),
        any::<u64>(),
    )
        .prop_map(|(n, p, seed)| gen_graph(SyntheticGraph::Gnp { n, p, seed }))
}

fn weighted() -> impl Strategy<Value = Graph> {
    (1usize..40)
        .prop_flat_map(|n| {
            let arc = (0..n as u32, 0..n as u32, 0.1f64..10.0);
            (Just(n), prop::collection::vec(arc, 0..120))
        })
        .prop_map(|(n, arcs)| {
            let g = Graph::from_arcs(n, arcs, Merge::Sum);
            preprocess_with(
                &g,
                PreprocessOptions {
                    unit_weights: false,
                    self_loops: false,
                },
            )
        })
}

proptest! {
    #[test]
    fn matches_brute_force(g in gnp(), k in 1usize..10, seed in any::<u64>()) {
        let a = random_assignment(g.vertex_count(), k, seed);
        let fast = modularity(&g, &a);
        let slow = brute_modularity(&g, &a);
        prop_assert!((fast - slow).abs() <= 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn matches_brute_force_weighted(g in weighted(), k in 1usize..6, seed in any::<u64>()) {
        let a = random_assignment(g.vertex_count(), k, seed);
        prop_assert!((modularity(&g, &a) - brute_modularity(&g, &a)).abs() <= 1e-9);
    }

    #[test]
    fn all_in_one_is_zero(g in gnp()) {
        let q = modularity(&g, &CommunityAssignment::all_in_one(g.vertex_count()));
        prop_assert!(q.abs() <= 1e-12, "{q}");
    }

    #[test]
    fn invariant_under_relabeling(g in gnp(), k in 1usize..8, seed in any::<u64>()) {
        let a = random_assignment(g.vertex_count(), k, seed);
        let reversed = CommunityAssignment::new(a.labels().iter().map(|&l| k as u32 - 1 - l).collect());
        prop_assert!((modularity(&g, &a) - modularity(&g, &reversed)).abs() <= 1e-12);
    }

    #[test]
    fn invariant_under_weight_scaling(g in weighted(), k in 1usize..6, seed in any::<u64>(), c in 0.5f64..4.0) {
        let scaled = Graph::from_arcs(g.vertex_count(), g.all_arcs().map(|(u, v, w)| (u, v, w * c)), Merge::Sum);
        let a = random_assignment(g.vertex_count(), k, seed);
        prop_assert!((modularity(&g, &a) - modularity(&scaled, &a)).abs() <= 1e-9);
    }

    #[test]
    fn bounded(g in gnp(), k in 1usize..10, seed in any::<u64>()) {
        let q = modularity(&g, &random_assignment(g.vertex_count(), k, seed));
        prop_assert!((-0.5..=1.0).contains(&q), "{q}");
    }
}

#[test]
fn singletons_without_self_loops() {
    let g = gen_raw(SyntheticGraph::RingOfCliques { count: 3, size: 4 });
    let w = g.total_weight();
    let expected: f64 = -(0..g.vertex_count() as u32)
        .map(|v| (g.degree_weight(v) / w).powi(2))
        .sum::<f64>();
    let q = modularity(&g, &CommunityAssignment::singletons(g.vertex_count()));
    assert!((q - expected).abs() <= 1e-12);
    assert!(
        (brute_modularity(&g, &CommunityAssignment::singletons(g.vertex_count())) - expected).abs()
            <= 1e-12
    );
}
