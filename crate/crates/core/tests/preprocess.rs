use labelprop::graph::{preprocess, preprocess_with, Merge, PreprocessOptions};
use labelprop::testkit::{gen_graph, SyntheticGraph};
use labelprop::Graph;
use proptest::prelude::*;

fn raw() -> impl Strategy<Value = Graph> {
    (0usize..30)
        .prop_flat_map(|n| {
            let arc = (0..n.max(1) as u32, 0..n.max(1) as u32, 0.1f64..5.0);
            (
                Just(n),
                prop::collection::vec(arc, 0..if n == 0 { 1 } else { 80 }),
            )
        })
        .prop_map(|(n, arcs)| {
            let arcs = if n == 0 { Vec::new() } else { arcs };
            Graph::from_arcs(n, arcs, Merge::Sum)
        })
}

proptest! {
    #[test]
    fn symmetric_with_one_unit_self_loop_each(g in raw()) {
        let p = preprocess(&g);
        prop_assert!(p.is_symmetric());
        prop_assert_eq!(p.vertex_count(), g.vertex_count());
        prop_assert_eq!(p.self_loop_count(), g.vertex_count());
        for v in 0..p.vertex_count() as u32 {
            prop_assert_eq!(p.self_loop(v), Some(1.0));
            prop_assert!(p.weights(v).iter().all(|&w| w == 1.0));
        }
    }

    #[test]
    fn idempotent(g in raw()) {
        let once = preprocess(&g);
        prop_assert_eq!(preprocess(&once), once.clone());
        let opts = PreprocessOptions { unit_weights: false, self_loops: false };
        let kept = preprocess_with(&g, opts);
        prop_assert_eq!(preprocess_with(&kept, opts), kept);
    }

    #[test]
    fn degrees_sum_to_total_weight(g in raw()) {
        for p in [preprocess(&g), preprocess_with(&g, PreprocessOptions { unit_weights: false, self_loops: false })] {
            let sum: f64 = (0..p.vertex_count() as u32).map(|v| p.degree_weight(v)).sum();
            prop_assert!((sum - p.total_weight()).abs() <= 1e-9 * p.total_weight().max(1.0));
        }
    }

    #[test]
    fn every_arc_gains_its_reverse(g in raw()) {
        let p = preprocess(&g);
        for (u, v, _) in g.all_arcs() {
            prop_assert!(p.arc_weight(u, v).is_some() && p.arc_weight(v, u).is_some());
        }
    }

    #[test]
    fn generated_graphs_are_preprocessed(n in 0usize..80, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = gen_graph(SyntheticGraph::Gnp { n, p, seed });
        prop_assert_eq!(preprocess(&g), g.clone());
        prop_assert_eq!(gen_graph(SyntheticGraph::Gnp { n, p, seed }), g);
    }
}
