use std::sync::Mutex;

use labelprop::copra::{copra_detect, copra_detect_observed, CopraParams};
use labelprop::rak::{rak_detect, rak_detect_observed, RakParams};
use labelprop::slpa::{slpa_detect, slpa_detect_with_memories, SlpaParams};
use labelprop::testkit::{clique_partition, gen_graph, same_partition, SyntheticGraph};
use labelprop::{CommunityAssignment, Graph, VertexId, VisitOrder};
use proptest::prelude::*;

fn cliques(count: usize, size: usize) -> Graph {
    gen_graph(SyntheticGraph::DisjointCliques { count, size })
}

/// Component id of every vertex, as the smallest vertex in the component.
fn components(g: &Graph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut comp = vec![VertexId::MAX; n];
    for s in 0..n as VertexId {
        if comp[s as usize] != VertexId::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s as usize] = s;
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if comp[u as usize] == VertexId::MAX {
                    comp[u as usize] = s;
                    stack.push(u);
                }
            }
        }
    }
    comp
}

fn small_gnp() -> impl Strategy<Value = Graph> {
    (1usize..120, 0.0f64..0.2, any::<u64>())
        .prop_map(|(n, p, seed)| gen_graph(SyntheticGraph::Gnp { n, p, seed }))
}

#[test]
fn rak_and_copra_recover_disjoint_cliques() {
    let g = cliques(8, 6);
    let truth = clique_partition(8, 6);
    for seed in 1..=20 {
        for strict in [true, false] {
            let r = rak_detect(
                &g,
                &RakParams {
                    strict,
                    seed,
                    ..RakParams::default()
                },
            );
            assert!(
                same_partition(&r.assignment, &truth),
                "rak strict={strict} seed={seed}"
            );
        }
        for max_labels in [1, 8] {
            let r = copra_detect(
                &g,
                &CopraParams {
                    max_labels,
                    seed,
                    ..CopraParams::default()
                },
            );
            assert!(
                same_partition(&r.assignment, &truth),
                "copra max_labels={max_labels} seed={seed}"
            );
        }
    }
}

#[test]
fn ring_of_cliques_has_no_monster_for_rak_and_copra() {
    let g = gen_graph(SyntheticGraph::RingOfCliques { count: 16, size: 6 });
    let half = g.vertex_count() / 2;
    for seed in 1..=20 {
        for strict in [true, false] {
            let r = rak_detect(
                &g,
                &RakParams {
                    strict,
                    seed,
                    ..RakParams::default()
                },
            );
            assert!(
                r.assignment.largest_community() <= half,
                "rak strict={strict} seed={seed}"
            );
        }
        let r = copra_detect(
            &g,
            &CopraParams {
                seed,
                ..CopraParams::default()
            },
        );
        assert!(
            r.assignment.largest_community() <= half,
            "copra seed={seed}"
        );
    }
}

#[test]
fn strict_sequential_runs_repeat_exactly() {
    let g = gen_graph(SyntheticGraph::Gnp {
        n: 2000,
        p: 0.004,
        seed: 11,
    });
    for order in [VisitOrder::Index, VisitOrder::Shuffled] {
        let p = RakParams {
            order,
            seed: 9,
            ..RakParams::default()
        };
        assert_eq!(rak_detect(&g, &p).assignment, rak_detect(&g, &p).assignment);
    }
    let p = SlpaParams {
        seed: 9,
        ..SlpaParams::default()
    };
    assert_eq!(
        slpa_detect(&g, &p).assignment,
        slpa_detect(&g, &p).assignment
    );
    let p = CopraParams {
        seed: 9,
        ..CopraParams::default()
    };
    assert_eq!(
        copra_detect(&g, &p).assignment,
        copra_detect(&g, &p).assignment
    );
}

#[test]
fn non_strict_sequential_runs_repeat_under_a_fixed_seed() {
    let g = gen_graph(SyntheticGraph::Gnp {
        n: 1000,
        p: 0.006,
        seed: 2,
    });
    let p = RakParams {
        strict: false,
        seed: 4,
        ..RakParams::default()
    };
    assert_eq!(rak_detect(&g, &p).assignment, rak_detect(&g, &p).assignment);
    let p = SlpaParams {
        strict: false,
        seed: 4,
        ..SlpaParams::default()
    };
    assert_eq!(
        slpa_detect(&g, &p).assignment,
        slpa_detect(&g, &p).assignment
    );
}

#[test]
fn loose_tolerance_is_a_prefix_of_tight_tolerance() {
    for recipe in [
        SyntheticGraph::Gnp {
            n: 3000,
            p: 0.002,
            seed: 5,
        },
        SyntheticGraph::RingOfCliques { count: 30, size: 5 },
        SyntheticGraph::Path { n: 200 },
    ] {
        let g = gen_graph(recipe);
        let tight = RakParams {
            tolerance: 1e-4,
            max_iterations: 1000,
            seed: 3,
            ..RakParams::default()
        };
        let mut history = Vec::new();
        let tight_run = rak_detect_observed(&g, &tight, |_, labels| history.push(labels.to_vec()));
        let loose = rak_detect(
            &g,
            &RakParams {
                tolerance: 0.1,
                ..tight.clone()
            },
        );
        assert!(tight_run.iterations >= loose.iterations, "{recipe:?}");
        assert_eq!(
            loose.assignment.labels(),
            history[loose.iterations - 1].as_slice(),
            "{recipe:?}"
        );
    }
}

#[test]
fn copra_sets_stay_normalized_after_every_update() {
    let g = gen_graph(SyntheticGraph::Gnp {
        n: 1000,
        p: 0.008,
        seed: 21,
    });
    for max_labels in [1, 2, 4, 8] {
        let bad = Mutex::new(Vec::new());
        copra_detect_observed(
            &g,
            &CopraParams {
                max_labels,
                ..CopraParams::default()
            },
            |v, set| {
                let sum = set.belonging_sum();
                if (sum - 1.0).abs() > 1e-9 || set.is_empty() || set.len() > max_labels {
                    bad.lock().unwrap().push((v, set.clone()));
                }
            },
        );
        assert!(
            bad.into_inner().unwrap().is_empty(),
            "max_labels={max_labels}"
        );
    }
}

#[test]
fn slpa_memory_law() {
    let g = gen_graph(SyntheticGraph::Gnp {
        n: 400,
        p: 0.02,
        seed: 8,
    });
    for memory_size in [2, 3, 5, 10, 20] {
        for tolerance in [0.5, 0.05, 1e-6] {
            let p = SlpaParams {
                memory_size,
                tolerance,
                ..SlpaParams::default()
            };
            let (r, memories) = slpa_detect_with_memories(&g, &p);
            assert!(r.iterations < memory_size);
            if memory_size == 2 {
                assert_eq!(r.iterations, 1);
            }
            for (v, m) in memories.iter().enumerate() {
                assert_eq!(m.filled(), 1 + r.iterations);
                assert_eq!(m.slots()[0], v as VertexId);
            }
        }
    }
}

#[test]
fn slpa_appended_labels_come_from_neighbor_memories() {
    // Any appended label of v must sit in some neighbor's memory, or be v's
    // own label when v has nobody to listen to.
    let g = gen_graph(SyntheticGraph::Gnp {
        n: 300,
        p: 0.01,
        seed: 13,
    });
    let (_, memories) = slpa_detect_with_memories(
        &g,
        &SlpaParams {
            tolerance: 1e-6,
            ..SlpaParams::default()
        },
    );
    for v in 0..g.vertex_count() as VertexId {
        let heard: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| u != v)
            .flat_map(|&u| memories[u as usize].slots().iter().copied())
            .collect();
        for &l in &memories[v as usize].slots()[1..] {
            if heard.is_empty() {
                assert_eq!(l, v);
            } else {
                assert!(heard.contains(&l), "vertex {v} appended {l}");
            }
        }
    }
}

#[test]
fn empty_graph_is_handled_by_every_detector() {
    let g = Graph::empty();
    assert_eq!(rak_detect(&g, &RakParams::default()).iterations, 0);
    assert_eq!(
        copra_detect(&g, &CopraParams::default()).assignment,
        CommunityAssignment::new(vec![])
    );
    assert_eq!(slpa_detect(&g, &SlpaParams::default()).modularity, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn communities_never_span_components(g in small_gnp(), seed in 1u32..1000, strict in any::<bool>()) {
        let comp = components(&g);
        let results = [
            rak_detect(&g, &RakParams { strict, seed, ..RakParams::default() }),
            copra_detect(&g, &CopraParams { seed, ..CopraParams::default() }),
            slpa_detect(&g, &SlpaParams { strict, seed, ..SlpaParams::default() }),
        ];
        for r in results {
            prop_assert!(r.assignment.validate(g.vertex_count()));
            for (v, &l) in r.assignment.labels().iter().enumerate() {
                prop_assert_eq!(comp[v], comp[l as usize]);
            }
            prop_assert!((-0.5..=1.0).contains(&r.modularity));
        }
    }

    #[test]
    fn parallel_runs_label_every_vertex(g in small_gnp(), workers in 2usize..6) {
        let r = rak_detect(&g, &RakParams { workers, ..RakParams::default() });
        prop_assert!(r.assignment.validate(g.vertex_count()));
        let r = copra_detect(&g, &CopraParams { workers, ..CopraParams::default() });
        prop_assert!(r.assignment.validate(g.vertex_count()));
        let (r, memories) = slpa_detect_with_memories(&g, &SlpaParams { workers, ..SlpaParams::default() });
        prop_assert!(memories.iter().all(|m| m.filled() == 1 + r.iterations));
    }
}
