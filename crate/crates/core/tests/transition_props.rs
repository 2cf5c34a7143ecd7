mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use ttcover::group_ring::LaurentElement;
use ttcover::homology::HomologyData;
use ttcover::magnus::MagnusMatrix;
use ttcover::transition::{
    is_stable, shadow, subgraph_matrix, transition_graph, vertex_subgraph, TransitionGraph, DEFAULT_CYCLE_CAP,
};

fn count_paths(t: &TransitionGraph, from: usize, k: usize, counts: &mut [i64]) {
    if k == 0 {
        counts[from] += 1;
        return;
    }
    for &a in t.out_arcs(from) {
        count_paths(t, t.arc(a).target, k - 1, counts);
    }
}

#[test]
fn path_counts_match_traversals() {
    for (name, f) in corpus_maps() {
        let h = HomologyData::compute(&f).unwrap();
        let t = transition_graph(&f, &h);
        let m = f.num_edges();
        for i in 0..m {
            assert_eq!(t.out_arcs(i).len(), f.edge_image(i).len(), "{name}");
            for k in 1..=4 {
                let mut counts = vec![0i64; m];
                count_paths(&t, i, k, &mut counts);
                let img = f.iterate_edge_image(i, k).unwrap();
                for (j, &c) in counts.iter().enumerate() {
                    let traversals = img.steps().iter().filter(|s| s.edge == j).count() as i64;
                    assert_eq!(c, traversals, "{name}: {i} -> {j}, k={k}");
                }
            }
        }
    }
}

#[test]
fn groupoid_homomorphism_on_corpus() {
    assert!(checks::groupoid_on_corpus(500, 5) > 0);
}

#[test]
fn closed_walks_lie_in_the_shadow() {
    for (name, f) in corpus_maps() {
        let h = HomologyData::compute(&f).unwrap();
        let t = transition_graph(&f, &h);
        let s = shadow(&t, DEFAULT_CYCLE_CAP).unwrap();
        for k in 1..=6 {
            for w in based_cycles(&t, k) {
                assert!(s.contains(&checks::normalized(&t, &w)), "{name}: {w:?}");
            }
        }
    }
}

#[test]
fn extremal_subgraphs_carry_the_maximum() {
    assert!(checks::extremal_on_corpus(20, 17) > 0);
}

fn nilpotent_by_powering(a: &MagnusMatrix) -> bool {
    a.pow(a.size().max(1)).is_zero()
}

#[test]
fn stability_of_corpus_vertices() {
    for (name, f) in corpus_maps() {
        let h = HomologyData::compute(&f).unwrap();
        let t = transition_graph(&f, &h);
        let s = shadow(&t, DEFAULT_CYCLE_CAP).unwrap();
        for u in &s.vertices {
            let a = subgraph_matrix(&t, &vertex_subgraph(&s, u).unwrap());
            assert_eq!(is_stable(&a), !nilpotent_by_powering(&a), "{name}");
        }
    }
}

fn random_magnus(seed: u64) -> MagnusMatrix {
    let mut r = rng(seed);
    let n = r.gen_range(1..=4);
    let d = r.gen_range(0..=2);
    let upper = r.gen_bool(0.5);
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if (upper && j <= i) || r.gen_bool(0.5) {
                        LaurentElement::zero(d)
                    } else {
                        let e = (0..d).map(|_| r.gen_range(-2..=2)).collect();
                        LaurentElement::signed_monomial(e, if r.gen_bool(0.5) { 1 } else { -1 })
                    }
                })
                .collect()
        })
        .collect();
    MagnusMatrix::new(d, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn is_stable_matches_powering(seed in any::<u64>()) {
        let a = random_magnus(seed);
        prop_assert_eq!(is_stable(&a), !nilpotent_by_powering(&a));
    }

    #[test]
    fn groupoid_homomorphism_on_random_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_graph_map(&mut r);
        let h = HomologyData::compute(&f).unwrap();
        let t = transition_graph(&f, &h);
        for _ in 0..10 {
            let arcs = random_arc_path(&t, 4, &mut r);
            checks::check_groupoid(&f, &t, &arcs);
        }
    }
}
