use std::sync::Arc;

use proptest::prelude::*;

use intervene::graph::{
    graph_stats, greedy_color, max_clique, max_independent_set, mcs_peo, subtree_split,
    two_color_forest, verify_peo, Skeleton,
};
use intervene::instances::{random_chordal, random_complete, random_tree};
use intervene::meek::{brute_force_closure, find_immoralities, meek_closure, Dag};
use intervene::oracle::{GroundTruth, Responder, Transcript};
use intervene::sepsys::{build_separating_system, label_elements, verify_separating};
use intervene::strategies::Strategy;
use intervene::Pdag;

/// Largest clique and independent set by subset enumeration.
fn exhaustive_clique_and_alpha(g: &Skeleton) -> (usize, usize) {
    let n = g.n();
    let (mut omega, mut alpha) = (0, 0);
    for mask in 0u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let pairs = || vs.iter().enumerate().flat_map(|(i, &u)| vs[i + 1..].iter().map(move |&w| (u, w)));
        if pairs().all(|(u, w)| g.has_edge(u, w)) {
            omega = omega.max(vs.len());
        }
        if pairs().all(|(u, w)| !g.has_edge(u, w)) {
            alpha = alpha.max(vs.len());
        }
    }
    (omega, alpha)
}

fn revealed_state(n: usize, density: f64, seed: u64, mask: u64) -> (Dag, Pdag) {
    let inst = random_chordal(n, density, seed);
    let arcs: Vec<(usize, usize)> = inst
        .dag
        .arcs()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << (i % 64)) != 0)
        .map(|(_, a)| a)
        .collect();
    let p = Pdag::with_directed(inst.skeleton().clone(), &arcs).expect("subset of a DAG");
    (inst.dag, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chordal_perfection(n in 1usize..=10, density in 0.0f64..4.0, seed: u64) {
        let inst = random_chordal(n, density, seed);
        let g = inst.skeleton();
        let peo = mcs_peo(g).unwrap();
        prop_assert!(verify_peo(g, &peo).is_ok());
        let col = greedy_color(g, &peo);
        prop_assert!(col.is_proper(g));
        let clique = max_clique(g, &peo);
        prop_assert!(g.is_clique(&clique));
        let mis = max_independent_set(g, &peo);
        prop_assert!(mis.iter().enumerate().all(|(i, &u)| mis[i + 1..].iter().all(|&w| !g.has_edge(u, w))));
        let (omega, alpha) = exhaustive_clique_and_alpha(g);
        prop_assert_eq!(col.num_colors(), omega);
        prop_assert_eq!(clique.len(), omega);
        prop_assert_eq!(mis.len(), alpha);
        let stats = graph_stats(g).unwrap();
        prop_assert_eq!((stats.chi, stats.alpha), (omega, alpha));
    }

    #[test]
    fn peo_orientation_has_no_immoralities(n in 1usize..=60, density in 0.0f64..5.0, seed: u64) {
        let inst = random_chordal(n, density, seed);
        prop_assert!(find_immoralities(&inst.dag).is_empty());
    }

    #[test]
    fn two_color_classes_induce_forests(n in 2usize..=80, density in 0.0f64..5.0, seed: u64) {
        let inst = random_chordal(n, density, seed);
        let g = inst.skeleton();
        let col = greedy_color(g, &mcs_peo(g).unwrap());
        for c in 0..col.num_colors() {
            for c2 in c + 1..col.num_colors() {
                let f = two_color_forest(g, &col, c, c2);
                prop_assert!(f.is_acyclic());
                prop_assert_eq!(f.num_edges() + f.num_components(), f.vertices().len());
            }
        }
    }

    #[test]
    fn subtree_split_partitions_the_tree(n in 2usize..=200, seed: u64, pick: usize) {
        let inst = random_tree(n, seed);
        let g = inst.skeleton();
        let col = greedy_color(g, &mcs_peo(g).unwrap());
        let f = two_color_forest(g, &col, 0, 1);
        let v = pick % n;
        let parts = subtree_split(&f, v);
        let mut seen: Vec<usize> = parts.iter().flatten().copied().collect();
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), total);
        prop_assert!(!seen.contains(&v));
        prop_assert_eq!(total + 1, f.tree_size(v));
    }

    #[test]
    fn meek_matches_brute_force(n in 1usize..=8, density in 0.0f64..4.0, seed: u64, mask: u64) {
        let (_, p) = revealed_state(n, density, seed, mask);
        prop_assert_eq!(meek_closure(&p), brute_force_closure(&p).unwrap());
    }

    #[test]
    fn meek_idempotent_and_monotone(n in 1usize..=40, density in 0.0f64..4.0, seed: u64, mask: u64, extra: u64) {
        let (dag, p) = revealed_state(n, density, seed, mask);
        let once = meek_closure(&p);
        prop_assert_eq!(meek_closure(&once), once.clone());
        // Closure never orients against the truth.
        for (u, v) in once.directed_edges() {
            prop_assert!(dag.has_arc(u, v));
        }
        let more: Vec<(usize, usize)> = dag
            .arcs()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| extra & (1 << (i % 64)) != 0)
            .map(|(_, a)| a)
            .collect();
        let mut bigger = p.clone();
        bigger.merge_orientations(&more).unwrap();
        let closed = meek_closure(&bigger);
        for (u, v) in once.directed_edges() {
            prop_assert!(closed.is_directed(u, v));
        }
    }

    #[test]
    fn labels_distinct_and_balanced(n in 1usize..=5000, a in 2usize..=64) {
        let m = label_elements(n, a);
        let mut labels: Vec<Vec<usize>> = (0..n).map(|j| m.label(j)).collect();
        labels.sort();
        labels.dedup();
        prop_assert_eq!(labels.len(), n);
        prop_assert!(m.max_letter_frequency() <= n.div_ceil(a));
    }

    #[test]
    fn separating_systems_large(n in 3usize..=3000, ks in 0.0f64..1.0) {
        let k = 1 + (((n - 1) / 2 - 1) as f64 * ks) as usize;
        let s = build_separating_system(n, k).unwrap();
        prop_assert!(verify_separating(&s).is_ok());
        prop_assert!(s.sets.iter().all(|x| x.len() <= k));
    }

    #[test]
    fn strategy_run_invariants(n in 6usize..=80, density in 0.2f64..3.0, seed: u64, k in 1usize..=3, s in 0usize..2) {
        let strategy = [Strategy::Naive, Strategy::Hybrid][s];
        let inst = random_chordal(n, density, seed);
        let mut oracle = GroundTruth::new(inst.dag.clone(), k);
        let r = strategy.run(inst.skeleton().clone(), k, &mut oracle, seed).unwrap();
        prop_assert_eq!(&r.final_pdag, inst.dag.as_pdag());
        prop_assert!(r.transcript.interventions().all(|x| x.len() <= k));
        prop_assert_eq!(r.interventions_used, r.transcript.len());
        prop_assert_eq!(r.interventions_used, oracle.experiments());
        prop_assert_eq!(r.transcript.node_accesses, oracle.node_accesses());
        prop_assert_eq!(r.transcript.replay(inst.skeleton().clone()).unwrap(), r.final_pdag.clone());
        let parsed = Transcript::parse(&r.transcript.to_string()).unwrap();
        prop_assert_eq!(parsed, r.transcript);
    }

    #[test]
    fn complete_graph_counts(n in 3usize..=40, seed: u64, s in 0usize..3) {
        let strategy = [Strategy::Naive, Strategy::Hybrid, Strategy::RandBlock][s];
        let k = 1 + (seed as usize % ((n - 1) / 2));
        let inst = random_complete(n, seed);
        let mut oracle = GroundTruth::new(inst.dag.clone(), k);
        let r = strategy.run(inst.skeleton().clone(), k, &mut oracle, seed).unwrap();
        prop_assert_eq!(&r.final_pdag, inst.dag.as_pdag());
        // consecutive pairs of the hidden order must each be cut
        prop_assert!(oracle.node_accesses() >= n / 2);
        prop_assert!(r.interventions_used >= (n / 2).div_ceil(k));
    }
}

#[test]
fn edge_list_and_arc_list_round_trip() {
    let inst = random_chordal(50, 2.0, 9);
    let g = Skeleton::parse_edge_list(&inst.skeleton().to_edge_list()).unwrap();
    assert_eq!(&g, &**inst.skeleton());
    let d = Dag::parse_arcs(Arc::new(g), &inst.dag.to_arc_list()).unwrap();
    assert_eq!(d, inst.dag);
}
