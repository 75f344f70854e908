use hyperspan::assoc::{expand_multigraph, AssociatedGraph, GraphEdge};
use hyperspan::baseline::{additive2_spanner, greedy_spanner, lifted_greedy, peeloff_eft};
use hyperspan::instances::{random_hypergraph, RandomSpec};
use hyperspan::verify::{verify_mult, VerifyOptions};
use hyperspan::Hypergraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gnp(n: usize, p: f64, seed: u64) -> AssociatedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(GraphEdge { u, v, weight: 1.0, source: edges.len() });
            }
        }
    }
    AssociatedGraph::from_edges(n, edges, true)
}

#[test]
fn greedy_size_stays_under_the_girth_bound() {
    for (n, seed) in [(16, 1), (64, 2), (256, 3)] {
        let m = (4.0 * (n as f64).powf(1.5)) as usize;
        let h = random_hypergraph(&RandomSpec::uniform(n, m.min(n * (n - 1) / 2), 2), seed).unwrap();
        let g = expand_multigraph(&h);
        let kept = greedy_spanner(&g, 2).unwrap().len() as f64;
        let bound = (n as f64).powf(1.5) + n as f64;
        assert!(kept <= bound, "n={n}: {kept} > {bound}");
        assert!(kept < g.m() as f64 || n == 16);
    }
}

#[test]
fn greedy_stretch_on_weighted_graphs() {
    for seed in 0..10 {
        let h = random_hypergraph(&RandomSpec::uniform(30, 120, 2).weights(1, 20), seed).unwrap();
        let g = expand_multigraph(&h);
        let all = g.all_pairs();
        for k in 1..=4 {
            let chosen = greedy_spanner(&g, k).unwrap();
            let sub = g.all_pairs_of(&chosen);
            for u in 0..g.n() {
                for v in 0..g.n() {
                    assert!(sub.get(u, v) <= (2 * k - 1) as f64 * all.get(u, v));
                }
            }
            if k == 1 {
                assert_eq!(sub, all);
            }
        }
    }
}

#[test]
fn plus_two_on_dense_random_graphs() {
    for seed in 0..5 {
        let g = gnp(30, 0.3, seed);
        let chosen = additive2_spanner(&g).unwrap();
        let all = g.all_pairs();
        let sub = g.all_pairs_of(&chosen);
        for u in 0..30 {
            for v in 0..30 {
                assert!(sub.get(u, v) <= all.get(u, v) + 2.0, "seed {seed} ({u},{v})");
            }
        }
    }
}

#[test]
fn plus_two_on_complete_graph() {
    let g = gnp(5, 1.0, 0);
    assert_eq!(g.m(), 10);
    let chosen = additive2_spanner(&g).unwrap();
    let sub = g.all_pairs_of(&chosen);
    for u in 0..5 {
        for v in 0..5 {
            assert!(sub.get(u, v) <= g.all_pairs().get(u, v) + 2.0);
        }
    }
}

#[test]
fn peeloff_rounds_are_disjoint_and_fault_tolerant() {
    for seed in 0..20 {
        let h = random_hypergraph(&RandomSpec::uniform(10, 20, 3).weights(1, 4), seed).unwrap();
        for f in 1..=2 {
            let p = peeloff_eft(&h, 2, f).unwrap();
            assert!(p.rounds.len() <= f + 1);
            let total: usize = p.rounds.iter().map(Vec::len).sum();
            assert_eq!(total, p.spanner.m());
            let report = verify_mult(&h, &p.spanner, f, 3.0, &VerifyOptions::exhaustive()).unwrap();
            assert!(report.passed(), "seed {seed} f={f}");
        }
    }
}

#[test]
fn single_round_without_faults() {
    let h = random_hypergraph(&RandomSpec::uniform(12, 24, 3).weights(1, 3).mixed(), 4).unwrap();
    let p = peeloff_eft(&h, 3, 0).unwrap();
    assert_eq!(p.rounds.len(), 1);
    assert_eq!(p.spanner, lifted_greedy(&h, 3).unwrap());
}

#[test]
fn lifting_a_cycle_keeps_it() {
    let c5 = Hypergraph::new(5, (0..5).map(|i| (1.0, vec![i, (i + 1) % 5]))).unwrap();
    assert_eq!(lifted_greedy(&c5, 2).unwrap(), c5);
}
