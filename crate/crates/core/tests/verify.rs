use hyperspan::additive_eft::{build_additive_eft, surplus_bound, AdditiveAlgo};
use hyperspan::eftcluster::{build, Params};
use hyperspan::instances::{random_hypergraph, RandomSpec};
use hyperspan::verify::{
    build_and_verify, derived_seed, fault_set_count, verify_add, verify_mult, Mode, VerifyError, VerifyOptions,
};
use hyperspan::{FaultSet, Hypergraph, INF};

fn corpus(n: usize, m: usize, seed: u64) -> Hypergraph {
    random_hypergraph(&RandomSpec::uniform(n, m, 3).weights(1, 5), seed).unwrap()
}

#[test]
fn identity_spanner_passes_every_mode() {
    let h = corpus(10, 20, 1);
    for mode in [Mode::Exhaustive, Mode::Sampled, Mode::Adversarial] {
        let opts = VerifyOptions::new(mode, 4).budget(100);
        let r = verify_mult(&h, &h, 2, 1.0, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.worst_ratio, 1.0);
        let r = verify_add(&h, &h, 2, |_| 0.0, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.worst_ratio, 0.0);
    }
}

#[test]
fn exhaustive_counts_every_fault_set() {
    let h = corpus(8, 12, 2);
    let r = verify_mult(&h, &h, 2, 1.0, &VerifyOptions::exhaustive()).unwrap();
    assert_eq!(r.fault_sets_checked as u128, fault_set_count(12, 2));
    assert_eq!(fault_set_count(12, 2), 1 + 12 + 66);
    assert_eq!(r.pairs_checked, r.fault_sets_checked * 28);
    let big = corpus(30, 120, 3);
    assert!(matches!(
        verify_mult(&big, &big, 3, 1.0, &VerifyOptions::exhaustive()),
        Err(VerifyError::ExhaustiveTooLarge(_))
    ));
}

#[test]
fn foreign_spanner_is_rejected() {
    let h = corpus(8, 12, 2);
    let other = Hypergraph::new(8, [(1.0, vec![0, 7])]).unwrap();
    assert!(matches!(
        verify_mult(&h, &other, 1, 3.0, &VerifyOptions::exhaustive()),
        Err(VerifyError::NotSubhypergraph)
    ));
}

#[test]
fn reports_do_not_depend_on_threads() {
    let h = corpus(12, 24, 5);
    let s = h.restrict(h.edge_ids().filter(|e| e % 3 != 0));
    for mode in [Mode::Exhaustive, Mode::Sampled, Mode::Adversarial] {
        let one = verify_mult(&h, &s, 2, 3.0, &VerifyOptions::new(mode, 9).budget(300)).unwrap();
        let four = verify_mult(&h, &s, 2, 3.0, &VerifyOptions::new(mode, 9).budget(300).threads(4)).unwrap();
        assert_eq!(one, four, "{mode}");
        assert_eq!(one.to_tsv(), four.to_tsv());
    }
}

#[test]
fn worst_verdict_is_a_real_violation() {
    let h = corpus(12, 24, 6);
    let s = h.restrict(h.edge_ids().filter(|e| e % 2 == 0));
    let r = verify_mult(&h, &s, 1, 1.0, &VerifyOptions::exhaustive()).unwrap();
    assert!(!r.passed());
    let w = r.worst.unwrap();
    assert!(!w.ok);
    let (u, v) = w.pair;
    assert_eq!(h.shortest_distance(&w.fault_set, u, v).unwrap(), w.d_h);
    assert_eq!(s.shortest_distance(&w.fault_set, u, v).unwrap(), w.d_s);
    assert!(w.d_s > w.d_h);
}

#[test]
fn adversarial_mode_needs_no_random_sets() {
    // S drops {0,1,4}; 0-4 stays short only until the parallel {0,1} fails
    let h = Hypergraph::new(
        6,
        [(1.0, vec![0, 1]), (1.0, vec![1, 2]), (1.0, vec![2, 3]), (1.0, vec![3, 0]), (1.0, vec![0, 1, 4]), (1.0, vec![4, 5]), (1.0, vec![2, 5])],
    )
    .unwrap();
    let s = h.without([4]);
    let r = verify_mult(&h, &s, 1, 3.0, &VerifyOptions::new(Mode::Adversarial, 0).budget(0)).unwrap();
    assert!(!r.passed());
    let ex = verify_mult(&h, &s, 1, 3.0, &VerifyOptions::exhaustive()).unwrap();
    assert!(!ex.passed());
}

#[test]
fn passing_first_build_skips_the_retry() {
    let h = corpus(14, 30, 7);
    let p = Params::new(2, 1, 7).unwrap();
    let out = build_and_verify(&h, &p, &VerifyOptions::exhaustive()).unwrap();
    assert!(out.passed_first());
    assert!(out.retry.is_none());
    assert_eq!(out.spanner, build(&h, &p).0);
    assert_ne!(derived_seed(7), 7);
}

/// Parallel copies of one vertex set: a single fault can take out the
/// only detour the first iteration relied on.
fn doubled(seed: u64) -> Hypergraph {
    let base = corpus(9, 12, seed);
    let edges = base.edges().iter().flat_map(|e| [(e.weight, e.vertices.clone()), (e.weight + 1.0, e.vertices.clone())]);
    Hypergraph::new_multi(9, edges).unwrap()
}

#[test]
fn failed_first_build_is_retried_once() {
    let mut retried = 0;
    for seed in 0..200 {
        let h = doubled(seed);
        let p = Params::new(2, 1, seed).unwrap();
        let out = build_and_verify(&h, &p, &VerifyOptions::exhaustive()).unwrap();
        let Some(retry) = &out.retry else {
            assert!(out.passed_first());
            continue;
        };
        retried += 1;
        assert!(!out.passed_first());
        assert_eq!(out.params.seed(), derived_seed(seed));
        assert_eq!(out.params.sample_const(), 2 * p.sample_const());
        assert_eq!(out.spanner, build(&h, &out.params).0);
        assert_eq!(out.passed(), retry.passed());
    }
    assert!(retried > 0, "no first-build failure in 200 seeds");
}

#[test]
fn additive_builds_meet_their_bound() {
    for seed in 0..10 {
        let h = random_hypergraph(&RandomSpec::uniform(11, 25, 3), seed).unwrap();
        let out = build_additive_eft(&h, 2, 1, seed, AdditiveAlgo::Plus2).unwrap();
        assert_eq!(out.bound.value(), surplus_bound(1, 3, 2.0, 3.0, 1.0));
        assert_eq!(out.bound.value(), 20.0);
        let bound = out.bound;
        let r = verify_add(&h, &out.spanner, 1, |c| bound.for_pair(c.w_st), &VerifyOptions::exhaustive()).unwrap();
        assert!(r.passed());
        assert!(r.worst_ratio <= bound.value());
    }
}

#[test]
fn empty_and_single_fault_sets_via_extra() {
    let h = corpus(9, 14, 8);
    let tree_like = h.restrict([0usize]);
    let opts = VerifyOptions::new(Mode::Sampled, 0).budget(0).extra(vec![FaultSet::new([0]).unwrap()]);
    let r = verify_mult(&h, &tree_like, 1, 3.0, &opts).unwrap();
    assert!(!r.passed());
    let w = r.worst.unwrap();
    assert_eq!(w.d_s, INF);
}
