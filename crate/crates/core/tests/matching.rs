use csbm::matching::{agreement_score, match_exhaustive_with, match_local_search, SearchConfig, SearchInit};
use csbm::model::{generate_family, Graph, ModelParams};
use csbm::rng::{stream, StreamKey};
use csbm::Permutation;

#[test]
fn local_search_quality_target() {
    let params = ModelParams::raw(100, 0.5, 0.1, 0.95).unwrap();
    let root = StreamKey::root(2024);
    let mut fractions = Vec::new();
    for t in 0..20u64 {
        let f = generate_family(&params, &mut root.child(t).rng()).unwrap();
        let cfg = SearchConfig { seed: t, ..SearchConfig::default() };
        let out = match_local_search(&f.g1, f.g2(), &cfg).unwrap();
        let correct = (0..100).filter(|&i| out.best.apply(i) == f.pi2().apply(i)).count();
        fractions.push(correct as f64 / 100.0);
    }
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    eprintln!("correctly mapped fractions: {fractions:?}");
    assert!(mean >= 0.9, "mean correctly-mapped fraction {mean}");
}

#[test]
fn local_search_hits_ceiling_on_asymmetric_copy() {
    // an SBM draw at this density is asymmetric with overwhelming probability
    let params = ModelParams::raw(50, 0.3, 0.1, 1.0).unwrap();
    let mut rng = stream(31);
    let f = generate_family(&params, &mut rng).unwrap();
    let out = match_local_search(&f.g1, f.g2(), &SearchConfig::default()).unwrap();
    assert_eq!(out.score, f.g1.edge_count() as u64);
}

#[test]
fn identity_start_without_restarts_is_stable() {
    let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
    let cfg = SearchConfig { restarts: 0, init: SearchInit::Identity, ..SearchConfig::default() };
    assert!(match_local_search(&g, &g, &cfg).unwrap().best.is_identity());
}

#[test]
fn exhaustive_beats_random_permutations_and_truth() {
    let params = ModelParams::raw(8, 0.6, 0.2, 0.8).unwrap();
    let mut rng = stream(32);
    for _ in 0..5 {
        let f = generate_family(&params, &mut rng).unwrap();
        let out = match_exhaustive_with(&f.g1, f.g2(), 9).unwrap();
        assert!(out.score >= agreement_score(&f.g1, f.g2(), f.pi2()).unwrap());
        for _ in 0..1000 {
            let pi = Permutation::random(8, &mut rng);
            assert!(out.score >= agreement_score(&f.g1, f.g2(), &pi).unwrap());
        }
    }
}

#[test]
fn exhaustive_returns_truth_when_x_is_positive_everywhere() {
    // full scan at n = 7: whenever every π ≠ π* scores strictly below π*,
    // the matcher must return π*
    let params = ModelParams::raw(7, 0.7, 0.3, 0.9).unwrap();
    let mut rng = stream(33);
    let mut checked = 0;
    for _ in 0..30 {
        let f = generate_family(&params, &mut rng).unwrap();
        let truth = agreement_score(&f.g1, f.g2(), f.pi2()).unwrap();
        let mut pi = Permutation::identity(7);
        let mut unique = true;
        loop {
            if pi != *f.pi2() && agreement_score(&f.g1, f.g2(), &pi).unwrap() >= truth {
                unique = false;
                break;
            }
            if !pi.next_lexicographic() {
                break;
            }
        }
        if unique {
            checked += 1;
            assert_eq!(match_exhaustive_with(&f.g1, f.g2(), 9).unwrap().best, *f.pi2());
        }
    }
    assert!(checked > 0);
}

