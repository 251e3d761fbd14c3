mod common;

use csbm::perm::{lift_apply, mismatch_counts, pair_cycles, Pair};
use csbm::rng::stream;
use csbm::{Labeling, Permutation};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn mismatch_matches_enumeration((labels, a, b) in (3usize..40).prop_flat_map(|n| (
        proptest::collection::vec(any::<bool>(), n), perm(n), perm(n)
    ))) {
        let labels = Labeling::from_signs(labels);
        let got = mismatch_counts(&labels, &a, &b).unwrap();
        let want = common::brute_mismatch(labels.as_slice(), a.as_slice(), b.as_slice());
        prop_assert_eq!((got.m_plus, got.m_minus), want);
    }

    #[test]
    fn pair_cycles_follow_the_relative_lift((a, b) in (2usize..25).prop_flat_map(|n| (perm(n), perm(n)))) {
        let n = a.len();
        let dec = pair_cycles(&a, &b).unwrap();
        prop_assert_eq!(dec.total_len(), n * (n - 1) / 2);
        let rel = a.inverse().compose(&b).unwrap();
        for cycle in dec.cycles() {
            for (k, &e) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                let image = lift_apply(&rel, e);
                // cycles may be walked in either direction
                prop_assert!(image == next || lift_apply(&rel, next) == e);
            }
        }
    }
}

#[test]
fn lift_is_a_bijection_on_pairs() {
    let pi = Permutation::random(12, &mut stream(1));
    let mut images: Vec<Pair> = csbm::perm::all_pairs(12).map(|e| lift_apply(&pi, e)).collect();
    images.sort_by_key(|e| (e.lo(), e.hi()));
    images.dedup();
    assert_eq!(images.len(), 66);
}

#[test]
fn identity_has_only_fixed_pairs() {
    let pi = Permutation::random(9, &mut stream(2));
    let dec = pair_cycles(&pi, &pi).unwrap();
    assert_eq!(dec.nontrivial().count(), 0);
    assert_eq!(dec.fixed_points().count(), 36);
}
