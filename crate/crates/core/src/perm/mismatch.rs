use serde::Serialize;

use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::model::Labeling;

/// Mismatch statistics of a candidate `π` against the ground truth `π*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MismatchCounts {
    /// Mismatched vertices in `V₊`.
    pub k1: usize,
    /// Mismatched vertices in `V₋`.
    pub k2: usize,
    /// Intra-community pairs `e` with `τ(e) ≠ τ*(e)`.
    pub m_plus: usize,
    /// Inter-community pairs `e` with `τ(e) ≠ τ*(e)`.
    pub m_minus: usize,
    /// Intra-community pairs transposed by `π` relative to `π*`.
    pub e_tr_plus: usize,
    /// Inter-community pairs transposed by `π` relative to `π*`.
    pub e_tr_minus: usize,
}

/// Computes the counts with the closed-form pair formulas.
///
/// In debug builds the pair counts are also obtained by enumerating every
/// vertex pair, and the two must agree.
pub fn mismatch_counts(
    labels: &Labeling,
    pi_star: &Permutation,
    pi: &Permutation,
) -> Result<MismatchCounts> {
    let n = labels.n();
    Error::check_size(n, pi_star.len())?;
    Error::check_size(n, pi.len())?;

    let (mut k1, mut k2) = (0usize, 0usize);
    let (mut e_tr_plus, mut e_tr_minus) = (0usize, 0usize);
    let pi_star_inv = pi_star.inverse();
    for u in 0..n {
        if pi.apply(u) == pi_star.apply(u) {
            continue;
        }
        if labels.is_plus(u) {
            k1 += 1;
        } else {
            k2 += 1;
        }
        // (u, v) is transposed iff π(u) = π*(v) and π(v) = π*(u); count once via u < v
        let v = pi_star_inv.apply(pi.apply(u));
        if u < v && pi.apply(v) == pi_star.apply(u) {
            if labels.same_community(u, v) {
                e_tr_plus += 1;
            } else {
                e_tr_minus += 1;
            }
        }
    }

    let n_plus = labels.n_plus();
    let n_minus = n - n_plus;
    let choose2 = |k: usize| k * k.saturating_sub(1) / 2;
    let m_plus = choose2(k1) + k1 * (n_plus - k1) + choose2(k2) + k2 * (n_minus - k2) - e_tr_plus;
    let m_minus = k1 * n_minus + k2 * n_plus - k1 * k2 - e_tr_minus;

    #[cfg(debug_assertions)]
    {
        let (bp, bm) = enumerate_mismatched_pairs(labels, pi_star, pi);
        assert_eq!(
            (m_plus, m_minus),
            (bp, bm),
            "closed-form mismatch counts disagree with pair enumeration"
        );
    }

    Ok(MismatchCounts { k1, k2, m_plus, m_minus, e_tr_plus, e_tr_minus })
}

#[cfg(debug_assertions)]
fn enumerate_mismatched_pairs(
    labels: &Labeling,
    pi_star: &Permutation,
    pi: &Permutation,
) -> (usize, usize) {
    let (mut plus, mut minus) = (0, 0);
    for e in super::all_pairs(labels.n()) {
        if pi.lift().apply(e) != pi_star.lift().apply(e) {
            if labels.same_community(e.lo(), e.hi()) {
                plus += 1;
            } else {
                minus += 1;
            }
        }
    }
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels_0011() -> Labeling {
        Labeling::new(vec![1, 1, -1, -1]).unwrap()
    }

    #[test]
    fn identical_permutations_have_no_mismatch() {
        let l = labels_0011();
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let c = mismatch_counts(&l, &p, &p).unwrap();
        assert_eq!(c, MismatchCounts { k1: 0, k2: 0, m_plus: 0, m_minus: 0, e_tr_plus: 0, e_tr_minus: 0 });
    }

    #[test]
    fn swap_within_plus_community() {
        let l = labels_0011();
        let id = Permutation::identity(4);
        let pi = Permutation::transposition(4, 0, 1).unwrap();
        let c = mismatch_counts(&l, &id, &pi).unwrap();
        assert_eq!((c.k1, c.k2), (2, 0));
        assert_eq!((c.m_plus, c.m_minus), (0, 4));
        assert_eq!((c.e_tr_plus, c.e_tr_minus), (1, 0));
    }

    #[test]
    fn swap_across_communities() {
        let l = labels_0011();
        let id = Permutation::identity(4);
        let pi = Permutation::transposition(4, 0, 2).unwrap();
        let c = mismatch_counts(&l, &id, &pi).unwrap();
        assert_eq!((c.k1, c.k2), (1, 1));
        // inter pairs {0,3} and {1,2} move; {0,2} is transposed and {1,3} fixed
        assert_eq!((c.m_plus, c.m_minus), (2, 2));
        assert_eq!((c.e_tr_plus, c.e_tr_minus), (0, 1));
    }

    #[test]
    fn size_mismatch() {
        let l = labels_0011();
        assert!(mismatch_counts(&l, &Permutation::identity(3), &Permutation::identity(4)).is_err());
    }
}
