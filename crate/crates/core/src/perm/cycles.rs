use serde::Serialize;

use super::permutation::{all_pairs, Pair, Permutation};
use crate::error::{Error, Result};

/// Cycles of the lifted map `τ*⁻¹ ∘ τ` on unordered pairs.
///
/// Each cycle starts at its lexicographically smallest pair and lists the
/// successive images `e, σ(e), σ²(e), ...`; cycles are sorted by their first
/// pair. Fixed points appear as cycles of length one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCycleDecomposition {
    n: usize,
    cycles: Vec<Vec<Pair>>,
}

impl PairCycleDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Vec<Pair>] {
        &self.cycles
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = Pair> + '_ {
        self.cycles.iter().filter(|c| c.len() == 1).map(|c| c[0])
    }

    /// Cycles of length at least two.
    pub fn nontrivial(&self) -> impl Iterator<Item = &[Pair]> + '_ {
        self.cycles.iter().filter(|c| c.len() >= 2).map(Vec::as_slice)
    }

    pub fn total_len(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }
}

pub fn pair_cycles(tau_star: &Permutation, tau: &Permutation) -> Result<PairCycleDecomposition> {
    Error::check_size(tau_star.len(), tau.len())?;
    let n = tau.len();
    // σ = π*⁻¹ ∘ π lifts to τ*⁻¹ ∘ τ
    let sigma = tau_star.inverse().compose(tau)?;
    let lifted = sigma.lift();
    let mut visited = vec![false; n * n.saturating_sub(1) / 2];
    let mut cycles = Vec::new();
    for start in all_pairs(n) {
        if visited[start.index(n)] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start.index(n)] = true;
        let mut e = lifted.apply(start);
        while e != start {
            visited[e.index(n)] = true;
            cycle.push(e);
            e = lifted.apply(e);
        }
        cycles.push(cycle);
    }
    Ok(PairCycleDecomposition { n, cycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn equal_permutations_fix_everything() {
        let p = Permutation::random(6, &mut stream(1));
        let d = pair_cycles(&p, &p).unwrap();
        assert_eq!(d.cycles().len(), 15);
        assert_eq!(d.fixed_points().count(), 15);
        assert_eq!(d.nontrivial().count(), 0);
    }

    #[test]
    fn transposition_on_three_vertices() {
        let id = Permutation::identity(3);
        let t = Permutation::transposition(3, 0, 1).unwrap();
        let d = pair_cycles(&id, &t).unwrap();
        let p = |i, j| Pair::new(i, j).unwrap();
        assert_eq!(d.cycles(), &[vec![p(0, 1)], vec![p(0, 2), p(1, 2)]]);
        assert_eq!(d.fixed_points().collect::<Vec<_>>(), vec![p(0, 1)]);
    }

    #[test]
    fn cycles_partition_pairs_and_fixed_points_agree() {
        let mut rng = stream(2);
        for n in [2usize, 5, 9, 14] {
            let ts = Permutation::random(n, &mut rng);
            let t = Permutation::random(n, &mut rng);
            let d = pair_cycles(&ts, &t).unwrap();
            assert_eq!(d.total_len(), n * (n - 1) / 2);
            let mut seen = std::collections::HashSet::new();
            for c in d.cycles() {
                assert_eq!(c[0], *c.iter().min().unwrap());
                for e in c {
                    assert!(seen.insert(*e));
                }
            }
            for e in all_pairs(n) {
                let fixed = d.fixed_points().any(|f| f == e);
                assert_eq!(fixed, t.lift().apply(e) == ts.lift().apply(e));
            }
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(pair_cycles(&Permutation::identity(3), &Permutation::identity(4)).is_err());
    }
}
