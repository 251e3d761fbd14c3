use rayon::prelude::*;
use serde::Serialize;

use super::small_rows;
use crate::error::{Error, Result};
use crate::model::Graph;
use crate::perm::Permutation;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 9;

/// Hard ceiling regardless of the configured limit (masks are `u64`, and
/// `13!` is already out of reach).
const ABSOLUTE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveOutcome {
    /// Lexicographically smallest maximiser.
    pub best: Permutation,
    pub score: u64,
    /// Number of permutations attaining `score`.
    pub ties: u64,
}

/// Argmax of the agreement score over all of `S_n`, `n ≤ 9`.
pub fn match_exhaustive(g1: &Graph, g2: &Graph) -> Result<Permutation> {
    match_exhaustive_with(g1, g2, DEFAULT_EXHAUSTIVE_LIMIT).map(|o| o.best)
}

/// Branch-and-bound scan of `S_n` in lexicographic order, split over the
/// image of vertex 0.
pub fn match_exhaustive_with(g1: &Graph, g2: &Graph, limit: usize) -> Result<ExhaustiveOutcome> {
    let n = g1.n();
    Error::check_size(n, g2.n())?;
    let limit = limit.min(ABSOLUTE_LIMIT);
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    if n <= 1 {
        return Ok(ExhaustiveOutcome { best: Permutation::identity(n), score: 0, ties: 1 });
    }
    let search = Search::new(g1, g2);
    let parts: Vec<Best> = (0..n).into_par_iter().map(|v0| search.subtree(v0)).collect();
    let score = parts.iter().map(|b| b.score).max().expect("n >= 2");
    let ties = parts.iter().filter(|b| b.score == score).map(|b| b.ties).sum();
    let best = parts.into_iter().find(|b| b.score == score).expect("max exists").map;
    Ok(ExhaustiveOutcome { best: Permutation::new(best)?, score, ties })
}

struct Search {
    n: usize,
    a: Vec<u64>,
    b: Vec<u64>,
    /// `a_tail[i]`: edges of `A` with larger endpoint `≥ i`.
    a_tail: Vec<u64>,
    b_edges: u64,
}

struct Best {
    score: u64,
    ties: u64,
    map: Vec<usize>,
}

impl Search {
    fn new(g1: &Graph, g2: &Graph) -> Self {
        let n = g1.n();
        let a = small_rows(g1);
        let b = small_rows(g2);
        let mut a_tail = vec![0; n + 1];
        for i in (0..n).rev() {
            let lower = (a[i] & ((1u64 << i) - 1)).count_ones() as u64;
            a_tail[i] = a_tail[i + 1] + lower;
        }
        Search { n, a, b, a_tail, b_edges: g2.edge_count() as u64 }
    }

    fn subtree(&self, v0: usize) -> Best {
        let mut map = vec![0; self.n];
        map[0] = v0;
        let mut best = Best { score: 0, ties: 0, map: Vec::new() };
        let mut found = false;
        self.dfs(1, 1u64 << v0, 0, 0, &mut map, &mut best, &mut found);
        best
    }

    /// `used`: images taken so far; `b_inside`: B-edges among them.
    #[allow(clippy::too_many_arguments)]
    fn dfs(&self, i: usize, used: u64, partial: u64, b_inside: u64, map: &mut [usize], best: &mut Best, found: &mut bool) {
        if i == self.n {
            if !*found || partial > best.score {
                *found = true;
                best.score = partial;
                best.ties = 1;
                best.map = map.to_vec();
            } else if partial == best.score {
                best.ties += 1;
            }
            return;
        }
        let bound = partial + self.a_tail[i].min(self.b_edges - b_inside);
        if *found && bound < best.score {
            return;
        }
        let mut free = !used & low_mask(self.n);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            // pairs (j, i) with j < i: A_ji and B_{π(j) v}
            let mut gain = 0;
            let mut earlier = self.a[i] & ((1u64 << i) - 1);
            while earlier != 0 {
                let j = earlier.trailing_zeros() as usize;
                earlier &= earlier - 1;
                gain += self.b[v] >> map[j] & 1;
            }
            let inside = (self.b[v] & used).count_ones() as u64;
            map[i] = v;
            self.dfs(i + 1, used | 1u64 << v, partial + gain, b_inside + inside, map, best, found);
        }
    }
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::agreement_score;
    use crate::model::{generate_family, ModelParams};
    use crate::rng::stream;

    /// Plain scan over `S_n`: maximum score, lexicographically first
    /// maximiser and the number of maximisers.
    fn brute(g1: &Graph, g2: &Graph) -> (u64, Permutation, u64) {
        let mut pi = Permutation::identity(g1.n());
        let mut best = (0, pi.clone(), 0);
        let mut first = true;
        loop {
            let s = agreement_score(g1, g2, &pi).unwrap();
            if first || s > best.0 {
                best = (s, pi.clone(), 1);
                first = false;
            } else if s == best.0 {
                best.2 += 1;
            }
            if !pi.next_lexicographic() {
                return best;
            }
        }
    }

    #[test]
    fn agrees_with_plain_scan() {
        let mut rng = stream(3);
        for n in 2..=6 {
            for _ in 0..15 {
                let params = ModelParams::raw(n, 0.5, 0.3, 0.7).unwrap();
                let f = generate_family(&params, &mut rng).unwrap();
                let out = match_exhaustive_with(&f.g1, f.g2(), 9).unwrap();
                let (s, pi, ties) = brute(&f.g1, f.g2());
                assert_eq!((out.score, &out.best, out.ties), (s, &pi, ties));
            }
        }
    }

    #[test]
    fn empty_graph_gives_identity() {
        let e = Graph::empty(6);
        let out = match_exhaustive_with(&e, &e, 9).unwrap();
        assert!(out.best.is_identity());
        assert_eq!(out.ties, 720);
    }

    #[test]
    fn asymmetric_graph_is_recovered() {
        // smallest asymmetric graphs have 6 vertices
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
        let out = match_exhaustive_with(&g, &g, 9).unwrap();
        assert!(out.best.is_identity());
        assert_eq!((out.score, out.ties), (6, 1));
        let pi = Permutation::random(6, &mut stream(4));
        let h = g.relabel(&pi).unwrap();
        assert_eq!(match_exhaustive(&g, &h).unwrap(), pi);
    }

    #[test]
    fn limit_enforced() {
        let e = Graph::empty(10);
        assert!(matches!(match_exhaustive(&e, &e), Err(Error::TooLarge { n: 10, limit: 9 })));
        assert!(match_exhaustive(&Graph::empty(3), &Graph::empty(4)).is_err());
    }
}
