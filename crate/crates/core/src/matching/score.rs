use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CorrelatedFamily, Graph};
use crate::perm::Permutation;

/// Number of pairs `{i, j}` that are edges of `g1` whose image
/// `{π(i), π(j)}` is an edge of `g2`.
pub fn agreement_score(g1: &Graph, g2: &Graph, pi: &Permutation) -> Result<u64> {
    Error::check_size(g1.n(), g2.n())?;
    Error::check_size(g1.n(), pi.len())?;
    let pulled = g2.pullback(pi)?;
    Ok(g1.intersection(&pulled)?.edge_count() as u64)
}

/// Agreement count of a candidate together with the statistics relative to
/// the planted permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchScore {
    pub agreements: u64,
    /// `score(π*) − score(π)`.
    pub x_stat: i64,
    /// Mismatched intra pairs that agree under `π*`.
    pub y_plus: u64,
    /// Mismatched inter pairs that agree under `π*`.
    pub y_minus: u64,
}

/// Scores `pi` on `(G₁, G₂)` of a family against its planted `π*`.
///
/// Only the first relabelled child is used, so for `K > 2` this is the
/// pairwise statistic of `(G₁, G₂)`.
pub fn score_stats(family: &CorrelatedFamily, pi: &Permutation) -> Result<MatchScore> {
    let (g1, g2, pi_star) = (&family.g1, family.g2(), family.pi2());
    let agreements = agreement_score(g1, g2, pi)?;
    let truth = agreement_score(g1, g2, pi_star)?;
    let (mut y_plus, mut y_minus) = (0, 0);
    for (i, j) in g1.edges() {
        let moved = {
            let (a, b) = (pi.apply(i), pi.apply(j));
            let (c, d) = (pi_star.apply(i), pi_star.apply(j));
            !((a == c && b == d) || (a == d && b == c))
        };
        if moved && g2.has_edge(pi_star.apply(i), pi_star.apply(j)) {
            if family.labels.same_community(i, j) {
                y_plus += 1;
            } else {
                y_minus += 1;
            }
        }
    }
    Ok(MatchScore { agreements, x_stat: truth as i64 - agreements as i64, y_plus, y_minus })
}
