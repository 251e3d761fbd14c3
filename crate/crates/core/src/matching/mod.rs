//! Graph matching estimators and their diagnostic statistics.

mod anchor;
mod exhaustive;
mod local;
mod map;
mod score;

pub use anchor::{anchor_sets, AnchorSets};
pub use exhaustive::{match_exhaustive, match_exhaustive_with, ExhaustiveOutcome, DEFAULT_EXHAUSTIVE_LIMIT};
pub use local::{match_local_search, SearchConfig, SearchInit, SearchOutcome};
pub use map::{map_argmax_set, map_match_with_labels, posterior_stats, MapArgmax, PosteriorStats};
pub use score::{agreement_score, score_stats, MatchScore};

use crate::model::Graph;

/// Row masks of a graph with at most 64 vertices.
pub(crate) fn small_rows(g: &Graph) -> Vec<u64> {
    debug_assert!(g.n() <= 64);
    (0..g.n()).map(|i| g.row(i).first().copied().unwrap_or(0)).collect()
}
