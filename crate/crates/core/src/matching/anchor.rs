use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Graph, Labeling};
use crate::perm::Permutation;

/// Vertices with no agreeing incident pair under `π`, split by community.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorSets {
    pub t_all: Vec<usize>,
    pub t_plus: Vec<usize>,
    pub t_minus: Vec<usize>,
}

/// `T^π = {i : A_ij B_{π(i)π(j)} = 0 ∀j}` where `B` is the observed
/// (relabelled) second graph; these are the isolated vertices of
/// `g1 ∧ g2.pullback(π)`.
pub fn anchor_sets(g1: &Graph, g2: &Graph, pi: &Permutation, labels: &Labeling) -> Result<AnchorSets> {
    Error::check_size(g1.n(), labels.n())?;
    let t_all = g1.intersection(&g2.pullback(pi)?)?.isolated_vertices();
    let (t_plus, t_minus) = t_all.iter().partition(|&&i| labels.is_plus(i));
    Ok(AnchorSets { t_all, t_plus, t_minus })
}
