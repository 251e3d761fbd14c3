use rand::Rng;

use super::graph::{overlay_by_permutations, Graph};
use super::labeling::Labeling;
use super::params::ModelParams;
use super::sample::{sample_labeling, sample_sbm, subsample};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A parent SBM together with `K` subsampled children, the last `K − 1` of
/// which are also observed under secret relabelings.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedFamily {
    pub params: ModelParams,
    pub labels: Labeling,
    pub parent: Graph,
    pub g1: Graph,
    /// `G₂′ … G_K′`, on the parent's vertex names.
    pub g_prime: Vec<Graph>,
    /// `G₂ … G_K`: `g_relabelled[k] = g_prime[k].relabel(pi_star[k])`.
    pub g_relabelled: Vec<Graph>,
    pub pi_star: Vec<Permutation>,
}

impl CorrelatedFamily {
    /// Assembles a family from its parts and checks every structural
    /// invariant.
    pub fn from_parts(
        params: ModelParams,
        labels: Labeling,
        parent: Graph,
        g1: Graph,
        g_prime: Vec<Graph>,
        g_relabelled: Vec<Graph>,
        pi_star: Vec<Permutation>,
    ) -> Result<Self> {
        let n = params.n();
        let k = params.k_graphs();
        Error::check_size(n, labels.n())?;
        Error::check_size(n, parent.n())?;
        Error::check_size(n, g1.n())?;
        if g_prime.len() != k - 1 || g_relabelled.len() != k - 1 || pi_star.len() != k - 1 {
            return Err(Error::param(format!("a K = {k} family needs {} relabelled children", k - 1)));
        }
        if !g1.is_subgraph_of(&parent) {
            return Err(Error::param("g1 is not a subgraph of the parent"));
        }
        for ((gp, g), pi) in g_prime.iter().zip(&g_relabelled).zip(&pi_star) {
            Error::check_size(n, gp.n())?;
            Error::check_size(n, g.n())?;
            Error::check_size(n, pi.len())?;
            if !gp.is_subgraph_of(&parent) {
                return Err(Error::param("a child is not a subgraph of the parent"));
            }
            if gp.relabel(pi)? != *g {
                return Err(Error::param("relabelled child does not match its permutation"));
            }
        }
        Ok(CorrelatedFamily { params, labels, parent, g1, g_prime, g_relabelled, pi_star })
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn k(&self) -> usize {
        self.params.k_graphs()
    }

    /// `G₂`, the first relabelled child.
    pub fn g2(&self) -> &Graph {
        &self.g_relabelled[0]
    }

    /// `π*` for `G₂`.
    pub fn pi2(&self) -> &Permutation {
        &self.pi_star[0]
    }

    /// `H*`: the overlay of all children under the true permutations.
    pub fn true_union(&self) -> Graph {
        let others: Vec<_> = self.g_relabelled.iter().zip(&self.pi_star).collect();
        overlay_by_permutations(&self.g1, &others).expect("family sizes are consistent")
    }
}

/// Draws labels, the parent SBM, `K` independent subsamples and `K − 1`
/// uniform permutations, all from `rng` in that order.
pub fn generate_family<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<CorrelatedFamily> {
    let n = params.n();
    let k = params.k_graphs();
    let labels = sample_labeling(params, rng);
    let parent = sample_sbm(params, &labels, rng)?;
    let g1 = subsample(&parent, params.s(), rng)?;
    let g_prime = (1..k).map(|_| subsample(&parent, params.s(), rng)).collect::<Result<Vec<_>>>()?;
    let pi_star: Vec<Permutation> = (1..k).map(|_| Permutation::random(n, rng)).collect();
    let g_relabelled = g_prime.iter().zip(&pi_star).map(|(g, pi)| g.relabel(pi)).collect::<Result<Vec<_>>>()?;
    Ok(CorrelatedFamily { params: *params, labels, parent, g1, g_prime, g_relabelled, pi_star })
}
