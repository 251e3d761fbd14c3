use serde::{Deserialize, Serialize};

use super::overlap::RecoveryResult;
use super::single::recover_single;
use crate::error::{Error, Result};
use crate::matching::{map_match_with_labels, match_exhaustive, match_local_search, SearchConfig};
use crate::model::{overlay_by_permutations, CorrelatedFamily, EdgeJointLaw, Graph, Labeling, ModelParams};
use crate::perm::Permutation;
use crate::rng::{role, RandomStream, StreamKey};

/// How `π̂` is obtained in the overlay pipelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Matcher {
    /// Exact agreement maximiser (small `n` only).
    Exhaustive,
    /// Hill climbing; the seed in the config is replaced per child.
    Local(SearchConfig),
    /// Label-aware MAP matcher using the family's true labels.
    Map,
    /// Ideal-matching ablation: the planted permutation is used.
    Truth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub recovery: RecoveryResult,
    /// `π̂` for each relabelled child, in order.
    pub matched: Vec<Permutation>,
    /// Every `π̂` equals its planted permutation.
    pub matching_exact: bool,
    pub converged: bool,
    /// Size of the correctly matched region (two-stage pipeline only).
    pub correct_region: Option<usize>,
}

/// Stream used by the recovery step of every pipeline run with `seed`.
///
/// Calling [`recover_single`] on `H*` with this stream reproduces the
/// pipeline's output whenever the matching step is exact.
pub fn recovery_stream(seed: u64) -> RandomStream {
    StreamKey::root(seed).child(role::RECOVERY).rng()
}

fn match_child(family: &CorrelatedFamily, idx: usize, matcher: &Matcher, seed: u64) -> Result<Permutation> {
    let g2 = &family.g_relabelled[idx];
    let key = StreamKey::root(seed).child(role::MATCHER).child(idx as u64);
    match matcher {
        Matcher::Exhaustive => match_exhaustive(&family.g1, g2),
        Matcher::Local(cfg) => {
            let seed = u64::from_le_bytes(key.as_bytes()[..8].try_into().expect("8 bytes"));
            let cfg = SearchConfig { seed, ..cfg.clone() };
            Ok(match_local_search(&family.g1, g2, &cfg)?.best)
        }
        Matcher::Map => {
            let law = EdgeJointLaw::from_params(&family.params);
            map_match_with_labels(&family.g1, g2, &family.labels, &law, &mut key.rng())
        }
        Matcher::Truth => Ok(family.pi_star[idx].clone()),
    }
}

fn finish(
    family: &CorrelatedFamily,
    overlay: &Graph,
    hint: &ModelParams,
    matched: Vec<Permutation>,
    seed: u64,
) -> Result<PipelineResult> {
    let single = recover_single(overlay, hint, &mut recovery_stream(seed))?;
    let matching_exact = matched.iter().zip(&family.pi_star).all(|(a, b)| a == b);
    Ok(PipelineResult {
        recovery: RecoveryResult::score(single.sigma_hat, &family.labels)?,
        matched,
        matching_exact,
        converged: single.converged,
        correct_region: None,
    })
}

/// Match `G₁` with `G₂`, overlay by `π̂`, recover on the overlay.
pub fn recover_pair(family: &CorrelatedFamily, matcher: &Matcher, seed: u64) -> Result<PipelineResult> {
    if family.k() != 2 {
        return Err(Error::param(format!("the pair pipeline needs K = 2, got {}", family.k())));
    }
    recover_k(family, matcher, seed)
}

/// Match `G₁` with every `G_k` independently, overlay all, recover.
pub fn recover_k(family: &CorrelatedFamily, matcher: &Matcher, seed: u64) -> Result<PipelineResult> {
    let matched = (0..family.k() - 1).map(|k| match_child(family, k, matcher, seed)).collect::<Result<Vec<_>>>()?;
    let others: Vec<_> = family.g_relabelled.iter().zip(&matched).collect();
    let overlay = overlay_by_permutations(&family.g1, &others)?;
    finish(family, &overlay, &family.params.union_of(family.k()), matched, seed)
}

/// Oracle-assisted two-stage pipeline.
///
/// The region `𝒞 = {i : π̂(i) = π*(i)}` is computed from the planted
/// permutation, so this is a diagnostic rather than an estimator. Recovery
/// runs on the overlay restricted to `𝒞`; each vertex outside `𝒞` then takes
/// the sign of the same likelihood-weighted vote used in refinement, over its
/// `G₁`-neighbours inside `𝒞` (a zero vote gives `+1`).
pub fn recover_two_stage(family: &CorrelatedFamily, matcher: &Matcher, seed: u64) -> Result<PipelineResult> {
    if family.k() != 2 {
        return Err(Error::param(format!("the two-stage pipeline needs K = 2, got {}", family.k())));
    }
    let pi_hat = match_child(family, 0, matcher, seed)?;
    let n = family.n();
    let region: Vec<usize> = (0..n).filter(|&i| pi_hat.apply(i) == family.pi2().apply(i)).collect();
    if region.len() < 3 {
        return Err(Error::Degenerate(format!("correctly matched region has {} vertices", region.len())));
    }
    let overlay = overlay_by_permutations(&family.g1, &[(family.g2(), &pi_hat)])?;
    let union = family.params.union_of(2);
    let inner = overlay.induced(&region)?;
    let mut sigma = vec![0i8; n];
    let converged;
    if region.len() == n {
        let single = recover_single(&overlay, &union, &mut recovery_stream(seed))?;
        converged = single.converged;
        sigma.copy_from_slice(single.sigma_hat.as_slice());
    } else {
        let hint = ModelParams::raw(region.len(), union.p(), union.q(), union.s())?;
        let single = if region.len() >= 4 {
            let r = recover_single(&inner, &hint, &mut recovery_stream(seed))?;
            converged = r.converged;
            r.sigma_hat
        } else {
            converged = true;
            Labeling::all_plus(region.len())
        };
        for (k, &v) in region.iter().enumerate() {
            sigma[v] = single.get(k);
        }
        let in_region: Vec<bool> = (0..n).map(|i| sigma[i] != 0).collect();
        let clamp = |x: f64| x.clamp(1e-12, 1.0 - 1e-12);
        let (p, q) = (clamp(family.params.single_child().p()), clamp(family.params.single_child().q()));
        let (w_in, w_out) = ((p / q).ln(), ((1.0 - p) / (1.0 - q)).ln());
        let total: i64 = region.iter().map(|&v| sigma[v] as i64).sum();
        let votes: Vec<i8> = (0..n)
            .filter(|&i| !in_region[i])
            .map(|i| {
                let near: i64 = family.g1.neighbors(i).filter(|&j| in_region[j]).map(|j| sigma[j] as i64).sum();
                let score = w_in * near as f64 + w_out * (total - near) as f64;
                if score < 0.0 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let mut it = votes.into_iter();
        for s in sigma.iter_mut().filter(|s| **s == 0) {
            *s = it.next().expect("one vote per outside vertex");
        }
    }
    let matching_exact = pi_hat == *family.pi2();
    Ok(PipelineResult {
        recovery: RecoveryResult::score(Labeling::new(sigma)?, &family.labels)?,
        matched: vec![pi_hat],
        matching_exact,
        converged,
        correct_region: Some(region.len()),
    })
}
