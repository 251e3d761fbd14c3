use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Graph, Labeling, ModelParams};

pub const POWER_ITERATIONS: usize = 200;
pub const POWER_TOLERANCE: f64 = 1e-8;
const REFINEMENT_ROUNDS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleRecovery {
    pub sigma_hat: Labeling,
    /// `false` when the power iteration hit its budget before the direction
    /// settled; the last iterate is used anyway.
    pub converged: bool,
    pub iterations: usize,
}

/// Spectral bipartition followed by two rounds of likelihood-weighted
/// neighbour majority.
///
/// The spectral step runs a power iteration, from a random `±1` start, on the
/// centred operator `x ↦ A x − d̄/(n−1) · (1ᵀx) 1`, which removes the leading
/// (degree) direction of `A` so the leading direction of the centred operator
/// is the community split. Labels are the signs of the result.
///
/// Each refinement round relabels every vertex at once by the sign of
/// `log(p/q)·Σ_{j∈N(i)} σⱼ + log((1−p)/(1−q))·Σ_{j∉N(i), j≠i} σⱼ` with `p`, `q`
/// taken from `params_hint`; the sign of `α − β` is encoded in the weights.
/// A zero score keeps the current label.
pub fn recover_single<R: Rng + ?Sized>(g: &Graph, params_hint: &ModelParams, rng: &mut R) -> Result<SingleRecovery> {
    let n = g.n();
    if n < 4 {
        return Err(Error::param(format!("recovery needs n >= 4, got {n}")));
    }
    let adj = g.to_adjacency_lists();
    let (vector, converged, iterations) = leading_centred_direction(&adj, g.edge_count(), rng);
    let mut sigma: Vec<i8> = vector.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect();

    let clamp = |x: f64| x.clamp(1e-12, 1.0 - 1e-12);
    let (p, q) = (clamp(params_hint.p()), clamp(params_hint.q()));
    if p != q {
        let w_in = (p / q).ln();
        let w_out = ((1.0 - p) / (1.0 - q)).ln();
        for _ in 0..REFINEMENT_ROUNDS {
            let total: i64 = sigma.iter().map(|&s| s as i64).sum();
            let next: Vec<i8> = (0..n)
                .map(|i| {
                    let near: i64 = adj[i].iter().map(|&j| sigma[j] as i64).sum();
                    let far = total - near - sigma[i] as i64;
                    let score = w_in * near as f64 + w_out * far as f64;
                    if score > 0.0 {
                        1
                    } else if score < 0.0 {
                        -1
                    } else {
                        sigma[i]
                    }
                })
                .collect();
            sigma = next;
        }
    }
    Ok(SingleRecovery { sigma_hat: Labeling::new(sigma)?, converged, iterations })
}

fn leading_centred_direction<R: Rng + ?Sized>(adj: &[Vec<usize>], edges: usize, rng: &mut R) -> (Vec<f64>, bool, usize) {
    let n = adj.len();
    let density = 2.0 * edges as f64 / (n as f64 * (n - 1) as f64);
    let mut x: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    normalise(&mut x);
    let mut y = vec![0.0; n];
    for it in 1..=POWER_ITERATIONS {
        let sum: f64 = x.iter().sum();
        for (i, nb) in adj.iter().enumerate() {
            let ax: f64 = nb.iter().map(|&j| x[j]).sum();
            // the centring term excludes the diagonal: (1ᵀx − xᵢ)
            y[i] = ax - density * (sum - x[i]);
        }
        if !normalise(&mut y) {
            // operator annihilates the iterate: nothing more to learn
            return (x, true, it);
        }
        let cos: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        std::mem::swap(&mut x, &mut y);
        if 1.0 - cos.abs() < POWER_TOLERANCE {
            return (x, true, it);
        }
    }
    (x, false, POWER_ITERATIONS)
}

fn normalise(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}
