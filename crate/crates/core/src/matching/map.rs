use rand::Rng;
use serde::Serialize;

use super::exhaustive::DEFAULT_EXHAUSTIVE_LIMIT;
use super::small_rows;
use crate::error::{Error, Result};
use crate::model::{EdgeJointLaw, Graph, Labeling};
use crate::perm::Permutation;

/// Sufficient statistics of the label-aware posterior of `π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorStats {
    pub mu_plus_11: u64,
    pub mu_minus_11: u64,
    pub nu_plus: u64,
    pub nu_minus: u64,
    pub log_posterior_unnormalized: f64,
}

/// Coefficients of the four counts in the log posterior.
#[derive(Debug, Clone, Copy)]
struct Weights {
    mu_plus: f64,
    mu_minus: f64,
    nu_plus: f64,
    nu_minus: f64,
}

impl Weights {
    fn new(law: &EdgeJointLaw) -> Result<Self> {
        if !law.all_cells_positive() {
            return Err(Error::Degenerate("posterior needs every joint-law cell positive".into()));
        }
        let (p, q) = (law.p, law.q);
        Ok(Weights {
            mu_plus: (p[0][0] * p[1][1] / (p[0][1] * p[1][0])).ln(),
            mu_minus: (q[0][0] * q[1][1] / (q[0][1] * q[1][0])).ln(),
            nu_plus: (p[0][1] / p[0][0]).ln(),
            nu_minus: (q[0][1] / q[0][0]).ln(),
        })
    }

    fn eval(&self, c: [u64; 4]) -> f64 {
        c[0] as f64 * self.mu_plus + c[1] as f64 * self.mu_minus + c[2] as f64 * self.nu_plus + c[3] as f64 * self.nu_minus
    }
}

fn check_inputs(g1: &Graph, g2: &Graph, labels: &Labeling) -> Result<()> {
    Error::check_size(g1.n(), g2.n())?;
    Error::check_size(g1.n(), labels.n())
}

/// Counts `(μ⁺₁₁, μ⁻₁₁, ν⁺, ν⁻)` over pairs `e` with `(A_e, B_{π(e)})`.
fn counts(a: &Graph, b: &Graph, labels: &Labeling, pi: &Permutation) -> [u64; 4] {
    let n = a.n();
    let mut c = [0u64; 4];
    for i in 0..n {
        for j in i + 1..n {
            if !b.has_edge(pi.apply(i), pi.apply(j)) {
                continue;
            }
            let off = if labels.same_community(i, j) { 0 } else { 1 };
            c[2 + off] += 1;
            c[off] += a.has_edge(i, j) as u64;
        }
    }
    c
}

pub fn posterior_stats(
    g1: &Graph,
    g2: &Graph,
    labels: &Labeling,
    law: &EdgeJointLaw,
    pi: &Permutation,
) -> Result<PosteriorStats> {
    check_inputs(g1, g2, labels)?;
    Error::check_size(g1.n(), pi.len())?;
    let w = Weights::new(law)?;
    let c = counts(g1, g2, labels, pi);
    Ok(PosteriorStats {
        mu_plus_11: c[0],
        mu_minus_11: c[1],
        nu_plus: c[2],
        nu_minus: c[3],
        log_posterior_unnormalized: w.eval(c),
    })
}

/// Every maximiser of the posterior, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapArgmax {
    pub maximizers: Vec<Permutation>,
    pub log_posterior: f64,
}

/// Relative tolerance under which two log posteriors count as tied.
const TIE_TOL: f64 = 1e-9;

/// Full scan of `S_n` for the posterior argmax set.
pub fn map_argmax_set(g1: &Graph, g2: &Graph, labels: &Labeling, law: &EdgeJointLaw) -> Result<MapArgmax> {
    check_inputs(g1, g2, labels)?;
    let n = g1.n();
    if n > DEFAULT_EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n, limit: DEFAULT_EXHAUSTIVE_LIMIT });
    }
    let w = Weights::new(law)?;
    let a = small_rows(g1);
    let b = small_rows(g2);
    let plus: u64 = labels.v_plus().iter().fold(0, |m, &v| m | 1 << v);

    // per-vertex mask of same-community partners
    let same: Vec<u64> = (0..n).map(|i| if plus >> i & 1 == 1 { plus } else { !plus }).collect();
    let mut pi = Permutation::identity(n);
    let mut best = f64::NEG_INFINITY;
    let mut maximizers: Vec<Permutation> = Vec::new();
    loop {
        let map = pi.as_slice();
        let mut inv = [0usize; 64];
        for (i, &m) in map.iter().enumerate() {
            inv[m] = i;
        }
        let mut c = [0u64; 4];
        for i in 0..n {
            // pulled-back row: C_ij = B_{π(i) π(j)}
            let mut row = 0u64;
            let mut bits = b[map[i]];
            while bits != 0 {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                row |= 1 << inv[t];
            }
            let upper = row & !((2u64 << i) - 1);
            let (s, d) = (upper & same[i], upper & !same[i]);
            c[0] += (s & a[i]).count_ones() as u64;
            c[1] += (d & a[i]).count_ones() as u64;
            c[2] += s.count_ones() as u64;
            c[3] += d.count_ones() as u64;
        }
        let v = w.eval(c);
        let tol = TIE_TOL * v.abs().max(1.0);
        if v > best + tol {
            best = v;
            maximizers.clear();
            maximizers.push(pi.clone());
        } else if (v - best).abs() <= tol {
            maximizers.push(pi.clone());
            best = best.max(v);
        }
        if !pi.next_lexicographic() {
            break;
        }
    }
    Ok(MapArgmax { maximizers, log_posterior: best })
}

/// MAP estimate of `π` given the true labels; ties are resolved by a
/// uniform draw from `rng`.
pub fn map_match_with_labels<R: Rng + ?Sized>(
    g1: &Graph,
    g2: &Graph,
    labels: &Labeling,
    law: &EdgeJointLaw,
    rng: &mut R,
) -> Result<Permutation> {
    let mut set = map_argmax_set(g1, g2, labels, law)?;
    let k = rng.random_range(0..set.maximizers.len());
    Ok(set.maximizers.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_family, ModelParams};
    use crate::rng::stream;

    fn law() -> EdgeJointLaw {
        EdgeJointLaw::from_rates(0.6, 0.2, 0.7)
    }

    #[test]
    fn scan_counts_match_direct_counts() {
        let params = ModelParams::raw(6, 0.6, 0.2, 0.7).unwrap();
        let mut rng = stream(10);
        for _ in 0..10 {
            let f = generate_family(&params, &mut rng).unwrap();
            let set = map_argmax_set(&f.g1, f.g2(), &f.labels, &law()).unwrap();
            for pi in &set.maximizers {
                let st = posterior_stats(&f.g1, f.g2(), &f.labels, &law(), pi).unwrap();
                assert!((st.log_posterior_unnormalized - set.log_posterior).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_graphs_tie_everywhere() {
        let e = Graph::empty(4);
        let labels = Labeling::new(vec![1, 1, -1, -1]).unwrap();
        let set = map_argmax_set(&e, &e, &labels, &law()).unwrap();
        assert_eq!(set.maximizers.len(), 24);
        let pi = map_match_with_labels(&e, &e, &labels, &law(), &mut stream(1)).unwrap();
        assert_eq!(pi.len(), 4);
    }

    #[test]
    fn agreeing_intra_pair_raises_posterior() {
        let labels = Labeling::new(vec![1, 1, -1, -1]).unwrap();
        let id = Permutation::identity(4);
        let b = Graph::from_edges(4, [(0, 1)]).unwrap();
        let without = posterior_stats(&Graph::empty(4), &b, &labels, &law(), &id).unwrap();
        let with = posterior_stats(&b, &b, &labels, &law(), &id).unwrap();
        assert_eq!(with.mu_plus_11, without.mu_plus_11 + 1);
        assert!(with.log_posterior_unnormalized > without.log_posterior_unnormalized);
    }

    #[test]
    fn degenerate_law_rejected() {
        let labels = Labeling::all_plus(3);
        let e = Graph::empty(3);
        let bad = EdgeJointLaw::from_rates(0.5, 0.2, 1.0);
        assert!(matches!(map_argmax_set(&e, &e, &labels, &bad), Err(Error::Degenerate(_))));
        assert!(map_argmax_set(&Graph::empty(10), &Graph::empty(10), &Labeling::all_plus(10), &law()).is_err());
    }
}
