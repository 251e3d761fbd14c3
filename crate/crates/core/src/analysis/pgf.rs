//! Generating functions of `(X, Y⁺, Y⁻)` restricted to one pair cycle.
//!
//! Walk a cycle `e₁ → e₂ → … → e_L → e₁` of `τ*⁻¹∘τ` and write
//! `(A_k, B'_k)` for the joint state of pair `e_k`. Pair `k` contributes
//! `+1` to `X` when `(A_k, B'_k) = (1, 1)` and `B'_{k+1} = 0`, `−1` when
//! `(A_k, B'_k) = (1, 0)` and `B'_{k+1} = 1`, and `1` to `Y^{λ_k}` when
//! `(A_k, B'_k) = (1, 1)`. The cycle closes with `B'_{L+1} = B'_1`.
//!
//! `φ_{k,ij,m}` is the expected product of the first `k` factors
//! `θ^{ΔX} ω^{ΔY⁺} ζ^{ΔY⁻}` given `(A_1, B'_1) = (i, j)` and `B'_{k+1} = m`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EdgeJointLaw, Labeling};
use crate::perm::{pair_cycles, Pair, Permutation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgfParams {
    pub theta: f64,
    pub omega: f64,
    pub zeta: f64,
    pub law: EdgeJointLaw,
    /// `λ_k ∈ {+1, −1}`: intra (`+1`) or inter (`−1`) pair at step `k`.
    pub lambda: Vec<i8>,
}

impl PgfParams {
    pub fn new(theta: f64, omega: f64, zeta: f64, law: EdgeJointLaw, lambda: Vec<i8>) -> Result<Self> {
        for (name, v) in [("theta", theta), ("omega", omega), ("zeta", zeta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if lambda.is_empty() || lambda.iter().any(|&l| l != 1 && l != -1) {
            return Err(Error::param("lambda pattern must be a nonempty sequence over {+1, -1}"));
        }
        Ok(PgfParams { theta, omega, zeta, law, lambda })
    }

    /// Whether `ω, ζ ∈ [1, 3]`, the range the convergence analysis covers.
    /// The recursion itself is defined for any positive values.
    pub fn in_analyzed_range(&self) -> bool {
        (1.0..=3.0).contains(&self.omega) && (1.0..=3.0).contains(&self.zeta)
    }

    pub fn with_lambda(&self, lambda: Vec<i8>) -> Result<Self> {
        Self::new(self.theta, self.omega, self.zeta, self.law, lambda)
    }

    fn cells(&self, lambda: i8) -> (&[[f64; 2]; 2], f64) {
        if lambda > 0 {
            (&self.law.p, self.omega)
        } else {
            (&self.law.q, self.zeta)
        }
    }
}

/// `φ_{k,·,·}` for one `k`: `slice[2i + j][m]`.
pub type PgfSlice = [[f64; 2]; 4];

/// All slices `k = 1..=L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgfTable {
    pub phi: Vec<PgfSlice>,
}

impl PgfTable {
    /// `φ_{k,ij,m}` with 1-based `k`.
    pub fn get(&self, k: usize, i: usize, j: usize, m: usize) -> f64 {
        self.phi[k - 1][2 * i + j][m]
    }

    pub fn build(params: &PgfParams) -> Result<Self> {
        let mut phi = vec![pgf_initial(params)];
        for k in 2..=params.lambda.len() {
            let next = pgf_advance(&phi[k - 2], params, k)?;
            phi.push(next);
        }
        Ok(PgfTable { phi })
    }
}

/// Slice `k = 1`.
pub fn pgf_initial(params: &PgfParams) -> PgfSlice {
    let (_, w) = params.cells(params.lambda[0]);
    let t = params.theta;
    let mut s = [[1.0; 2]; 4];
    s[2][1] = 1.0 / t; // (1,0), m = 1
    s[3][0] = t * w; // (1,1), m = 0
    s[3][1] = w; // (1,1), m = 1
    s
}

/// Slice `k` from slice `k − 1`, using `λ_k`.
pub fn pgf_advance(prev: &PgfSlice, params: &PgfParams, k: usize) -> Result<PgfSlice> {
    if k < 2 || k > params.lambda.len() {
        return Err(Error::param(format!("step {k} outside 2..={}", params.lambda.len())));
    }
    let (c, w) = params.cells(params.lambda[k - 1]);
    let t = params.theta;
    let (c00, c01, c10, c11) = (c[0][0], c[0][1], c[1][0], c[1][1]);
    let mut next = [[0.0; 2]; 4];
    for (row, out) in prev.iter().zip(next.iter_mut()) {
        out[0] = (c00 + c10) * row[0] + (c01 + c11 * t * w) * row[1];
        out[1] = (c00 + c10 / t) * row[0] + (c01 + c11 * w) * row[1];
    }
    Ok(next)
}

/// `Φ_C = Σ_{ij} w_{ij} φ_{L,ij,j}` with `w` the joint law of the first pair.
pub fn pgf_cycle(params: &PgfParams) -> Result<f64> {
    if params.lambda.len() < 2 {
        return Err(Error::param("a pair cycle of interest has length at least 2"));
    }
    let table = PgfTable::build(params)?;
    let last = table.phi.last().expect("nonempty");
    let (w, _) = params.cells(params.lambda[0]);
    Ok((0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| w[i][j] * last[2 * i + j][j]).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgfFull {
    /// `ln Φ^τ`.
    pub log_value: f64,
    /// `ln Φ_C` per nontrivial cycle, in decomposition order.
    pub log_cycles: Vec<f64>,
}

impl PgfFull {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Community pattern of a pair cycle.
pub(crate) fn lambda_of(cycle: &[Pair], labels: &Labeling) -> Vec<i8> {
    cycle.iter().map(|e| if labels.same_community(e.lo(), e.hi()) { 1 } else { -1 }).collect()
}

/// Product of `Φ_C` over the nontrivial cycles of `τ*⁻¹∘τ`, in log space.
/// The `lambda` field of `params` is ignored.
pub fn pgf_full(labels: &Labeling, pi_star: &Permutation, pi: &Permutation, params: &PgfParams) -> Result<PgfFull> {
    const MAX_N: usize = 200;
    let n = labels.n();
    if n > MAX_N {
        return Err(Error::TooLarge { n, limit: MAX_N });
    }
    Error::check_size(n, pi_star.len())?;
    let dec = pair_cycles(pi_star, pi)?;
    let log_cycles = dec
        .nontrivial()
        .map(|c| Ok(pgf_cycle(&params.with_lambda(lambda_of(c, labels))?)?.ln()))
        .collect::<Result<Vec<f64>>>()?;
    let log_value = log_cycles.iter().sum();
    Ok(PgfFull { log_value, log_cycles })
}

/// One draw of `(X_C, Y⁺_C, Y⁻_C)` along a cycle with pattern
/// `params.lambda`.
pub fn simulate_cycle<R: Rng + ?Sized>(params: &PgfParams, rng: &mut R) -> (i64, u64, u64) {
    let states: Vec<(u8, u8)> = params
        .lambda
        .iter()
        .map(|&l| {
            let (c, _) = params.cells(l);
            let u: f64 = rng.random();
            if u < c[0][0] {
                (0, 0)
            } else if u < c[0][0] + c[0][1] {
                (0, 1)
            } else if u < c[0][0] + c[0][1] + c[1][0] {
                (1, 0)
            } else {
                (1, 1)
            }
        })
        .collect();
    let l = states.len();
    let (mut x, mut yp, mut ym) = (0i64, 0u64, 0u64);
    for k in 0..l {
        let (a, b) = states[k];
        let b_next = states[(k + 1) % l].1;
        match (a, b, b_next) {
            (1, 1, 0) => x += 1,
            (1, 0, 1) => x -= 1,
            _ => {}
        }
        if (a, b) == (1, 1) {
            if params.lambda[k] > 0 {
                yp += 1;
            } else {
                ym += 1;
            }
        }
    }
    (x, yp, ym)
}

/// Comparison of `ln Φ_C(1/√n, ω, ζ)` with
/// `−(1−ε) s² (α|C⁺| + β|C⁻|) log(n)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub log_phi: f64,
    pub log_bound: f64,
    pub holds: bool,
}

/// Evaluates the per-cycle bound at a finite `n` (the statement is
/// asymptotic, so a failure is reported, not raised). The law is the
/// log-scaled one at `n`.
#[allow(clippy::too_many_arguments)]
pub fn cycle_bound_check(
    alpha: f64,
    beta: f64,
    s: f64,
    lambda: &[i8],
    n: f64,
    omega: f64,
    zeta: f64,
    eps: f64,
) -> Result<BoundCheck> {
    let ln = n.ln();
    let (p, q) = (alpha * ln / n, beta * ln / n);
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::param("edge probabilities outside [0, 1] at this n"));
    }
    let law = EdgeJointLaw::from_rates(p, q, s);
    let params = PgfParams::new(1.0 / n.sqrt(), omega, zeta, law, lambda.to_vec())?;
    let log_phi = pgf_cycle(&params)?.ln();
    let plus = lambda.iter().filter(|&&l| l > 0).count() as f64;
    let minus = lambda.len() as f64 - plus;
    let log_bound = -(1.0 - eps) * s * s * (alpha * plus + beta * minus) * ln / n;
    Ok(BoundCheck { log_phi, log_bound, holds: log_phi <= log_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn law() -> EdgeJointLaw {
        EdgeJointLaw::from_rates(0.3, 0.1, 0.6)
    }

    #[test]
    fn initial_slice() {
        let p = PgfParams::new(0.5, 2.0, 3.0, law(), vec![1, -1]).unwrap();
        let s = pgf_initial(&p);
        assert_eq!(s[2][1], 2.0);
        assert_eq!(s[0][0], 1.0);
        assert_eq!(s[3][0], 1.0);
        assert_eq!(s[3][1], 2.0);
        let m = PgfParams::new(0.5, 2.0, 3.0, law(), vec![-1, 1]).unwrap();
        assert_eq!(pgf_initial(&m)[3][0], 1.5);
        assert!(PgfParams::new(0.0, 1.0, 1.0, law(), vec![1]).is_err());
        assert!(PgfParams::new(1.0, 1.0, 1.0, law(), vec![]).is_err());
    }

    #[test]
    fn second_step_closed_form() {
        let (t, w) = (0.7, 1.8);
        let p = PgfParams::new(t, w, 1.2, law(), vec![1, 1]).unwrap();
        let s2 = pgf_advance(&pgf_initial(&p), &p, 2).unwrap();
        let c = law().p;
        let expect = c[0][0] + c[1][0] + c[0][1] / t + c[1][1] * w;
        assert!((s2[2][0] - expect).abs() < 1e-15);
        assert!(pgf_advance(&s2, &p, 3).is_err());
    }

    #[test]
    fn unit_arguments_give_one() {
        for pattern in [vec![1, 1], vec![1, -1, -1], vec![-1, 1, -1, 1, 1, -1]] {
            let p = PgfParams::new(1.0, 1.0, 1.0, law(), pattern).unwrap();
            assert!((pgf_cycle(&p).unwrap() - 1.0).abs() < 1e-12);
            let t = PgfTable::build(&p).unwrap();
            assert!(t.phi.iter().all(|s| (s[0][0] - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn full_product_factorises() {
        let labels = Labeling::new(vec![1, 1, -1, -1, 1, -1]).unwrap();
        let id = Permutation::identity(6);
        let p = PgfParams::new(0.8, 1.5, 1.3, law(), vec![1]).unwrap();
        assert_eq!(pgf_full(&labels, &id, &id, &p).unwrap().log_value, 0.0);
        let pi = Permutation::from_cycles(6, &[&[0, 2, 5], &[1, 3]]).unwrap();
        let full = pgf_full(&labels, &id, &pi, &p).unwrap();
        let dec = pair_cycles(&id, &pi).unwrap();
        let product: f64 =
            dec.nontrivial().map(|c| pgf_cycle(&p.with_lambda(lambda_of(c, &labels)).unwrap()).unwrap()).product();
        assert!((full.value() - product).abs() < 1e-12 * product);
        assert_eq!(full.log_cycles.len(), dec.nontrivial().count());
    }

    #[test]
    fn simulator_matches_a_two_cycle() {
        let p = PgfParams::new(0.6, 1.4, 1.1, law(), vec![1, -1]).unwrap();
        let mut rng = stream(3);
        let draws = 200_000;
        let vals: Vec<f64> = (0..draws)
            .map(|_| {
                let (x, a, b) = simulate_cycle(&p, &mut rng);
                p.theta.powi(x as i32) * p.omega.powi(a as i32) * p.zeta.powi(b as i32)
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / draws as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        assert!((mean - pgf_cycle(&p).unwrap()).abs() < 4.0 * se);
    }

    #[test]
    fn bound_check_reports() {
        let c = cycle_bound_check(8.0, 1.0, 0.8, &[1, 1, -1], 1e6, std::f64::consts::E, std::f64::consts::E, 0.1).unwrap();
        assert!(c.log_phi.is_finite() && c.log_bound < 0.0);
        assert_eq!(c.holds, c.log_phi <= c.log_bound);
    }
}
