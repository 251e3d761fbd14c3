//! Reference implementations used as oracles by the integration tests.
//!
//! Everything here is written from the definitions, without calling the
//! library code it is compared against.

#![allow(dead_code)]

use csbm::{EdgeJointLaw, Graph};
use rand::Rng;

/// Every permutation of `0..n` as an image vector.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn image(pi: &[usize], i: usize, j: usize) -> (usize, usize) {
    let (a, b) = (pi[i], pi[j]);
    (a.min(b), a.max(b))
}

/// `(M⁺, M⁻)`: intra and inter pairs whose image under `π` differs from the
/// image under `π*`, counted pair by pair.
pub fn brute_mismatch(labels: &[i8], pi_star: &[usize], pi: &[usize]) -> (usize, usize) {
    let n = labels.len();
    let (mut plus, mut minus) = (0, 0);
    for i in 0..n {
        for j in i + 1..n {
            if image(pi, i, j) != image(pi_star, i, j) {
                if labels[i] == labels[j] {
                    plus += 1;
                } else {
                    minus += 1;
                }
            }
        }
    }
    (plus, minus)
}

/// Log likelihood `Σ_e ln P(A_e, B_{π(e)} | σ)` with `P` the per-pair joint
/// law, i.e. the logarithm of the likelihood product.
pub fn log_likelihood(a: &Graph, b: &Graph, labels: &[i8], law: &EdgeJointLaw, pi: &[usize]) -> f64 {
    let n = labels.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let cells = if labels[i] == labels[j] { &law.p } else { &law.q };
            let x = a.has_edge(i, j) as usize;
            let y = b.has_edge(pi[i], pi[j]) as usize;
            total += cells[x][y].ln();
        }
    }
    total
}

/// Maximisers of the likelihood over all of `S_n` (relative tie tolerance
/// `tol`), sorted lexicographically.
pub fn bayes_argmax(a: &Graph, b: &Graph, labels: &[i8], law: &EdgeJointLaw, tol: f64) -> Vec<Vec<usize>> {
    let scored: Vec<(Vec<usize>, f64)> =
        all_perms(labels.len()).into_iter().map(|p| { let l = log_likelihood(a, b, labels, law, &p); (p, l) }).collect();
    let best = scored.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<Vec<usize>> =
        scored.into_iter().filter(|(_, l)| best - l <= tol * best.abs().max(1.0)).map(|(p, _)| p).collect();
    out.sort();
    out
}

/// One cycle draw built from a parent edge and two independent subsamples.
/// Returns `θ^X ω^{Y⁺} ζ^{Y⁻}` where
/// `X = Σ_k A_k B'_k − Σ_k A_k B'_{k+1}` and `Y^±` counts the `(1, 1)`
/// pairs of each community type.
#[allow(clippy::too_many_arguments)]
pub fn cycle_sample<R: Rng>(lambda: &[i8], p: f64, q: f64, s: f64, theta: f64, omega: f64, zeta: f64, rng: &mut R) -> f64 {
    let l = lambda.len();
    let mut a = [false; 16];
    let mut b = [false; 16];
    for k in 0..l {
        let r = if lambda[k] > 0 { p } else { q };
        let parent = rng.random_bool(r);
        a[k] = parent && rng.random_bool(s);
        b[k] = parent && rng.random_bool(s);
    }
    let (mut x, mut yp, mut ym) = (0i32, 0i32, 0i32);
    for k in 0..l {
        let next = (k + 1) % l;
        x += (a[k] && b[k]) as i32 - (a[k] && b[next]) as i32;
        if a[k] && b[k] {
            if lambda[k] > 0 {
                yp += 1;
            } else {
                ym += 1;
            }
        }
    }
    theta.powi(x) * omega.powi(yp) * zeta.powi(ym)
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Region from the squared threshold forms. The flag is set when some
/// quantity that decides the region lies within `1e-9` of its threshold.
pub fn region_oracle(alpha: f64, beta: f64, s: f64) -> (&'static str, bool) {
    let d2 = alpha + beta - 2.0 * (alpha * beta).sqrt();
    let single = s * d2;
    let pair = s * (2.0 - s) * d2;
    let matching = s * s * (alpha + beta);
    let near = |v: f64| (v - 2.0).abs() < 1e-9;
    if pair <= 2.0 {
        return ("red", near(pair));
    }
    if single > 2.0 {
        return ("green", near(pair) || near(single));
    }
    let tight = near(pair) || near(single) || near(matching);
    if matching > 2.0 {
        ("cyan", tight)
    } else {
        ("yellow", tight)
    }
}

/// Pearson chi-square statistic for homogeneity of two count vectors, with
/// its degrees of freedom. Cells empty in both samples are dropped.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, usize) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (obs, n) in [(x as f64, na), (y as f64, nb)] {
            let expected = n * col / total;
            stat += (obs - expected).powi(2) / expected;
        }
    }
    (stat, cells - 1)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn oracle_self_checks() {
    assert_eq!(all_perms(4).len(), 24);
    assert_eq!(brute_mismatch(&[1, 1, -1], &[0, 1, 2], &[1, 0, 2]), (0, 2));
    assert!((spearman(&[1.0, 2.0, 3.0], &[0.1, 0.5, 0.5]) - 0.866_025_403_784_438_6).abs() < 1e-12);
    assert_eq!(region_oracle(5.0, 5.0, 0.5).0, "red");
    assert_eq!(chi_square_two_sample(&[10, 20], &[10, 20]).0, 0.0);
}
