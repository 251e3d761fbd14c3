use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::graph::{Graph, GraphBuilder};
use super::labeling::Labeling;
use super::params::ModelParams;
use crate::error::{Error, Result};

/// I.i.d. uniform `±1` labels.
pub fn sample_labeling<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Labeling {
    Labeling::from_signs((0..params.n()).map(|_| rng.random::<bool>()))
}

/// Calls `emit(row, col)` for every success of independent Bernoulli(`prob`)
/// trials laid out as rows of lengths `row_len(0), row_len(1), ...`.
/// Runs of failures are skipped geometrically.
fn bernoulli_block<R: Rng + ?Sized>(
    rows: usize,
    row_len: impl Fn(usize) -> usize,
    prob: f64,
    rng: &mut R,
    mut emit: impl FnMut(usize, usize),
) {
    if prob <= 0.0 {
        return;
    }
    if prob >= 1.0 {
        for r in 0..rows {
            for c in 0..row_len(r) {
                emit(r, c);
            }
        }
        return;
    }
    let geo = Geometric::new(prob).expect("probability in (0, 1)");
    let mut row = 0;
    let mut col = 0usize;
    loop {
        let mut skip = geo.sample(rng);
        // advance `skip` failures, then land on a success
        loop {
            if row >= rows {
                return;
            }
            let remaining = (row_len(row) - col) as u64;
            if skip < remaining {
                col += skip as usize;
                break;
            }
            skip -= remaining;
            row += 1;
            col = 0;
        }
        emit(row, col);
        col += 1;
    }
}

/// Two-community SBM: intra pairs are edges with probability `p`, inter
/// pairs with probability `q`, all independently.
pub fn sample_sbm<R: Rng + ?Sized>(
    params: &ModelParams,
    labels: &Labeling,
    rng: &mut R,
) -> Result<Graph> {
    sample_sbm_rates(params.n(), params.p(), params.q(), labels, rng)
}

pub(crate) fn sample_sbm_rates<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    q: f64,
    labels: &Labeling,
    rng: &mut R,
) -> Result<Graph> {
    Error::check_size(n, labels.n())?;
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("edge probabilities p = {p}, q = {q} must lie in [0, 1]")));
    }
    let plus = labels.v_plus();
    let minus = labels.v_minus();
    let mut b = GraphBuilder::new(n);
    for side in [&plus, &minus] {
        let m = side.len();
        bernoulli_block(m, |r| m - 1 - r, p, rng, |r, c| b.add_edge(side[r], side[r + 1 + c]));
    }
    bernoulli_block(plus.len(), |_| minus.len(), q, rng, |r, c| b.add_edge(plus[r], minus[c]));
    Ok(b.build())
}

/// Keeps each edge of `parent` independently with probability `s`.
pub fn subsample<R: Rng + ?Sized>(parent: &Graph, s: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param(format!("s must lie in [0, 1], got {s}")));
    }
    let mut b = GraphBuilder::new(parent.n());
    for (i, j) in parent.edges() {
        if rng.random_bool(s) {
            b.add_edge(i, j);
        }
    }
    Ok(b.build())
}
