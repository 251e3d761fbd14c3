//! Inverse constructions: split a union graph back into correlated children.

use rand::Rng;

use super::graph::{Graph, GraphBuilder};
use crate::error::{Error, Result};

/// Conditional law of the membership pattern of a union edge for two
/// children: `(H₁ only, H₂′ only, both)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSplitLaw {
    pub r10: f64,
    pub r01: f64,
    pub r11: f64,
}

impl PairSplitLaw {
    pub fn new(s: f64) -> Result<Self> {
        check_split_s(s)?;
        let z = 1.0 - (1.0 - s) * (1.0 - s);
        let one = s * (1.0 - s) / z;
        Ok(PairSplitLaw { r10: one, r01: one, r11: s * s / z })
    }
}

fn check_split_s(s: f64) -> Result<()> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("splitting needs s in (0, 1], got {s}")))
    }
}

/// Assigns each edge of `h` to `H₁` only, `H₂′` only, or both.
pub fn split_union_pair<R: Rng + ?Sized>(h: &Graph, s: f64, rng: &mut R) -> Result<(Graph, Graph)> {
    let law = PairSplitLaw::new(s)?;
    let mut a = GraphBuilder::new(h.n());
    let mut b = GraphBuilder::new(h.n());
    for (i, j) in h.edges() {
        let u: f64 = rng.random();
        if u < law.r10 {
            a.add_edge(i, j);
        } else if u < law.r10 + law.r01 {
            b.add_edge(i, j);
        } else {
            a.add_edge(i, j);
            b.add_edge(i, j);
        }
    }
    Ok((a.build(), b.build()))
}

/// Largest K for which the pattern table is materialised.
const MAX_SPLIT_K: usize = 20;

/// `r_x = s^|x| (1 − s)^(K − |x|) / (1 − (1 − s)^K)` for every nonzero
/// `x ∈ {0,1}^K`, with `x` encoded as a bitmask (bit `k` ↔ child `k`).
pub fn splitter_distribution(s: f64, k: usize) -> Result<Vec<(u32, f64)>> {
    check_split_s(s)?;
    if !(2..=MAX_SPLIT_K).contains(&k) {
        return Err(Error::param(format!("K must lie in 2..={MAX_SPLIT_K}, got {k}")));
    }
    let z = 1.0 - (1.0 - s).powi(k as i32);
    Ok((1u32..(1 << k))
        .map(|x| {
            let ones = x.count_ones() as i32;
            (x, s.powi(ones) * (1.0 - s).powi(k as i32 - ones) / z)
        })
        .collect())
}

/// Distributes each edge of `h` over `k` children according to
/// [`splitter_distribution`].
pub fn split_union_k<R: Rng + ?Sized>(h: &Graph, s: f64, k: usize, rng: &mut R) -> Result<Vec<Graph>> {
    let table = splitter_distribution(s, k)?;
    let mut cumulative = Vec::with_capacity(table.len());
    let mut acc = 0.0;
    for &(x, r) in &table {
        acc += r;
        cumulative.push((acc, x));
    }
    let mut out: Vec<GraphBuilder> = (0..k).map(|_| GraphBuilder::new(h.n())).collect();
    for (i, j) in h.edges() {
        let u: f64 = rng.random::<f64>() * acc;
        let pos = cumulative.partition_point(|&(c, _)| c <= u).min(cumulative.len() - 1);
        let x = cumulative[pos].1;
        for (c, b) in out.iter_mut().enumerate() {
            if x >> c & 1 == 1 {
                b.add_edge(i, j);
            }
        }
    }
    Ok(out.into_iter().map(GraphBuilder::build).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn pair_law_values() {
        let law = PairSplitLaw::new(0.5).unwrap();
        for r in [law.r10, law.r01, law.r11] {
            assert!((r - 1.0 / 3.0).abs() < 1e-15);
        }
        let law = PairSplitLaw::new(1.0).unwrap();
        assert_eq!((law.r10, law.r01, law.r11), (0.0, 0.0, 1.0));
        assert!(PairSplitLaw::new(0.0).is_err());
    }

    #[test]
    fn full_correlation_puts_every_edge_in_both() {
        let h = Graph::complete(20);
        let (a, b) = split_union_pair(&h, 1.0, &mut stream(1)).unwrap();
        assert_eq!(a, h);
        assert_eq!(b, h);
        let ks = split_union_k(&h, 1.0, 3, &mut stream(1)).unwrap();
        assert!(ks.iter().all(|g| *g == h));
    }

    #[test]
    fn split_children_cover_union() {
        let h = Graph::complete(30);
        let (a, b) = split_union_pair(&h, 0.3, &mut stream(2)).unwrap();
        assert_eq!(a.union(&b).unwrap(), h);
        let ks = split_union_k(&h, 0.3, 4, &mut stream(2)).unwrap();
        let u = ks.iter().skip(1).fold(ks[0].clone(), |acc, g| acc.union(g).unwrap());
        assert_eq!(u, h);
    }

    #[test]
    fn k_pattern_table() {
        let t = splitter_distribution(0.3, 4).unwrap();
        assert_eq!(t.len(), 15);
        let sum: f64 = t.iter().map(|&(_, r)| r).sum();
        assert!((sum - 1.0).abs() <= 4.0 * f64::EPSILON, "{sum}");

        let t3 = splitter_distribution(0.5, 3).unwrap();
        let r111 = t3.iter().find(|&&(x, _)| x == 0b111).unwrap().1;
        assert!((r111 - 1.0 / 7.0).abs() < 1e-12);
        assert!((r111 - 0.125 / 0.875).abs() < 1e-15);

        // K = 2 specialises to the pair law
        let t2 = splitter_distribution(0.4, 2).unwrap();
        let law = PairSplitLaw::new(0.4).unwrap();
        assert!((t2[0].1 - law.r10).abs() < 1e-15);
        assert!((t2[1].1 - law.r01).abs() < 1e-15);
        assert!((t2[2].1 - law.r11).abs() < 1e-15);

        assert!(splitter_distribution(0.0, 3).is_err());
        assert!(splitter_distribution(0.5, 1).is_err());
    }
}
