use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Undirected simple graph on `0..n` with a dense bit-packed adjacency matrix.
///
/// Row `i` occupies `words` consecutive `u64`s; bit `j` of row `i` is set iff
/// `{i, j}` is an edge. The matrix is symmetric with an empty diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    edges: usize,
}

/// Mutable staging area for a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        GraphBuilder { n, words, bits: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `{i, j}`; panics on a self-loop or out-of-range vertex.
    #[inline]
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n, "invalid edge ({i}, {j}) for n = {}", self.n);
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn build(self) -> Graph {
        let edges = self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2;
        Graph { n: self.n, words: self.words, bits: self.bits, edges }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for i in 0..n {
            for j in i + 1..n {
                b.add_edge(i, j);
            }
        }
        b.build()
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range
    /// endpoints. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for (i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::param(format!("invalid edge ({i}, {j}) for n = {n}")));
            }
            b.add_edge(i, j);
        }
        Ok(b.build())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn neighbors(&self, i: usize) -> BitIter<'_> {
        BitIter::new(self.row(i))
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            let mut it = BitIter::new(self.row(i));
            it.skip_below(i + 1);
            it.map(move |j| (i, j))
        })
    }

    pub fn to_adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| self.neighbors(i).collect()).collect()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.row(i).iter().all(|&w| w == 0)).collect()
    }

    fn zip_words(&self, other: &Graph, f: impl Fn(u64, u64) -> u64) -> Result<Graph> {
        Error::check_size(self.n, other.n)?;
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect();
        let edges = bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2;
        Ok(Graph { n: self.n, words: self.words, bits, edges })
    }

    pub fn intersection(&self, other: &Graph) -> Result<Graph> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Graph) -> Result<Graph> {
        self.zip_words(other, |a, b| a | b)
    }

    /// Renames vertex `i` to `π(i)`: `{i, j}` becomes `{π(i), π(j)}`.
    pub fn relabel(&self, pi: &Permutation) -> Result<Graph> {
        Error::check_size(self.n, pi.len())?;
        let mut b = GraphBuilder::new(self.n);
        for (i, j) in self.edges() {
            b.add_edge(pi.apply(i), pi.apply(j));
        }
        Ok(b.build())
    }

    /// The graph with `{i, j}` an edge iff `{π(i), π(j)}` is an edge of `self`;
    /// undoes [`relabel`](Self::relabel) by the same `π`.
    pub fn pullback(&self, pi: &Permutation) -> Result<Graph> {
        self.relabel(&pi.inverse())
    }

    /// Subgraph induced on `vertices`, renumbered `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n || pos[v] != usize::MAX {
                return Err(Error::param(format!("invalid or repeated vertex {v}")));
            }
            pos[v] = k;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (k, &v) in vertices.iter().enumerate() {
            for u in self.neighbors(v) {
                let l = pos[u];
                if l != usize::MAX && l > k {
                    b.add_edge(k, l);
                }
            }
        }
        Ok(b.build())
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

pub fn intersection_graph(a: &Graph, b: &Graph) -> Result<Graph> {
    a.intersection(b)
}

pub fn union_graph(a: &Graph, b: &Graph) -> Result<Graph> {
    a.union(b)
}

/// `{i, j}` is an edge iff it is an edge of `g1`, or `{πᵏ(i), πᵏ(j)}` is an
/// edge of the k-th other graph for some k.
pub fn overlay_by_permutations(g1: &Graph, others: &[(&Graph, &Permutation)]) -> Result<Graph> {
    let mut acc = g1.clone();
    for (g, pi) in others {
        Error::check_size(g1.n(), g.n())?;
        acc = acc.union(&g.pullback(pi)?)?;
    }
    Ok(acc)
}

/// Iterator over set bit positions of a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        BitIter { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }

    fn skip_below(&mut self, pos: usize) {
        let w = pos / 64;
        if w >= self.words.len() {
            self.idx = self.words.len();
            self.cur = 0;
            return;
        }
        self.idx = w;
        let mask = if pos.is_multiple_of(64) { !0 } else { !0u64 << (pos % 64) };
        self.cur = self.words[w] & mask;
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
