use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `0..n`, stored as the image sequence `i -> map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (i, &v) in map.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} of {i} is out of range for n = {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(format!("({a} {b}) out of range for n = {n}")));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Ok(Permutation { map })
    }

    /// Builds a permutation from disjoint cycles, each written as `[a, b, c]`
    /// meaning `a -> b -> c -> a`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidPermutation(format!("{v} out of range for n = {n}")));
                }
                map[v] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::new(map)
    }

    /// Uniformly random permutation.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        Error::check_size(self.len(), other.len())?;
        Ok(Permutation { map: other.map.iter().map(|&j| self.map[j]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Vertices where `self` and `other` disagree.
    pub fn mismatched(&self, other: &Permutation) -> Result<Vec<usize>> {
        Error::check_size(self.len(), other.len())?;
        Ok((0..self.len()).filter(|&i| self.map[i] != other.map[i]).collect())
    }

    /// Advances to the next permutation in lexicographic order of the image
    /// sequence. Returns `false` (leaving `self` unchanged) at the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let m = &mut self.map;
        if m.len() < 2 {
            return false;
        }
        let Some(i) = (0..m.len() - 1).rev().find(|&i| m[i] < m[i + 1]) else {
            return false;
        };
        let j = (i + 1..m.len()).rev().find(|&j| m[j] > m[i]).expect("successor exists");
        m.swap(i, j);
        m[i + 1..].reverse();
        true
    }

    pub fn lift(&self) -> LiftedPermutation<'_> {
        LiftedPermutation { underlying: self }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        Permutation::new(map)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.map.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    lo: usize,
    hi: usize,
}

impl Pair {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::param(format!("pair ({i}, {j}) is not a pair of distinct vertices")));
        }
        Ok(Self::ordered(i, j))
    }

    #[inline]
    pub(crate) fn ordered(i: usize, j: usize) -> Self {
        debug_assert_ne!(i, j);
        if i < j {
            Pair { lo: i, hi: j }
        } else {
            Pair { lo: j, hi: i }
        }
    }

    #[inline]
    pub fn lo(&self) -> usize {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> usize {
        self.hi
    }

    /// Position of the pair in the lexicographic enumeration of pairs of `0..n`.
    #[inline]
    pub fn index(&self, n: usize) -> usize {
        self.lo * (2 * n - self.lo - 1) / 2 + (self.hi - self.lo - 1)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.lo, self.hi)
    }
}

/// All `n(n-1)/2` unordered pairs in lexicographic order.
pub fn all_pairs(n: usize) -> impl Iterator<Item = Pair> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| Pair { lo: i, hi: j }))
}

/// The action of a vertex permutation on unordered pairs.
#[derive(Debug, Clone, Copy)]
pub struct LiftedPermutation<'a> {
    underlying: &'a Permutation,
}

impl LiftedPermutation<'_> {
    #[inline]
    pub fn apply(&self, pair: Pair) -> Pair {
        Pair::ordered(self.underlying.apply(pair.lo), self.underlying.apply(pair.hi))
    }

    pub fn underlying(&self) -> &Permutation {
        self.underlying
    }
}

/// `{i, j} -> {π(i), π(j)}`.
pub fn lift_apply(pi: &Permutation, pair: Pair) -> Pair {
    pi.lift().apply(pair)
}
