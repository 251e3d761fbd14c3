use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Community assignment `σ ∈ {+1, −1}ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Labeling {
    sigma: Vec<i8>,
}

impl Labeling {
    pub fn new(sigma: Vec<i8>) -> Result<Self> {
        if let Some((i, v)) = sigma.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::param(format!("label {v} at vertex {i} is not ±1")));
        }
        Ok(Labeling { sigma })
    }

    pub fn from_signs(plus: impl IntoIterator<Item = bool>) -> Self {
        Labeling { sigma: plus.into_iter().map(|b| if b { 1 } else { -1 }).collect() }
    }

    pub fn all_plus(n: usize) -> Self {
        Labeling { sigma: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        self.sigma[i]
    }

    #[inline]
    pub fn is_plus(&self, i: usize) -> bool {
        self.sigma[i] > 0
    }

    #[inline]
    pub fn same_community(&self, i: usize, j: usize) -> bool {
        self.sigma[i] == self.sigma[j]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.sigma
    }

    pub fn v_plus(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_plus(i)).collect()
    }

    pub fn v_minus(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.is_plus(i)).collect()
    }

    pub fn n_plus(&self) -> usize {
        self.sigma.iter().filter(|&&v| v > 0).count()
    }

    pub fn negated(&self) -> Self {
        Labeling { sigma: self.sigma.iter().map(|&v| -v).collect() }
    }

    /// `Σᵢ σ̂ᵢσᵢ`.
    pub fn dot(&self, other: &Labeling) -> Result<i64> {
        Error::check_size(self.n(), other.n())?;
        Ok(self.sigma.iter().zip(&other.sigma).map(|(&a, &b)| (a * b) as i64).sum())
    }
}

impl TryFrom<Vec<i8>> for Labeling {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Labeling::new(v)
    }
}

impl From<Labeling> for Vec<i8> {
    fn from(l: Labeling) -> Self {
        l.sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn community_sets_partition() {
        let l = Labeling::new(vec![1, -1, -1, 1, 1]).unwrap();
        assert_eq!(l.v_plus(), vec![0, 3, 4]);
        assert_eq!(l.v_minus(), vec![1, 2]);
        assert_eq!(l.n_plus() + l.v_minus().len(), l.n());
        assert_eq!(l.dot(&l).unwrap(), 5);
        assert!(Labeling::new(vec![1, 0]).is_err());
    }
}
