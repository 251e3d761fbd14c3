use serde::Serialize;

use crate::error::Result;
use crate::model::Labeling;

/// `|Σᵢ σ̂ᵢ σᵢ| / n`.
pub fn overlap(sigma_hat: &Labeling, sigma: &Labeling) -> Result<f64> {
    let dot = sigma_hat.dot(sigma)?;
    Ok(dot.unsigned_abs() as f64 / sigma.n() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    pub sigma_hat: Labeling,
    pub overlap: f64,
    /// `σ̂ ∈ {σ, −σ}`.
    pub exact: bool,
}

impl RecoveryResult {
    pub fn score(sigma_hat: Labeling, sigma: &Labeling) -> Result<Self> {
        let dot = sigma_hat.dot(sigma)?;
        let exact = dot.unsigned_abs() as usize == sigma.n();
        Ok(RecoveryResult { overlap: dot.unsigned_abs() as f64 / sigma.n() as f64, exact, sigma_hat })
    }
}
