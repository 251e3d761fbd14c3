use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `alpha` and `beta` translate into edge probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `p = α·ln(n)/n`, `q = β·ln(n)/n`.
    LogOverN,
    /// `p = α`, `q = β`.
    RawProbability,
}

impl std::str::FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "log-over-n" | "logovern" | "log" => Ok(Scaling::LogOverN),
            "raw-probability" | "rawprobability" | "raw" => Ok(Scaling::RawProbability),
            other => Err(Error::param(format!("unknown scaling {other:?}"))),
        }
    }
}

impl std::fmt::Display for Scaling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scaling::LogOverN => "log-over-n",
            Scaling::RawProbability => "raw-probability",
        })
    }
}

/// Parameters of a CSBM instance. Validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    n: usize,
    alpha: f64,
    beta: f64,
    s: f64,
    k_graphs: usize,
    scaling: Scaling,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    alpha: f64,
    beta: f64,
    s: f64,
    #[serde(default = "default_k")]
    k: usize,
    scaling: Scaling,
}

fn default_k() -> usize {
    2
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        ModelParams::new(r.n, r.alpha, r.beta, r.s, r.k, r.scaling)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams { n: p.n, alpha: p.alpha, beta: p.beta, s: p.s, k: p.k_graphs, scaling: p.scaling }
    }
}

impl ModelParams {
    pub fn new(
        n: usize,
        alpha: f64,
        beta: f64,
        s: f64,
        k_graphs: usize,
        scaling: Scaling,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("n must be at least 2, got {n}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0 && beta.is_finite() && beta >= 0.0) {
            return Err(Error::param(format!("alpha and beta must be finite and >= 0 (got {alpha}, {beta})")));
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::param(format!("s must lie in [0, 1], got {s}")));
        }
        if k_graphs < 2 {
            return Err(Error::param(format!("K must be at least 2, got {k_graphs}")));
        }
        let params = ModelParams { n, alpha, beta, s, k_graphs, scaling };
        let (p, q) = (params.p(), params.q());
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::param(format!("edge probabilities p = {p}, q = {q} must lie in [0, 1]")));
        }
        Ok(params)
    }

    /// RawProbability parameters with `K = 2`.
    pub fn raw(n: usize, p: f64, q: f64, s: f64) -> Result<Self> {
        Self::new(n, p, q, s, 2, Scaling::RawProbability)
    }

    /// LogOverN parameters with `K = 2`.
    pub fn log_scaled(n: usize, alpha: f64, beta: f64, s: f64) -> Result<Self> {
        Self::new(n, alpha, beta, s, 2, Scaling::LogOverN)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn k_graphs(&self) -> usize {
        self.k_graphs
    }
    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    fn scale(&self) -> f64 {
        match self.scaling {
            Scaling::LogOverN => (self.n as f64).ln() / self.n as f64,
            Scaling::RawProbability => 1.0,
        }
    }

    /// Intra-community edge probability.
    pub fn p(&self) -> f64 {
        self.alpha * self.scale()
    }

    /// Inter-community edge probability.
    pub fn q(&self) -> f64 {
        self.beta * self.scale()
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.alpha, self.beta, self.s, self.k_graphs, self.scaling)
    }

    pub fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(self.n, self.alpha, self.beta, s, self.k_graphs, self.scaling)
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.n, self.alpha, self.beta, self.s, k, self.scaling)
    }

    /// Parameters of the marginal SBM of a single subsampled child:
    /// rates multiplied by `s`.
    pub fn single_child(&self) -> Self {
        self.rescaled(self.s)
    }

    /// Parameters of the union of `k` subsampled children under the true
    /// alignment: rates multiplied by `1 - (1 - s)^k`.
    pub fn union_of(&self, k: usize) -> Self {
        self.rescaled(1.0 - (1.0 - self.s).powi(k as i32))
    }

    fn rescaled(&self, factor: f64) -> Self {
        ModelParams { alpha: self.alpha * factor, beta: self.beta * factor, ..*self }
    }
}

/// Joint law of `(A_e, B'_e)` for one vertex pair, for intra (`p`) and inter
/// (`q`) pairs. Cells are indexed `[a][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeJointLaw {
    pub p: [[f64; 2]; 2],
    pub q: [[f64; 2]; 2],
}

impl EdgeJointLaw {
    pub fn from_params(params: &ModelParams) -> Self {
        Self::from_rates(params.p(), params.q(), params.s())
    }

    pub fn from_rates(p: f64, q: f64, s: f64) -> Self {
        let cells = |r: f64| {
            let both = s * s * r;
            let one = s * (1.0 - s) * r;
            [[1.0 - r * (2.0 * s - s * s), one], [one, both]]
        };
        EdgeJointLaw { p: cells(p), q: cells(q) }
    }

    /// Intra (`same = true`) or inter cell table.
    pub fn table(&self, same: bool) -> &[[f64; 2]; 2] {
        if same {
            &self.p
        } else {
            &self.q
        }
    }

    pub fn all_cells_positive(&self) -> bool {
        self.p.iter().chain(self.q.iter()).flatten().all(|&x| x > 0.0)
    }
}

/// Per-pair joint law of `(A_e, B'_e)`.
pub fn edge_joint_law(params: &ModelParams) -> EdgeJointLaw {
    EdgeJointLaw::from_params(params)
}
