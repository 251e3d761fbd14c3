use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::community::Matcher;
use crate::error::{Error, Result};
use crate::matching::{SearchConfig, SearchInit, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::model::{ModelParams, Scaling};

/// What each trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    MatchExhaustive,
    MatchLocal,
    RecoverSingle,
    RecoverPair,
    RecoverK,
    RecoverTwoStage,
    IntersectionConnectivity,
    PgfValidate,
}

impl Pipeline {
    pub const ALL: [Pipeline; 8] = [
        Pipeline::MatchExhaustive,
        Pipeline::MatchLocal,
        Pipeline::RecoverSingle,
        Pipeline::RecoverPair,
        Pipeline::RecoverK,
        Pipeline::RecoverTwoStage,
        Pipeline::IntersectionConnectivity,
        Pipeline::PgfValidate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::MatchExhaustive => "match-exhaustive",
            Pipeline::MatchLocal => "match-local",
            Pipeline::RecoverSingle => "recover-single",
            Pipeline::RecoverPair => "recover-pair",
            Pipeline::RecoverK => "recover-k",
            Pipeline::RecoverTwoStage => "recover-two-stage",
            Pipeline::IntersectionConnectivity => "intersection-connectivity",
            Pipeline::PgfValidate => "pgf-validate",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline `{s}`")))
    }
}

/// Parameters that a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisName {
    N,
    Alpha,
    Beta,
    S,
    K,
    /// Sets `s` so that `s²(α+β)/2` equals the value (applied after the
    /// other axes).
    MatchingRatio,
    Theta,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::N => "n",
            AxisName::Alpha => "alpha",
            AxisName::Beta => "beta",
            AxisName::S => "s",
            AxisName::K => "k",
            AxisName::MatchingRatio => "matching-ratio",
            AxisName::Theta => "theta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub pipeline: Pipeline,
    pub trials: usize,
    pub seed: u64,
    /// CSV destination; the manifest goes next to it.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Worker threads; `CSBM_THREADS` overrides, default is all cores.
    #[serde(default)]
    pub threads: Option<usize>,
}

/// Base instance; axes override single fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    #[serde(default = "two")]
    pub k: usize,
    #[serde(default = "log_scaling")]
    pub scaling: Scaling,
}

fn two() -> usize {
    2
}

fn log_scaling() -> Scaling {
    Scaling::LogOverN
}

impl ModelSection {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.alpha, self.beta, self.s, self.k, self.scaling)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    /// `exhaustive`, `local`, `map` or `truth` (overlay pipelines).
    pub matcher: String,
    pub restarts: usize,
    pub max_attempts: Option<usize>,
    pub exhaustive_limit: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection { matcher: "truth".into(), restarts: 20, max_attempts: None, exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT }
    }
}

impl SolverSection {
    pub fn search_config(&self, seed: u64) -> SearchConfig {
        SearchConfig { restarts: self.restarts, max_attempts: self.max_attempts, init: SearchInit::DegreeGreedy, seed }
    }

    pub fn matcher(&self) -> Result<Matcher> {
        match self.matcher.as_str() {
            "exhaustive" => Ok(Matcher::Exhaustive),
            "local" => Ok(Matcher::Local(self.search_config(0))),
            "map" => Ok(Matcher::Map),
            "truth" => Ok(Matcher::Truth),
            other => Err(Error::Config(format!("unknown matcher `{other}` (exhaustive, local, map, truth)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PgfSection {
    pub theta: f64,
    pub omega: f64,
    pub zeta: f64,
    /// Community pattern along the cycle.
    pub lambda: Vec<i8>,
    /// Simulated cycles per trial.
    pub samples: usize,
}

impl Default for PgfSection {
    fn default() -> Self {
        PgfSection { theta: 0.5, omega: 1.5, zeta: 1.5, lambda: vec![1, 1, -1, -1], samples: 100_000 }
    }
}

/// A sweep: the Cartesian product of all axes, `trials` runs per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub model: ModelSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub pgf: PgfSection,
    #[serde(default, rename = "axis")]
    pub axes: Vec<SweepAxis>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.experiment.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.solver.matcher()?;
        let mut names: Vec<AxisName> = Vec::new();
        for ax in &self.axes {
            if names.contains(&ax.name) {
                return Err(Error::Config(format!("axis `{}` listed twice", ax.name.as_str())));
            }
            names.push(ax.name);
            if ax.values.is_empty() {
                return Err(Error::Config(format!("axis `{}` has no values", ax.name.as_str())));
            }
        }
        if names.contains(&AxisName::MatchingRatio) && names.contains(&AxisName::S) {
            return Err(Error::Config("`s` and `matching-ratio` cannot both be swept".into()));
        }
        // every point must yield valid parameters
        for point in super::run::sweep_points(self) {
            let m = point.model(self)?;
            if matches!(self.experiment.pipeline, Pipeline::PgfValidate) {
                point.pgf_params(self, &m)?;
            }
        }
        Ok(())
    }
}
