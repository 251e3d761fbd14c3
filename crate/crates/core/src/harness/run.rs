use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AxisName, ExperimentConfig, Pipeline};
use super::connectivity::connectivity_check;
use crate::analysis::{pgf_cycle, simulate_cycle, PgfParams};
use crate::community::{recover_k, recover_pair, recover_single, recover_two_stage, RecoveryResult};
use crate::error::{Error, Result};
use crate::matching::{anchor_sets, match_exhaustive_with, match_local_search};
use crate::model::{generate_family, EdgeJointLaw, ModelParams};
use crate::rng::{role, StreamKey};

/// Environment variable that overrides the worker thread count.
pub const THREADS_ENV: &str = "CSBM_THREADS";

/// One grid point of a sweep: a value for every axis, in axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub coords: Vec<(AxisName, f64)>,
}

impl SweepPoint {
    pub fn model(&self, cfg: &ExperimentConfig) -> Result<ModelParams> {
        let mut m = cfg.model;
        let mut ratio = None;
        for &(name, v) in &self.coords {
            match name {
                AxisName::N => m.n = as_count(v, "n")?,
                AxisName::Alpha => m.alpha = v,
                AxisName::Beta => m.beta = v,
                AxisName::S => m.s = v,
                AxisName::K => m.k = as_count(v, "k")?,
                AxisName::MatchingRatio => ratio = Some(v),
                AxisName::Theta => {}
            }
        }
        if let Some(c) = ratio {
            if c.is_nan() || c < 0.0 || m.alpha + m.beta <= 0.0 {
                return Err(Error::Config(format!("cannot reach matching ratio {c} with alpha + beta = {}", m.alpha + m.beta)));
            }
            m.s = (2.0 * c / (m.alpha + m.beta)).sqrt();
        }
        m.params().map_err(|e| Error::Config(format!("point {}: {e}", self.index)))
    }

    pub fn pgf_params(&self, cfg: &ExperimentConfig, model: &ModelParams) -> Result<PgfParams> {
        let pgf = &cfg.pgf;
        let theta = self.coords.iter().find(|c| c.0 == AxisName::Theta).map_or(pgf.theta, |c| c.1);
        PgfParams::new(theta, pgf.omega, pgf.zeta, EdgeJointLaw::from_params(model), pgf.lambda.clone())
    }
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1e12 {
        Ok(v as usize)
    } else {
        Err(Error::Config(format!("{what} must be a whole number, got {v}")))
    }
}

/// Cartesian product of the axes; the first axis varies slowest.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<SweepPoint> {
    let mut points = vec![Vec::new()];
    for ax in &cfg.axes {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<(AxisName, f64)>| {
                ax.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((ax.name, v));
                    p
                })
            })
            .collect();
    }
    points.into_iter().enumerate().map(|(index, coords)| SweepPoint { index, coords }).collect()
}

/// Outcome of one trial. Fields that a pipeline does not produce stay
/// `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: usize,
    pub trial: usize,
    pub coords: Vec<f64>,
    /// Pipeline-specific success flag; `None` if the trial failed.
    pub success: Option<bool>,
    /// `π̂ = π*` for every child.
    pub matched: Option<bool>,
    /// Overlap exactly 1.
    pub exact: Option<bool>,
    pub overlap: Option<f64>,
    pub converged: Option<bool>,
    pub agreements: Option<u64>,
    pub ties: Option<u64>,
    pub asymmetric_parent: Option<bool>,
    pub matched_fraction: Option<f64>,
    pub anchors: Option<usize>,
    pub anchors_plus: Option<usize>,
    pub anchors_minus: Option<usize>,
    pub connected: Option<bool>,
    pub components: Option<usize>,
    pub correct_region: Option<usize>,
    pub estimate: Option<f64>,
    pub exact_value: Option<f64>,
    pub std_error: Option<f64>,
    pub error: Option<String>,
    /// Not part of the CSV, which must be reproducible byte for byte.
    pub wall_time_ms: f64,
}

impl TrialRecord {
    fn apply_recovery(&mut self, r: &RecoveryResult) {
        self.exact = Some(r.exact);
        self.overlap = Some(r.overlap);
        self.success = Some(r.exact);
    }
}

fn seed_from(key: &StreamKey) -> u64 {
    u64::from_le_bytes(key.as_bytes()[..8].try_into().expect("8 bytes"))
}

/// Runs trial `trial` at `point`. The randomness is a pure function of
/// `(master seed, point index, trial index)`.
pub fn run_trial(cfg: &ExperimentConfig, point: &SweepPoint, trial: usize) -> TrialRecord {
    let start = Instant::now();
    let mut rec = TrialRecord {
        point: point.index,
        trial,
        coords: point.coords.iter().map(|c| c.1).collect(),
        ..TrialRecord::default()
    };
    if let Err(e) = fill(cfg, point, trial, &mut rec) {
        rec.error = Some(e.to_string());
        rec.success = None;
    }
    rec.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

fn fill(cfg: &ExperimentConfig, point: &SweepPoint, trial: usize, rec: &mut TrialRecord) -> Result<()> {
    let key = StreamKey::root(cfg.experiment.seed).path(&[point.index as u64, trial as u64]);
    let params = point.model(cfg)?;
    let pipeline = cfg.experiment.pipeline;
    if pipeline == Pipeline::PgfValidate {
        let pgf = point.pgf_params(cfg, &params)?;
        let exact = pgf_cycle(&pgf)?;
        let mut rng = key.child(role::PGF).rng();
        let samples = cfg.pgf.samples.max(2);
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..samples {
            let (x, yp, ym) = simulate_cycle(&pgf, &mut rng);
            let v = pgf.theta.powi(x as i32) * pgf.omega.powi(yp as i32) * pgf.zeta.powi(ym as i32);
            sum += v;
            sq += v * v;
        }
        let mean = sum / samples as f64;
        let var = (sq - samples as f64 * mean * mean).max(0.0) / (samples - 1) as f64;
        let se = (var / samples as f64).sqrt();
        rec.estimate = Some(mean);
        rec.exact_value = Some(exact);
        rec.std_error = Some(se);
        rec.success = Some((mean - exact).abs() <= 3.0 * se);
        return Ok(());
    }

    let family = generate_family(&params, &mut key.child(role::FAMILY).rng())?;
    let run_seed = seed_from(&key.child(role::RECOVERY));
    let matcher = cfg.solver.matcher()?;
    match pipeline {
        Pipeline::MatchExhaustive => {
            let limit = cfg.solver.exhaustive_limit;
            let out = match_exhaustive_with(&family.g1, family.g2(), limit)?;
            let matched = out.best == *family.pi2();
            rec.matched = Some(matched);
            rec.success = Some(matched);
            rec.agreements = Some(out.score);
            rec.ties = Some(out.ties);
            rec.asymmetric_parent = Some(match_exhaustive_with(&family.parent, &family.parent, limit)?.ties == 1);
        }
        Pipeline::MatchLocal => {
            let cfg = cfg.solver.search_config(seed_from(&key.child(role::MATCHER)));
            let out = match_local_search(&family.g1, family.g2(), &cfg)?;
            let n = family.n();
            let right = (0..n).filter(|&i| out.best.apply(i) == family.pi2().apply(i)).count();
            rec.matched = Some(right == n);
            rec.success = Some(right == n);
            rec.agreements = Some(out.score);
            rec.matched_fraction = Some(right as f64 / n as f64);
        }
        Pipeline::RecoverSingle => {
            let r = recover_single(&family.g1, &params.single_child(), &mut key.child(role::RECOVERY).rng())?;
            rec.converged = Some(r.converged);
            rec.apply_recovery(&RecoveryResult::score(r.sigma_hat, &family.labels)?);
        }
        Pipeline::RecoverPair | Pipeline::RecoverK | Pipeline::RecoverTwoStage => {
            let out = match pipeline {
                Pipeline::RecoverPair => recover_pair(&family, &matcher, run_seed)?,
                Pipeline::RecoverK => recover_k(&family, &matcher, run_seed)?,
                _ => recover_two_stage(&family, &matcher, run_seed)?,
            };
            rec.matched = Some(out.matching_exact);
            rec.converged = Some(out.converged);
            rec.correct_region = out.correct_region;
            rec.apply_recovery(&out.recovery);
        }
        Pipeline::IntersectionConnectivity => {
            let inter = family.g1.intersection(&family.g2().pullback(family.pi2())?)?;
            let c = connectivity_check(&inter);
            let t = anchor_sets(&family.g1, family.g2(), family.pi2(), &family.labels)?;
            rec.connected = Some(c.connected);
            rec.components = Some(c.components);
            rec.anchors = Some(t.t_all.len());
            rec.anchors_plus = Some(t.t_plus.len());
            rec.anchors_minus = Some(t.t_minus.len());
            rec.success = Some(c.connected);
        }
        Pipeline::PgfValidate => unreachable!("handled above"),
    }
    Ok(())
}

/// Worker count: `CSBM_THREADS` if set, else the config value, else all
/// available cores.
pub fn thread_count(cfg: &ExperimentConfig) -> Result<usize> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        };
    }
    Ok(cfg.experiment.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_sweep_with_threads(cfg, thread_count(cfg)?)
}

/// Runs every `(point, trial)` on a dedicated pool of `threads` workers.
/// Records come back ordered by `(point, trial)`.
pub fn run_sweep_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let points = sweep_points(cfg);
    let jobs: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|p| (0..cfg.experiment.trials).map(move |t| (p, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(|&(p, t)| run_trial(cfg, &points[p], t)).collect()))
}
