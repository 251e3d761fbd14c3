use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use csbm::analysis::{phase_grid, Axis, GridAxis, PhaseGridSpec};
use csbm::community::{recover_k, recover_pair, recover_single, recover_two_stage, recovery_stream, Matcher, RecoveryResult};
use csbm::harness::{
    read_records_csv, run_sweep_with_threads, summarize, sweep_points, thread_count, write_outputs, ExperimentConfig,
};
use csbm::matching::{map_match_with_labels, match_exhaustive_with, match_local_search, SearchConfig, SearchInit};
use csbm::model::{generate_family, io, CorrelatedFamily};
use csbm::rng::{role, StreamKey};
use csbm::{EdgeJointLaw, ModelParams, Scaling};

/// Exit status of `match` when a ground truth was supplied and missed.
const EXIT_NOT_RECOVERED: u8 = 10;

const SWEEP_HELP: &str = "\
Runs a Monte Carlo sweep described by a TOML config file and writes a CSV
plus `<output>.manifest.json`.

Config sections:
  [experiment]  pipeline, trials, seed, output (CSV path), threads
  [model]       n, alpha, beta, s, k (default 2), scaling (log-over-n | raw-probability)
  [solver]      matcher (exhaustive | local | map | truth), restarts, max_attempts,
                exhaustive_limit
  [pgf]         theta, omega, zeta, lambda (e.g. [1, 1, -1, -1]), samples
  [[axis]]      name (n | alpha | beta | s | k | matching-ratio | theta), values

The thread count can be overridden with CSBM_THREADS; results do not depend on it.

CSV layout: a `# csbm-sweep v1 pipeline=<name>` line, then the columns
point, trial, <one column per axis>, success, <pipeline columns>, error
where the pipeline columns are
  match-exhaustive           matched, agreements, ties, asymmetric_parent
  match-local                matched, agreements, matched_fraction
  recover-single             exact, overlap, converged
  recover-pair, recover-k    exact, overlap, converged, matched
  recover-two-stage          exact, overlap, converged, matched, correct_region
  intersection-connectivity  connected, components, anchors, anchors_plus, anchors_minus
  pgf-validate               estimate, exact_value, std_error";

#[derive(Parser)]
#[command(name = "csbm", version, about = "Correlated stochastic block model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a correlated family and write it to a directory.
    Generate(GenerateArgs),
    /// Match two graphs given as edge lists.
    Match(MatchArgs),
    /// Recover communities from a family.
    Recover(RecoverArgs),
    /// Evaluate the phase diagram on a grid.
    Phase(PhaseArgs),
    /// Run a sweep from a config file.
    #[command(long_about = SWEEP_HELP)]
    Sweep(SweepArgs),
    /// Check a config file, a family directory or a sweep CSV.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// log-over-n or raw-probability.
    #[arg(long, default_value = "log-over-n")]
    scaling: Scaling,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.n, self.alpha, self.beta, self.s, self.k, self.scaling)?)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Exhaustive,
    Local,
    Map,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Degree,
    Identity,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long, value_enum, default_value = "local")]
    solver: Solver,
    /// Edge list of the first graph.
    #[arg(long)]
    g1: PathBuf,
    /// Edge list of the second graph.
    #[arg(long)]
    g2: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Move attempts per climb (default 50·n²).
    #[arg(long)]
    max_attempts: Option<usize>,
    #[arg(long, value_enum, default_value = "degree")]
    init: InitArg,
    #[arg(long, default_value_t = csbm::matching::DEFAULT_EXHAUSTIVE_LIMIT)]
    exhaustive_limit: usize,
    /// Labels file (map solver).
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Edge rates and correlation for the map solver's joint law: p,q,s.
    #[arg(long, value_delimiter = ',', value_name = "P,Q,S")]
    law: Option<Vec<f64>>,
    /// Ground-truth permutation file; enables the recovered/not-recovered
    /// exit status.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Where to write the estimated permutation.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Single,
    Pair,
    K,
    TwoStage,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatcherArg {
    Exhaustive,
    Local,
    Map,
    Truth,
}

#[derive(Args)]
struct RecoverArgs {
    /// Family directory written by `generate`.
    #[arg(long, conflicts_with_all = ["n", "alpha", "beta", "s"])]
    family: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "log-over-n")]
    scaling: Scaling,
    #[arg(long, value_enum, default_value = "pair")]
    pipeline: PipelineArg,
    #[arg(long, value_enum, default_value = "truth")]
    matcher: MatcherArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the estimated labels.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseArgs {
    /// Horizontal axis as name:min:max:resolution, e.g. alpha:0:40:100.
    #[arg(long, default_value = "alpha:0:40:100")]
    x: String,
    /// Vertical axis, same format.
    #[arg(long, default_value = "beta:0:40:100")]
    y: String,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// CSV output (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG heat map.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    cell_px: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file.
    config: PathBuf,
    /// Overrides `[experiment] output`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<PathBuf>,
    /// Sweep CSV; checked against its manifest when one is present.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Match(a) => run_match(a),
        Command::Recover(a) => recover(a),
        Command::Phase(a) => phase(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn generate(a: GenerateArgs) -> Result<u8> {
    let params = a.model.params()?;
    let family = generate_family(&params, &mut StreamKey::root(a.seed).child(role::FAMILY).rng())?;
    io::write_family(&a.out, &family).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "{}",
        json!({
            "dir": a.out,
            "n": family.n(),
            "k": family.k(),
            "parent_edges": family.parent.edge_count(),
            "g1_edges": family.g1.edge_count(),
        })
    );
    Ok(0)
}

fn run_match(a: MatchArgs) -> Result<u8> {
    let g1 = io::read_graph(&a.g1).with_context(|| format!("reading {}", a.g1.display()))?;
    let g2 = io::read_graph(&a.g2).with_context(|| format!("reading {}", a.g2.display()))?;
    let start = Instant::now();
    let (pi, score) = match a.solver {
        Solver::Exhaustive => {
            let out = match_exhaustive_with(&g1, &g2, a.exhaustive_limit)?;
            if out.ties > 1 {
                eprintln!("note: {} permutations tie at the maximum score", out.ties);
            }
            (out.best, out.score)
        }
        Solver::Local => {
            let init = match a.init {
                InitArg::Degree => SearchInit::DegreeGreedy,
                InitArg::Identity => SearchInit::Identity,
            };
            let cfg = SearchConfig { restarts: a.restarts, max_attempts: a.max_attempts, init, seed: a.seed };
            let out = match_local_search(&g1, &g2, &cfg)?;
            (out.best, out.score)
        }
        Solver::Map => {
            let labels = a.labels.as_deref().context("the map solver needs --labels")?;
            let labels = io::read_labels(labels)?;
            let law = match a.law.as_deref() {
                Some([p, q, s]) => EdgeJointLaw::from_rates(*p, *q, *s),
                _ => bail!("the map solver needs --law p,q,s"),
            };
            let pi = map_match_with_labels(&g1, &g2, &labels, &law, &mut StreamKey::root(a.seed).child(role::MATCHER).rng())?;
            let score = csbm::matching::agreement_score(&g1, &g2, &pi)?;
            (pi, score)
        }
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(out) = &a.out {
        std::fs::write(out, io::write_permutation(&pi))?;
    }
    let recovered = match &a.truth {
        Some(path) => Some(io::read_permutation(path)? == pi),
        None => None,
    };
    println!("{}", json!({ "score": score, "recovered": recovered, "runtime_ms": runtime_ms }));
    Ok(if recovered == Some(false) { EXIT_NOT_RECOVERED } else { 0 })
}

fn recover(a: RecoverArgs) -> Result<u8> {
    let family: CorrelatedFamily = match &a.family {
        Some(dir) => io::read_family(dir).with_context(|| format!("reading {}", dir.display()))?,
        None => {
            let (Some(n), Some(alpha), Some(beta), Some(s)) = (a.n, a.alpha, a.beta, a.s) else {
                bail!("give either --family or all of --n --alpha --beta --s");
            };
            let params = ModelParams::new(n, alpha, beta, s, a.k, a.scaling)?;
            generate_family(&params, &mut StreamKey::root(a.seed).child(role::FAMILY).rng())?
        }
    };
    let matcher = match a.matcher {
        MatcherArg::Exhaustive => Matcher::Exhaustive,
        MatcherArg::Local => Matcher::Local(SearchConfig::default()),
        MatcherArg::Map => Matcher::Map,
        MatcherArg::Truth => Matcher::Truth,
    };
    let start = Instant::now();
    let (result, matched) = match a.pipeline {
        PipelineArg::Single => {
            let r = recover_single(&family.g1, &family.params.single_child(), &mut recovery_stream(a.seed))?;
            if !r.converged {
                eprintln!("warning: power iteration did not converge");
            }
            (RecoveryResult::score(r.sigma_hat, &family.labels)?, None)
        }
        PipelineArg::Pair | PipelineArg::K | PipelineArg::TwoStage => {
            let out = match a.pipeline {
                PipelineArg::Pair => recover_pair(&family, &matcher, a.seed)?,
                PipelineArg::K => recover_k(&family, &matcher, a.seed)?,
                _ => recover_two_stage(&family, &matcher, a.seed)?,
            };
            if !out.converged {
                eprintln!("warning: power iteration did not converge");
            }
            (out.recovery, Some(out.matching_exact))
        }
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(out) = &a.out {
        std::fs::write(out, io::write_labels(&result.sigma_hat))?;
    }
    println!(
        "{}",
        json!({ "overlap": result.overlap, "exact": result.exact, "matched": matched, "runtime_ms": runtime_ms })
    );
    Ok(0)
}

fn parse_axis(spec: &str) -> Result<GridAxis> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, min, max, res] = parts[..] else {
        bail!("axis `{spec}` must look like name:min:max:resolution");
    };
    Ok(GridAxis {
        param: name.parse::<Axis>()?,
        min: min.parse().with_context(|| format!("bad min in `{spec}`"))?,
        max: max.parse().with_context(|| format!("bad max in `{spec}`"))?,
        resolution: res.parse().with_context(|| format!("bad resolution in `{spec}`"))?,
    })
}

fn phase(a: PhaseArgs) -> Result<u8> {
    let spec = PhaseGridSpec { x: parse_axis(&a.x)?, y: parse_axis(&a.y)?, alpha: a.alpha, beta: a.beta, s: a.s, k: a.k };
    let grid = phase_grid(&spec)?;
    match &a.out {
        Some(path) => grid.write_csv(std::fs::File::create(path)?)?,
        None => grid.write_csv(std::io::stdout().lock())?,
    }
    if let Some(svg) = &a.svg {
        std::fs::write(svg, grid.to_svg(a.cell_px.max(1)))?;
    }
    Ok(0)
}

fn sweep(a: SweepArgs) -> Result<u8> {
    let cfg = ExperimentConfig::load(&a.config).with_context(|| format!("loading {}", a.config.display()))?;
    let output = a.output.or_else(|| cfg.experiment.output.clone()).context("no output path in config or on the command line")?;
    let threads = thread_count(&cfg)?;
    let records = run_sweep_with_threads(&cfg, threads)?;
    let manifest = write_outputs(&cfg, &records, threads, &output)?;
    for s in summarize(&records)? {
        let rate = s.rate.map_or("n/a".to_string(), |r| format!("{r:.3} [{:.3}, {:.3}]", s.lower.unwrap(), s.upper.unwrap()));
        eprintln!("point {} {:?}: {} / {} -> {rate}", s.point, s.coords, s.successes, s.trials);
    }
    println!("{}", json!({ "csv": output, "manifest": manifest, "records": records.len() }));
    Ok(0)
}

fn validate(a: ValidateArgs) -> Result<u8> {
    if a.config.is_none() && a.family.is_none() && a.csv.is_none() {
        bail!("nothing to validate: pass --config, --family or --csv");
    }
    if let Some(path) = &a.config {
        let cfg = ExperimentConfig::load(path).with_context(|| format!("config {}", path.display()))?;
        println!("config ok: {} points x {} trials", sweep_points(&cfg).len(), cfg.experiment.trials);
    }
    if let Some(dir) = &a.family {
        let f = io::read_family(dir).with_context(|| format!("family {}", dir.display()))?;
        println!("family ok: n = {}, K = {}", f.n(), f.k());
    }
    if let Some(path) = &a.csv {
        check_csv(path)?;
    }
    Ok(0)
}

fn check_csv(path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let records = read_records_csv(&text)?;
    let summary = summarize(&records)?;
    let mut manifest_path = path.as_os_str().to_owned();
    manifest_path.push(".manifest.json");
    let manifest_path = PathBuf::from(manifest_path);
    if manifest_path.exists() {
        let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest_path)?)?;
        let cfg = ExperimentConfig::from_toml(manifest["config"].as_str().context("manifest lacks config")?)?;
        let expected = csbm::harness::records_to_csv(&cfg, &records)?;
        if expected != text {
            bail!("{} does not re-serialise to itself", path.display());
        }
        if serde_json::to_value(&summary)? != manifest["summary"] {
            bail!("summary recomputed from {} differs from the manifest", path.display());
        }
    }
    println!("csv ok: {} records, {} points", records.len(), summary.len());
    Ok(())
}
