use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, Pipeline};
use super::run::{sweep_points, TrialRecord};
use super::summary::{summarize, PointSummary};
use crate::error::{Error, Result};

/// First line of every sweep CSV.
pub const CSV_SCHEMA: &str = "# csbm-sweep v1";

/// Pipeline-specific columns between `success` and `error`.
pub fn csv_columns(pipeline: Pipeline) -> &'static [&'static str] {
    match pipeline {
        Pipeline::MatchExhaustive => &["matched", "agreements", "ties", "asymmetric_parent"],
        Pipeline::MatchLocal => &["matched", "agreements", "matched_fraction"],
        Pipeline::RecoverSingle => &["exact", "overlap", "converged"],
        Pipeline::RecoverPair | Pipeline::RecoverK => &["exact", "overlap", "converged", "matched"],
        Pipeline::RecoverTwoStage => &["exact", "overlap", "converged", "matched", "correct_region"],
        Pipeline::IntersectionConnectivity => &["connected", "components", "anchors", "anchors_plus", "anchors_minus"],
        Pipeline::PgfValidate => &["estimate", "exact_value", "std_error"],
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

fn field(r: &TrialRecord, name: &str) -> String {
    match name {
        "matched" => opt(&r.matched),
        "exact" => opt(&r.exact),
        "overlap" => opt(&r.overlap),
        "converged" => opt(&r.converged),
        "agreements" => opt(&r.agreements),
        "ties" => opt(&r.ties),
        "asymmetric_parent" => opt(&r.asymmetric_parent),
        "matched_fraction" => opt(&r.matched_fraction),
        "anchors" => opt(&r.anchors),
        "anchors_plus" => opt(&r.anchors_plus),
        "anchors_minus" => opt(&r.anchors_minus),
        "connected" => opt(&r.connected),
        "components" => opt(&r.components),
        "correct_region" => opt(&r.correct_region),
        "estimate" => opt(&r.estimate),
        "exact_value" => opt(&r.exact_value),
        "std_error" => opt(&r.std_error),
        other => unreachable!("unknown column {other}"),
    }
}

fn header(cfg: &ExperimentConfig) -> Vec<String> {
    let mut h = vec!["point".to_string(), "trial".to_string()];
    h.extend(cfg.axes.iter().map(|a| a.name.as_str().to_string()));
    h.push("success".into());
    h.extend(csv_columns(cfg.experiment.pipeline).iter().map(|s| s.to_string()));
    h.push("error".into());
    h
}

/// Deterministic CSV text: schema comment, header, one row per record.
/// Wall time is deliberately left out.
pub fn records_to_csv(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(cfg))?;
    for r in records {
        let mut row = vec![r.point.to_string(), r.trial.to_string()];
        row.extend(r.coords.iter().map(f64::to_string));
        row.push(opt(&r.success));
        row.extend(csv_columns(cfg.experiment.pipeline).iter().map(|c| field(r, c)));
        row.push(r.error.clone().unwrap_or_default());
        w.write_record(row)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let body = String::from_utf8(body).expect("csv output is utf-8");
    Ok(format!("{CSV_SCHEMA} pipeline={}\n{body}", cfg.experiment.pipeline))
}

fn parse_cell<T: std::str::FromStr>(s: &str, line: usize) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Parse { line, msg: format!("bad value `{s}`") })
}

/// Reads a sweep CSV back into records (wall time is zero).
pub fn read_records_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let first = text.lines().next().unwrap_or_default();
    if !first.starts_with(CSV_SCHEMA) {
        return Err(Error::Parse { line: 1, msg: format!("missing `{CSV_SCHEMA}` header") });
    }
    let body = &text[first.len()..].trim_start_matches(['\r', '\n']);
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let headers: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let success_at = col("success").ok_or_else(|| Error::Parse { line: 2, msg: "no success column".into() })?;
    let error_at = col("error");
    let mut out = Vec::new();
    for (idx, row) in rd.records().enumerate() {
        let row = row?;
        let line = idx + 3;
        let get = |name: &str| col(name).and_then(|i| row.get(i)).unwrap_or("");
        let mut r = TrialRecord {
            point: parse_cell(get("point"), line)?.unwrap_or(0),
            trial: parse_cell(get("trial"), line)?.unwrap_or(0),
            coords: (2..success_at).map(|i| parse_cell(&row[i], line).map(|v| v.unwrap_or(f64::NAN))).collect::<Result<_>>()?,
            success: parse_cell(&row[success_at], line)?,
            error: error_at.map(|i| row[i].to_string()).filter(|s| !s.is_empty()),
            ..TrialRecord::default()
        };
        r.matched = parse_cell(get("matched"), line)?;
        r.exact = parse_cell(get("exact"), line)?;
        r.overlap = parse_cell(get("overlap"), line)?;
        r.converged = parse_cell(get("converged"), line)?;
        r.agreements = parse_cell(get("agreements"), line)?;
        r.ties = parse_cell(get("ties"), line)?;
        r.asymmetric_parent = parse_cell(get("asymmetric_parent"), line)?;
        r.matched_fraction = parse_cell(get("matched_fraction"), line)?;
        r.anchors = parse_cell(get("anchors"), line)?;
        r.anchors_plus = parse_cell(get("anchors_plus"), line)?;
        r.anchors_minus = parse_cell(get("anchors_minus"), line)?;
        r.connected = parse_cell(get("connected"), line)?;
        r.components = parse_cell(get("components"), line)?;
        r.correct_region = parse_cell(get("correct_region"), line)?;
        r.estimate = parse_cell(get("estimate"), line)?;
        r.exact_value = parse_cell(get("exact_value"), line)?;
        r.std_error = parse_cell(get("std_error"), line)?;
        out.push(r);
    }
    Ok(out)
}

/// Everything needed to regenerate a sweep CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub pipeline: String,
    pub seed: u64,
    pub threads: usize,
    pub points: usize,
    pub trials_per_point: usize,
    pub records: usize,
    pub csv_sha256: String,
    pub config: String,
    pub summary: Vec<PointSummary>,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn write_manifest(path: &Path, cfg: &ExperimentConfig, records: &[TrialRecord], threads: usize, csv: &str) -> Result<Manifest> {
    let manifest = Manifest {
        tool: "csbm".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        pipeline: cfg.experiment.pipeline.to_string(),
        seed: cfg.experiment.seed,
        threads,
        points: sweep_points(cfg).len(),
        trials_per_point: cfg.experiment.trials,
        records: records.len(),
        csv_sha256: sha256_hex(csv),
        config: cfg.to_toml()?,
        summary: summarize(records)?,
    };
    std::fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

/// Writes the CSV to `csv_path` and the manifest to
/// `<csv_path>.manifest.json`; returns the manifest path.
pub fn write_outputs(cfg: &ExperimentConfig, records: &[TrialRecord], threads: usize, csv_path: &Path) -> Result<PathBuf> {
    let csv = records_to_csv(cfg, records)?;
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(csv_path, &csv)?;
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".manifest.json");
    let manifest_path = PathBuf::from(name);
    write_manifest(&manifest_path, cfg, records, threads, &csv)?;
    Ok(manifest_path)
}
