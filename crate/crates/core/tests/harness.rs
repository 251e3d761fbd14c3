use std::path::PathBuf;

use csbm::harness::{
    read_records_csv, records_to_csv, run_sweep_with_threads, summarize, sweep_points, wilson_interval, write_outputs,
    ExperimentConfig, Pipeline,
};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_validate() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            cfg.validate().unwrap();
            seen += 1;
        }
    }
    assert!(seen > 0);
}

const CONFIG: &str = r#"
[experiment]
pipeline = "recover-pair"
trials = 5
seed = 3

[model]
n = 400
alpha = 10.0
beta = 1.0
s = 0.8

[[axis]]
name = "alpha"
values = [4.0, 12.0]

[[axis]]
name = "s"
values = [0.5, 0.9]
"#;

#[test]
fn sweep_csv_manifest_round_trip() {
    let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    assert_eq!(cfg.experiment.pipeline, Pipeline::RecoverPair);
    let points = sweep_points(&cfg);
    assert_eq!(points.len(), 4);
    let coords: Vec<f64> = points[1].coords.iter().map(|c| c.1).collect();
    assert_eq!(coords, vec![4.0, 0.9]);

    let records = run_sweep_with_threads(&cfg, 2).unwrap();
    assert_eq!(records.len(), 20);
    assert!(records.iter().all(|r| r.error.is_none()));

    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out/sweep.csv");
    let manifest_path = write_outputs(&cfg, &records, 2, &csv_path).unwrap();
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("# csbm-sweep v1 pipeline=recover-pair\n"));
    let back = read_records_csv(&text).unwrap();
    assert_eq!(records_to_csv(&cfg, &back).unwrap(), text);

    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["records"], 20);
    assert_eq!(ExperimentConfig::from_toml(manifest["config"].as_str().unwrap()).unwrap(), cfg);

    // recovery should be easier at alpha = 12, s = 0.9 than at alpha = 4, s = 0.5
    let summary = summarize(&records).unwrap();
    assert!(summary[3].rate.unwrap() >= summary[0].rate.unwrap());
}

#[test]
fn wilson_interval_contains_the_rate() {
    for (k, n) in [(0, 10), (3, 10), (10, 10), (47, 100)] {
        let (lo, hi) = wilson_interval(k, n).unwrap();
        let rate = k as f64 / n as f64;
        assert!(lo <= rate && rate <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0);
    }
    assert!(wilson_interval(0, 0).is_err());
}

#[test]
fn bad_configs_are_rejected() {
    let unknown = CONFIG.replace("seed = 3", "seed = 3\ncolour = \"red\"");
    assert!(ExperimentConfig::from_toml(&unknown).is_err());
    let zero_trials = CONFIG.replace("trials = 5", "trials = 0");
    assert!(ExperimentConfig::from_toml(&zero_trials).and_then(|c| c.validate()).is_err());
    let bad_point = CONFIG.replace("values = [0.5, 0.9]", "values = [0.5, 1.9]");
    assert!(ExperimentConfig::from_toml(&bad_point).and_then(|c| c.validate()).is_err());
}
