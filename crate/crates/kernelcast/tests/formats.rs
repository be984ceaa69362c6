use std::fs;

use kernelcast::format::{read_config, read_model, read_report, to_json, write_model, write_report, Model};
use kernelcast::Error;
use kernelcast_core::data::Dataset;
use kernelcast_core::ensemble::build_ensemble;
use kernelcast_core::modelsel::{enumerate_grid, kms_fit, random_search, SearchMode, SearchOptions};

fn toy() -> Dataset {
    let rows: Vec<[f64; 2]> = (0..40).map(|i| [(i % 10) as f64 + 0.1 * i as f64, (i / 10) as f64]).collect();
    let labels: Vec<&str> = (0..40).map(|i| if i % 10 < 5 { "lo" } else { "hi" }).collect();
    Dataset::from_labeled_rows(&rows, &labels).unwrap()
}

#[test]
fn model_documents_round_trip_exactly() {
    let ds = toy();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    for cfg in enumerate_grid().into_iter().filter(|c| c.k_references <= 32).step_by(173) {
        let model = Model::Kms(Box::new(kms_fit(&cfg, &ds, 5).unwrap()));
        write_model(&path, &model).unwrap();
        assert_eq!(read_model(&path).unwrap(), model);
    }
    let report = random_search(&ds, SearchOptions { mode: SearchMode::Random { sample_size: 20 }, ..Default::default() }).unwrap();
    let model = Model::Ensemble(build_ensemble(&report, &ds, 5, 3).unwrap());
    write_model(&path, &model).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"version\": 1") && text.contains("\"kind\": \"ensemble\""));
    assert_eq!(read_model(&path).unwrap(), model);
}

#[test]
fn reports_round_trip_with_failed_entries() {
    let ds = toy();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    // 40 rows leave ~26 training rows per fold, too few for 32 or 64 references
    let report = random_search(&ds, SearchOptions { mode: SearchMode::Random { sample_size: 60 }, seed: 2, ..Default::default() }).unwrap();
    assert!(report.evaluated.iter().any(|e| !e.is_viable()));
    write_report(&path, &report).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"cv_ber\": null"));
    assert_eq!(read_report(&path).unwrap(), report);
}

#[test]
fn version_and_shape_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let model = Model::Kms(Box::new(kms_fit(&enumerate_grid()[3], &toy(), 1).unwrap()));
    let text = to_json(&kernelcast::format::ModelDocument { version: 1, model }).replace("\"version\": 1", "\"version\": 7");
    fs::write(&path, text).unwrap();
    assert!(matches!(read_model(&path), Err(Error::Version { found: 7, .. })));
    fs::write(&path, r#"{"version":1,"kind":"kms","refs":{"refs":{"rows":2,"cols":2,"data":[1.0]}}}"#).unwrap();
    assert!(matches!(read_model(&path), Err(Error::Json { .. })));
}

#[test]
fn configs_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let cfg = enumerate_grid()[100];
    fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(read_config(&path).unwrap(), cfg);
    let mut off_grid = cfg;
    off_grid.k_references = 7;
    fs::write(&path, serde_json::to_string(&off_grid).unwrap()).unwrap();
    assert!(matches!(read_config(&path), Err(Error::Core(_))));
}
