mod common;

use kernelcast::benchmark::{mid_ranks, read_manifest, run_benchmark, BenchmarkOptions, Method, Strategy};
use kernelcast_core::modelsel::BerVariant;
use kernelcast_core::sampling::SamplerKind;
use proptest::prelude::*;

#[test]
fn rank_examples() {
    assert_eq!(mid_ranks(&[0.1, 0.2]), [1.0, 2.0]);
    assert_eq!(mid_ranks(&[0.3, 0.3]), [1.5, 1.5]);
    assert_eq!(mid_ranks(&[0.5, 0.1, 0.5, 0.2]), [3.5, 1.0, 3.5, 2.0]);
}

proptest! {
    #[test]
    fn ranks_are_mid_ranked_permutations(values in prop::collection::vec(0u8..6, 1..12)) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let ranks = mid_ranks(&values);
        let m = values.len() as f64;
        prop_assert!((ranks.iter().sum::<f64>() - m * (m + 1.0) / 2.0).abs() < 1e-9);
        for i in 0..values.len() {
            // rank = 1 + #smaller + #equal-others / 2
            let smaller = values.iter().filter(|v| **v < values[i]).count() as f64;
            let equal = values.iter().filter(|v| **v == values[i]).count() as f64 - 1.0;
            prop_assert_eq!(ranks[i], 1.0 + smaller + equal / 2.0);
        }
    }
}

#[test]
fn method_names() {
    for name in ["kms-rs", "kmse-rs", "kms-gs", "kmse-fft", "kms-kmeans", "kmse-density", "kms-random"] {
        assert_eq!(name.parse::<Method>().unwrap().to_string(), name);
    }
    assert_eq!(
        "kmse-fft".parse::<Method>().unwrap(),
        Method { ensemble: true, strategy: Strategy::Sampler(SamplerKind::Fft) }
    );
    for bad in ["kms", "knn-rs", "kms-xx", ""] {
        assert!(bad.parse::<Method>().is_err(), "{bad}");
    }
}

#[test]
fn manifest_paths_are_relative_to_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = common::write_manifest(dir.path(), &[("alpha", 3.0)], 2);
    let m = read_manifest(&path).unwrap();
    assert_eq!(m.datasets[0].splits[1].train, dir.path().join("alpha/train_1.csv"));
    assert!(m.datasets[0].has_header);
    std::fs::write(&path, r#"{"datasets":[{"name":"a","splits":[]}]}"#).unwrap();
    assert!(read_manifest(&path).is_err());
}

#[test]
fn benchmark_report_is_consistent_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = common::write_manifest(dir.path(), &[("easy", 3.0), ("hard", 0.4)], 3);
    let manifest = read_manifest(&path).unwrap();
    let options = BenchmarkOptions {
        methods: ["kms-rs", "kmse-rs", "kms-fft"].iter().map(|m| m.parse().unwrap()).collect(),
        max_splits: Some(2),
        budget: 12,
        ensemble_size: 5,
        metric: BerVariant::FalseNegatives,
        seed: 4,
        ..BenchmarkOptions::default()
    };
    let report = run_benchmark(&manifest, &options).unwrap();
    assert!(report.split_cap.is_some());
    for d in &report.datasets {
        assert_eq!((d.splits_used, d.splits_available), (2, 3));
        let means: Vec<f64> = d.methods.iter().map(|m| m.mean_ber).collect();
        assert_eq!(d.methods.iter().map(|m| m.rank).collect::<Vec<_>>(), mid_ranks(&means));
        for m in &d.methods {
            assert_eq!(m.split_bers.len(), 2);
            assert!((m.mean_ber - m.split_bers.iter().sum::<f64>() / 2.0).abs() < 1e-15);
        }
    }
    let easy = &report.datasets[0];
    assert!(easy.methods.iter().all(|m| m.mean_ber < 0.1), "{easy:?}");
    // average ranks are the means of the per-dataset ranks, sorted ascending
    for a in &report.average_ranks {
        let mean = report.datasets.iter().map(|d| d.methods.iter().find(|m| m.method == a.method).unwrap().rank).sum::<f64>() / 2.0;
        assert_eq!(a.rank, mean);
    }
    assert!(report.average_ranks.windows(2).all(|w| w[0].rank <= w[1].rank));
    assert_eq!(run_benchmark(&manifest, &options).unwrap(), report);
}
