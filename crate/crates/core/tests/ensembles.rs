mod common;

use common::blobs;
use kernelcast_core::data::{stratified_split, Dataset};
use kernelcast_core::ensemble::{build_ensemble, consensus_curve, discordance, majority_vote};
use kernelcast_core::modelsel::{random_search, SearchMode, SearchOptions, SearchReport};
use proptest::prelude::*;

fn searched(seed: u64) -> (Dataset, Dataset, SearchReport) {
    let ds = blobs(&[[0.0, 0.0], [2.5, 0.5]], 60, 1.0, seed);
    let (train, test) = stratified_split(&ds, 0.3, seed).unwrap();
    let report = random_search(&train, SearchOptions { mode: SearchMode::Random { sample_size: 40 }, seed, ..SearchOptions::default() }).unwrap();
    (train, test, report)
}

#[test]
fn single_member_ensemble_is_the_best_model() {
    let (train, test, report) = searched(1);
    let ens = build_ensemble(&report, &train, 1, 5).unwrap();
    let best = report.best().unwrap();
    let solo = kernelcast_core::modelsel::kms_fit(&best.config, &train, best.seed).unwrap();
    assert_eq!(ens.predict(test.features()).unwrap(), solo.predict(test.features()).unwrap());
    assert_eq!(ens.members[0].cv_ber, Some(best.cv_ber));
}

#[test]
fn odd_binary_ensembles_never_tie() {
    let (train, test, report) = searched(2);
    for ell in [1, 3, 5, 15] {
        let ens = build_ensemble(&report, &train, ell, 9).unwrap();
        assert!(ens.predict_votes(test.features()).unwrap().iter().all(|v| !v.tied), "ell={ell}");
    }
}

#[test]
fn members_follow_the_ranking() {
    let (train, _, report) = searched(3);
    let ens = build_ensemble(&report, &train, 7, 0).unwrap();
    let ranked = report.ranked();
    for (m, e) in ens.members.iter().zip(&ranked) {
        assert_eq!(m.config, e.config);
    }
    assert!(build_ensemble(&report, &train, ranked.len() + 1, 0).is_err());
}

#[test]
fn ensemble_prediction_is_reproducible() {
    let (train, test, report) = searched(4);
    let a = build_ensemble(&report, &train, 6, 42).unwrap().predict(test.features()).unwrap();
    let b = build_ensemble(&report, &train, 6, 42).unwrap().predict(test.features()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn consensus_curve_shape() {
    let (train, test, report) = searched(5);
    let curve = consensus_curve(&report, &train, test.features(), 3, 2, 11, 1).unwrap();
    let ells: Vec<usize> = curve.points.iter().map(|p| p.ell).collect();
    assert_eq!(ells, [3, 5, 7, 9, 11]);
    let max = curve.points.iter().map(|p| p.raw).fold(0.0, f64::max);
    for p in &curve.points {
        assert!((0.0..=1.0).contains(&p.raw));
        let expected = if max > 0.0 { p.raw / max } else { 0.0 };
        assert_eq!(p.normalized, expected);
        // raw value recomputed from two independently built ensembles
        let small = build_ensemble(&report, &train, p.ell, 1).unwrap().predict(test.features()).unwrap();
        let large = build_ensemble(&report, &train, p.ell + 2, 1).unwrap().predict(test.features()).unwrap();
        assert_eq!(p.raw, discordance(&small, &large).unwrap());
    }
}

#[test]
fn unanimous_members_agree_with_themselves() {
    let (train, test, report) = searched(6);
    let ens = build_ensemble(&report, &train, 5, 3).unwrap();
    let preds = ens.predict(test.features()).unwrap();
    assert_eq!(discordance(&preds, &preds).unwrap(), 0.0);
}

proptest! {
    #[test]
    fn unanimous_vote_wins(label in 0usize..5, n in 1usize..20, seed in any::<u64>()) {
        let v = majority_vote(&vec![label; n], 5, seed);
        prop_assert_eq!(v.label, label);
        prop_assert!(!v.tied);
    }

    #[test]
    fn vote_winner_has_top_count(votes in prop::collection::vec(0usize..4, 1..30), seed in any::<u64>()) {
        let v = majority_vote(&votes, 4, seed);
        let count = |c: usize| votes.iter().filter(|&&x| x == c).count();
        prop_assert!((0..4).all(|c| count(c) <= count(v.label)));
        prop_assert_eq!(v.tied, (0..4).filter(|&c| count(c) == count(v.label)).count() > 1);
    }
}
