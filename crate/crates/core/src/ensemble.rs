//! Majority-vote ensembles of the best configurations from a search, and
//! consensus curves for choosing the ensemble size.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::modelsel::{kms_fit, KmsModel, SearchReport};
use crate::{seed, Error, Matrix, Result};

pub const DEFAULT_ENSEMBLE_SIZE: usize = 15;

/// Members sorted ascending by their search score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub members: Vec<KmsModel>,
    pub vote_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vote {
    pub label: usize,
    /// Whether several labels shared the top count.
    pub tied: bool,
}

/// Plurality vote; a tie is broken uniformly at random among the tied labels
/// using `tie_seed`.
pub fn majority_vote(votes: &[usize], n_classes: usize, tie_seed: u64) -> Vote {
    let mut counts = alloc::vec![0usize; n_classes];
    for &v in votes {
        counts[v] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0);
    let tied: Vec<usize> = (0..n_classes).filter(|&c| counts[c] == top).collect();
    if tied.len() == 1 {
        return Vote { label: tied[0], tied: false };
    }
    let mut rng = seed::rng(tie_seed);
    Vote { label: tied[rng.random_range(0..tied.len())], tied: true }
}

/// Refits the `ell` best viable configurations of `report` on `ds`, each
/// with the seed it was evaluated under.
pub fn build_ensemble(report: &SearchReport, ds: &Dataset, ell: usize, vote_seed: u64) -> Result<Ensemble> {
    let ranked = report.ranked();
    if ell == 0 || ranked.len() < ell {
        return Err(Error::NotEnoughModels { requested: ell, available: ranked.len() });
    }
    let members = ranked[..ell]
        .iter()
        .map(|e| {
            let mut m = kms_fit(&e.config, ds, e.seed)?;
            m.cv_ber = Some(e.cv_ber);
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble { members, vote_seed })
}

/// Per-member predictions, row `m` holding member `m`'s labels.
fn member_predictions(members: &[KmsModel], queries: &Matrix) -> Result<Vec<Vec<usize>>> {
    members.iter().map(|m| m.predict(queries)).collect()
}

fn vote_rows(preds: &[Vec<usize>], n_classes: usize, vote_seed: u64, n_queries: usize) -> Vec<Vote> {
    let mut ballot = Vec::with_capacity(preds.len());
    (0..n_queries)
        .map(|q| {
            ballot.clear();
            ballot.extend(preds.iter().map(|p| p[q]));
            majority_vote(&ballot, n_classes, seed::derive(vote_seed, q as u64))
        })
        .collect()
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.members.first().map_or(0, |m| m.label_names.len())
    }

    pub fn predict_votes(&self, queries: &Matrix) -> Result<Vec<Vote>> {
        if self.members.is_empty() {
            return Err(Error::Empty("ensemble"));
        }
        let preds = member_predictions(&self.members, queries)?;
        Ok(vote_rows(&preds, self.n_classes(), self.vote_seed, queries.rows()))
    }

    pub fn predict(&self, queries: &Matrix) -> Result<Vec<usize>> {
        Ok(self.predict_votes(queries)?.into_iter().map(|v| v.label).collect())
    }
}

pub fn ensemble_predict(ens: &Ensemble, queries: &Matrix) -> Result<Vec<usize>> {
    ens.predict(queries)
}

/// Fraction of positions where the two label vectors differ.
pub fn discordance(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsensusPoint {
    pub ell: usize,
    pub raw: f64,
    /// `raw` divided by the curve maximum (0 when nothing disagrees).
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusCurve {
    pub step: usize,
    pub points: Vec<ConsensusPoint>,
}

/// Discordance between the top-`ell` and top-`(ell + step)` ensembles on
/// `eval`, for `ell = ell_start, ell_start + step, ..., <= ell_max`.
pub fn consensus_curve(
    report: &SearchReport,
    train: &Dataset,
    eval: &Matrix,
    ell_start: usize,
    step: usize,
    ell_max: usize,
    vote_seed: u64,
) -> Result<ConsensusCurve> {
    if ell_start == 0 || step == 0 || ell_max < ell_start {
        return Err(Error::InvalidConfiguration("consensus needs 1 <= ell_start <= ell_max and step >= 1".into()));
    }
    let needed = ell_max + step;
    let ens = build_ensemble(report, train, needed, vote_seed)?;
    let preds = member_predictions(&ens.members, eval)?;
    let n_classes = ens.n_classes();
    let labels_of = |ell: usize| -> Vec<usize> {
        vote_rows(&preds[..ell], n_classes, vote_seed, eval.rows()).into_iter().map(|v| v.label).collect()
    };
    let mut points = Vec::new();
    let mut ell = ell_start;
    while ell <= ell_max {
        let raw = discordance(&labels_of(ell), &labels_of(ell + step))?;
        points.push(ConsensusPoint { ell, raw, normalized: 0.0 });
        ell += step;
    }
    let max = points.iter().map(|p| p.raw).fold(0.0, f64::max);
    if max > 0.0 {
        points.iter_mut().for_each(|p| p.normalized = p.raw / max);
    }
    Ok(ConsensusCurve { step, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plurality() {
        assert_eq!(majority_vote(&[0, 0, 1], 2, 1), Vote { label: 0, tied: false });
        assert_eq!(majority_vote(&[2, 1, 2, 0], 3, 1), Vote { label: 2, tied: false });
    }

    #[test]
    fn seeded_ties() {
        let first = majority_vote(&[0, 1], 2, 77);
        assert!(first.tied);
        for _ in 0..5 {
            assert_eq!(majority_vote(&[0, 1], 2, 77), first);
        }
        // both outcomes occur across seeds
        let picks: Vec<usize> = (0..64).map(|s| majority_vote(&[1, 0], 2, s).label).collect();
        assert!(picks.contains(&0) && picks.contains(&1));
        // a class without votes never wins a tie
        assert!((0..64).all(|s| majority_vote(&[0, 2], 3, s).label != 1));
    }

    #[test]
    fn discordance_examples() {
        assert_eq!(discordance(&[0, 1, 1, 0], &[0, 1, 1, 0]).unwrap(), 0.0);
        assert_eq!(discordance(&[0, 1, 1, 0], &[1, 1, 0, 0]).unwrap(), 0.5);
        assert_eq!(discordance(&[1, 1, 0, 0], &[0, 1, 1, 0]).unwrap(), 0.5);
        assert!(discordance(&[0], &[]).is_err());
    }
}
