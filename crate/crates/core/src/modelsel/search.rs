use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::{ber_breakdown, enumerate_grid, kms_fit, BerVariant, Configuration, KmsModel};
use crate::data::{make_folds, Dataset, FoldPlan, ScalerKind};
use crate::sampling::SamplerKind;
use crate::{seed, Error, Result};

pub const DEFAULT_SAMPLE_SIZE: usize = 128;
pub const DEFAULT_FOLD_COUNT: usize = 3;

/// Serializes non-finite values as `null`.
pub mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Random { sample_size: usize },
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub fold_count: usize,
    pub seed: u64,
    pub sampler_filter: Option<SamplerKind>,
    pub scaler: ScalerKind,
    pub ber: BerVariant,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Random { sample_size: DEFAULT_SAMPLE_SIZE },
            fold_count: DEFAULT_FOLD_COUNT,
            seed: 0,
            sampler_filter: None,
            scaler: ScalerKind::None,
            ber: BerVariant::default(),
        }
    }
}

/// Outcome of one configuration's cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub config: Configuration,
    /// Mean fold BER; `+inf` (serialized as `null`) when fitting failed.
    #[serde(with = "finite_or_null")]
    pub cv_ber: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Evaluation {
    pub fn is_viable(&self) -> bool {
        self.cv_ber.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub fold_count: usize,
    pub seed: u64,
    pub ber: BerVariant,
    pub evaluated: Vec<Evaluation>,
    /// Lowest finite `cv_ber`, first evaluated on ties.
    pub best: Option<usize>,
}

impl SearchReport {
    pub fn best(&self) -> Option<&Evaluation> {
        self.best.map(|i| &self.evaluated[i])
    }

    /// Viable evaluations, ascending by `cv_ber`, stable in evaluation order.
    pub fn ranked(&self) -> Vec<&Evaluation> {
        let mut v: Vec<&Evaluation> = self.evaluated.iter().filter(|e| e.is_viable()).collect();
        v.sort_by(|a, b| a.cv_ber.total_cmp(&b.cv_ber));
        v
    }
}

fn best_index(evaluated: &[Evaluation]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, e) in evaluated.iter().enumerate() {
        if e.is_viable() && best.is_none_or(|b| e.cv_ber < evaluated[b].cv_ber) {
            best = Some(i);
        }
    }
    best
}

/// Seed used to evaluate and refit `cfg` under a search seed.
pub fn config_seed(master: u64, cfg: &Configuration) -> u64 {
    seed::derive(master, cfg.stable_hash())
}

/// Fits `cfg` on the training rows of fold `fold`.
pub fn fit_fold(cfg: &Configuration, ds: &Dataset, folds: &FoldPlan, fold: usize, seed: u64) -> Result<KmsModel> {
    let (train, _) = folds.split(fold);
    kms_fit(cfg, &ds.subset(&train), seed::derive(seed, fold as u64))
}

fn cross_validate(
    cfg: &Configuration,
    ds: &Dataset,
    folds: &FoldPlan,
    seed: u64,
    variant: BerVariant,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    folds.validate_for(ds)?;
    let mut total = 0.0;
    for f in 0..folds.fold_count {
        let (_, test) = folds.split(f);
        let model = fit_fold(cfg, ds, folds, f, seed)?;
        let held_out = ds.subset(&test);
        let predicted = model.predict(held_out.features())?;
        let b = ber_breakdown(variant, held_out.labels(), &predicted, ds.n_classes())?;
        for c in b.classes_without_truth {
            warnings.push(format!("fold {f}: class {c} has no held-out samples"));
        }
        total += b.value;
    }
    Ok(total / folds.fold_count as f64)
}

/// Mean held-out BER over the folds.
pub fn try_evaluate_config(cfg: &Configuration, ds: &Dataset, folds: &FoldPlan, seed: u64) -> Result<f64> {
    cross_validate(cfg, ds, folds, seed, BerVariant::default(), &mut Vec::new())
}

/// Like [`try_evaluate_config`], with failures mapped to `+inf`.
pub fn evaluate_config(cfg: &Configuration, ds: &Dataset, folds: &FoldPlan, seed: u64) -> f64 {
    try_evaluate_config(cfg, ds, folds, seed).unwrap_or(f64::INFINITY)
}

/// The configurations a search will evaluate together with the shared fold
/// plan. Evaluations are independent, so they can be run in any order or in
/// parallel and assembled with [`SearchPlan::report`].
#[derive(Debug, Clone)]
pub struct SearchPlan<'a> {
    pub ds: &'a Dataset,
    pub configs: Vec<Configuration>,
    pub folds: FoldPlan,
    pub options: SearchOptions,
}

impl<'a> SearchPlan<'a> {
    pub fn new(ds: &'a Dataset, options: SearchOptions) -> Result<Self> {
        let grid: Vec<Configuration> = enumerate_grid()
            .into_iter()
            .filter(|c| options.sampler_filter.is_none_or(|s| c.sampler == s))
            .map(|c| c.with_scaler(options.scaler))
            .collect();
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let configs = match options.mode {
            SearchMode::Grid => grid,
            SearchMode::Random { sample_size } if sample_size >= grid.len() => grid,
            SearchMode::Random { sample_size } => {
                if sample_size == 0 {
                    return Err(Error::Empty("search sample"));
                }
                let mut rng = seed::rng(seed::derive(options.seed, 0x5EA2C4));
                index::sample(&mut rng, grid.len(), sample_size).into_iter().map(|i| grid[i]).collect()
            }
        };
        let folds = make_folds(ds, options.fold_count, options.seed)?;
        Ok(Self { ds, configs, folds, options })
    }

    /// Cross-validates one configuration; never fails, errors are recorded.
    pub fn evaluate(&self, cfg: &Configuration) -> Evaluation {
        let seed = config_seed(self.options.seed, cfg);
        let mut warnings = Vec::new();
        let (cv_ber, error) = match cross_validate(cfg, self.ds, &self.folds, seed, self.options.ber, &mut warnings) {
            Ok(v) => (v, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        Evaluation { config: *cfg, cv_ber, seed, wall_time_secs: None, error, warnings }
    }

    /// Assembles a report; `evaluated` must follow `self.configs` order.
    pub fn report(&self, evaluated: Vec<Evaluation>) -> SearchReport {
        SearchReport {
            mode: self.options.mode,
            fold_count: self.options.fold_count,
            seed: self.options.seed,
            ber: self.options.ber,
            best: best_index(&evaluated),
            evaluated,
        }
    }

    pub fn run(&self) -> SearchReport {
        self.report(self.configs.iter().map(|c| self.evaluate(c)).collect())
    }
}

/// Random search over the grid (optionally a single sampler's slice).
pub fn random_search(ds: &Dataset, options: SearchOptions) -> Result<SearchReport> {
    let plan = SearchPlan::new(ds, options)?;
    Ok(plan.run())
}

/// Exhaustive search; `options.mode` is ignored.
pub fn grid_search(ds: &Dataset, options: SearchOptions) -> Result<SearchReport> {
    random_search(ds, SearchOptions { mode: SearchMode::Grid, ..options })
}
