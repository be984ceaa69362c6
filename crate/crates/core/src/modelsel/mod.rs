//! Configuration space, cross-validated evaluation, random and grid search,
//! and fitting of the selected pipeline.

mod ber;
mod config;
mod pipeline;
mod search;

pub use ber::{balanced_error_rate, ber_breakdown, BerBreakdown, BerVariant};
pub use config::{classifier_variants, enumerate_grid, Configuration, NEIGHBOR_COUNTS, REFERENCE_COUNTS};
pub use pipeline::{kms_fit, kms_predict, KmsModel};
pub use search::{
    config_seed, evaluate_config, finite_or_null, fit_fold, grid_search, random_search, try_evaluate_config, Evaluation,
    SearchMode, SearchOptions, SearchPlan, SearchReport, DEFAULT_FOLD_COUNT, DEFAULT_SAMPLE_SIZE,
};
