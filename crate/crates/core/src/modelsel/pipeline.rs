use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Configuration;
use crate::classify::InnerModel;
use crate::data::{Dataset, ScalerSpec};
use crate::kernelmap::{map_dataset, map_matrix};
use crate::sampling::{build_references, ReferenceSet};
use crate::{Error, Matrix, Result};

/// A fitted pipeline: scaler, references, kernel map and internal classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmsModel {
    pub config: Configuration,
    pub scaler: ScalerSpec,
    pub refs: ReferenceSet,
    pub inner: InnerModel,
    /// Cross-validated score from the search that selected this configuration.
    pub cv_ber: Option<f64>,
    pub label_names: Vec<String>,
}

impl KmsModel {
    pub fn n_features(&self) -> usize {
        self.refs.dim()
    }

    /// Scaled and kernel-mapped rows of `x`.
    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.n_features() {
            return Err(Error::DimensionMismatch { expected: self.n_features(), found: x.cols() });
        }
        map_matrix(&self.scaler.transform(x)?, &self.refs, self.config.kernel)
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        self.inner.predict(&self.transform(x)?)
    }
}

pub fn kms_fit(cfg: &Configuration, ds: &Dataset, seed: u64) -> Result<KmsModel> {
    cfg.validate()?;
    let scaler = ScalerSpec::fit(cfg.scaler, ds.features());
    let scaled = ds.with_features(scaler.transform(ds.features())?)?;
    let refs = build_references(
        scaled.features(),
        cfg.sampler,
        cfg.k_references,
        cfg.sampling_distance,
        cfg.ref_type,
        seed,
    )?;
    let mapped = map_dataset(&scaled, &refs, cfg.kernel)?;
    let inner = cfg.classifier.fit(&mapped)?;
    Ok(KmsModel { config: *cfg, scaler, refs, inner, cv_ber: None, label_names: ds.label_names().to_vec() })
}

pub fn kms_predict(model: &KmsModel, queries: &Matrix) -> Result<Vec<usize>> {
    model.predict(queries)
}
