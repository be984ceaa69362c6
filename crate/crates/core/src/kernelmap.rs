//! Kernelized feature space: each sample becomes the vector of kernel
//! values of its distances to the references.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::sampling::ReferenceSet;
use crate::{Error, Matrix, Result};

const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// The distance itself.
    Linear,
    /// `exp(-d / sigma)`
    Gaussian,
    /// `1 / (1 + exp(sigma - d))`; grows with distance.
    Sigmoid,
    /// `1 / (1 + d / sigma)`
    Cauchy,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [Self::Linear, Self::Gaussian, Self::Sigmoid, Self::Cauchy];

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Gaussian => "gaussian",
            Self::Sigmoid => "sigmoid",
            Self::Cauchy => "cauchy",
        }
    }

    #[inline]
    fn eval(self, dist: f64, sigma: f64) -> f64 {
        match self {
            Self::Linear => dist,
            Self::Gaussian => exp_clamped(-dist / sigma),
            Self::Sigmoid => 1.0 / (1.0 + exp_clamped(sigma - dist)),
            Self::Cauchy => 1.0 / (1.0 + dist / sigma),
        }
    }
}

#[inline]
fn exp_clamped(v: f64) -> f64 {
    libm::exp(v.clamp(-EXP_LIMIT, EXP_LIMIT))
}

pub fn kernel_value(kind: KernelKind, dist: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    Ok(kind.eval(dist, sigma))
}

/// Mapped rows with the labels of the source dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedDataset {
    pub features: Matrix,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

/// Maps every row of `x` to `k` kernel values, one per reference.
pub fn map_matrix(x: &Matrix, refs: &ReferenceSet, kernel: KernelKind) -> Result<Matrix> {
    if x.cols() != refs.dim() {
        return Err(Error::DimensionMismatch { expected: refs.dim(), found: x.cols() });
    }
    if let Some(&bad) = refs.sigmas.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidSigma(bad));
    }
    let k = refs.len();
    let mut out = Matrix::zeros(x.rows(), k);
    for (i, row) in x.iter_rows().enumerate() {
        let dst = out.row_mut(i);
        for (j, (c, &sigma)) in refs.refs.iter_rows().zip(&refs.sigmas).enumerate() {
            dst[j] = kernel.eval(refs.distance.eval(row, c), sigma);
        }
    }
    Ok(out)
}

pub fn map_dataset(ds: &Dataset, refs: &ReferenceSet, kernel: KernelKind) -> Result<MappedDataset> {
    Ok(MappedDataset {
        features: map_matrix(ds.features(), refs, kernel)?,
        labels: ds.labels().to_vec(),
        n_classes: ds.n_classes(),
    })
}
