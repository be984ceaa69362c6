//! Labeled datasets, stratified splitting and folding, feature scaling.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::{seed, Error, Matrix, Result};

/// Real-valued samples with integer labels indexing `label_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<usize>,
    label_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<usize>, label_names: Vec<String>) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::LengthMismatch { left: features.rows(), right: labels.len() });
        }
        if let Some((row, col)) = features.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= label_names.len()) {
            return Err(Error::LabelOutOfRange { label, n_classes: label_names.len() });
        }
        Ok(Self { features, labels, label_names })
    }

    /// Encodes string labels by order of first appearance. Requires at
    /// least two rows and two distinct labels.
    pub fn from_labeled_rows<R: AsRef<[f64]>, S: AsRef<str>>(rows: &[R], labels: &[S]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch { left: rows.len(), right: labels.len() });
        }
        if rows.len() < 2 {
            return Err(Error::TooFewRows(rows.len()));
        }
        let features = Matrix::from_rows(rows)?;
        let mut names: Vec<String> = Vec::new();
        let mut ids = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let id = match names.iter().position(|n| n == l) {
                Some(id) => id,
                None => {
                    names.push(l.to_string());
                    names.len() - 1
                }
            };
            ids.push(id);
        }
        if names.len() < 2 {
            return Err(Error::TooFewClasses(names.len()));
        }
        Self::new(features, ids, names)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn n_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Rows `idx` in the given order, sharing this dataset's vocabulary.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            label_names: self.label_names.clone(),
        }
    }

    /// Same labels and vocabulary over a replacement feature matrix.
    pub fn with_features(&self, features: Matrix) -> Result<Self> {
        Self::new(features, self.labels.clone(), self.label_names.clone())
    }

    fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = alloc::vec![Vec::new(); self.n_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            by_class[l].push(i);
        }
        by_class
    }
}

/// Splits each class independently so the test side holds
/// `round(count * test_fraction)` of it, clamped to keep one sample on each side.
pub fn stratified_split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidFraction(test_fraction));
    }
    let mut rng = seed::rng(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut idx) in ds.indices_by_class().into_iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 2 {
            return Err(Error::ClassTooSmall { class, count: idx.len(), required: 2 });
        }
        idx.shuffle(&mut rng);
        let n_test = (libm::round(idx.len() as f64 * test_fraction) as usize).clamp(1, idx.len() - 1);
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((ds.subset(&train), ds.subset(&test)))
}

/// Fold index per sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub fold_count: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    /// `(train, test)` row indices for fold `f`, both ascending.
    pub fn split(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &a) in self.assignments.iter().enumerate() {
            if a == f {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }

    pub fn validate_for(&self, ds: &Dataset) -> Result<()> {
        if self.assignments.len() != ds.n_samples() {
            return Err(Error::LengthMismatch { left: self.assignments.len(), right: ds.n_samples() });
        }
        if self.fold_count < 2 {
            return Err(Error::InvalidFoldCount(self.fold_count));
        }
        let mut seen = alloc::vec![false; self.fold_count];
        for &a in &self.assignments {
            if a >= self.fold_count {
                return Err(Error::InvalidFoldCount(self.fold_count));
            }
            seen[a] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Empty("fold"));
        }
        Ok(())
    }
}

/// Stratified fold assignment: each class is shuffled and dealt round-robin,
/// continuing from where the previous class stopped so fold sizes stay level.
pub fn make_folds(ds: &Dataset, fold_count: usize, seed: u64) -> Result<FoldPlan> {
    if fold_count < 2 {
        return Err(Error::InvalidFoldCount(fold_count));
    }
    let mut rng = seed::rng(seed);
    let mut assignments = alloc::vec![0; ds.n_samples()];
    let mut offset = 0;
    for (class, mut idx) in ds.indices_by_class().into_iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < fold_count {
            return Err(Error::ClassTooSmall { class, count: idx.len(), required: fold_count });
        }
        idx.shuffle(&mut rng);
        for (j, &i) in idx.iter().enumerate() {
            assignments[i] = (offset + j) % fold_count;
        }
        offset = (offset + idx.len()) % fold_count;
    }
    Ok(FoldPlan { fold_count, assignments })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalerKind {
    #[default]
    None,
    Standardize,
    MinMax,
    MaxAbs,
}

impl ScalerKind {
    pub const ALL: [ScalerKind; 4] = [Self::None, Self::Standardize, Self::MinMax, Self::MaxAbs];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Standardize => "standardize",
            Self::MinMax => "minmax",
            Self::MaxAbs => "maxabs",
        }
    }
}

/// Per-column affine map `x -> (x - shift) / scale`, learned on training data.
/// A zero `scale` marks a degenerate column, which maps to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerSpec {
    pub kind: ScalerKind,
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

impl ScalerSpec {
    pub fn fit(kind: ScalerKind, x: &Matrix) -> Self {
        let d = x.cols();
        let mut shift = alloc::vec![0.0; d];
        let mut scale = alloc::vec![1.0; d];
        if kind == ScalerKind::None || x.rows() == 0 {
            return Self { kind, shift, scale };
        }
        let n = x.rows() as f64;
        for j in 0..d {
            let (lo, hi) = x.column(j).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            match kind {
                ScalerKind::None => {}
                ScalerKind::Standardize => {
                    let mean = x.column(j).sum::<f64>() / n;
                    let var = x.column(j).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                    shift[j] = mean;
                    scale[j] = if lo == hi { 0.0 } else { libm::sqrt(var) };
                }
                ScalerKind::MinMax => {
                    shift[j] = lo;
                    scale[j] = hi - lo;
                }
                ScalerKind::MaxAbs => {
                    scale[j] = lo.abs().max(hi.abs());
                }
            }
        }
        Self { kind, shift, scale }
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.scale.len() {
            return Err(Error::DimensionMismatch { expected: self.scale.len(), found: x.cols() });
        }
        if self.kind == ScalerKind::None {
            return Ok(x.clone());
        }
        let mut out = x.clone();
        for i in 0..out.rows() {
            for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                *v = if self.scale[j] == 0.0 { 0.0 } else { (*v - self.shift[j]) / self.scale[j] };
            }
        }
        Ok(out)
    }
}

pub fn fit_scaler(kind: ScalerKind, ds: &Dataset) -> ScalerSpec {
    ScalerSpec::fit(kind, ds.features())
}

pub fn apply_scaler(spec: &ScalerSpec, ds: &Dataset) -> Result<Dataset> {
    ds.with_features(spec.transform(ds.features())?)
}
