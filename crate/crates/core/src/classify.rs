//! Internal classifiers for the mapped space: k-nearest neighbours and
//! Gaussian naive Bayes. All argmax ties resolve to the lowest label id.

use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::DistanceKind;
use crate::kernelmap::MappedDataset;
use crate::{Error, Matrix, Result};

/// Added to neighbour distances before inverting them.
pub const DISTANCE_WEIGHT_EPS: f64 = 1e-9;
/// Relative floor on naive Bayes variances.
pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Uniform,
    Distance,
}

impl Weighting {
    pub const ALL: [Weighting; 2] = [Self::Distance, Self::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Distance => "distance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnnParams {
    pub neighbors: usize,
    pub weighting: Weighting,
    pub distance: DistanceKind,
}

/// Index of the largest score; the first one wins ties.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn check_fit_input(mds: &MappedDataset) -> Result<()> {
    if mds.features.rows() == 0 {
        return Err(Error::Empty("training set"));
    }
    if mds.labels.len() != mds.features.rows() {
        return Err(Error::LengthMismatch { left: mds.features.rows(), right: mds.labels.len() });
    }
    if let Some(&label) = mds.labels.iter().find(|&&l| l >= mds.n_classes) {
        return Err(Error::LabelOutOfRange { label, n_classes: mds.n_classes });
    }
    Ok(())
}

/// Lazy learner: keeps the mapped training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub params: KnnParams,
    pub data: Matrix,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl KnnModel {
    pub fn fit(mds: &MappedDataset, params: KnnParams) -> Result<Self> {
        check_fit_input(mds)?;
        if params.neighbors == 0 {
            return Err(Error::InvalidConfiguration("knn needs at least one neighbor".into()));
        }
        Ok(Self { params, data: mds.features.clone(), labels: mds.labels.clone(), n_classes: mds.n_classes })
    }

    /// Neighbour count is clamped to the number of stored rows. Neighbours at
    /// equal distance are ranked by stored row index.
    pub fn predict(&self, queries: &Matrix) -> Result<Vec<usize>> {
        if queries.cols() != self.data.cols() {
            return Err(Error::DimensionMismatch { expected: self.data.cols(), found: queries.cols() });
        }
        let k = self.params.neighbors.min(self.data.rows());
        let mut cand: Vec<(f64, usize)> = Vec::with_capacity(self.data.rows());
        let mut scores = alloc::vec![0.0; self.n_classes];
        let mut out = Vec::with_capacity(queries.rows());
        for q in queries.iter_rows() {
            cand.clear();
            cand.extend(self.data.iter_rows().enumerate().map(|(i, r)| (self.params.distance.eval(q, r), i)));
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            }
            scores.iter_mut().for_each(|s| *s = 0.0);
            for &(d, i) in &cand[..k] {
                scores[self.labels[i]] += match self.params.weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Distance => 1.0 / (DISTANCE_WEIGHT_EPS + d),
                };
            }
            out.push(argmax(&scores));
        }
        Ok(out)
    }
}

/// Gaussian naive Bayes with per-class priors, means and variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    pub priors: Vec<f64>,
    /// `n_classes x d`
    pub means: Matrix,
    /// `n_classes x d`, already floored.
    pub variances: Matrix,
}

impl GnbModel {
    pub fn fit(mds: &MappedDataset) -> Result<Self> {
        check_fit_input(mds)?;
        let x = &mds.features;
        let (n, d, c) = (x.rows(), x.cols(), mds.n_classes);
        let mut counts = alloc::vec![0usize; c];
        let mut means = Matrix::zeros(c, d);
        for (row, &l) in x.iter_rows().zip(&mds.labels) {
            counts[l] += 1;
            for (m, v) in means.row_mut(l).iter_mut().zip(row) {
                *m += v;
            }
        }
        for (l, &cnt) in counts.iter().enumerate() {
            if cnt > 0 {
                means.row_mut(l).iter_mut().for_each(|m| *m /= cnt as f64);
            }
        }
        let mut variances = Matrix::zeros(c, d);
        for (row, &l) in x.iter_rows().zip(&mds.labels) {
            let mu = means.row(l).to_vec();
            for ((s, v), m) in variances.row_mut(l).iter_mut().zip(row).zip(&mu) {
                *s += (v - m) * (v - m);
            }
        }
        for (l, &cnt) in counts.iter().enumerate() {
            if cnt > 0 {
                variances.row_mut(l).iter_mut().for_each(|s| *s /= cnt as f64);
            }
        }
        // floor relative to the average overall feature variance
        let mut mean_var = 0.0;
        for j in 0..d {
            let mu = x.column(j).sum::<f64>() / n as f64;
            mean_var += x.column(j).map(|v| (v - mu) * (v - mu)).sum::<f64>() / n as f64;
        }
        mean_var /= d.max(1) as f64;
        let floor = if mean_var > 0.0 { VARIANCE_FLOOR * mean_var } else { VARIANCE_FLOOR };
        for l in 0..c {
            variances.row_mut(l).iter_mut().for_each(|v| *v = v.max(floor));
        }
        let priors = counts.iter().map(|&k| k as f64 / n as f64).collect();
        Ok(Self { priors, means, variances })
    }

    /// Joint log-likelihood `log P(c) + sum_j log N(x_j; mean, var)` per class;
    /// classes absent from training get `-inf`.
    pub fn log_scores(&self, x: &[f64]) -> Vec<f64> {
        self.priors
            .iter()
            .enumerate()
            .map(|(c, &p)| {
                if p == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut s = libm::log(p);
                for ((v, m), var) in x.iter().zip(self.means.row(c)).zip(self.variances.row(c)) {
                    s += -0.5 * libm::log(2.0 * PI * var) - (v - m) * (v - m) / (2.0 * var);
                }
                s
            })
            .collect()
    }

    pub fn predict(&self, queries: &Matrix) -> Result<Vec<usize>> {
        if queries.cols() != self.means.cols() {
            return Err(Error::DimensionMismatch { expected: self.means.cols(), found: queries.cols() });
        }
        Ok(queries.iter_rows().map(|q| argmax(&self.log_scores(q))).collect())
    }
}

/// Choice of internal classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classifier {
    NaiveBayes,
    Knn(KnnParams),
}

impl Classifier {
    pub fn fit(&self, mds: &MappedDataset) -> Result<InnerModel> {
        Ok(match *self {
            Self::NaiveBayes => InnerModel::NaiveBayes(GnbModel::fit(mds)?),
            Self::Knn(params) => InnerModel::Knn(KnnModel::fit(mds, params)?),
        })
    }
}

/// A fitted internal classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerModel {
    NaiveBayes(GnbModel),
    Knn(KnnModel),
}

impl InnerModel {
    pub fn predict(&self, queries: &Matrix) -> Result<Vec<usize>> {
        match self {
            Self::NaiveBayes(m) => m.predict(queries),
            Self::Knn(m) => m.predict(queries),
        }
    }
}

pub fn knn_fit(mds: &MappedDataset, params: KnnParams) -> Result<KnnModel> {
    KnnModel::fit(mds, params)
}

pub fn knn_predict(model: &KnnModel, queries: &Matrix) -> Result<Vec<usize>> {
    model.predict(queries)
}

pub fn gnb_fit(mds: &MappedDataset) -> Result<GnbModel> {
    GnbModel::fit(mds)
}

pub fn gnb_predict(model: &GnbModel, queries: &Matrix) -> Result<Vec<usize>> {
    model.predict(queries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mapped(rows: &[&[f64]], labels: &[usize], n_classes: usize) -> MappedDataset {
        MappedDataset { features: Matrix::from_rows(rows).unwrap(), labels: labels.to_vec(), n_classes }
    }

    fn knn(neighbors: usize, weighting: Weighting) -> KnnParams {
        KnnParams { neighbors, weighting, distance: DistanceKind::Euclidean }
    }

    #[test]
    fn knn_self_prediction() {
        let m = mapped(&[&[0.0], &[1.0], &[5.0]], &[1, 0, 1], 2);
        let model = knn_fit(&m, knn(1, Weighting::Uniform)).unwrap();
        assert_eq!(model.predict(&m.features).unwrap(), [1, 0, 1]);
    }

    #[test]
    fn knn_single_sample() {
        let m = mapped(&[&[0.0, 1.0]], &[1], 2);
        let model = knn_fit(&m, knn(21, Weighting::Distance)).unwrap();
        let q = Matrix::from_rows(&[[3.0, 3.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(model.predict(&q).unwrap(), [1, 1]);
    }

    #[test]
    fn knn_duplicate_rows_lowest_index_wins() {
        let m = mapped(&[&[2.0], &[2.0]], &[1, 0], 2);
        let model = knn_fit(&m, knn(1, Weighting::Uniform)).unwrap();
        assert_eq!(model.predict(&Matrix::from_rows(&[[2.0]]).unwrap()).unwrap(), [1]);
    }

    #[test]
    fn knn_votes() {
        // labels A=0, B=1
        let m = mapped(&[&[1.0], &[2.0], &[3.0], &[100.0]], &[0, 0, 1, 1], 2);
        let q = Matrix::from_rows(&[[0.0]]).unwrap();
        assert_eq!(knn_fit(&m, knn(3, Weighting::Uniform)).unwrap().predict(&q).unwrap(), [0]);

        let m = mapped(&[&[1.0], &[-3.0]], &[0, 1], 2);
        assert_eq!(knn_fit(&m, knn(2, Weighting::Distance)).unwrap().predict(&q).unwrap(), [0]);

        // uniform tie goes to the lower label id even if it is farther
        let m = mapped(&[&[3.0], &[1.0]], &[0, 1], 2);
        assert_eq!(knn_fit(&m, knn(2, Weighting::Uniform)).unwrap().predict(&q).unwrap(), [0]);
    }

    #[test]
    fn knn_errors() {
        let m = mapped(&[&[1.0]], &[0], 2);
        let model = knn_fit(&m, knn(1, Weighting::Uniform)).unwrap();
        assert!(matches!(model.predict(&Matrix::from_rows(&[[1.0, 2.0]]).unwrap()), Err(Error::DimensionMismatch { .. })));
        let empty = MappedDataset { features: Matrix::zeros(0, 1), labels: vec![], n_classes: 2 };
        assert_eq!(knn_fit(&empty, knn(1, Weighting::Uniform)).unwrap_err(), Error::Empty("training set"));
        assert!(gnb_fit(&empty).is_err());
    }

    #[test]
    fn gnb_symmetric_classes() {
        let m = mapped(&[&[-2.0], &[0.0], &[0.0], &[2.0]], &[0, 0, 1, 1], 2);
        let model = gnb_fit(&m).unwrap();
        assert_eq!(model.means.as_slice(), [-1.0, 1.0]);
        assert_eq!(model.variances.as_slice(), [1.0, 1.0]);
        let q = Matrix::from_rows(&[[0.9], [0.0], [-0.1]]).unwrap();
        assert_eq!(model.predict(&q).unwrap(), [1, 0, 0]);
        assert!((model.priors.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gnb_single_class() {
        let m = mapped(&[&[1.0, 2.0], &[3.0, 1.0]], &[1, 1], 3);
        let model = gnb_fit(&m).unwrap();
        let q = Matrix::from_rows(&[[100.0, -100.0], [2.0, 1.5]]).unwrap();
        assert_eq!(model.predict(&q).unwrap(), [1, 1]);
    }

    #[test]
    fn gnb_constant_columns_are_floored() {
        let m = mapped(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 5.0], &[1.0, 6.0]], &[0, 0, 1, 1], 2);
        let model = gnb_fit(&m).unwrap();
        assert!(model.variances.as_slice().iter().all(|v| *v > 0.0));
        let q = Matrix::from_rows(&[[1.0, 0.2], [1.0, 5.8]]).unwrap();
        assert_eq!(model.predict(&q).unwrap(), [0, 1]);
        let all_const = mapped(&[&[1.0], &[1.0]], &[0, 1], 2);
        let model = gnb_fit(&all_const).unwrap();
        assert_eq!(model.predict(&Matrix::from_rows(&[[1.0]]).unwrap()).unwrap(), [0]);
    }
}
