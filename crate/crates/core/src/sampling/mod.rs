//! Reference selection: which points the kernel map measures distances to.
//!
//! Four samplers pick candidate references from the training rows. The
//! picks are then either kept as *centers* (actual training rows) or
//! replaced by the *centroid* of the Voronoi region each one induces over
//! the training set. Every reference carries a scale `sigma`, the largest
//! distance from it to a training point in its region.

mod density;
mod fft;
mod kmeans;

use alloc::vec::Vec;

use rand::seq::index;
use serde::{Deserialize, Serialize};

pub use density::{sample_density, DensityNet};
pub use fft::{sample_fft, FarthestFirst};
pub use kmeans::{kmeans, sample_kmeans, KMeansFit, KMEANS_MAX_ITERS};

use crate::geometry::{centroid, DistanceKind};
use crate::{seed, Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    Random,
    #[serde(rename = "kmeans")]
    KMeans,
    Density,
    Fft,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 4] = [Self::Density, Self::Fft, Self::KMeans, Self::Random];

    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::KMeans => "kmeans",
            Self::Density => "density",
            Self::Fft => "fft",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefType {
    Centers,
    Centroids,
}

impl RefType {
    pub const ALL: [RefType; 2] = [Self::Centers, Self::Centroids];

    pub fn name(self) -> &'static str {
        match self {
            Self::Centers => "centers",
            Self::Centroids => "centroids",
        }
    }
}

/// Selected references and their kernel scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub refs: Matrix,
    pub sigmas: Vec<f64>,
    pub sampler: SamplerKind,
    pub distance: DistanceKind,
    pub ref_type: RefType,
}

impl ReferenceSet {
    pub fn len(&self) -> usize {
        self.refs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.refs.cols()
    }

    /// Nearest reference of every row of `x`.
    pub fn assign(&self, x: &Matrix) -> Result<RegionAssignment> {
        if x.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.cols() });
        }
        Ok(assign_regions(x, &self.refs, self.distance).0)
    }
}

/// Index of the nearest reference for every sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionAssignment {
    pub region_of: Vec<usize>,
}

impl RegionAssignment {
    pub fn region_sizes(&self, k: usize) -> Vec<usize> {
        let mut sizes = alloc::vec![0; k];
        for &r in &self.region_of {
            sizes[r] += 1;
        }
        sizes
    }
}

/// Output of a sampler before finalization.
#[derive(Debug, Clone, PartialEq)]
pub enum Picked {
    /// Training row indices.
    Rows(Vec<usize>),
    /// Points that are not training rows (k-means centroids).
    Points(Matrix),
}

/// How `sigma` is assigned to each reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// Largest distance to a training point in the reference's region.
    PerRegion,
    /// One value for every reference, e.g. the final traversal radius.
    Shared(f64),
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Empty("reference set"));
    }
    if k > n {
        return Err(Error::TooManyReferences { requested: k, available: n });
    }
    Ok(())
}

/// `k` distinct row indices drawn uniformly without replacement.
pub fn sample_random(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    check_k(k, n)?;
    let mut rng = seed::rng(seed);
    Ok(index::sample(&mut rng, n, k).into_vec())
}

/// Nearest reference (ties to the lowest index) and its distance, for every row.
pub(crate) fn assign_regions(x: &Matrix, refs: &Matrix, dist: DistanceKind) -> (RegionAssignment, Vec<f64>) {
    let mut region_of = Vec::with_capacity(x.rows());
    let mut dists = Vec::with_capacity(x.rows());
    for row in x.iter_rows() {
        let mut best = (0, f64::INFINITY);
        for (j, r) in refs.iter_rows().enumerate() {
            let d = dist.eval(row, r);
            if d < best.1 {
                best = (j, d);
            }
        }
        region_of.push(best.0);
        dists.push(best.1);
    }
    (RegionAssignment { region_of }, dists)
}

/// Replaces zero scales (empty or single-point regions) with the mean of the
/// positive ones, or 1 when none is positive.
pub(crate) fn repair_sigmas(sigmas: &mut [f64]) {
    let (sum, count) = sigmas
        .iter()
        .filter(|s| **s > 0.0 && s.is_finite())
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    let fallback = if count == 0 { 1.0 } else { sum / count as f64 };
    for s in sigmas.iter_mut() {
        if !(*s > 0.0 && s.is_finite()) {
            *s = fallback;
        }
    }
}

/// Turns sampler picks into a [`ReferenceSet`]. With `Centroids`, picked rows
/// are replaced by the mean of their Voronoi region over `x`; a pick whose
/// region is empty stays as it is.
pub fn finalize_references(
    x: &Matrix,
    picked: Picked,
    ref_type: RefType,
    distance: DistanceKind,
    sampler: SamplerKind,
    sigma: SigmaRule,
) -> Result<ReferenceSet> {
    let (mut refs, from_rows) = match picked {
        Picked::Rows(idx) => {
            if let Some(&bad) = idx.iter().find(|&&i| i >= x.rows()) {
                return Err(Error::TooManyReferences { requested: bad + 1, available: x.rows() });
            }
            (x.select_rows(&idx), true)
        }
        Picked::Points(m) => (m, false),
    };
    if refs.rows() == 0 {
        return Err(Error::Empty("reference set"));
    }
    if refs.cols() != x.cols() {
        return Err(Error::DimensionMismatch { expected: x.cols(), found: refs.cols() });
    }
    if from_rows && ref_type == RefType::Centroids {
        let (regions, _) = assign_regions(x, &refs, distance);
        let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); refs.rows()];
        for (i, &r) in regions.region_of.iter().enumerate() {
            members[r].push(i);
        }
        for (j, m) in members.iter().enumerate() {
            if !m.is_empty() {
                let c = centroid(m.iter().map(|&i| x.row(i)))?;
                refs.row_mut(j).copy_from_slice(&c);
            }
        }
    }
    let mut sigmas = match sigma {
        SigmaRule::Shared(r) => alloc::vec![r; refs.rows()],
        SigmaRule::PerRegion => {
            let (regions, dists) = assign_regions(x, &refs, distance);
            let mut s = alloc::vec![0.0f64; refs.rows()];
            for (&r, &d) in regions.region_of.iter().zip(&dists) {
                s[r] = s[r].max(d);
            }
            s
        }
    };
    repair_sigmas(&mut sigmas);
    Ok(ReferenceSet { refs, sigmas, sampler, distance, ref_type })
}

/// Runs `sampler` on `x` and finalizes the picks with per-region scales.
/// K-means only admits Euclidean distance and centroid references.
pub fn build_references(
    x: &Matrix,
    sampler: SamplerKind,
    k: usize,
    distance: DistanceKind,
    ref_type: RefType,
    seed: u64,
) -> Result<ReferenceSet> {
    let picked = match sampler {
        SamplerKind::Random => Picked::Rows(sample_random(x.rows(), k, seed)?),
        SamplerKind::Density => Picked::Rows(sample_density(x, k, distance, seed)?.centers),
        SamplerKind::Fft => Picked::Rows(sample_fft(x, k, distance, seed)?.centers),
        SamplerKind::KMeans => {
            if distance != DistanceKind::Euclidean || ref_type != RefType::Centroids {
                return Err(Error::InvalidConfiguration(
                    "kmeans requires euclidean distance and centroid references".into(),
                ));
            }
            Picked::Points(kmeans(x, k, seed, KMEANS_MAX_ITERS)?.centroids)
        }
    };
    finalize_references(x, picked, ref_type, distance, sampler, SigmaRule::PerRegion)
}
