use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classify::{Classifier, KnnParams, Weighting};
use crate::data::ScalerKind;
use crate::geometry::DistanceKind;
use crate::kernelmap::KernelKind;
use crate::sampling::{RefType, SamplerKind};
use crate::{seed, Error, Result};

pub const REFERENCE_COUNTS: [usize; 5] = [4, 8, 16, 32, 64];
pub const NEIGHBOR_COUNTS: [usize; 4] = [1, 5, 11, 21];

/// One pipeline: sampler, references, kernel and internal classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub k_references: usize,
    pub sampling_distance: DistanceKind,
    pub sampler: SamplerKind,
    pub kernel: KernelKind,
    pub ref_type: RefType,
    pub classifier: Classifier,
    #[serde(default)]
    pub scaler: ScalerKind,
}

fn distance_code(d: DistanceKind) -> u8 {
    match d {
        DistanceKind::Euclidean => 0,
        DistanceKind::Angle => 1,
    }
}

impl Configuration {
    /// Checks grid membership and the k-means restriction.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfiguration(msg));
        if !REFERENCE_COUNTS.contains(&self.k_references) {
            return fail(format!("k_references {} not in {:?}", self.k_references, REFERENCE_COUNTS));
        }
        if self.sampler == SamplerKind::KMeans
            && (self.sampling_distance != DistanceKind::Euclidean || self.ref_type != RefType::Centroids)
        {
            return fail("kmeans requires euclidean distance and centroid references".into());
        }
        if let Classifier::Knn(p) = self.classifier {
            if !NEIGHBOR_COUNTS.contains(&p.neighbors) {
                return fail(format!("neighbors {} not in {:?}", p.neighbors, NEIGHBOR_COUNTS));
            }
        }
        Ok(())
    }

    pub fn with_scaler(mut self, scaler: ScalerKind) -> Self {
        self.scaler = scaler;
        self
    }

    /// Hash of a fixed byte encoding; stable across builds and platforms.
    pub fn stable_hash(&self) -> u64 {
        let (tag, neighbors, weighting, knn_dist) = match self.classifier {
            Classifier::NaiveBayes => (0u8, 0u8, 0u8, 0u8),
            Classifier::Knn(p) => (
                1,
                p.neighbors as u8,
                match p.weighting {
                    Weighting::Uniform => 0,
                    Weighting::Distance => 1,
                },
                distance_code(p.distance),
            ),
        };
        let bytes = [
            self.k_references as u8,
            distance_code(self.sampling_distance),
            match self.sampler {
                SamplerKind::Random => 0,
                SamplerKind::KMeans => 1,
                SamplerKind::Density => 2,
                SamplerKind::Fft => 3,
            },
            match self.kernel {
                KernelKind::Linear => 0,
                KernelKind::Gaussian => 1,
                KernelKind::Sigmoid => 2,
                KernelKind::Cauchy => 3,
            },
            match self.ref_type {
                RefType::Centers => 0,
                RefType::Centroids => 1,
            },
            tag,
            neighbors,
            weighting,
            knn_dist,
            match self.scaler {
                ScalerKind::None => 0,
                ScalerKind::Standardize => 1,
                ScalerKind::MinMax => 2,
                ScalerKind::MaxAbs => 3,
            },
        ];
        seed::fnv1a(&bytes)
    }

    /// Short human-readable description.
    pub fn label(&self) -> String {
        let clf = match self.classifier {
            Classifier::NaiveBayes => String::from("nb"),
            Classifier::Knn(p) => format!("knn(k={},{},{})", p.neighbors, p.weighting.name(), p.distance.name()),
        };
        format!(
            "{}/k={}/{}/{}/{}/{}",
            self.sampler.name(),
            self.k_references,
            self.sampling_distance.name(),
            self.kernel.name(),
            self.ref_type.name(),
            clf
        )
    }
}

/// Naive Bayes plus the 16 kNN variants.
pub fn classifier_variants() -> Vec<Classifier> {
    let mut out = alloc::vec![Classifier::NaiveBayes];
    for weighting in Weighting::ALL {
        for distance in DistanceKind::ALL {
            for neighbors in NEIGHBOR_COUNTS {
                out.push(Classifier::Knn(KnnParams { neighbors, weighting, distance }));
            }
        }
    }
    out
}

/// Every valid configuration, in a fixed order.
pub fn enumerate_grid() -> Vec<Configuration> {
    let classifiers = classifier_variants();
    let mut grid = Vec::new();
    for k_references in REFERENCE_COUNTS {
        for sampling_distance in DistanceKind::ALL {
            for sampler in SamplerKind::ALL {
                for kernel in KernelKind::ALL {
                    for ref_type in RefType::ALL {
                        for &classifier in &classifiers {
                            let cfg = Configuration {
                                k_references,
                                sampling_distance,
                                sampler,
                                kernel,
                                ref_type,
                                classifier,
                                scaler: ScalerKind::None,
                            };
                            if cfg.validate().is_ok() {
                                grid.push(cfg);
                            }
                        }
                    }
                }
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn grid_size_and_invariants() {
        let grid = enumerate_grid();
        assert_eq!(grid.len(), 4420);
        let mut seen = HashSet::new();
        let mut hashes = HashSet::new();
        for cfg in &grid {
            cfg.validate().unwrap();
            assert!(seen.insert(*cfg));
            assert!(hashes.insert(cfg.stable_hash()));
            if cfg.sampler == SamplerKind::KMeans {
                assert_eq!(cfg.ref_type, RefType::Centroids);
                assert_eq!(cfg.sampling_distance, DistanceKind::Euclidean);
            }
        }
        let kmeans = grid.iter().filter(|c| c.sampler == SamplerKind::KMeans).count();
        assert_eq!(kmeans, 340);
        assert_eq!(classifier_variants().len(), 17);
    }

    #[test]
    fn validate_rejects_off_grid_values() {
        let mut cfg = enumerate_grid()[0];
        cfg.k_references = 5;
        assert!(cfg.validate().is_err());
        let mut cfg = enumerate_grid()[0];
        cfg.sampler = SamplerKind::KMeans;
        cfg.ref_type = RefType::Centers;
        assert!(cfg.validate().is_err());
        let mut cfg = enumerate_grid()[0];
        cfg.classifier = Classifier::Knn(KnnParams { neighbors: 3, weighting: Weighting::Uniform, distance: DistanceKind::Angle });
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn scaler_changes_hash() {
        let cfg = enumerate_grid()[7];
        assert_ne!(cfg.stable_hash(), cfg.with_scaler(ScalerKind::MaxAbs).stable_hash());
    }
}
