#![allow(dead_code)]

use kernelcast_core::data::Dataset;
use kernelcast_core::{seed, Matrix};
use rand::Rng;

pub fn normal(rng: &mut seed::Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Isotropic Gaussian blobs with the given centers, `per_class` rows each.
pub fn blobs(centers: &[[f64; 2]], per_class: usize, spread: f64, seed: u64) -> Dataset {
    let mut rng = seed::rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_class {
            rows.push([center[0] + spread * normal(&mut rng), center[1] + spread * normal(&mut rng)]);
            labels.push(format!("c{c}"));
        }
    }
    Dataset::from_labeled_rows(&rows, &labels).unwrap()
}

pub fn uniform_points(n: usize, d: usize, seed: u64) -> Matrix {
    let mut rng = seed::rng(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect()).collect();
    Matrix::from_rows(&rows).unwrap()
}

/// Copy of `ds` with labels permuted at random.
pub fn shuffled_labels(ds: &Dataset, seed: u64) -> Dataset {
    use rand::seq::SliceRandom;
    let mut labels = ds.labels().to_vec();
    labels.shuffle(&mut seed::rng(seed));
    Dataset::new(ds.features().clone(), labels, ds.label_names().to_vec()).unwrap()
}
