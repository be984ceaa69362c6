use alloc::vec::Vec;

use rand::Rng;

use super::{check_k, finalize_references, Picked, RefType, ReferenceSet, SamplerKind, SigmaRule};
use crate::geometry::{squared_euclidean, DistanceKind};
use crate::{seed, Matrix, Result};

pub const KMEANS_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub centroids: Matrix,
    pub assignment: Vec<usize>,
    /// Inertia after every assignment step, starting with the seeding.
    pub inertia_history: Vec<f64>,
    pub converged: bool,
}

impl KMeansFit {
    pub fn inertia(&self) -> f64 {
        self.inertia_history.last().copied().unwrap_or(0.0)
    }
}

/// k-means++ seeding: first seed uniform, then proportional to squared
/// distance to the nearest seed so far.
fn seed_plus_plus(x: &Matrix, k: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let n = x.rows();
    let mut chosen = Vec::with_capacity(k);
    let mut taken = alloc::vec![false; n];
    let first = rng.random_range(0..n);
    chosen.push(first);
    taken[first] = true;
    let mut d2: Vec<f64> = x.iter_rows().map(|r| squared_euclidean(r, x.row(first))).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().zip(&taken).filter(|(_, t)| !**t).map(|(d, _)| d).sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if taken[i] || d == 0.0 {
                    continue;
                }
                pick = Some(i);
                if target < d {
                    break;
                }
                target -= d;
            }
            pick.expect("positive total implies a candidate")
        } else {
            // every remaining point duplicates a seed
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(next);
        taken[next] = true;
        for (i, r) in x.iter_rows().enumerate() {
            d2[i] = d2[i].min(squared_euclidean(r, x.row(next)));
        }
    }
    chosen
}

fn assign(x: &Matrix, centroids: &Matrix, out: &mut [usize]) -> (bool, f64) {
    let mut changed = false;
    let mut inertia = 0.0;
    for (i, row) in x.iter_rows().enumerate() {
        let mut best = (0, f64::INFINITY);
        for (j, c) in centroids.iter_rows().enumerate() {
            let d = squared_euclidean(row, c);
            if d < best.1 {
                best = (j, d);
            }
        }
        if out[i] != best.0 {
            out[i] = best.0;
            changed = true;
        }
        inertia += best.1;
    }
    (changed, inertia)
}

/// Moves every centroid to the mean of its members. An empty cluster is
/// reseeded at the point farthest from its own (updated) centroid.
fn update(x: &Matrix, assignment: &[usize], centroids: &mut Matrix) {
    let k = centroids.rows();
    let d = x.cols();
    let mut sums = Matrix::zeros(k, d);
    let mut counts = alloc::vec![0usize; k];
    for (row, &a) in x.iter_rows().zip(assignment) {
        counts[a] += 1;
        for (s, v) in sums.row_mut(a).iter_mut().zip(row) {
            *s += v;
        }
    }
    for (j, &count) in counts.iter().enumerate() {
        if count > 0 {
            for (c, s) in centroids.row_mut(j).iter_mut().zip(sums.row(j)) {
                *c = s / count as f64;
            }
        }
    }
    let mut used = alloc::vec![false; x.rows()];
    for j in (0..k).filter(|&j| counts[j] == 0) {
        let mut far = None;
        let mut far_d = f64::NEG_INFINITY;
        for (i, (row, &a)) in x.iter_rows().zip(assignment).enumerate() {
            if used[i] {
                continue;
            }
            let dist = squared_euclidean(row, centroids.row(a));
            if dist > far_d {
                far_d = dist;
                far = Some(i);
            }
        }
        if let Some(i) = far {
            used[i] = true;
            centroids.row_mut(j).copy_from_slice(x.row(i));
        }
    }
}

/// Lloyd's algorithm from k-means++ seeds, stopping when assignments stop
/// changing or after `max_iters` update steps.
pub fn kmeans(x: &Matrix, k: usize, seed: u64, max_iters: usize) -> Result<KMeansFit> {
    check_k(k, x.rows())?;
    let mut rng = seed::rng(seed);
    let seeds = seed_plus_plus(x, k, &mut rng);
    let mut centroids = x.select_rows(&seeds);
    let mut assignment = alloc::vec![usize::MAX; x.rows()];
    let mut history = Vec::new();
    let (_, inertia) = assign(x, &centroids, &mut assignment);
    history.push(inertia);
    let mut converged = false;
    for _ in 0..max_iters {
        update(x, &assignment, &mut centroids);
        let (changed, inertia) = assign(x, &centroids, &mut assignment);
        history.push(inertia);
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(KMeansFit { centroids, assignment, inertia_history: history, converged })
}

/// K-means references: Euclidean centroids with per-region scales.
pub fn sample_kmeans(x: &Matrix, k: usize, seed: u64, max_iters: usize) -> Result<ReferenceSet> {
    let fit = kmeans(x, k, seed, max_iters)?;
    finalize_references(
        x,
        Picked::Points(fit.centroids),
        RefType::Centroids,
        DistanceKind::Euclidean,
        SamplerKind::KMeans,
        SigmaRule::PerRegion,
    )
}
