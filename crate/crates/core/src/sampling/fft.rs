use alloc::vec::Vec;

use rand::Rng;

use super::check_k;
use crate::geometry::DistanceKind;
use crate::{seed, Matrix, Result};

/// Result of a farthest-first traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct FarthestFirst {
    /// Row indices in selection order.
    pub centers: Vec<usize>,
    /// Distance to the nearest earlier center at which centers `1..k` were
    /// picked. Non-increasing.
    pub radii: Vec<f64>,
}

impl FarthestFirst {
    /// Radius `r` of the final pick. The centers are pairwise at least `r`
    /// apart and every row lies within `r` of some center. `None` for `k = 1`.
    pub fn last_radius(&self) -> Option<f64> {
        self.radii.last().copied()
    }
}

/// Gonzalez' farthest-first traversal: a random first center, then
/// repeatedly the row farthest from its nearest chosen center. Ties go to the
/// lowest row index.
pub fn sample_fft(x: &Matrix, k: usize, dist: DistanceKind, seed: u64) -> Result<FarthestFirst> {
    let n = x.rows();
    check_k(k, n)?;
    let mut rng = seed::rng(seed);
    let first = rng.random_range(0..n);
    let mut centers = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k.saturating_sub(1));
    let mut selected = alloc::vec![false; n];
    let mut dmin: Vec<f64> = x.iter_rows().map(|r| dist.eval(r, x.row(first))).collect();
    centers.push(first);
    selected[first] = true;
    while centers.len() < k {
        let mut far = usize::MAX;
        let mut far_d = f64::NEG_INFINITY;
        for (i, &d) in dmin.iter().enumerate() {
            if !selected[i] && d > far_d {
                far = i;
                far_d = d;
            }
        }
        centers.push(far);
        radii.push(far_d);
        selected[far] = true;
        let c = x.row(far);
        for (i, r) in x.iter_rows().enumerate() {
            let d = dist.eval(r, c);
            if d < dmin[i] {
                dmin[i] = d;
            }
        }
    }
    Ok(FarthestFirst { centers, radii })
}
