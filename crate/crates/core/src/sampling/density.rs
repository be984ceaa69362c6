use alloc::vec::Vec;

use rand::Rng;

use super::{check_k, RegionAssignment};
use crate::geometry::DistanceKind;
use crate::{seed, Matrix, Result};

/// Centers of a density net and the batch each one removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityNet {
    pub centers: Vec<usize>,
    /// Index into `centers` of the batch that removed each row.
    pub regions: RegionAssignment,
    /// Maximum batch size, `ceil(n / k)`.
    pub region_size: usize,
}

/// Density-net sampling. With `l = ceil(n / k)`, repeatedly pick a random
/// remaining row and remove it together with its `l - 1` nearest remaining
/// neighbours, until nothing is left. Yields `ceil(n / l) <= k` centers.
pub fn sample_density(x: &Matrix, k: usize, dist: DistanceKind, seed: u64) -> Result<DensityNet> {
    let n = x.rows();
    check_k(k, n)?;
    let region_size = n.div_ceil(k);
    let mut rng = seed::rng(seed);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut region_of = alloc::vec![usize::MAX; n];
    let mut centers = Vec::new();
    let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let c = remaining[rng.random_range(0..remaining.len())];
        let region = centers.len();
        centers.push(c);
        region_of[c] = region;
        scratch.clear();
        scratch.extend(remaining.iter().filter(|&&i| i != c).map(|&i| (dist.eval(x.row(i), x.row(c)), i)));
        let take = (region_size - 1).min(scratch.len());
        if take > 0 && take < scratch.len() {
            scratch.select_nth_unstable_by(take - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        for &(_, i) in &scratch[..take] {
            region_of[i] = region;
        }
        remaining.retain(|&i| region_of[i] == usize::MAX);
    }
    Ok(DensityNet { centers, regions: RegionAssignment { region_of }, region_size })
}
