//! Parallel evaluation of search plans.

use std::time::Instant;

use kernelcast_core::data::Dataset;
use kernelcast_core::modelsel::{SearchOptions, SearchPlan, SearchReport};
use rayon::prelude::*;

use crate::{Error, Result};

pub const THREADS_ENV: &str = "KERNELCAST_THREADS";

/// Worker count from `KERNELCAST_THREADS`; unset, empty or `0` means one per core.
pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) => Ok(n),
            Err(_) => Err(Error::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
        },
        _ => Ok(0),
    }
}

/// Runs `f` inside a pool sized by [`thread_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(thread_count()?).build()?;
    Ok(pool.install(f))
}

/// Evaluates every configuration of the plan in parallel. The report is
/// identical to a sequential run apart from `wall_time_secs`.
pub fn run_plan(plan: &SearchPlan<'_>) -> SearchReport {
    let evaluated = plan
        .configs
        .par_iter()
        .map(|cfg| {
            let start = Instant::now();
            let mut e = plan.evaluate(cfg);
            e.wall_time_secs = Some(start.elapsed().as_secs_f64());
            e
        })
        .collect();
    plan.report(evaluated)
}

/// Parallel counterpart of `random_search` / `grid_search`, chosen by `options.mode`.
pub fn search(ds: &Dataset, options: SearchOptions) -> Result<SearchReport> {
    let plan = SearchPlan::new(ds, options)?;
    Ok(run_plan(&plan))
}
