//! File formats, parallel search, benchmarks and the `kernelcast` command
//! line on top of `kernelcast-core`.
//!
//! Set `KERNELCAST_THREADS` to cap the worker threads (`0` or unset uses one
//! per core). Results do not depend on the thread count.

pub mod benchmark;
pub mod cli;
mod error;
pub mod format;
pub mod io;
pub mod runner;

pub use error::{Error, Result};
