//! Kernel-mapped model selection for simple classifiers.
//!
//! A pipeline picks a small set of references from the training data
//! (random rows, k-means centroids, a density net, or a farthest-first
//! traversal), maps every sample to the vector of kernelized distances to
//! those references, and trains a k-nearest-neighbour or Gaussian naive
//! Bayes classifier on the mapped rows. [`modelsel`] searches the grid of
//! such pipelines with stratified cross-validation on the balanced error
//! rate, and [`ensemble`] combines the best ones by majority vote.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the parallel search runner live in the `kernelcast` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classify;
pub mod data;
pub mod ensemble;
mod error;
pub mod geometry;
pub mod kernelmap;
pub mod matrix;
pub mod modelsel;
pub mod sampling;
pub mod seed;

pub use error::{Error, Result};
pub use matrix::Matrix;
