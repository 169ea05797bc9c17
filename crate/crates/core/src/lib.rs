//! Sub-Gaussian intrinsic moment norms.
//!
//! The intrinsic moment norm of a centered variable X is
//! `max_k [E X^{2k} / (2k-1)!!]^{1/(2k)}`. This crate computes it exactly for
//! reference distributions, estimates it from data (plug-in, median-of-means,
//! cross-validated block counts, small-sample variants), turns it into tail
//! bounds and confidence intervals, offers the sub-Gaussian plot diagnostic,
//! and uses it inside a bootstrapped UCB bandit algorithm.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandit;
pub mod concentration;
pub mod diagnostics;
pub mod dist;
pub mod error;
pub mod estimators;
pub mod norms;
pub mod quad;
pub mod sample;
pub mod seed;
pub mod special;

pub use dist::DistributionSpec;
pub use error::{Error, Result};
pub use estimators::{BlockConfig, Method, NormEstimate};
pub use norms::NormValue;
pub use sample::Sample;
