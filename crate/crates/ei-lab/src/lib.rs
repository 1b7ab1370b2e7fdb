//! Estimation of the extremal index of a stationary time series by the
//! method of moments.
//!
//! The extremal index θ ∈ (0, 1] measures the clustering of extremes: 1/θ is
//! the mean size of a cluster of exceedances. This crate builds approximate
//! Exp(θ) samples from rank-transformed block maxima (disjoint or sliding
//! blocks, Y- or Z-transform) and inverts exponential moment equations to
//! estimate θ:
//!
//! - **CFG**: inverts `E[log ξ] = −log θ − γ`,
//! - **Madogram**: inverts `E[e^{−ξ}] = θ/(1+θ)`,
//! - **Root-p**: inverts `E[ξ^{1/p}] = θ^{−1/p} Γ(1+1/p)` (p = 1 is the
//!   pseudo-maximum-likelihood estimator).
//!
//! Besides the estimators themselves, the crate evaluates their asymptotic
//! variances by adaptive quadrature over cluster-moment functions
//! ([`asymvar`]), simulates four stationary benchmark models ([`sim`]),
//! implements the intervals and Süveges threshold estimators for comparison
//! ([`competitors`]), and runs seeded, reproducible Monte-Carlo studies
//! ([`mcstudy`]).
//!
//! The `examples/` directory has one runnable example per capability; the
//! `ei-lab` binary exposes the same functionality as `simulate`, `estimate`,
//! `asymvar` and `mc-study` subcommands.

pub mod asymvar;
pub mod blocks;
pub mod competitors;
pub mod estimators;
pub mod fmt;
pub mod mcstudy;
pub mod sim;
pub mod specfun;

mod error;

pub use error::{Error, Result};
