//! Bayesian latent-normal inference for three rank-based tests: the Wilcoxon
//! rank sum test, the Wilcoxon signed rank test, and Spearman's rho.
//!
//! Observed ranks are treated as an impoverished reflection of latent normal
//! scores. Gibbs-type samplers reconstruct the latent level under the ordinal
//! constraints, and Savage-Dickey density ratios turn the resulting posterior
//! distributions into Bayes factors.
//!
//! Module layout:
//!
//! * [`rngdist`] — deterministic random streams and distribution primitives
//! * [`ranks`] — rank transformations and classical rank statistics
//! * [`augmentation`] — constrained latent-normal Gibbs machinery
//! * [`samplers`] — the three test-specific MCMC kernels
//! * [`inference`] — Bayes factors, posterior summaries, diagnostics
//! * [`simgen`] — simulation-study data generators and the grid runner

pub mod augmentation;
pub mod error;
pub mod inference;
pub mod ranks;
pub mod rngdist;
pub mod samplers;
pub mod simgen;

mod quad;

pub use error::{Error, Result};
