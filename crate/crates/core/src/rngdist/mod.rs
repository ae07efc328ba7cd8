//! Deterministic random streams and the distribution primitives every
//! sampler depends on: normal/Cauchy densities, the normal cdf and quantile,
//! truncated-normal and inverse-gamma sampling.

mod rng;
mod sampling;
mod special;

pub use rng::{derive_seed, RngStream};
pub use sampling::{
    gamma_sample, inverse_gamma_sample, normal_sample, truncated_normal_mean_quadrature,
    truncated_normal_sample,
};
pub use special::{
    cauchy_pdf, erf, erfc, normal_cdf, normal_pdf, normal_quantile, LN_SQRT_TWO_PI, SQRT_TWO_PI,
};
pub(crate) use special::{std_normal_cdf, std_normal_pdf};

use crate::{Error, Result};

/// An open interval `(lower, upper)` restricting a normal draw.
///
/// Either endpoint may be infinite. Equal or inverted endpoints are rejected:
/// the latent-normal constraints always leave strictly positive width because
/// tied observations impose no mutual bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationInterval {
    lower: f64,
    upper: f64,
}

impl TruncationInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// The whole real line (no truncation).
    pub fn unbounded() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    /// Intersection with another interval, failing if the result is empty.
    pub fn intersect(&self, other: &TruncationInterval) -> Result<Self> {
        Self::new(self.lower.max(other.lower), self.upper.min(other.upper))
    }
}
