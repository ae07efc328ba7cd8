//! Savage-Dickey Bayes factors, posterior summaries, MCMC diagnostics, the
//! Kruskal transform between the latent Pearson correlation and Spearman's
//! rho, and the parametric default-prior t-test comparator.

mod jzs;
mod kde;
mod summary;

pub use jzs::{jzs_ttest_bf_onesample, jzs_ttest_bf_twosample};
pub use kde::{reflected_kde, reflected_kde_log, silverman_bandwidth};
pub use summary::{ess_initial_monotone, posterior_summary, split_rhat, PosteriorSummary};

use crate::rngdist::{cauchy_pdf, normal_pdf};
use crate::samplers::{ChainOutput, PriorKind, PriorSpec};
use crate::{Error, Result};

/// How a posterior ordinate was estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinateMethod {
    /// Average of exact conditional densities over the retained iterations.
    RaoBlackwell,
    /// Gaussian kernel density estimate with boundary reflection.
    Kde,
}

/// A Savage-Dickey Bayes factor: the ratio of posterior to prior ordinate at
/// the null point, BF01 = posterior / prior (and BF10 its reciprocal).
#[derive(Debug, Clone, Copy)]
pub struct BayesFactorResult {
    pub bf10: f64,
    pub bf01: f64,
    pub prior_ordinate: f64,
    pub posterior_ordinate: f64,
    pub method: OrdinateMethod,
}

impl BayesFactorResult {
    fn from_ordinates(prior: f64, posterior: f64, method: OrdinateMethod) -> Self {
        Self {
            bf10: prior / posterior,
            bf01: posterior / prior,
            prior_ordinate: prior,
            posterior_ordinate: posterior,
            method,
        }
    }

    /// Build from the log posterior ordinate, clamping the log Bayes factor
    /// to +/- 690 (about 1e300) so decisive data yield huge but finite,
    /// strictly positive factors instead of inf/0 pairs.
    fn from_log_ordinates(log_prior: f64, log_posterior: f64, method: OrdinateMethod) -> Self {
        let log_bf01 = (log_posterior - log_prior).clamp(-690.0, 690.0);
        let bf01 = log_bf01.exp();
        Self {
            bf10: (-log_bf01).exp(),
            bf01,
            prior_ordinate: log_prior.exp(),
            posterior_ordinate: bf01 * log_prior.exp(),
            method,
        }
    }
}

/// Savage-Dickey Bayes factor for the delta tests, with the posterior
/// ordinate at delta = 0 estimated by Rao-Blackwellization: the mean over all
/// retained iterations of the exact conditional density Normal(0; mu, sd).
pub fn savage_dickey_delta(chains: &[ChainOutput], prior: &PriorSpec) -> Result<BayesFactorResult> {
    if prior.kind != PriorKind::CauchyOnDelta {
        return Err(Error::Configuration(
            "savage_dickey_delta requires the Cauchy prior on delta".into(),
        ));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for chain in chains {
        let cond = chain.conditional_params.as_ref().ok_or_else(|| {
            Error::InsufficientSamples(
                "chain output carries no conditional parameters for Rao-Blackwellization".into(),
            )
        })?;
        for (mu, sd) in cond {
            acc += normal_pdf(0.0, *mu, *sd)?;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientSamples("no retained iterations".into()));
    }
    // floor keeps the ordinate strictly positive even if every conditional
    // density underflowed (data overwhelmingly against the null point)
    let posterior = (acc / count as f64).max(1e-300);
    let prior_ord = cauchy_pdf(0.0, 0.0, prior.cauchy_scale)?;
    Ok(BayesFactorResult::from_ordinates(
        prior_ord,
        posterior,
        OrdinateMethod::RaoBlackwell,
    ))
}

/// Savage-Dickey Bayes factor for the correlation test: posterior ordinate at
/// rho = 0 from a reflected Gaussian KDE on the pooled rho samples, prior
/// ordinate 1/2 from the Uniform[-1, 1] prior.
pub fn savage_dickey_rho(chains: &[ChainOutput]) -> Result<BayesFactorResult> {
    let samples: Vec<f64> = chains
        .iter()
        .flat_map(|c| c.parameter_samples.iter().copied())
        .collect();
    if samples.len() < 1000 {
        return Err(Error::InsufficientSamples(format!(
            "the KDE ordinate needs at least 1000 pooled samples, got {}",
            samples.len()
        )));
    }
    let bandwidth = silverman_bandwidth(&samples)?;
    let log_posterior = reflected_kde_log(&samples, 0.0, bandwidth, (-1.0, 1.0))?;
    Ok(BayesFactorResult::from_log_ordinates(
        0.5f64.ln(),
        log_posterior,
        OrdinateMethod::Kde,
    ))
}

/// Kruskal transform: population Spearman correlation of a bivariate normal
/// with Pearson correlation rho.
pub fn kruskal_rho_to_rhos(rho: f64) -> Result<f64> {
    if !(rho.is_finite() && (-1.0..=1.0).contains(&rho)) {
        return Err(Error::Domain(format!("rho must lie in [-1, 1], got {rho}")));
    }
    Ok(6.0 / std::f64::consts::PI * (rho / 2.0).asin())
}

/// Inverse Kruskal transform.
pub fn kruskal_rhos_to_rho(rho_s: f64) -> Result<f64> {
    if !(rho_s.is_finite() && (-1.0..=1.0).contains(&rho_s)) {
        return Err(Error::Domain(format!(
            "rho_s must lie in [-1, 1], got {rho_s}"
        )));
    }
    Ok(2.0 * (std::f64::consts::PI * rho_s / 6.0).sin())
}

/// Posterior odds = prior odds times BF10.
pub fn posterior_odds(bf10: f64, prior_odds: f64) -> Result<f64> {
    if !(bf10.is_finite() && bf10 > 0.0 && prior_odds.is_finite() && prior_odds > 0.0) {
        return Err(Error::Domain(format!(
            "posterior odds need positive finite inputs, got bf10={bf10}, prior_odds={prior_odds}"
        )));
    }
    Ok(prior_odds * bf10)
}
