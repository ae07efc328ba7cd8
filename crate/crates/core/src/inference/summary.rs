//! Posterior summaries and MCMC diagnostics: type-7 quantiles, effective
//! sample size via Geyer's initial monotone sequence estimator, and split
//! R-hat across chains.

use crate::{Error, Result};

/// Median, 95% equal-tailed credible interval, and convergence diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct PosteriorSummary {
    pub median: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub ess: f64,
    /// Split R-hat; `None` when only one chain was run.
    pub rhat: Option<f64>,
}

/// Type-7 (linear interpolation) quantile of sorted data.
pub(crate) fn quantile_type7_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

fn autocovariance(x: &[f64], mean: f64, lag: usize) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..(n - lag) {
        acc += (x[i] - mean) * (x[i + lag] - mean);
    }
    acc / n as f64
}

/// Effective sample size of one chain by Geyer's initial monotone sequence:
/// sum autocorrelations in adjacent pairs, truncate at the first nonpositive
/// pair, and enforce monotonicity of the pair sums.
pub fn ess_initial_monotone(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 4 {
        return n as f64;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let c0 = autocovariance(x, mean, 0);
    if c0 <= 0.0 {
        // constant chain: no information about mixing
        return n as f64;
    }
    let max_lag = n - 2;
    let mut tau = 0.0; // running sum of pair terms Gamma_m
    let mut prev_pair = f64::INFINITY;
    let mut m = 0usize;
    loop {
        let lag0 = 2 * m;
        let lag1 = 2 * m + 1;
        if lag1 > max_lag {
            break;
        }
        let pair = (autocovariance(x, mean, lag0) + autocovariance(x, mean, lag1)) / c0;
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        tau += pair;
        prev_pair = pair;
        m += 1;
    }
    // integrated autocorrelation time: 2 * sum(Gamma_m) - 1
    let iact = (2.0 * tau - 1.0).max(1.0);
    (n as f64 / iact).min(n as f64)
}

/// Split R-hat: each chain halved, between/within variance ratio.
/// Returns `None` for fewer than two half-pairs or chains that are too short.
pub fn split_rhat(chains: &[&[f64]]) -> Option<f64> {
    if chains.len() < 2 {
        return None;
    }
    let mut halves: Vec<&[f64]> = Vec::with_capacity(chains.len() * 2);
    for c in chains {
        if c.len() < 4 {
            return None;
        }
        let mid = c.len() / 2;
        halves.push(&c[..mid]);
        halves.push(&c[mid..mid * 2]);
    }
    let m = halves.len() as f64;
    let n = halves[0].len() as f64;
    let means: Vec<f64> = halves
        .iter()
        .map(|h| h.iter().sum::<f64>() / h.len() as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / m;
    let b_over_n = means.iter().map(|x| (x - grand) * (x - grand)).sum::<f64>() / (m - 1.0);
    let w = halves
        .iter()
        .zip(&means)
        .map(|(h, mu)| {
            h.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (h.len() as f64 - 1.0)
        })
        .sum::<f64>()
        / m;
    if w <= 0.0 {
        // all draws equal: R-hat degenerates; report exact convergence
        return Some(1.0);
    }
    let var_plus = (n - 1.0) / n * w + b_over_n;
    Some((var_plus / w).sqrt())
}

/// Pool chains into a posterior summary: median and 2.5%/97.5% type-7
/// quantiles, ESS summed over chains, split R-hat across chains.
pub fn posterior_summary(chains: &[&[f64]]) -> Result<PosteriorSummary> {
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total < 100 {
        return Err(Error::InsufficientSamples(format!(
            "posterior summaries need at least 100 samples, got {total}"
        )));
    }
    let mut pooled: Vec<f64> = chains.iter().flat_map(|c| c.iter().copied()).collect();
    pooled.sort_by(f64::total_cmp);
    let median = quantile_type7_sorted(&pooled, 0.5);
    let ci_lower = quantile_type7_sorted(&pooled, 0.025);
    let ci_upper = quantile_type7_sorted(&pooled, 0.975);
    let ess = chains.iter().map(|c| ess_initial_monotone(c)).sum::<f64>();
    let rhat = split_rhat(chains);
    Ok(PosteriorSummary {
        median,
        ci_lower,
        ci_upper,
        ess,
        rhat,
    })
}
