//! The serialized test result and the plot-grid emission.

use ranklatent::inference::{BayesFactorResult, OrdinateMethod, PosteriorSummary};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct ObservedStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_complement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_biserial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_rank_biserial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dropped_zero_differences: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spearman_rho: Option<f64>,
}

impl ObservedStats {
    pub fn empty() -> Self {
        Self {
            u: None,
            u_complement: None,
            rank_biserial: None,
            w: None,
            matched_rank_biserial: None,
            dropped_zero_differences: None,
            spearman_rho: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BayesFactorJson {
    pub bf10: f64,
    pub bf01: f64,
    pub prior_ordinate: f64,
    pub posterior_ordinate: f64,
    pub method: &'static str,
}

impl From<&BayesFactorResult> for BayesFactorJson {
    fn from(bf: &BayesFactorResult) -> Self {
        Self {
            bf10: bf.bf10,
            bf01: bf.bf01,
            prior_ordinate: bf.prior_ordinate,
            posterior_ordinate: bf.posterior_ordinate,
            method: match bf.method {
                OrdinateMethod::RaoBlackwell => "rao-blackwell",
                OrdinateMethod::Kde => "kde",
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PosteriorJson {
    /// "delta" for the location tests, "rho_s" for the correlation test.
    pub parameter: &'static str,
    pub median: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

#[derive(Debug, Serialize)]
pub struct DiagnosticsJson {
    pub ess: f64,
    pub rhat: Option<f64>,
    pub acceptance_rate: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ProvenanceJson {
    pub seed: u64,
    pub iterations: usize,
    pub burnin: usize,
    pub chains: u32,
    pub thin: usize,
    pub cauchy_scale: Option<f64>,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct TestResultJson {
    pub schema_version: &'static str,
    pub test: &'static str,
    pub observed: ObservedStats,
    pub bayes_factor: BayesFactorJson,
    pub posterior: PosteriorJson,
    pub diagnostics: DiagnosticsJson,
    pub provenance: ProvenanceJson,
}

pub fn diagnostics_from(
    summary: &PosteriorSummary,
    acceptance_rate: Option<f64>,
) -> DiagnosticsJson {
    let mut warnings = Vec::new();
    if let Some(r) = summary.rhat {
        if r > 1.05 {
            warnings.push(format!(
                "chains may not have converged (split R-hat = {r:.3})"
            ));
        }
    }
    if summary.ess < 400.0 {
        warnings.push(format!(
            "low effective sample size ({:.0}); consider more iterations",
            summary.ess
        ));
    }
    DiagnosticsJson {
        ess: summary.ess,
        rhat: summary.rhat,
        acceptance_rate,
        warnings,
    }
}

/// One row of the plot grid CSV.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub value: f64,
    pub prior_density: f64,
    pub posterior_density: f64,
}

/// A uniform grid that contains 0.0 exactly (point k of n), built by placing
/// points at (i - k) * step.
pub fn grid_containing_zero(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 3 && lo < hi);
    let step = (hi - lo) / (n as f64 - 1.0);
    let k = ((0.0 - lo) / step).round().clamp(0.0, n as f64 - 1.0) as usize;
    (0..n).map(|i| (i as f64 - k as f64) * step).collect()
}

/// Density grid for the delta tests: prior is the Cauchy curve, posterior the
/// Rao-Blackwell mixture of the per-iteration normal conditionals.
pub fn delta_plot_grid(
    conditionals: &[(f64, f64)],
    cauchy_scale: f64,
    n_points: usize,
) -> Vec<GridPoint> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (mu, sd) in conditionals {
        lo = lo.min(mu - 5.0 * sd);
        hi = hi.max(mu + 5.0 * sd);
    }
    lo = lo.min(-0.5);
    hi = hi.max(0.5);
    let xs = grid_containing_zero(lo, hi, n_points.max(3));
    xs.iter()
        .map(|&x| {
            let mut post = 0.0;
            for (mu, sd) in conditionals {
                post += ranklatent::rngdist::normal_pdf(x, *mu, *sd).unwrap_or(0.0);
            }
            GridPoint {
                value: x,
                prior_density: ranklatent::rngdist::cauchy_pdf(x, 0.0, cauchy_scale).unwrap(),
                posterior_density: post / conditionals.len() as f64,
            }
        })
        .collect()
}

/// Density grid for the correlation test on the rho scale: flat prior 1/2,
/// posterior from the same reflected KDE that produced the Bayes factor.
/// The requested point count is rounded up to an odd number so that 0 sits
/// exactly on the grid.
pub fn rho_plot_grid(samples: &[f64], n_points: usize) -> Vec<GridPoint> {
    let n = if n_points.is_multiple_of(2) { n_points + 1 } else { n_points.max(3) };
    let k = (n - 1) / 2;
    let step = 1.0 / k as f64;
    let bandwidth = ranklatent::inference::silverman_bandwidth(samples).unwrap();
    (0..n)
        .map(|i| {
            let x = ((i as f64 - k as f64) * step).clamp(-1.0, 1.0);
            let post =
                ranklatent::inference::reflected_kde(samples, x, bandwidth, (-1.0, 1.0)).unwrap();
            GridPoint {
                value: x,
                prior_density: 0.5,
                posterior_density: post,
            }
        })
        .collect()
}

pub fn write_plot_grid(points: &[GridPoint]) -> String {
    let mut out = String::from("value,prior_density,posterior_density\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            p.value, p.prior_density, p.posterior_density
        ));
    }
    out
}
