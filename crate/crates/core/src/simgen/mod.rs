//! Data generators for the robustness simulation studies (location-shifted
//! univariate families and the four copulas with target-Spearman inversion)
//! plus the replicated grid runner.

mod copula;

pub use copula::{copula_rho_s, copula_sample, invert_rho_s, CopulaFamily, CopulaSpec};

use crate::inference::{
    jzs_ttest_bf_onesample, jzs_ttest_bf_twosample, savage_dickey_delta, savage_dickey_rho,
};
use crate::ranks::{
    matched_rank_biserial, rank_biserial, signed_rank_w_paired, spearman_rho, Sample,
};
use crate::rngdist::{derive_seed, normal_sample, RngStream};
use crate::samplers::{
    ranksum_chain, signedrank_chain, spearman_chain, ChainConfig, ChainOutput, PriorSpec,
};
use crate::{Error, Result};

/// Univariate families for the location-shift studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionFamily {
    Normal,
    SkewNormal,
    Cauchy,
    Logistic,
    Uniform,
}

impl DistributionFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionFamily::Normal => "normal",
            DistributionFamily::SkewNormal => "skew-normal",
            DistributionFamily::Cauchy => "cauchy",
            DistributionFamily::Logistic => "logistic",
            DistributionFamily::Uniform => "uniform",
        }
    }
}

/// A univariate family at unit nominal scale, with a skewness shape (only
/// used by the skew-normal) and a location shift.
#[derive(Debug, Clone, Copy)]
pub struct DistributionSpec {
    pub family: DistributionFamily,
    /// Skew-normal slant parameter alpha.
    pub shape: f64,
    /// Location offset added to every draw.
    pub shift: f64,
}

impl DistributionSpec {
    pub fn new(family: DistributionFamily, shape: f64, shift: f64) -> Result<Self> {
        if !shift.is_finite() || !shape.is_finite() {
            return Err(Error::Configuration(format!(
                "shape and shift must be finite, got shape={shape}, shift={shift}"
            )));
        }
        Ok(Self {
            family,
            shape,
            shift,
        })
    }
}

/// Draw n i.i.d. values from the family in its standard parameterization,
/// shifted by `spec.shift`.
pub fn sample_univariate(spec: &DistributionSpec, n: usize, stream: &mut RngStream) -> Result<Sample> {
    if n == 0 {
        return Err(Error::Configuration("cannot sample zero observations".into()));
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let v = match spec.family {
            DistributionFamily::Normal => normal_sample(stream, 0.0, 1.0)?,
            DistributionFamily::SkewNormal => {
                // convolution representation with slant alpha
                let delta = spec.shape / (1.0 + spec.shape * spec.shape).sqrt();
                let u0 = normal_sample(stream, 0.0, 1.0)?;
                let u1 = normal_sample(stream, 0.0, 1.0)?;
                delta * u0.abs() + (1.0 - delta * delta).sqrt() * u1
            }
            DistributionFamily::Cauchy => {
                (std::f64::consts::PI * (stream.uniform_open() - 0.5)).tan()
            }
            DistributionFamily::Logistic => {
                let u = stream.uniform_open();
                (u / (1.0 - u)).ln()
            }
            DistributionFamily::Uniform => stream.uniform_open(),
        };
        out.push(v + spec.shift);
    }
    Sample::new(out)
}

/// Whether both simulated groups share the family, or the first group is
/// standard normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    SameShape,
    NormalVsOther,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::SameShape => "same-shape",
            Scenario::NormalVsOther => "normal-vs-other",
        }
    }
}

/// The simulation grid: effect sizes (delta for the location tests, target
/// Spearman rho for the correlation test), sample sizes, and replicates.
#[derive(Debug, Clone)]
pub struct SimulationGridSpec {
    pub effect_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

impl SimulationGridSpec {
    pub fn validate(&self, test_needs_pairs: bool) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Configuration("replicates must be positive".into()));
        }
        if self.effect_values.is_empty() || self.n_values.is_empty() {
            return Err(Error::Configuration(
                "the grid needs at least one effect and one sample size".into(),
            ));
        }
        let min_n = if test_needs_pairs { 4 } else { 2 };
        if self.n_values.iter().any(|n| *n < min_n) {
            return Err(Error::Configuration(format!(
                "grid sample sizes must be at least {min_n}"
            )));
        }
        Ok(())
    }
}

/// Which test the grid exercises, with its data model.
#[derive(Debug, Clone, Copy)]
pub enum GridTask {
    RankSum {
        family: DistributionFamily,
        shape: f64,
        scenario: Scenario,
    },
    SignedRank {
        family: DistributionFamily,
        shape: f64,
        scenario: Scenario,
    },
    Spearman {
        family: CopulaFamily,
    },
}

impl GridTask {
    fn family_name(&self) -> &'static str {
        match self {
            GridTask::RankSum { family, .. } | GridTask::SignedRank { family, .. } => family.name(),
            GridTask::Spearman { family } => family.name(),
        }
    }

    fn scenario_name(&self) -> &'static str {
        match self {
            GridTask::RankSum { scenario, .. } | GridTask::SignedRank { scenario, .. } => {
                scenario.name()
            }
            GridTask::Spearman { .. } => "copula",
        }
    }
}

/// One replicate of the simulation table.
#[derive(Debug, Clone)]
pub struct GridRow {
    pub family: String,
    pub scenario: String,
    pub n: usize,
    pub effect: f64,
    pub replicate: usize,
    /// Observed rank statistic: rank-biserial, matched rank-biserial, or
    /// Spearman correlation depending on the test.
    pub statistic: f64,
    pub log_bf10: f64,
    /// Parametric comparator (JZS t test), absent for the correlation test.
    pub comparator_log_bf10: Option<f64>,
}

fn pooled_log_bf10_delta(chains: &[ChainOutput], prior: &PriorSpec) -> Result<f64> {
    Ok(savage_dickey_delta(chains, prior)?.bf10.ln())
}

// stream id reserved for data generation; chain ids run from zero
const DATA_STREAM: u32 = u32::MAX;

fn run_replicate(
    task: &GridTask,
    n: usize,
    effect: f64,
    seed: u64,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<(f64, f64, Option<f64>)> {
    let mut data_stream = RngStream::new(seed, DATA_STREAM);
    let chain_config = ChainConfig { seed, ..*config };
    match *task {
        GridTask::RankSum {
            family,
            shape,
            scenario,
        } => {
            let first_family = match scenario {
                Scenario::SameShape => family,
                Scenario::NormalVsOther => DistributionFamily::Normal,
            };
            let x = sample_univariate(
                &DistributionSpec::new(first_family, shape, 0.0)?,
                n,
                &mut data_stream,
            )?;
            let y = sample_univariate(
                &DistributionSpec::new(family, shape, effect)?,
                n,
                &mut data_stream,
            )?;
            let stat = rank_biserial(&x, &y)?;
            let chains: Vec<ChainOutput> = (0..chain_config.chains)
                .map(|id| ranksum_chain(&x, &y, prior, &chain_config, id))
                .collect::<Result<_>>()?;
            let log_bf = pooled_log_bf10_delta(&chains, prior)?;
            let comparator = jzs_ttest_bf_twosample(&x, &y, prior.cauchy_scale)?.ln();
            Ok((stat, log_bf, Some(comparator)))
        }
        GridTask::SignedRank {
            family,
            shape,
            scenario,
        } => {
            let first_family = match scenario {
                Scenario::SameShape => family,
                Scenario::NormalVsOther => DistributionFamily::Normal,
            };
            let x = sample_univariate(
                &DistributionSpec::new(first_family, shape, 0.0)?,
                n,
                &mut data_stream,
            )?;
            let y = sample_univariate(
                &DistributionSpec::new(family, shape, effect)?,
                n,
                &mut data_stream,
            )?;
            let (_, decomposition) = signed_rank_w_paired(&x, &y)?;
            let stat = matched_rank_biserial(&decomposition)?;
            let d: Vec<f64> = x
                .values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| b - a)
                .collect();
            let d = Sample::new(d)?;
            let chains: Vec<ChainOutput> = (0..chain_config.chains)
                .map(|id| signedrank_chain(&d, prior, &chain_config, id))
                .collect::<Result<_>>()?;
            let log_bf = pooled_log_bf10_delta(&chains, prior)?;
            let comparator = jzs_ttest_bf_onesample(&d, prior.cauchy_scale)?.ln();
            Ok((stat, log_bf, Some(comparator)))
        }
        GridTask::Spearman { family } => {
            let spec = invert_rho_s(family, effect)?;
            let (u, v) = copula_sample(&spec, n, &mut data_stream)?;
            let stat = spearman_rho(&u, &v)?;
            let chains: Vec<ChainOutput> = (0..chain_config.chains)
                .map(|id| spearman_chain(&u, &v, prior, &chain_config, id))
                .collect::<Result<_>>()?;
            let log_bf = savage_dickey_rho(&chains)?.bf10.ln();
            Ok((stat, log_bf, None))
        }
    }
}

/// Run the full grid: every (effect, n) cell times `replicates`, each
/// replicate seeded from (grid seed, cell index, replicate index) so the
/// table is reproducible no matter how the work is scheduled.
pub fn run_grid(
    grid: &SimulationGridSpec,
    task: &GridTask,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<Vec<GridRow>> {
    grid.validate(matches!(task, GridTask::Spearman { .. }))?;
    config.validate()?;

    struct Job {
        cell: usize,
        replicate: usize,
        n: usize,
        effect: f64,
    }
    let mut jobs = Vec::new();
    let mut cell = 0usize;
    for &effect in &grid.effect_values {
        for &n in &grid.n_values {
            for replicate in 0..grid.replicates {
                jobs.push(Job {
                    cell,
                    replicate,
                    n,
                    effect,
                });
            }
            cell += 1;
        }
    }

    let workers = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(4)
        .min(jobs.len().max(1));
    type ReplicateResult = Option<Result<(f64, f64, Option<f64>)>>;
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<ReplicateResult> = Vec::new();
    slots.resize_with(jobs.len(), || None);
    let slot_refs: Vec<std::sync::Mutex<&mut ReplicateResult>> =
        slots.iter_mut().map(std::sync::Mutex::new).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if k >= jobs.len() {
                    break;
                }
                let job = &jobs[k];
                let seed = derive_seed(grid.seed, &[job.cell as u64, job.replicate as u64]);
                let result = run_replicate(task, job.n, job.effect, seed, prior, config);
                **slot_refs[k].lock().unwrap() = Some(result);
            });
        }
    });

    let mut rows = Vec::with_capacity(jobs.len());
    for (job, slot) in jobs.iter().zip(slots) {
        let (statistic, log_bf10, comparator_log_bf10) =
            slot.expect("every job ran to completion")?;
        rows.push(GridRow {
            family: task.family_name().to_string(),
            scenario: task.scenario_name().to_string(),
            n: job.n,
            effect: job.effect,
            replicate: job.replicate,
            statistic,
            log_bf10,
            comparator_log_bf10,
        });
    }
    Ok(rows)
}
