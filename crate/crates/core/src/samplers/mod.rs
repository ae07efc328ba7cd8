//! The three test-specific MCMC kernels: a Gibbs sampler for the two-sample
//! rank sum test, a Gibbs sampler for the signed rank test, and a
//! Metropolis-within-Gibbs sampler for the latent correlation behind
//! Spearman's rho.
//!
//! Every kernel owns exactly one [`RngStream`], chains never share state, and
//! a fixed `(seed, chain_id)` pair replays the chain bit for bit.

use crate::augmentation::{decorrelate_scale, decorrelate_shift, gibbs_sweep, LatentVector};
use crate::ranks::{aggregated_midranks, midranks, midranks_of, RankVector, Sample};
use crate::rngdist::{
    inverse_gamma_sample, truncated_normal_sample, RngStream, TruncationInterval,
};
use crate::{Error, Result};

pub mod geweke;

/// Prior on the test-relevant parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorKind {
    /// Cauchy(0, gamma) on the standardized location difference delta.
    CauchyOnDelta,
    /// Uniform[-1, 1] on the latent Pearson correlation rho.
    UniformOnRho,
}

#[derive(Debug, Clone, Copy)]
pub struct PriorSpec {
    pub kind: PriorKind,
    /// Scale gamma of the Cauchy prior (ignored for the uniform prior).
    pub cauchy_scale: f64,
}

pub const DEFAULT_CAUCHY_SCALE: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl PriorSpec {
    pub fn cauchy_on_delta(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Cauchy prior scale must be positive, got {scale}"
            )));
        }
        Ok(Self {
            kind: PriorKind::CauchyOnDelta,
            cauchy_scale: scale,
        })
    }

    pub fn uniform_on_rho() -> Self {
        Self {
            kind: PriorKind::UniformOnRho,
            cauchy_scale: DEFAULT_CAUCHY_SCALE,
        }
    }
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            kind: PriorKind::CauchyOnDelta,
            cauchy_scale: DEFAULT_CAUCHY_SCALE,
        }
    }
}

/// MCMC run configuration. `iterations` counts retained post-burn-in draws;
/// the kernel advances `burnin + iterations * thin` cycles per chain.
#[derive(Debug, Clone, Copy)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burnin: usize,
    pub chains: u32,
    pub thin: usize,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            iterations: 5000,
            burnin: 1000,
            chains: 4,
            thin: 1,
            seed: 0,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Configuration("iterations must be positive".into()));
        }
        if self.thin == 0 {
            return Err(Error::Configuration("thin must be at least 1".into()));
        }
        if self.chains == 0 {
            return Err(Error::Configuration("at least one chain is required".into()));
        }
        Ok(())
    }
}

/// Post-burn-in output of a single chain.
#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub chain_id: u32,
    /// Retained delta or rho draws.
    pub parameter_samples: Vec<f64>,
    /// Per-iteration (mu_delta, sd_delta) of the conditional used to draw
    /// delta; present for the two delta tests and consumed by the
    /// Rao-Blackwellized Savage-Dickey estimator.
    pub conditional_params: Option<Vec<(f64, f64)>>,
    /// Metropolis acceptance fraction (Spearman kernel only).
    pub acceptance_rate: Option<f64>,
}

/// Conditional of delta in the two-sample kernel:
/// mu = 2 g (n_y zbar_y - n_x zbar_x) / (g (n_x + n_y) + 4),
/// var = 4 g / (g (n_x + n_y) + 4).
pub fn delta_conditional_twosample(
    n_x: usize,
    zbar_x: f64,
    n_y: usize,
    zbar_y: f64,
    g: f64,
) -> (f64, f64) {
    let n = (n_x + n_y) as f64;
    let denom = g * n + 4.0;
    let mu = 2.0 * g * (n_y as f64 * zbar_y - n_x as f64 * zbar_x) / denom;
    let var = 4.0 * g / denom;
    (mu, var)
}

/// Conditional of delta in the one-sample kernel:
/// mu = g n zbar / (g n + 1), var = g / (g n + 1).
pub fn delta_conditional_onesample(n: usize, zbar_d: f64, g: f64) -> (f64, f64) {
    let nf = n as f64;
    let denom = g * nf + 1.0;
    (g * nf * zbar_d / denom, g / denom)
}

/// Conditional of the mixing variance g given delta:
/// InverseGamma(1, (delta^2 + gamma^2) / 2).
pub fn g_conditional(delta: f64, gamma: f64, stream: &mut RngStream) -> Result<f64> {
    inverse_gamma_sample(stream, 1.0, 0.5 * (delta * delta + gamma * gamma))
}

/// Log density of n pairs under the standard bivariate normal with
/// correlation rho (zero means, unit variances).
pub fn bivariate_normal_loglik(z_x: &[f64], z_y: &[f64], rho: f64) -> Result<f64> {
    if z_x.len() != z_y.len() {
        return Err(Error::InvalidData(
            "bivariate log likelihood needs equal-length vectors".into(),
        ));
    }
    if !(rho.is_finite() && rho.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "correlation must satisfy |rho| < 1, got {rho}"
        )));
    }
    let n = z_x.len() as f64;
    let om = 1.0 - rho * rho;
    let mut quad = 0.0;
    for (x, y) in z_x.iter().zip(z_y) {
        quad += x * x + y * y - 2.0 * rho * x * y;
    }
    Ok(-n * (2.0 * std::f64::consts::PI).ln() - 0.5 * n * om.ln() - quad / (2.0 * om))
}

// ---------------------------------------------------------------------------
// rank sum kernel
// ---------------------------------------------------------------------------

/// Mutable state of one rank-sum chain: a single latent vector over the
/// aggregated ranking (x first, then y), plus (delta, g).
#[derive(Debug, Clone)]
pub struct RanksumState {
    pub latent: LatentVector,
    pub n_x: usize,
    pub delta: f64,
    pub g: f64,
    /// Apply the additive decorrelating move each cycle (on by default;
    /// the switch exists so stationarity tests can compare both kernels).
    pub decorrelate: bool,
    gamma: f64,
    means: Vec<f64>,
}

impl RanksumState {
    pub fn init(x: &Sample, y: &Sample, gamma: f64) -> Result<Self> {
        let agg = aggregated_midranks(x, y)?;
        let latent = LatentVector::from_ranks(&agg)?;
        Ok(Self::from_parts(latent, x.len(), 0.0, gamma * gamma, gamma))
    }

    /// Assemble a state from existing parts (sampler-validation harnesses
    /// start chains at an exact draw from the joint distribution).
    pub fn from_parts(latent: LatentVector, n_x: usize, delta: f64, g: f64, gamma: f64) -> Self {
        let n = latent.len();
        Self {
            latent,
            n_x,
            delta,
            g,
            decorrelate: true,
            gamma,
            means: vec![0.0; n],
        }
    }

    /// One full Gibbs cycle. Returns the (mu, sd) of the delta conditional
    /// actually used for the draw.
    pub fn step(&mut self, stream: &mut RngStream) -> Result<(f64, f64)> {
        let n = self.latent.len();
        for (i, m) in self.means.iter_mut().enumerate() {
            *m = if i < self.n_x {
                -0.5 * self.delta
            } else {
                0.5 * self.delta
            };
        }
        gibbs_sweep(&mut self.latent, &self.means, 1.0, stream)?;
        if self.decorrelate {
            decorrelate_shift(&mut self.latent, self.n_x, self.delta, stream)?;
        }
        let zbar_x = self.latent.mean_range(0..self.n_x);
        let zbar_y = self.latent.mean_range(self.n_x..n);
        let (mu, var) =
            delta_conditional_twosample(self.n_x, zbar_x, n - self.n_x, zbar_y, self.g);
        let sd = var.sqrt();
        self.delta = crate::rngdist::normal_sample(stream, mu, sd)?;
        self.g = g_conditional(self.delta, self.gamma, stream)?;
        Ok((mu, sd))
    }
}

/// Run one rank-sum chain. Latent means are -delta/2 for the x group and
/// +delta/2 for the y group, so positive delta means the y population sits
/// above the x population.
pub fn ranksum_chain(
    x: &Sample,
    y: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
    chain_id: u32,
) -> Result<ChainOutput> {
    if prior.kind != PriorKind::CauchyOnDelta {
        return Err(Error::Configuration(
            "the rank sum test requires the Cauchy prior on delta".into(),
        ));
    }
    config.validate()?;
    let mut state = RanksumState::init(x, y, prior.cauchy_scale)?;
    let mut stream = RngStream::new(config.seed, chain_id);
    let mut samples = Vec::with_capacity(config.iterations);
    let mut cond = Vec::with_capacity(config.iterations);
    for _ in 0..config.burnin {
        state.step(&mut stream)?;
    }
    for _ in 0..config.iterations {
        let mut last = (0.0, 1.0);
        for _ in 0..config.thin {
            last = state.step(&mut stream)?;
        }
        samples.push(state.delta);
        cond.push(last);
    }
    Ok(ChainOutput {
        chain_id,
        parameter_samples: samples,
        conditional_params: Some(cond),
        acceptance_rate: None,
    })
}

// ---------------------------------------------------------------------------
// signed rank kernel
// ---------------------------------------------------------------------------

/// Mutable state of one signed-rank chain.
///
/// The latent level is held as magnitudes: the vector of |Z_i| constrained by
/// the midranks of the absolute differences, each magnitude anchored to the
/// half line (0, inf). The signed latent value is sign_i * magnitude_i, so
/// the state carries exactly the information the W statistic is built from —
/// the global ranking of |d| plus the signs — and the conditional of a
/// magnitude under Z_i ~ Normal(delta, 1) is a truncated normal with mean
/// sign_i * delta.
///
/// Zero differences stay in the latent model: they occupy the lowest
/// magnitude ranks, and their signs are latent, resampled each sweep from
/// the exact conditional by drawing the signed value on the symmetric
/// interval (-U, U).
#[derive(Debug, Clone)]
pub struct SignedRankState {
    /// Latent magnitudes, ordered like |d|.
    pub latent: LatentVector,
    /// Current sign of each latent value (+1 or -1); fixed for nonzero
    /// differences, latent for zero differences.
    pub signs: Vec<f64>,
    /// Marks the zero-difference elements whose sign is latent.
    pub sign_is_latent: Vec<bool>,
    pub delta: f64,
    pub g: f64,
    pub decorrelate: bool,
    pub scale_step_sd: f64,
    gamma: f64,
    means: Vec<f64>,
}

fn positive_support(n: usize) -> Vec<TruncationInterval> {
    vec![TruncationInterval::new(0.0, f64::INFINITY).unwrap(); n]
}

impl SignedRankState {
    /// Build the state from difference scores (zeros allowed; at least one
    /// difference must be nonzero).
    pub fn init(differences: &[f64], gamma: f64) -> Result<Self> {
        if differences.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidData("differences must be finite".into()));
        }
        if differences.iter().all(|d| *d == 0.0) {
            return Err(Error::UndefinedStatistic(
                "all differences are zero; the signed rank test is undefined".into(),
            ));
        }
        let abs: Vec<f64> = differences.iter().map(|d| d.abs()).collect();
        let signs: Vec<f64> = differences
            .iter()
            .map(|d| if *d >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let sign_is_latent: Vec<bool> = differences.iter().map(|d| *d == 0.0).collect();
        let ranks = RankVector::from_raw(midranks_of(&abs));
        let latent =
            LatentVector::from_ranks(&ranks)?.with_support(positive_support(abs.len()))?;
        Ok(Self::from_parts(
            latent,
            signs,
            sign_is_latent,
            0.0,
            gamma * gamma,
            gamma,
        ))
    }

    /// Assemble from existing magnitudes and signs (the magnitudes must be
    /// concordant with their ranks and strictly positive).
    pub fn from_parts(
        latent: LatentVector,
        signs: Vec<f64>,
        sign_is_latent: Vec<bool>,
        delta: f64,
        g: f64,
        gamma: f64,
    ) -> Self {
        let n = latent.len();
        debug_assert_eq!(signs.len(), n);
        debug_assert_eq!(sign_is_latent.len(), n);
        Self {
            latent,
            signs,
            sign_is_latent,
            delta,
            g,
            decorrelate: true,
            scale_step_sd: 0.5,
            gamma,
            means: vec![0.0; n],
        }
    }

    /// Mean of the signed latent values.
    fn signed_mean(&self) -> f64 {
        let z = self.latent.values();
        let acc: f64 = z.iter().zip(&self.signs).map(|(m, s)| m * s).sum();
        acc / z.len() as f64
    }

    /// One sweep over the magnitudes. Fixed-sign elements draw their
    /// magnitude from Normal(sign * delta, 1) on the magnitude interval;
    /// latent-sign elements draw the signed value from Normal(delta, 1) on
    /// (-U, U) — their magnitude interval always starts at zero because zero
    /// differences hold the smallest absolute ranks.
    fn sweep(&mut self, stream: &mut RngStream) -> Result<()> {
        for i in 0..self.latent.len() {
            let interval = self.latent.effective_interval(i)?;
            if self.sign_is_latent[i] {
                debug_assert_eq!(interval.lower(), 0.0);
                let signed = truncated_normal_sample(
                    stream,
                    self.delta,
                    1.0,
                    TruncationInterval::new(-interval.upper(), interval.upper())?,
                )?;
                self.signs[i] = if signed >= 0.0 { 1.0 } else { -1.0 };
                self.latent.set_value(i, signed.abs());
            } else {
                let m = truncated_normal_sample(
                    stream,
                    self.signs[i] * self.delta,
                    1.0,
                    interval,
                )?;
                self.latent.set_value(i, m);
            }
        }
        Ok(())
    }

    pub fn step(&mut self, stream: &mut RngStream) -> Result<(f64, f64)> {
        let n = self.latent.len();
        self.sweep(stream)?;
        if self.decorrelate {
            // conditioned on the current signs (latent or fixed), the
            // magnitude density of element i is Normal(sign_i * delta, 1)
            // restricted to its interval, so the scale move sees those means
            for (m, s) in self.means.iter_mut().zip(&self.signs) {
                *m = s * self.delta;
            }
            decorrelate_scale(
                &mut self.latent,
                &self.means,
                1.0,
                self.scale_step_sd,
                stream,
            )?;
        }
        let (mu, var) = delta_conditional_onesample(n, self.signed_mean(), self.g);
        let sd = var.sqrt();
        self.delta = crate::rngdist::normal_sample(stream, mu, sd)?;
        self.g = g_conditional(self.delta, self.gamma, stream)?;
        Ok((mu, sd))
    }
}

/// Run one signed-rank chain on difference scores. Zero differences remain
/// part of the latent model (they hold the lowest magnitude ranks with a
/// latent sign); the classical W statistic drops them, see
/// [`crate::ranks::signed_rank_w_paired`].
pub fn signedrank_chain(
    differences: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
    chain_id: u32,
) -> Result<ChainOutput> {
    if prior.kind != PriorKind::CauchyOnDelta {
        return Err(Error::Configuration(
            "the signed rank test requires the Cauchy prior on delta".into(),
        ));
    }
    config.validate()?;
    let mut state = SignedRankState::init(differences.values(), prior.cauchy_scale)?;
    let mut stream = RngStream::new(config.seed, chain_id);
    let mut samples = Vec::with_capacity(config.iterations);
    let mut cond = Vec::with_capacity(config.iterations);
    for _ in 0..config.burnin {
        state.step(&mut stream)?;
    }
    for _ in 0..config.iterations {
        let mut last = (0.0, 1.0);
        for _ in 0..config.thin {
            last = state.step(&mut stream)?;
        }
        samples.push(state.delta);
        cond.push(last);
    }
    Ok(ChainOutput {
        chain_id,
        parameter_samples: samples,
        conditional_params: Some(cond),
        acceptance_rate: None,
    })
}

// ---------------------------------------------------------------------------
// Spearman kernel
// ---------------------------------------------------------------------------

/// Mutable state of one Spearman chain: two latent margins plus rho.
#[derive(Debug, Clone)]
pub struct SpearmanState {
    pub latent_x: LatentVector,
    pub latent_y: LatentVector,
    pub rho: f64,
    pub decorrelate: bool,
    pub scale_step_sd: f64,
    proposal_sd: f64,
    means: Vec<f64>,
}

impl SpearmanState {
    pub fn init(x: &Sample, y: &Sample) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidData(
                "paired samples must have equal length".into(),
            ));
        }
        if x.len() <= 3 {
            return Err(Error::SampleTooSmall(format!(
                "the Spearman sampler needs n > 3, got {}",
                x.len()
            )));
        }
        let lx = LatentVector::from_ranks(&midranks(x)?)?;
        let ly = LatentVector::from_ranks(&midranks(y)?)?;
        // start rho at the (deterministic) correlation of the initial latents
        let rho0 = pearson_raw(lx.values(), ly.values()).clamp(-0.9, 0.9);
        Ok(Self::from_parts(lx, ly, rho0))
    }

    pub fn from_parts(latent_x: LatentVector, latent_y: LatentVector, rho: f64) -> Self {
        let n = latent_x.len();
        Self {
            latent_x,
            latent_y,
            rho,
            decorrelate: true,
            scale_step_sd: 0.5,
            proposal_sd: 1.0 / ((n as f64) - 3.0).sqrt(),
            means: vec![0.0; n],
        }
    }

    /// One Metropolis-within-Gibbs cycle; returns whether the rho proposal
    /// was accepted.
    pub fn step(&mut self, stream: &mut RngStream) -> Result<bool> {
        let tau = (1.0 - self.rho * self.rho).sqrt();

        for (m, zy) in self.means.iter_mut().zip(self.latent_y.values()) {
            *m = self.rho * zy;
        }
        gibbs_sweep(&mut self.latent_x, &self.means, tau, stream)?;
        if self.decorrelate {
            decorrelate_scale(&mut self.latent_x, &self.means, tau, self.scale_step_sd, stream)?;
        }

        for (m, zx) in self.means.iter_mut().zip(self.latent_x.values()) {
            *m = self.rho * zx;
        }
        gibbs_sweep(&mut self.latent_y, &self.means, tau, stream)?;
        if self.decorrelate {
            decorrelate_scale(&mut self.latent_y, &self.means, tau, self.scale_step_sd, stream)?;
        }

        // random-walk Metropolis on Fisher's z scale; the Jacobian factor
        // (1 - rho*^2)/(1 - rho^2) makes the chain target the uniform prior
        // on rho itself
        let zeta = self.rho.atanh();
        let zeta_star = crate::rngdist::normal_sample(stream, zeta, self.proposal_sd)?;
        let rho_star = zeta_star.tanh();
        let om_star = 1.0 - rho_star * rho_star;
        let om = 1.0 - self.rho * self.rho;
        let accepted = if om_star > 0.0 && rho_star.abs() < 1.0 {
            let ll_new =
                bivariate_normal_loglik(self.latent_x.values(), self.latent_y.values(), rho_star)?;
            let ll_old =
                bivariate_normal_loglik(self.latent_x.values(), self.latent_y.values(), self.rho)?;
            let log_acc = ll_new - ll_old + om_star.ln() - om.ln();
            stream.uniform_open().ln() < log_acc
        } else {
            false
        };
        if accepted {
            self.rho = rho_star;
        }
        Ok(accepted)
    }
}

fn pearson_raw(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

/// Run one Spearman chain on paired samples.
pub fn spearman_chain(
    x: &Sample,
    y: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
    chain_id: u32,
) -> Result<ChainOutput> {
    if prior.kind != PriorKind::UniformOnRho {
        return Err(Error::Configuration(
            "the Spearman test requires the uniform prior on rho".into(),
        ));
    }
    config.validate()?;
    let mut state = SpearmanState::init(x, y)?;
    let mut stream = RngStream::new(config.seed, chain_id);
    for _ in 0..config.burnin {
        state.step(&mut stream)?;
    }
    let mut samples = Vec::with_capacity(config.iterations);
    let mut accepted = 0usize;
    let mut proposals = 0usize;
    for _ in 0..config.iterations {
        for _ in 0..config.thin {
            if state.step(&mut stream)? {
                accepted += 1;
            }
            proposals += 1;
        }
        samples.push(state.rho);
    }
    Ok(ChainOutput {
        chain_id,
        parameter_samples: samples,
        conditional_params: None,
        acceptance_rate: Some(accepted as f64 / proposals as f64),
    })
}

// ---------------------------------------------------------------------------
// multi-chain driver
// ---------------------------------------------------------------------------

/// Run `config.chains` independent chains in parallel and return them sorted
/// by chain id. Each chain gets its own stream, so the merge is
/// order-independent and deterministic.
pub fn run_chains<F>(config: &ChainConfig, run_one: F) -> Result<Vec<ChainOutput>>
where
    F: Fn(u32) -> Result<ChainOutput> + Sync,
{
    config.validate()?;
    let ids: Vec<u32> = (0..config.chains).collect();
    let mut slots: Vec<Option<Result<ChainOutput>>> = Vec::new();
    slots.resize_with(ids.len(), || None);
    std::thread::scope(|scope| {
        for (slot, &id) in slots.iter_mut().zip(&ids) {
            let run_one = &run_one;
            scope.spawn(move || {
                *slot = Some(run_one(id));
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("chain thread completed"))
        .collect()
}

/// All chains of the rank-sum test.
pub fn ranksum_chains(
    x: &Sample,
    y: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<Vec<ChainOutput>> {
    run_chains(config, |id| ranksum_chain(x, y, prior, config, id))
}

/// All chains of the signed-rank test.
pub fn signedrank_chains(
    differences: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<Vec<ChainOutput>> {
    run_chains(config, |id| signedrank_chain(differences, prior, config, id))
}

/// All chains of the Spearman test.
pub fn spearman_chains(
    x: &Sample,
    y: &Sample,
    prior: &PriorSpec,
    config: &ChainConfig,
) -> Result<Vec<ChainOutput>> {
    run_chains(config, |id| spearman_chain(x, y, prior, config, id))
}
