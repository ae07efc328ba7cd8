//! Latent-normal data augmentation: threshold computation from the observed
//! ranks, constrained Gibbs sweeps over the latent values, and the
//! decorrelating group moves that break the random-walk behaviour data
//! augmentation is prone to.

use crate::ranks::RankVector;
use crate::rngdist::{
    normal_quantile, truncated_normal_sample, RngStream, TruncationInterval,
};
use crate::{Error, Result};

/// Latent normal scores tied to a fixed observed ranking.
///
/// Invariant (ordinal concordance): whenever `ranks[i] < ranks[j]` the latent
/// values satisfy `z[i] < z[j]`. Tied ranks leave the corresponding latent
/// values mutually unconstrained. An optional per-element support interval
/// tightens the constraint further (the signed rank test anchors each latent
/// to the sign of its observed difference).
#[derive(Debug, Clone)]
pub struct LatentVector {
    z: Vec<f64>,
    ranks: Vec<f64>,
    support: Option<Vec<TruncationInterval>>,
}

impl LatentVector {
    /// Initialize from observed midranks with z = quantile(rank / (n + 1)),
    /// which satisfies concordance at iteration zero and starts the chain
    /// near the stationary region.
    pub fn from_ranks(ranks: &RankVector) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidData("empty rank vector".into()));
        }
        let n = ranks.len() as f64;
        let z = ranks
            .ranks()
            .iter()
            .map(|r| normal_quantile(r / (n + 1.0), 0.0, 1.0))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            z,
            ranks: ranks.ranks().to_vec(),
            support: None,
        })
    }

    /// Wrap existing latent values that already satisfy concordance with the
    /// given ranks (used by sampler-validation harnesses that generate the
    /// latent level first).
    pub fn from_values(z: Vec<f64>, ranks: &RankVector) -> Result<Self> {
        if z.len() != ranks.len() {
            return Err(Error::InvalidData(
                "latent values and ranks must have equal length".into(),
            ));
        }
        let lv = Self {
            z,
            ranks: ranks.ranks().to_vec(),
            support: None,
        };
        if !lv.is_concordant() {
            return Err(Error::InvalidData(
                "latent values are not concordant with the observed ranks".into(),
            ));
        }
        Ok(lv)
    }

    /// Attach per-element support intervals.
    ///
    /// Values already inside their supports are kept. Otherwise the latent
    /// state is re-initialized from the ranks with each sign-anchored block
    /// mapped into its own half line: elements anchored to (-inf, 0) draw
    /// their quantile from (0, 1/2), elements anchored to (0, +inf) from
    /// (1/2, 1). This keeps concordance provided the anchors are themselves
    /// consistent with the ordering, which the signed rank constraint
    /// guarantees (negative differences always rank below positive ones).
    pub fn with_support(mut self, support: Vec<TruncationInterval>) -> Result<Self> {
        if support.len() != self.z.len() {
            return Err(Error::InvalidData(
                "support must have one interval per latent value".into(),
            ));
        }
        let all_inside = self.z.iter().zip(&support).all(|(z, iv)| iv.contains(*z));
        if !all_inside {
            let n = self.z.len() as f64;
            for ((zi, iv), r) in self.z.iter_mut().zip(&support).zip(&self.ranks) {
                let q = r / (n + 1.0);
                let q = if iv.lower() == 0.0 {
                    0.5 + 0.5 * q
                } else if iv.upper() == 0.0 {
                    0.5 * q
                } else {
                    q
                };
                *zi = normal_quantile(q, 0.0, 1.0)?;
            }
        }
        self.support = Some(support);
        let ok = self.is_concordant()
            && self.z.iter().zip(self.support.as_ref().unwrap()).all(|(z, iv)| iv.contains(*z));
        if !ok {
            return Err(Error::InvalidData(
                "support intervals are inconsistent with the observed ranking".into(),
            ));
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn mean(&self) -> f64 {
        self.z.iter().sum::<f64>() / self.z.len() as f64
    }

    pub fn mean_range(&self, range: std::ops::Range<usize>) -> f64 {
        let slice = &self.z[range];
        slice.iter().sum::<f64>() / slice.len() as f64
    }

    /// Truncation interval for element `i`: the rank thresholds intersected
    /// with the element's support, against the current latent values.
    pub fn effective_interval(&self, i: usize) -> Result<TruncationInterval> {
        let interval = thresholds(i, self);
        match &self.support {
            Some(support) => interval.intersect(&support[i]),
            None => Ok(interval),
        }
    }

    /// Overwrite one latent value (used by kernels that draw outside the
    /// generic sweep). The caller is responsible for staying inside the
    /// element's effective interval.
    pub fn set_value(&mut self, i: usize, value: f64) {
        self.z[i] = value;
    }

    /// O(n log n) concordance check.
    pub fn is_concordant(&self) -> bool {
        let n = self.z.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.ranks[a].total_cmp(&self.ranks[b]));
        let mut running_max = f64::NEG_INFINITY;
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && self.ranks[order[j + 1]] == self.ranks[order[i]] {
                j += 1;
            }
            let group_min = order[i..=j]
                .iter()
                .map(|&k| self.z[k])
                .fold(f64::INFINITY, f64::min);
            if group_min <= running_max {
                return false;
            }
            running_max = order[i..=j]
                .iter()
                .map(|&k| self.z[k])
                .fold(f64::NEG_INFINITY, f64::max);
            i = j + 1;
        }
        true
    }
}

/// Truncation thresholds for latent value `i`: the lower bound is the largest
/// latent value with a strictly smaller observed rank, the upper bound the
/// smallest latent value with a strictly larger observed rank. Ties impose no
/// constraint, so the interval always has positive width.
pub fn thresholds(i: usize, latent: &LatentVector) -> TruncationInterval {
    let ri = latent.ranks[i];
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for (j, (&rj, &zj)) in latent.ranks.iter().zip(&latent.z).enumerate() {
        if j == i {
            continue;
        }
        if rj < ri {
            lower = lower.max(zj);
        } else if rj > ri {
            upper = upper.min(zj);
        }
    }
    // concordance guarantees lower < upper
    TruncationInterval::new(lower, upper).expect("concordant state yields a valid interval")
}

/// One systematic-scan Gibbs sweep: each latent value is resampled in
/// ascending index order from `Normal(means[i], sd^2)` truncated to its
/// current thresholds (intersected with the per-element support, if any).
pub fn gibbs_sweep(
    latent: &mut LatentVector,
    means: &[f64],
    sd: f64,
    stream: &mut RngStream,
) -> Result<()> {
    if means.len() != latent.len() {
        return Err(Error::InvalidData(
            "means must align with the latent vector".into(),
        ));
    }
    for (i, mean) in means.iter().enumerate() {
        let interval = latent.effective_interval(i)?;
        latent.z[i] = truncated_normal_sample(stream, *mean, sd, interval)?;
    }
    debug_assert!(latent.is_concordant());
    Ok(())
}

/// Additive decorrelating move for the two-sample kernel.
///
/// The first `n_x` entries carry latent mean -delta/2, the rest +delta/2.
/// A location parameter mu with a flat prior is introduced, drawn from its
/// full conditional mu ~ Normal(wbar, 1/n), and the state is recentred to
/// mu = 0 by adding c = -mu to every latent value. Order, and hence
/// concordance, is preserved exactly.
pub fn decorrelate_shift(
    latent: &mut LatentVector,
    n_x: usize,
    delta: f64,
    stream: &mut RngStream,
) -> Result<f64> {
    let n = latent.len();
    if n_x == 0 || n_x >= n {
        return Err(Error::InvalidData(
            "decorrelate_shift needs a two-sample configuration".into(),
        ));
    }
    debug_assert!(
        latent.support.is_none(),
        "shift moves are incompatible with anchored supports"
    );
    let mut acc = 0.0;
    for (i, z) in latent.z.iter().enumerate() {
        acc += if i < n_x { z + delta / 2.0 } else { z - delta / 2.0 };
    }
    let wbar = acc / n as f64;
    let c = crate::rngdist::normal_sample(stream, -wbar, 1.0 / (n as f64).sqrt())?;
    for z in &mut latent.z {
        *z += c;
    }
    Ok(c)
}

/// Log acceptance ratio of the multiplicative group move z -> s z against
/// the model density `prod Normal(z_i; means[i], sd^2)`, including the s^n
/// Jacobian. Exactly zero at s = 1.
pub fn scale_log_acceptance(z: &[f64], means: &[f64], sd: f64, s: f64) -> f64 {
    let mut acc = (z.len() as f64) * s.ln();
    let inv2 = 1.0 / (2.0 * sd * sd);
    for (zi, m) in z.iter().zip(means) {
        let new = s * zi - m;
        let old = zi - m;
        acc -= (new * new - old * old) * inv2;
    }
    acc
}

/// Multiplicative decorrelating move: propose z -> s z with
/// log s ~ Normal(0, step_sd^2) and accept with the model-density ratio
/// times the Jacobian s^n. Valid only where a common positive rescaling
/// leaves the observed ordinal information unchanged; it preserves both
/// ordering and sign pattern exactly.
pub fn decorrelate_scale(
    latent: &mut LatentVector,
    means: &[f64],
    sd: f64,
    step_sd: f64,
    stream: &mut RngStream,
) -> Result<bool> {
    if means.len() != latent.len() {
        return Err(Error::InvalidData(
            "means must align with the latent vector".into(),
        ));
    }
    if !(step_sd.is_finite() && step_sd > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step_sd must be positive, got {step_sd}"
        )));
    }
    let s = (crate::rngdist::normal_sample(stream, 0.0, step_sd)?).exp();
    let log_acc = scale_log_acceptance(&latent.z, means, sd, s);
    let accept = stream.uniform_open().ln() < log_acc;
    if accept {
        for z in &mut latent.z {
            *z *= s;
        }
    }
    Ok(accept)
}
