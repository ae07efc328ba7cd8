//! The four copula families used by the correlation simulation study:
//! Gaussian, Clayton, Frank, and Gumbel. Each supports sampling on the unit
//! square, evaluation of its population Spearman correlation, and inversion
//! of the dependence parameter for a target Spearman correlation.

use crate::inference::{kruskal_rho_to_rhos, kruskal_rhos_to_rho};
use crate::quad::{adaptive_simpson, gauss_legendre_nodes};
use crate::ranks::Sample;
use crate::rngdist::{gamma_sample, normal_sample, std_normal_cdf, RngStream};
use crate::{Error, Result};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopulaFamily {
    Gaussian,
    Clayton,
    Frank,
    Gumbel,
}

impl CopulaFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CopulaFamily::Gaussian => "gaussian",
            CopulaFamily::Clayton => "clayton",
            CopulaFamily::Frank => "frank",
            CopulaFamily::Gumbel => "gumbel",
        }
    }
}

/// A copula family with its dependence parameter.
///
/// Independence is representable in every family: theta = 0 for Clayton and
/// Frank, theta = 1 for Gumbel, rho = 0 for Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopulaSpec {
    pub family: CopulaFamily,
    pub theta: f64,
}

impl CopulaSpec {
    pub fn new(family: CopulaFamily, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain(format!("non-finite theta {theta}")));
        }
        let ok = match family {
            CopulaFamily::Gaussian => theta.abs() < 1.0,
            CopulaFamily::Clayton => theta >= 0.0,
            CopulaFamily::Frank => true,
            CopulaFamily::Gumbel => theta >= 1.0,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "theta {theta} outside the admissible range of the {} copula",
                family.name()
            )));
        }
        Ok(Self { family, theta })
    }

    pub fn independence(family: CopulaFamily) -> Self {
        let theta = match family {
            CopulaFamily::Gumbel => 1.0,
            _ => 0.0,
        };
        Self { family, theta }
    }

    pub fn is_independence(&self) -> bool {
        match self.family {
            CopulaFamily::Gumbel => self.theta == 1.0,
            _ => self.theta == 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// population Spearman rho
// ---------------------------------------------------------------------------

fn gl_nodes_128() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre_nodes(128))
}

/// 12 * double integral of C(u, v) over the unit square, minus 3, by tensor
/// Gauss-Legendre quadrature.
fn rho_s_by_quadrature<F: Fn(f64, f64) -> f64>(copula_cdf: F) -> f64 {
    let (nodes, weights) = gl_nodes_128();
    let mut acc = 0.0;
    for (xi, wi) in nodes.iter().zip(weights) {
        let u = 0.5 * (xi + 1.0);
        let mut inner = 0.0;
        for (xj, wj) in nodes.iter().zip(weights) {
            let v = 0.5 * (xj + 1.0);
            inner += wj * copula_cdf(u, v);
        }
        acc += wi * inner;
    }
    // each axis contributes a factor 1/2 from the [-1,1] -> [0,1] map
    12.0 * acc * 0.25 - 3.0
}

fn clayton_cdf(theta: f64) -> impl Fn(f64, f64) -> f64 {
    move |u, v| (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
}

fn gumbel_cdf(theta: f64) -> impl Fn(f64, f64) -> f64 {
    move |u, v| {
        let a = (-u.ln()).powf(theta);
        let b = (-v.ln()).powf(theta);
        (-(a + b).powf(1.0 / theta)).exp()
    }
}

/// Debye function D_k(x) = (k / x^k) * integral of t^k / (e^t - 1) over
/// [0, x], for positive x.
fn debye(k: u32, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let kf = f64::from(k);
    let integrand = |t: f64| {
        // t / (e^t - 1) evaluated stably near zero
        let base = if t.abs() < 1e-8 {
            1.0 - 0.5 * t
        } else {
            t / t.exp_m1()
        };
        base * t.powi(k as i32 - 1)
    };
    let integral = adaptive_simpson(&integrand, 0.0, x, 1e-12);
    kf / x.powi(k as i32) * integral
}

/// Population Spearman correlation of the copula.
///
/// Gaussian and Frank use closed forms (the Kruskal transform and the Debye
/// function formula); Clayton and Gumbel integrate the copula numerically.
pub fn copula_rho_s(spec: &CopulaSpec) -> Result<f64> {
    CopulaSpec::new(spec.family, spec.theta)?;
    if spec.is_independence() {
        return Ok(0.0);
    }
    let theta = spec.theta;
    Ok(match spec.family {
        CopulaFamily::Gaussian => kruskal_rho_to_rhos(theta)?,
        CopulaFamily::Frank => {
            // odd in theta: evaluate at |theta| and restore the sign
            let t = theta.abs();
            let v = 1.0 - 12.0 / t * (debye(1, t) - debye(2, t));
            v.copysign(theta)
        }
        CopulaFamily::Clayton => rho_s_by_quadrature(clayton_cdf(theta)),
        CopulaFamily::Gumbel => rho_s_by_quadrature(gumbel_cdf(theta)),
    })
}

/// Find the dependence parameter whose population Spearman correlation hits
/// `target` (within 1e-3, usually far closer), by closed form for the
/// Gaussian family and bisection on a monotone bracket otherwise.
pub fn invert_rho_s(family: CopulaFamily, target: f64) -> Result<CopulaSpec> {
    if !(target.is_finite() && target.abs() < 1.0) {
        return Err(Error::Configuration(format!(
            "target Spearman correlation must lie in (-1, 1), got {target}"
        )));
    }
    if target == 0.0 {
        return Ok(CopulaSpec::independence(family));
    }
    match family {
        CopulaFamily::Gaussian => {
            CopulaSpec::new(family, kruskal_rhos_to_rho(target)?)
        }
        CopulaFamily::Clayton | CopulaFamily::Gumbel => {
            if target < 0.0 {
                return Err(Error::Configuration(format!(
                    "the {} copula cannot represent negative dependence",
                    family.name()
                )));
            }
            let offset = if family == CopulaFamily::Gumbel { 1.0 } else { 0.0 };
            bisect_theta(family, target, offset)
        }
        CopulaFamily::Frank => {
            let spec = bisect_theta(family, target.abs(), 0.0)?;
            CopulaSpec::new(family, spec.theta.copysign(target))
        }
    }
}

fn bisect_theta(family: CopulaFamily, target: f64, offset: f64) -> Result<CopulaSpec> {
    let eval = |theta: f64| -> Result<f64> {
        copula_rho_s(&CopulaSpec { family, theta })
    };
    // expand the upper bracket until the target is enclosed
    let mut hi = offset + 1.0;
    let mut hi_val = eval(hi)?;
    let mut guard = 0;
    while hi_val < target {
        hi = offset + (hi - offset) * 2.0;
        hi_val = eval(hi)?;
        guard += 1;
        if guard > 20 {
            return Err(Error::Configuration(format!(
                "target Spearman correlation {target} is unreachable for the {} copula",
                family.name()
            )));
        }
    }
    let mut lo = offset + 1e-9;
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        let v = eval(mid)?;
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * (1.0 + hi.abs()) {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let spec = CopulaSpec::new(family, theta)?;
    let achieved = copula_rho_s(&spec)?;
    if (achieved - target).abs() > 1e-3 {
        return Err(Error::Configuration(format!(
            "bisection failed to reach the target Spearman correlation: {achieved} vs {target}"
        )));
    }
    Ok(spec)
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

#[inline]
fn exp_sample(stream: &mut RngStream) -> f64 {
    -stream.uniform_open().ln()
}

/// Positive stable variate with Laplace transform exp(-s^alpha), 0 < alpha < 1
/// (Kanter's representation).
fn positive_stable(stream: &mut RngStream, alpha: f64) -> f64 {
    let u = std::f64::consts::PI * stream.uniform_open();
    let e = exp_sample(stream);
    let num = (alpha * u).sin().powf(alpha / (1.0 - alpha)) * ((1.0 - alpha) * u).sin();
    let den = u.sin().powf(1.0 / (1.0 - alpha));
    ((num / den) / e).powf((1.0 - alpha) / alpha)
}

/// Draw n pairs with the given copula and uniform margins.
pub fn copula_sample(
    spec: &CopulaSpec,
    n: usize,
    stream: &mut RngStream,
) -> Result<(Sample, Sample)> {
    CopulaSpec::new(spec.family, spec.theta)?;
    if n == 0 {
        return Err(Error::Configuration("cannot sample zero pairs".into()));
    }
    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    if spec.is_independence() {
        for _ in 0..n {
            us.push(stream.uniform_open());
            vs.push(stream.uniform_open());
        }
        return Ok((Sample::new(us)?, Sample::new(vs)?));
    }
    let theta = spec.theta;
    match spec.family {
        CopulaFamily::Gaussian => {
            let tau = (1.0 - theta * theta).sqrt();
            for _ in 0..n {
                let z1 = normal_sample(stream, 0.0, 1.0)?;
                let z2 = theta * z1 + tau * normal_sample(stream, 0.0, 1.0)?;
                us.push(std_normal_cdf(z1));
                vs.push(std_normal_cdf(z2));
            }
        }
        CopulaFamily::Clayton => {
            // gamma frailty: psi(s) = (1 + s)^(-1/theta)
            for _ in 0..n {
                let w = gamma_sample(stream, 1.0 / theta)?;
                us.push((1.0 + exp_sample(stream) / w).powf(-1.0 / theta));
                vs.push((1.0 + exp_sample(stream) / w).powf(-1.0 / theta));
            }
        }
        CopulaFamily::Gumbel => {
            // positive-stable frailty: psi(s) = exp(-s^(1/theta))
            let alpha = 1.0 / theta;
            for _ in 0..n {
                let s = positive_stable(stream, alpha);
                us.push((-(exp_sample(stream) / s).powf(alpha)).exp());
                vs.push((-(exp_sample(stream) / s).powf(alpha)).exp());
            }
        }
        CopulaFamily::Frank => {
            // closed-form conditional inverse
            let d = (-theta).exp_m1(); // e^(-theta) - 1
            for _ in 0..n {
                let u = stream.uniform_open();
                let w = stream.uniform_open();
                let a = (-theta * u).exp();
                let b = w * d / (a - w * (a - 1.0));
                us.push(u);
                vs.push((-b.ln_1p() / theta).clamp(f64::MIN_POSITIVE, 1.0 - 1e-16));
            }
        }
    }
    Ok((Sample::new(us)?, Sample::new(vs)?))
}
