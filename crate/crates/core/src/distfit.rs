//! Maximum-likelihood fitting of fat-tailed models and tail-cutoff selection.
//!
//! Every tail fit uses the observations `x ≥ xmin`. A Pareto fit describes
//! only its tail, so its CDF and tail probabilities are conditional on
//! `X ≥ xmin`; [`spliced_tail_probability`] weights that law by the
//! empirical share of the sample in the tail. A lognormal fit is the
//! untruncated law with parameters (μ, σ); when it was fitted to a truncated
//! tail, `truncation_min` records the cutoff and goodness-of-fit uses the law
//! conditioned on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::optim::{nelder_mead_restarts, NelderMeadOptions};
use crate::special::{ln_normal_pdf, normal_cdf, normal_quantile, normal_sf};

pub const DEFAULT_MIN_TAIL: usize = 5;
/// Minimum exceedances/tail points for the numerically fitted models.
pub const MIN_NUMERIC_TAIL: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LognormalFit {
    pub mu: f64,
    pub sigma: f64,
    pub truncation_min: Option<f64>,
    pub n: usize,
    pub log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFit {
    pub xmin: f64,
    pub alpha: f64,
    pub n_tail: usize,
    /// Size of the sample the tail was cut from.
    pub n_sample: usize,
    pub log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpdFit {
    pub threshold: f64,
    pub scale: f64,
    pub shape: f64,
    /// 1/ξ for ξ > 0, infinite otherwise.
    pub implied_alpha: Extended,
    pub n_exceed: usize,
    pub log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XminCandidate {
    pub xmin: f64,
    pub alpha: f64,
    pub n_tail: usize,
    pub ks: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XminResult {
    pub xmin: f64,
    pub alpha: f64,
    pub ks_distance: f64,
    pub fit: ParetoFit,
    pub scan: Vec<XminCandidate>,
}

/// Any fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Fit {
    Lognormal(LognormalFit),
    Pareto(ParetoFit),
    Gpd(GpdFit),
}

impl From<LognormalFit> for Fit {
    fn from(f: LognormalFit) -> Self {
        Fit::Lognormal(f)
    }
}
impl From<ParetoFit> for Fit {
    fn from(f: ParetoFit) -> Self {
        Fit::Pareto(f)
    }
}
impl From<GpdFit> for Fit {
    fn from(f: GpdFit) -> Self {
        Fit::Gpd(f)
    }
}

impl LognormalFit {
    pub fn new(mu: f64, sigma: f64) -> Self {
        LognormalFit {
            mu,
            sigma,
            truncation_min: None,
            n: 0,
            log_likelihood: f64::NAN,
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        ln_normal_pdf(z) - self.sigma.ln() - x.ln()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        normal_cdf((x.ln() - self.mu) / self.sigma)
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        normal_sf((x.ln() - self.mu) / self.sigma)
    }

    /// ln P(X ≥ x), accurate far into the upper tail.
    fn ln_sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        let s = normal_sf(z);
        if s > 0.0 {
            s.ln()
        } else {
            // Mills-ratio asymptote
            ln_normal_pdf(z) - z.ln()
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        (self.mu + self.sigma * normal_quantile(p)).exp()
    }
}

impl ParetoFit {
    pub fn new(xmin: f64, alpha: f64) -> Self {
        ParetoFit {
            xmin,
            alpha,
            n_tail: 0,
            n_sample: 0,
            log_likelihood: f64::NAN,
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x < self.xmin {
            return f64::NEG_INFINITY;
        }
        self.alpha.ln() - self.xmin.ln() - (self.alpha + 1.0) * (x / self.xmin).ln()
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= self.xmin {
            1.0
        } else {
            (self.xmin / x).powf(self.alpha)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.sf(x)
    }

    /// Inverse of the conditional tail law, `x` with `P(X ≥ x) = p`.
    pub fn quantile_sf(&self, p: f64) -> f64 {
        self.xmin * p.powf(-1.0 / self.alpha)
    }
}

impl GpdFit {
    pub fn new(threshold: f64, scale: f64, shape: f64) -> Self {
        GpdFit {
            threshold,
            scale,
            shape,
            implied_alpha: implied_alpha(shape),
            n_exceed: 0,
            log_likelihood: f64::NAN,
        }
    }

    /// Upper end of the support (infinite unless ξ < 0).
    pub fn upper(&self) -> f64 {
        if self.shape < 0.0 {
            self.threshold - self.scale / self.shape
        } else {
            f64::INFINITY
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let y = x - self.threshold;
        if y < 0.0 {
            return f64::NEG_INFINITY;
        }
        gpd_ln_pdf(y, self.scale, self.shape)
    }

    pub fn sf(&self, x: f64) -> f64 {
        let y = x - self.threshold;
        if y <= 0.0 {
            return 1.0;
        }
        let xi = self.shape;
        if xi.abs() < 1e-12 {
            (-y / self.scale).exp()
        } else {
            let t = 1.0 + xi * y / self.scale;
            if t <= 0.0 {
                0.0
            } else {
                t.powf(-1.0 / xi)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.sf(x)
    }

    pub fn quantile_sf(&self, p: f64) -> f64 {
        let xi = self.shape;
        if xi.abs() < 1e-12 {
            self.threshold - self.scale * p.ln()
        } else {
            self.threshold + self.scale / xi * (p.powf(-xi) - 1.0)
        }
    }
}

fn implied_alpha(shape: f64) -> Extended {
    if shape > 0.0 {
        Extended::Finite(1.0 / shape)
    } else {
        Extended::Infinite
    }
}

fn gpd_ln_pdf(y: f64, scale: f64, shape: f64) -> f64 {
    if shape.abs() < 1e-12 {
        return -scale.ln() - y / scale;
    }
    let t = 1.0 + shape * y / scale;
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    -scale.ln() - (1.0 / shape + 1.0) * t.ln()
}

impl Fit {
    pub fn name(&self) -> &'static str {
        match self {
            Fit::Lognormal(f) if f.truncation_min.is_some() => "truncated_lognormal",
            Fit::Lognormal(_) => "lognormal",
            Fit::Pareto(_) => "pareto",
            Fit::Gpd(_) => "gpd",
        }
    }

    /// Log-density of the model's own law.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        match self {
            Fit::Lognormal(f) => f.ln_pdf(x),
            Fit::Pareto(f) => f.ln_pdf(x),
            Fit::Gpd(f) => f.ln_pdf(x),
        }
    }

    /// `P(X ≥ x)` under the model's own law. For Pareto this is the
    /// conditional tail law `(xmin/x)^α`; a lognormal fitted to a truncated
    /// tail reports its untruncated law.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            Fit::Lognormal(f) => f.sf(x),
            Fit::Pareto(f) => f.sf(x),
            Fit::Gpd(f) => f.sf(x),
        }
    }

    /// ln P(X ≥ x) under the model's own law.
    pub fn ln_sf(&self, x: f64) -> f64 {
        match self {
            Fit::Lognormal(f) => f.ln_sf(x),
            Fit::Pareto(f) => {
                if x <= f.xmin {
                    0.0
                } else {
                    -f.alpha * (x / f.xmin).ln()
                }
            }
            Fit::Gpd(f) => f.sf(x).ln(),
        }
    }

    /// Lower edge of the data the model describes.
    pub fn lower_bound(&self) -> f64 {
        match self {
            Fit::Lognormal(f) => f.truncation_min.unwrap_or(0.0),
            Fit::Pareto(f) => f.xmin,
            Fit::Gpd(f) => f.threshold,
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        match self {
            Fit::Lognormal(f) => x > 0.0 && f.truncation_min.is_none_or(|t| x >= t),
            Fit::Pareto(f) => x >= f.xmin,
            Fit::Gpd(f) => x >= f.threshold && x <= f.upper(),
        }
    }

    /// CDF of the law the model was fitted as: conditional on the truncation
    /// point for truncated lognormals, the plain law otherwise.
    pub fn fitted_cdf(&self, x: f64) -> f64 {
        match self {
            Fit::Lognormal(f) => match f.truncation_min {
                Some(t) => {
                    let st = f.sf(t);
                    ((st - f.sf(x)) / st).clamp(0.0, 1.0)
                }
                None => f.cdf(x),
            },
            Fit::Pareto(f) => f.cdf(x),
            Fit::Gpd(f) => f.cdf(x),
        }
    }

    pub fn log_likelihood(&self) -> f64 {
        match self {
            Fit::Lognormal(f) => f.log_likelihood,
            Fit::Pareto(f) => f.log_likelihood,
            Fit::Gpd(f) => f.log_likelihood,
        }
    }
}

fn check_positive(sample: &[f64]) -> Result<()> {
    match sample.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        Some(x) => Err(Error::Domain(format!("value {x} is not a positive real"))),
        None => Ok(()),
    }
}

fn sample_max(sample: &[f64]) -> f64 {
    sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn sample_min(sample: &[f64]) -> f64 {
    sample.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Observations at or above `xmin`, or the appropriate tail error.
pub fn tail_of(sample: &[f64], xmin: f64, needed: usize) -> Result<Vec<f64>> {
    let tail: Vec<f64> = sample.iter().cloned().filter(|&x| x >= xmin).collect();
    if tail.is_empty() {
        return Err(Error::EmptyTail {
            xmin,
            max: sample_max(sample),
        });
    }
    if tail.len() < needed {
        return Err(Error::InsufficientTail {
            xmin,
            needed,
            found: tail.len(),
        });
    }
    Ok(tail)
}

/// Moves a requested cutoff down onto an observation that the published
/// resolution cannot distinguish from it.
///
/// Data rounded to `half_resolution` cannot tell whether an observation
/// printed just below `xmin` lies below it or not. If any observation sits
/// in `[xmin − half_resolution, xmin)`, the smallest of them becomes the
/// cutoff; otherwise `xmin` is returned unchanged.
pub fn snap_cutoff(sample: &[f64], xmin: f64, half_resolution: f64) -> f64 {
    sample
        .iter()
        .cloned()
        .filter(|&x| x < xmin && xmin - x <= half_resolution * (1.0 + 1e-9))
        .fold(xmin, f64::min)
}

/// Lognormal MLE: μ is the mean of ln x and σ uses divisor n.
pub fn fit_lognormal(sample: &[f64]) -> Result<LognormalFit> {
    if sample.len() < 2 {
        return Err(Error::EmptySample(format!(
            "lognormal fit needs at least 2 values, got {}",
            sample.len()
        )));
    }
    check_positive(sample)?;
    let n = sample.len() as f64;
    let logs: Vec<f64> = sample.iter().map(|x| x.ln()).collect();
    let mu = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mu).powi(2)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Degenerate("lognormal fit of identical values".into()));
    }
    let mut fit = LognormalFit {
        mu,
        sigma,
        truncation_min: None,
        n: sample.len(),
        log_likelihood: 0.0,
    };
    fit.log_likelihood = sample.iter().map(|&x| fit.ln_pdf(x)).sum();
    Ok(fit)
}

/// Excess kurtosis of the fitted lognormal law,
/// `e^{4σ²} + 2e^{3σ²} + 3e^{2σ²} − 6`.
pub fn lognormal_kurtosis(fit: &LognormalFit) -> f64 {
    let s2 = fit.sigma * fit.sigma;
    // expm1 keeps the σ → 0 limit exact
    let e4 = (4.0 * s2).exp_m1();
    let e3 = (3.0 * s2).exp_m1();
    let e2 = (2.0 * s2).exp_m1();
    e4 + 2.0 * e3 + 3.0 * e2
}

/// Continuous Pareto MLE above `xmin` (Hill estimator), `α = n / Σ ln(x/xmin)`.
pub fn fit_pareto_hill(sample: &[f64], xmin: f64) -> Result<ParetoFit> {
    if !(xmin > 0.0) {
        return Err(Error::Domain(format!("xmin {xmin} must be positive")));
    }
    check_positive(sample)?;
    let tail = tail_of(sample, xmin, 2)?;
    let n = tail.len() as f64;
    let log_excess: f64 = tail.iter().map(|x| (x / xmin).ln()).sum();
    if !(log_excess > 0.0) {
        return Err(Error::Degenerate(format!(
            "every tail value equals xmin = {xmin}"
        )));
    }
    let alpha = n / log_excess;
    Ok(ParetoFit {
        xmin,
        alpha,
        n_tail: tail.len(),
        n_sample: sample.len(),
        log_likelihood: n * (alpha / xmin).ln() - (alpha + 1.0) * log_excess,
    })
}

/// Generalized Pareto MLE over the exceedances `x − threshold` of values
/// strictly above `threshold`, by Nelder–Mead on `(ln σ, ξ)`.
pub fn fit_gpd(sample: &[f64], threshold: f64) -> Result<GpdFit> {
    let y: Vec<f64> = sample
        .iter()
        .filter(|&&x| x > threshold)
        .map(|&x| x - threshold)
        .collect();
    if y.is_empty() {
        return Err(Error::EmptyTail {
            xmin: threshold,
            max: sample_max(sample),
        });
    }
    if y.len() < MIN_NUMERIC_TAIL {
        return Err(Error::InsufficientTail {
            xmin: threshold,
            needed: MIN_NUMERIC_TAIL,
            found: y.len(),
        });
    }
    let n = y.len() as f64;
    let m = y.iter().sum::<f64>() / n;
    let v = y.iter().map(|t| (t - m).powi(2)).sum::<f64>() / (n - 1.0);
    if !(v > 0.0) {
        return Err(Error::Degenerate(
            "all exceedances are equal; GPD likelihood is unbounded".into(),
        ));
    }

    let nll = |p: &[f64]| -> f64 {
        let scale = p[0].exp();
        -y.iter().map(|&t| gpd_ln_pdf(t, scale, p[1])).sum::<f64>()
    };

    // method-of-moments start, pulled inside the region where it is defined
    let xi0 = (0.5 * (1.0 - m * m / v)).clamp(-0.4, 0.9);
    let mut sigma0 = 0.5 * m * (m * m / v + 1.0);
    let ymax = y.iter().cloned().fold(0.0, f64::max);
    if xi0 < 0.0 && ymax >= -sigma0 / xi0 {
        sigma0 = -xi0 * ymax * 1.1;
    }
    let best = nelder_mead_restarts(
        nll,
        &[sigma0.ln(), xi0],
        &[0.3, 0.2],
        &NelderMeadOptions::default(),
    )
    .map_err(|e| rename_nonconvergence(e, "GPD fit"))?;

    let scale = best.point[0].exp();
    let shape = best.point[1];
    Ok(GpdFit {
        threshold,
        scale,
        shape,
        implied_alpha: implied_alpha(shape),
        n_exceed: y.len(),
        log_likelihood: -best.value,
    })
}

fn rename_nonconvergence(e: Error, what: &str) -> Error {
    match e {
        Error::NonConvergence {
            best_point,
            best_value,
            evaluations,
            diameter,
            ..
        } => Error::NonConvergence {
            what: what.to_string(),
            best_point,
            best_value,
            evaluations,
            diameter,
        },
        other => other,
    }
}

/// Lognormal MLE of the tail `x ≥ xmin` under the law truncated at `xmin`.
/// A cutoff strictly below the sample minimum truncates nothing and returns
/// the plain [`fit_lognormal`] result.
pub fn fit_truncated_lognormal(sample: &[f64], xmin: f64) -> Result<LognormalFit> {
    check_positive(sample)?;
    if !sample.is_empty() && xmin < sample_min(sample) {
        return fit_lognormal(sample);
    }
    let tail = tail_of(sample, xmin, MIN_NUMERIC_TAIL)?;
    let start = fit_lognormal(&tail)?;
    let ln_tail: Vec<f64> = tail.iter().map(|x| x.ln()).collect();
    let sum_ln: f64 = ln_tail.iter().sum();
    let ln_xmin = xmin.ln();
    let n = tail.len() as f64;

    let nll = |p: &[f64]| -> f64 {
        let (mu, sigma) = (p[0], p[1].exp());
        let z0 = (ln_xmin - mu) / sigma;
        let s0 = normal_sf(z0);
        let ln_s0 = if s0 > 0.0 {
            s0.ln()
        } else {
            ln_normal_pdf(z0) - z0.ln()
        };
        let dens: f64 = ln_tail
            .iter()
            .map(|l| ln_normal_pdf((l - mu) / sigma))
            .sum::<f64>();
        -(dens - n * sigma.ln() - sum_ln - n * ln_s0)
    };

    let best = nelder_mead_restarts(
        nll,
        &[start.mu, start.sigma.ln()],
        &[0.25, 0.25],
        &NelderMeadOptions::default(),
    )
    .map_err(|e| rename_nonconvergence(e, "truncated lognormal fit"))?;

    Ok(LognormalFit {
        mu: best.point[0],
        sigma: best.point[1].exp(),
        truncation_min: Some(xmin),
        n: tail.len(),
        log_likelihood: -best.value,
    })
}

/// Kolmogorov–Smirnov distance between the tail sample and the law the model
/// was fitted as (see [`Fit::fitted_cdf`]).
pub fn ks_distance(tail: &[f64], model: &Fit) -> Result<f64> {
    if tail.is_empty() {
        return Err(Error::EmptySample("KS distance of an empty tail".into()));
    }
    if let Some(x) = tail.iter().find(|&&x| !model.in_support(x)) {
        return Err(Error::Domain(format!(
            "{x} lies outside the {} support",
            model.name()
        )));
    }
    let mut v = tail.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = model.fitted_cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);
    Ok(d.clamp(0.0, 1.0))
}

/// Scans every observed value leaving at least `min_tail` points at or above
/// it, fits Hill's α there and keeps the cutoff with the smallest KS
/// distance (the smaller cutoff on ties).
pub fn select_xmin(sample: &[f64], min_tail: usize) -> Result<XminResult> {
    let min_tail = min_tail.max(2);
    if sample.len() < min_tail + 1 {
        return Err(Error::InsufficientTail {
            xmin: f64::NAN,
            needed: min_tail + 1,
            found: sample.len(),
        });
    }
    check_positive(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut candidates = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if (i == 0 || sorted[i - 1] != x) && n - i >= min_tail {
            candidates.push(x);
        }
    }

    let scan: Vec<XminCandidate> = candidates
        .par_iter()
        .filter_map(|&xmin| {
            let fit = fit_pareto_hill(&sorted, xmin).ok()?;
            let tail = &sorted[sorted.partition_point(|&v| v < xmin)..];
            let ks = ks_distance(tail, &Fit::Pareto(fit.clone())).ok()?;
            Some(XminCandidate {
                xmin,
                alpha: fit.alpha,
                n_tail: fit.n_tail,
                ks,
            })
        })
        .collect();

    let best = scan
        .iter()
        .fold(None::<&XminCandidate>, |best, c| match best {
            Some(b) if b.ks <= c.ks => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| Error::Degenerate("no cutoff candidate admits a Pareto fit".into()))?;
    // refit on the sorted copy so the sum matches the scan bit for bit
    let fit = fit_pareto_hill(&sorted, best.xmin)?;
    Ok(XminResult {
        xmin: best.xmin,
        alpha: best.alpha,
        ks_distance: best.ks,
        fit,
        scan,
    })
}

/// `P(X ≥ x)` under the model's own law; see [`Fit::sf`].
pub fn tail_probability(model: &Fit, x: f64) -> f64 {
    model.sf(x).clamp(0.0, 1.0)
}

/// Unconditional `P(X ≥ x)` from an empirical body spliced to a Pareto tail:
/// the empirical share below `xmin`, `(n_tail/n)(xmin/x)^α` above it.
pub fn spliced_tail_probability(sample: &[f64], fit: &ParetoFit, x: f64) -> f64 {
    let n = sample.len() as f64;
    if x >= fit.xmin {
        let weight = sample.iter().filter(|&&v| v >= fit.xmin).count() as f64 / n;
        weight * fit.sf(x)
    } else {
        sample.iter().filter(|&&v| v >= x).count() as f64 / n
    }
}

pub fn model_ccdf(model: &Fit, xs: &[f64]) -> Vec<(f64, f64)> {
    xs.iter().map(|&x| (x, tail_probability(model, x))).collect()
}
