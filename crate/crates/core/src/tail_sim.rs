//! Seeded Monte Carlo for running means, records and sample-mean spread
//! under thin and fat tails.
//!
//! Run `r` of an experiment seeded with `s` draws from
//! [`CounterRng::for_stream(s, r)`](crate::rng::CounterRng::for_stream), and
//! every variate is an inverse-CDF transform of one uniform. Output is
//! therefore identical however the runs are scheduled across threads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::special::normal_quantile;
use crate::tail_risk::Regime;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SimDistribution {
    Pareto { alpha: f64, xmin: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Gaussian { mean: f64, sd: f64 },
}

impl SimDistribution {
    pub fn pareto(alpha: f64, xmin: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("xmin", xmin)?;
        Ok(SimDistribution::Pareto { alpha, xmin })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_positive("sigma", sigma)?;
        Ok(SimDistribution::Lognormal { mu, sigma })
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        check_finite("mean", mean)?;
        check_positive("sd", sd)?;
        Ok(SimDistribution::Gaussian { mean, sd })
    }

    /// Inverse CDF at `u ∈ (0, 1]`.
    #[inline]
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            SimDistribution::Pareto { alpha, xmin } => xmin * u.powf(-1.0 / alpha),
            SimDistribution::Lognormal { mu, sigma } => (mu + sigma * normal_quantile(u)).exp(),
            SimDistribution::Gaussian { mean, sd } => mean + sd * normal_quantile(u),
        }
    }

    /// Randomness regime of the law; thin-tailed families report
    /// [`Regime::HigherMoments`].
    pub fn regime(&self) -> Regime {
        match *self {
            SimDistribution::Pareto { alpha, .. } => Regime::of(alpha),
            _ => Regime::HigherMoments,
        }
    }

    fn draw(&self, rng: &mut CounterRng) -> f64 {
        self.quantile(rng.next_open01())
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}

impl fmt::Display for SimDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimDistribution::Pareto { alpha, xmin } => write!(f, "pareto:{alpha}:{xmin}"),
            SimDistribution::Lognormal { mu, sigma } => write!(f, "lognormal:{mu}:{sigma}"),
            SimDistribution::Gaussian { mean, sd } => write!(f, "gaussian:{mean}:{sd}"),
        }
    }
}

/// Parses `pareto:ALPHA:XMIN`, `lognormal:MU:SIGMA` or `gaussian:MEAN:SD`.
impl FromStr for SimDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || {
            Error::InvalidArgument(format!(
                "malformed distribution '{s}'; expected pareto:ALPHA:XMIN, \
                 lognormal:MU:SIGMA or gaussian:MEAN:SD"
            ))
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        match parts[0].trim().to_ascii_lowercase().as_str() {
            "pareto" => SimDistribution::pareto(a, b),
            "lognormal" => SimDistribution::lognormal(a, b),
            "gaussian" | "normal" => SimDistribution::gaussian(a, b),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepQuantiles {
    pub step: usize,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub distribution: SimDistribution,
    pub seed: u64,
    pub runs: usize,
    pub horizon: usize,
    /// Cross-run quantiles of the running mean after each step (1-based).
    pub running_mean_quantiles: Vec<StepQuantiles>,
    /// Average number of running-maximum records per run, counting the
    /// first draw.
    pub record_count_mean: f64,
    /// Fraction of runs whose second-half maximum beats the first-half one.
    pub max_exceed_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub distribution: String,
    pub seed: u64,
    pub runs: usize,
    pub horizon: usize,
    pub regime: Regime,
    pub flags: Vec<String>,
    pub final_q05: f64,
    pub final_q50: f64,
    pub final_q95: f64,
    pub record_count_mean: f64,
    pub max_exceed_prob: f64,
}

impl SimulationTrace {
    pub fn summary(&self) -> SimulationSummary {
        let last = self.running_mean_quantiles.last().copied().unwrap_or(StepQuantiles {
            step: 0,
            q05: f64::NAN,
            q50: f64::NAN,
            q95: f64::NAN,
        });
        let regime = self.distribution.regime();
        let mut flags = Vec::new();
        if matches!(regime, Regime::InfiniteMean | Regime::LevyStable) {
            flags.push(regime.label().to_string());
        }
        SimulationSummary {
            distribution: self.distribution.to_string(),
            seed: self.seed,
            runs: self.runs,
            horizon: self.horizon,
            regime,
            flags,
            final_q05: last.q05,
            final_q50: last.q50,
            final_q95: last.q95,
            record_count_mean: self.record_count_mean,
            max_exceed_prob: self.max_exceed_prob,
        }
    }

    /// Writes `step,q05,q50,q95`, numbers in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "step,q05,q50,q95")?;
        for q in &self.running_mean_quantiles {
            writeln!(out, "{},{:?},{:?},{:?}", q.step, q.q05, q.q50, q.q95)?;
        }
        Ok(())
    }

    pub fn band_width(&self, step: usize) -> Option<f64> {
        self.running_mean_quantiles
            .get(step.checked_sub(1)?)
            .map(|q| q.q95 - q.q05)
    }
}

/// Linear-interpolation quantile of sorted data (Hyndman–Fan type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `n` draws from stream 0 of `seed`.
pub fn sample(dist: &SimDistribution, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = CounterRng::for_stream(seed, 0);
    (0..n).map(|_| dist.draw(&mut rng)).collect()
}

struct RunOutcome {
    running_means: Vec<f64>,
    records: usize,
    second_half_wins: bool,
}

fn one_run(dist: &SimDistribution, horizon: usize, seed: u64, run: u64) -> RunOutcome {
    let mut rng = CounterRng::for_stream(seed, run);
    let half = horizon / 2;
    let mut running_means = Vec::with_capacity(horizon);
    let (mut sum, mut max) = (0.0, f64::NEG_INFINITY);
    let (mut records, mut first_max, mut second_max) = (0, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..horizon {
        let x = dist.draw(&mut rng);
        sum += x;
        running_means.push(sum / (i + 1) as f64);
        if x > max {
            max = x;
            records += 1;
        }
        if i < half {
            first_max = first_max.max(x);
        } else {
            second_max = second_max.max(x);
        }
    }
    RunOutcome {
        running_means,
        records,
        second_half_wins: half > 0 && second_max > first_max,
    }
}

fn check_count(name: &str, v: usize, least: usize) -> Result<()> {
    if v < least {
        return Err(Error::InvalidArgument(format!("{name} must be at least {least}, got {v}")));
    }
    Ok(())
}

/// Tracks the cumulative mean of `runs` independent streams of `horizon`
/// draws and summarizes the spread across runs at every step.
pub fn running_mean_experiment(
    dist: &SimDistribution,
    horizon: usize,
    runs: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    check_count("horizon", horizon, 1)?;
    check_count("runs", runs, 1)?;
    let outcomes: Vec<RunOutcome> = (0..runs as u64)
        .into_par_iter()
        .map(|r| one_run(dist, horizon, seed, r))
        .collect();
    let running_mean_quantiles: Vec<StepQuantiles> = (0..horizon)
        .into_par_iter()
        .map(|t| {
            let mut col: Vec<f64> = outcomes.iter().map(|o| o.running_means[t]).collect();
            col.sort_by(f64::total_cmp);
            StepQuantiles {
                step: t + 1,
                q05: quantile_sorted(&col, 0.05),
                q50: quantile_sorted(&col, 0.5),
                q95: quantile_sorted(&col, 0.95),
            }
        })
        .collect();
    let records: usize = outcomes.iter().map(|o| o.records).sum();
    let wins = outcomes.iter().filter(|o| o.second_half_wins).count();
    Ok(SimulationTrace {
        distribution: *dist,
        seed,
        runs,
        horizon,
        running_mean_quantiles,
        record_count_mean: records as f64 / runs as f64,
        max_exceed_prob: wins as f64 / runs as f64,
    })
}

/// Fraction of runs in which the largest of `future` fresh draws beats the
/// largest of `history` earlier ones.
pub fn record_exceedance(
    dist: &SimDistribution,
    history: usize,
    future: usize,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    check_count("history", history, 1)?;
    check_count("future", future, 1)?;
    check_count("runs", runs, 1)?;
    let wins: usize = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = CounterRng::for_stream(seed, r);
            let past = (0..history).map(|_| dist.draw(&mut rng)).fold(f64::NEG_INFINITY, f64::max);
            let next = (0..future).map(|_| dist.draw(&mut rng)).fold(f64::NEG_INFINITY, f64::max);
            usize::from(next > past)
        })
        .sum();
    Ok(wins as f64 / runs as f64)
}

/// Sample means of `runs` samples of size `sample_size`, in run order.
pub fn sample_means(dist: &SimDistribution, sample_size: usize, runs: usize, seed: u64) -> Vec<f64> {
    (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = CounterRng::for_stream(seed, r);
            (0..sample_size).map(|_| dist.draw(&mut rng)).sum::<f64>() / sample_size as f64
        })
        .collect()
}

/// Interquartile range of per-run sample means divided by their median.
pub fn mean_dispersion(
    dist: &SimDistribution,
    sample_size: usize,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    check_count("sample_size", sample_size, 2)?;
    check_count("runs", runs, 30)?;
    let mut means = sample_means(dist, sample_size, runs, seed);
    means.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&means, 0.75) - quantile_sorted(&means, 0.25);
    Ok(iqr / quantile_sorted(&means, 0.5))
}

/// Gaussian with the population median and interquartile range of `dist`.
pub fn matched_gaussian(dist: &SimDistribution) -> SimDistribution {
    let (q25, q50, q75) = (dist.quantile(0.25), dist.quantile(0.5), dist.quantile(0.75));
    let z75 = normal_quantile(0.75);
    SimDistribution::Gaussian {
        mean: q50,
        sd: (q75 - q25) / (2.0 * z75),
    }
}
