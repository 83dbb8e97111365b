//! Mean estimation under fat tails, randomness regimes, hosting heuristics
//! and reference-class uplifts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{powerlaw_reference, PowerLawReference};
use crate::distfit::{Fit, ParetoFit};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::quad::integrate;
use crate::special::normal_sf;

/// Ratio at which a project costs three times its estimate.
pub const THREEFOLD: f64 = 3.0;
pub const SHADOW_QUAD_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMethod {
    Sample,
    LognormalPlugIn,
    ParetoConditional,
    ParetoSpliced,
    ShadowDual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub method: MeanMethod,
    pub value: Extended,
    /// Parameters the estimate was computed from (fit parameters, bounds).
    pub inputs: BTreeMap<String, f64>,
}

impl MeanEstimate {
    fn new(method: MeanMethod, value: Extended, inputs: &[(&str, f64)]) -> Self {
        MeanEstimate {
            method,
            value,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    /// Mean overrun in percent, `(mean − 1)·100`.
    pub fn overrun_pct(&self) -> Extended {
        match self.value {
            Extended::Finite(v) => Extended::Finite((v - 1.0) * 100.0),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// α ≤ 1: neither mean nor variance exists.
    InfiniteMean,
    /// 1 < α < 2: finite mean, infinite variance.
    LevyStable,
    /// 2 ≤ α < 3: finite variance, infinite third moment.
    FiniteVariance,
    /// α ≥ 3.
    HigherMoments,
}

impl Regime {
    pub fn of(alpha: f64) -> Regime {
        if alpha <= 1.0 {
            Regime::InfiniteMean
        } else if alpha < 2.0 {
            Regime::LevyStable
        } else if alpha < 3.0 {
            Regime::FiniteVariance
        } else {
            Regime::HigherMoments
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::InfiniteMean => "infinite-mean regime",
            Regime::LevyStable => "Levy-stable regime (finite mean, infinite variance)",
            Regime::FiniteVariance => "finite-variance regime",
            Regime::HigherMoments => "higher-moments regime",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomnessClass {
    pub alpha: f64,
    pub regime: Regime,
    /// Reference event types whose published exponents fall in the same
    /// regime, ordered by exponent.
    pub peers: Vec<PowerLawReference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicReport {
    pub p_threefold_empirical: f64,
    pub p_threefold_by_model: Vec<(String, f64)>,
    /// Range of finite mean estimates as percent overrun.
    pub true_mean_range_pct: (f64, f64),
    pub verdicts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpliftResult {
    pub acceptable_risk: f64,
    pub empirical_uplift_pct: f64,
    pub model_uplift_pct: Option<f64>,
    pub method: String,
}

pub fn sample_mean(sample: &[f64]) -> Result<MeanEstimate> {
    if sample.is_empty() {
        return Err(Error::EmptySample("mean of an empty sample".into()));
    }
    let m = sample.iter().sum::<f64>() / sample.len() as f64;
    Ok(MeanEstimate::new(
        MeanMethod::Sample,
        Extended::Finite(m),
        &[("n", sample.len() as f64)],
    ))
}

fn pareto_mean(xmin: f64, alpha: f64) -> Extended {
    if alpha <= 1.0 {
        Extended::Infinite
    } else {
        Extended::Finite(alpha * xmin / (alpha - 1.0))
    }
}

/// Mean of the fitted law: `e^{μ+σ²/2}` for a lognormal (conditioned on the
/// truncation point when there is one), the conditional tail
/// mean `α·xmin/(α−1)` for a Pareto (infinite when α ≤ 1), and
/// `u + σ/(1−ξ)` for a generalized Pareto (infinite when ξ ≥ 1).
pub fn plug_in_mean(fit: &Fit) -> MeanEstimate {
    match fit {
        Fit::Lognormal(f) => {
            let mean = (f.mu + 0.5 * f.sigma * f.sigma).exp();
            match f.truncation_min {
                // E[X | X ≥ t] = e^{μ+σ²/2}·Φ̄((ln t − μ − σ²)/σ) / Φ̄((ln t − μ)/σ)
                Some(t) => {
                    let z = (t.ln() - f.mu) / f.sigma;
                    MeanEstimate::new(
                        MeanMethod::LognormalPlugIn,
                        Extended::Finite(mean * normal_sf(z - f.sigma) / normal_sf(z)),
                        &[("mu", f.mu), ("sigma", f.sigma), ("truncation_min", t)],
                    )
                }
                None => MeanEstimate::new(
                    MeanMethod::LognormalPlugIn,
                    Extended::Finite(mean),
                    &[("mu", f.mu), ("sigma", f.sigma)],
                ),
            }
        }
        Fit::Pareto(f) => MeanEstimate::new(
            MeanMethod::ParetoConditional,
            pareto_mean(f.xmin, f.alpha),
            &[("xmin", f.xmin), ("alpha", f.alpha)],
        ),
        Fit::Gpd(f) => MeanEstimate::new(
            MeanMethod::ParetoConditional,
            if f.shape >= 1.0 {
                Extended::Infinite
            } else {
                Extended::Finite(f.threshold + f.scale / (1.0 - f.shape))
            },
            &[("threshold", f.threshold), ("scale", f.scale), ("shape", f.shape)],
        ),
    }
}

/// Unconditional mean of an empirical body below `xmin` spliced to the Pareto
/// tail above it.
pub fn spliced_mean(sample: &[f64], tail_fit: &ParetoFit) -> Result<MeanEstimate> {
    if sample.is_empty() {
        return Err(Error::EmptySample("spliced mean of an empty sample".into()));
    }
    let max = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if tail_fit.xmin > max {
        return Err(Error::InvalidArgument(format!(
            "tail cutoff {} lies above the sample maximum {max}",
            tail_fit.xmin
        )));
    }
    let inputs = [("xmin", tail_fit.xmin), ("alpha", tail_fit.alpha)];
    let tail_mean = pareto_mean(tail_fit.xmin, tail_fit.alpha);
    let Extended::Finite(tail_mean) = tail_mean else {
        return Ok(MeanEstimate::new(MeanMethod::ParetoSpliced, Extended::Infinite, &inputs));
    };
    let n = sample.len() as f64;
    let body: Vec<f64> = sample.iter().cloned().filter(|&x| x < tail_fit.xmin).collect();
    let body_weight = body.len() as f64 / n;
    let body_mean = if body.is_empty() {
        0.0
    } else {
        body.iter().sum::<f64>() / body.len() as f64
    };
    Ok(MeanEstimate::new(
        MeanMethod::ParetoSpliced,
        Extended::Finite(body_mean * body_weight + tail_mean * (1.0 - body_weight)),
        &inputs,
    ))
}

/// Shadow mean of a sample bounded in `(lower, upper)`.
///
/// Each value is mapped to the unbounded dual `z = L − H·ln((H − x)/(H − L))`,
/// a Pareto law with minimum `L` is fitted to the duals by Hill's estimator,
/// and the mean of the bounded variable `L + (H − L)(1 − e^{−(z−L)/H})` is
/// integrated under that law. The integral is taken over the Pareto
/// quantile `z = L·u^{−1/α}`, `u ∈ (0, 1)`, where the integrand is bounded.
pub fn shadow_mean_dual(sample: &[f64], lower: f64, upper: f64) -> Result<MeanEstimate> {
    if sample.is_empty() {
        return Err(Error::EmptySample("shadow mean of an empty sample".into()));
    }
    let min = sample.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lower > 0.0 && lower < min) {
        return Err(Error::Domain(format!(
            "lower bound {lower} must be positive and below the sample minimum {min}"
        )));
    }
    if !(upper > max) || !upper.is_finite() {
        return Err(Error::Domain(format!(
            "upper bound {upper} must exceed the sample maximum {max}"
        )));
    }
    let (l, h) = (lower, upper);
    let span = h - l;
    let log_excess: f64 = sample
        .iter()
        .map(|&x| {
            // ln(z/L) with z − L = −H·ln1p(−(x − L)/(H − L))
            let dz = -h * (-(x - l) / span).ln_1p();
            (dz / l).ln_1p()
        })
        .sum();
    let alpha = sample.len() as f64 / log_excess;

    let bounded = |u: f64| -> f64 {
        // z − L = L·(u^{−1/α} − 1), computed without cancellation for u near 1
        let dz = l * (-u.ln() / alpha).exp_m1();
        l - span * (-dz / h).exp_m1()
    };
    let integral = integrate(bounded, 0.0, 1.0, SHADOW_QUAD_REL_TOL, 0.0, 100_000);
    Ok(MeanEstimate::new(
        MeanMethod::ShadowDual,
        Extended::Finite(integral.value),
        &[("lower", l), ("upper", h), ("dual_alpha", alpha)],
    ))
}

pub fn classify_randomness(alpha: f64) -> Result<RandomnessClass> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be positive")));
    }
    let regime = Regime::of(alpha);
    let mut peers: Vec<PowerLawReference> = powerlaw_reference()
        .into_iter()
        .filter(|r| Regime::of(r.alpha_low) <= regime && regime <= Regime::of(r.alpha_high))
        .collect();
    peers.sort_by(|a, b| a.alpha_low.total_cmp(&b.alpha_low));
    Ok(RandomnessClass {
        alpha,
        regime,
        peers,
    })
}

/// Evaluates the three-fold-risk and true-mean heuristics.
///
/// `means` supplies the mean estimates whose finite values span the
/// true-mean range.
pub fn evaluate_heuristics(
    sample: &[f64],
    fits: &[Fit],
    means: &[MeanEstimate],
) -> Result<HeuristicReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample("heuristics need a sample".into()));
    }
    if fits.is_empty() {
        return Err(Error::InvalidArgument("heuristics need at least one fit".into()));
    }
    let n = sample.len();
    let above = sample.iter().filter(|&&x| x >= THREEFOLD).count();
    let p_emp = above as f64 / n as f64;
    let by_model: Vec<(String, f64)> = fits
        .iter()
        .map(|f| {
            (
                describe_fit(f),
                crate::distfit::tail_probability(f, THREEFOLD),
            )
        })
        .collect();

    let finite: Vec<f64> = means.iter().filter_map(|m| m.value.finite()).collect();
    let infinite = means.iter().filter(|m| m.value.is_infinite()).count();
    let (low, high) = if finite.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (
            (finite.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0) * 100.0,
            (finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - 1.0) * 100.0,
        )
    };

    let mut verdicts = vec![format!(
        "three-fold risk: {above} of {n} observed outturns ({:.1}%) reached three times the estimate; \
         models give {}. Hosting is advisable only if a risk of this size is affordable.",
        p_emp * 100.0,
        by_model
            .iter()
            .map(|(m, p)| format!("{m} {:.1}%", p * 100.0))
            .collect::<Vec<_>>()
            .join(", ")
    )];
    let mut mean_verdict = format!(
        "true mean overrun estimated between {low:.0}% and {high:.0}% in real terms \
         across {} finite estimates",
        finite.len()
    );
    if infinite > 0 {
        mean_verdict.push_str(&format!("; {infinite} estimate(s) are infinite"));
    }
    verdicts.push(mean_verdict);

    Ok(HeuristicReport {
        p_threefold_empirical: p_emp,
        p_threefold_by_model: by_model,
        true_mean_range_pct: (low, high),
        verdicts,
    })
}

fn describe_fit(f: &Fit) -> String {
    match f {
        Fit::Lognormal(l) => match l.truncation_min {
            Some(t) => format!("lognormal(mu={:.4}, sigma={:.4}) refit above {t}", l.mu, l.sigma),
            None => format!("lognormal(mu={:.4}, sigma={:.4})", l.mu, l.sigma),
        },
        Fit::Pareto(p) => format!("pareto(xmin={}, alpha={:.4}) conditional", p.xmin, p.alpha),
        Fit::Gpd(g) => format!(
            "gpd(threshold={}, scale={:.4}, shape={:.4})",
            g.threshold, g.scale, g.shape
        ),
    }
}

/// Nearest-rank quantile: the `⌈q·n⌉`-th smallest value.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    // the tolerance absorbs products like 0.7·10 = 7.000000000000001
    let k = ((q * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    sorted[k - 1]
}

/// Budget uplift that keeps the chance of exceeding the budget at
/// `acceptable_risk`: the `(1 − risk)` quantile of past overrun ratios.
pub fn rcf_uplift(sample: &[f64], acceptable_risk: f64, model: Option<&Fit>) -> Result<UpliftResult> {
    if sample.len() < 2 {
        return Err(Error::EmptySample("uplift needs at least 2 past outcomes".into()));
    }
    if !(acceptable_risk > 0.0 && acceptable_risk < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "acceptable risk {acceptable_risk} must lie in (0, 1)"
        )));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = nearest_rank(&sorted, 1.0 - acceptable_risk);
    let model_uplift_pct = model.map(|m| {
        let x = match m {
            Fit::Lognormal(f) => f.quantile(1.0 - acceptable_risk),
            Fit::Pareto(f) => f.quantile_sf(acceptable_risk),
            Fit::Gpd(f) => f.quantile_sf(acceptable_risk),
        };
        (x - 1.0) * 100.0
    });
    Ok(UpliftResult {
        acceptable_risk,
        empirical_uplift_pct: (q - 1.0) * 100.0,
        model_uplift_pct,
        method: match model {
            Some(m) => format!("nearest-rank empirical quantile; {} inverse tail", m.name()),
            None => "nearest-rank empirical quantile".into(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfit::{fit_pareto_hill, LognormalFit};
    use crate::rng::CounterRng;
    use proptest::prelude::*;

    fn olympic() -> Vec<f64> {
        crate::dataset::overrun_ratios(
            &crate::dataset::GamesTable::bundled(),
            crate::dataset::Cohort::All,
        )
        .unwrap()
        .ratios
    }

    #[test]
    fn plug_in_examples() {
        let ln = plug_in_mean(&Fit::Lognormal(LognormalFit::new(0.85, 0.533)));
        let oracle = (0.85f64 + 0.5 * 0.533 * 0.533).exp();
        assert!((ln.value.to_f64() - oracle).abs() < 1e-12);
        assert!((ln.value.to_f64() - 2.69).abs() < 0.01);
        let p = plug_in_mean(&Fit::Pareto(ParetoFit::new(1.494_919, 1.711_926)));
        assert!((p.value.to_f64() - 1.711_926 * 1.494_919 / 0.711_926).abs() < 1e-12);
        assert!((p.value.to_f64() - 3.594).abs() < 0.01);
        assert!(plug_in_mean(&Fit::Pareto(ParetoFit::new(1.0, 1.0))).value.is_infinite());
    }

    #[test]
    fn truncated_lognormal_mean_matches_quadrature() {
        let mut f = LognormalFit::new(0.5438, 0.7124);
        f.truncation_min = Some(1.494_919);
        let fit = Fit::Lognormal(f);
        // E[X | X ≥ t] = t + ∫_t^∞ P(X ≥ x) dx / P(X ≥ t), substituting x = t/u
        let t = 1.494_919;
        let tail = integrate(|u| fit.sf(t / u) * t / (u * u), 0.0, 1.0, 1e-11, 0.0, 10_000);
        let oracle = t + tail.value / fit.sf(t);
        let m = plug_in_mean(&fit).value.to_f64();
        assert!((m - oracle).abs() < 1e-7, "{m} vs {oracle}");
    }

    #[test]
    fn conditional_pareto_mean_matches_quadrature() {
        let (xmin, alpha) = (1.494_919, 1.711_926);
        // E[X] = ∫_0^1 xmin·u^{-1/α} du via the quantile substitution
        let q = integrate(|u| xmin * u.powf(-1.0 / alpha), 0.0, 1.0, 1e-10, 0.0, 10_000);
        let p = plug_in_mean(&Fit::Pareto(ParetoFit::new(xmin, alpha)));
        assert!((q.value - p.value.to_f64()).abs() < 1e-5, "{} vs {:?}", q.value, p.value);
    }

    #[test]
    fn pareto_mean_diverges_as_alpha_falls_to_one() {
        let vals: Vec<f64> = [1.5, 1.2, 1.05, 1.01]
            .iter()
            .map(|&a| plug_in_mean(&Fit::Pareto(ParetoFit::new(1.0, a))).value.to_f64())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn spliced_examples() {
        let data = olympic();
        let fit = ParetoFit::new(1.494_919, 1.711_926);
        let s = spliced_mean(&data, &fit).unwrap().value.to_f64();
        // body {1.02, 1.13, 1.24, 1.49}: mean 1.22, weight 4/19
        let tail_mean = 1.711_926 * 1.494_919 / 0.711_926;
        let oracle = 4.0 / 19.0 * 1.22 + 15.0 / 19.0 * tail_mean;
        assert!((s - oracle).abs() < 1e-5, "{s} vs {oracle}");
        assert!((s - 3.09).abs() < 0.01);

        let low = ParetoFit::new(0.5, 1.711_926);
        let plug = plug_in_mean(&Fit::Pareto(low.clone())).value.to_f64();
        assert!((spliced_mean(&data, &low).unwrap().value.to_f64() - plug).abs() < 1e-12);

        assert!(spliced_mean(&data, &ParetoFit::new(9.0, 2.0)).is_err());
        assert!(spliced_mean(&data, &ParetoFit::new(1.5, 0.9))
            .unwrap()
            .value
            .is_infinite());
    }

    #[test]
    fn shadow_mean_bounds_checked() {
        let data = olympic();
        assert!(matches!(shadow_mean_dual(&data, 1.0, 8.0), Err(Error::Domain(_))));
        assert!(matches!(shadow_mean_dual(&data, 1.05, 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn shadow_mean_large_bound_approaches_pareto_mean() {
        let mut rng = CounterRng::new(5);
        let data: Vec<f64> = (0..500).map(|_| rng.next_open01().powf(-1.0 / 2.5)).collect();
        let max = data.iter().cloned().fold(0.0, f64::max);
        let l = 0.999;
        let plain = fit_pareto_hill(&data, l).unwrap();
        let plug = plug_in_mean(&Fit::Pareto(plain)).value.to_f64();
        let shadow = shadow_mean_dual(&data, l, 1e6 * max).unwrap().value.to_f64();
        assert!(((shadow - plug) / plug).abs() < 0.01, "{shadow} vs {plug}");
    }

    #[test]
    fn shadow_mean_recovers_dual_of_pareto() {
        let (l, h, alpha) = (1.0, 20.0, 1.5);
        let inv = |z: f64| l + (h - l) * (1.0 - (-(z - l) / h).exp());
        let mut rng = CounterRng::new(21);
        let data: Vec<f64> = (0..20_000)
            .map(|_| inv(l * rng.next_open01().powf(-1.0 / alpha)))
            // far-tail duals round to exactly H
            .filter(|&x| x < h)
            .collect();
        // oracle: Simpson's rule on E[φ⁻¹(Z)] = L + (H − L)(1 − E[e^{−(Z−L)/H}]),
        // integrating the Pareto density directly in t = ln(z/L)
        let g = |t: f64| {
            let z = l * t.exp();
            alpha * (-alpha * t).exp() * (-(z - l) / h).exp()
        };
        let (a, b, m) = (0.0, 60.0, 600_000);
        let step = (b - a) / m as f64;
        let mut s = g(a) + g(b);
        for i in 1..m {
            s += g(a + i as f64 * step) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let oracle = l + (h - l) * (1.0 - s * step / 3.0);
        let est = shadow_mean_dual(&data, l * 0.999_999, h).unwrap().value.to_f64();
        assert!(((est - oracle) / oracle).abs() < 0.02, "{est} vs {oracle}");
    }

    #[test]
    fn shadow_mean_olympic_exceeds_sample_mean() {
        let data = olympic();
        let s = shadow_mean_dual(&data, 1.0, 10.0).unwrap().value.to_f64();
        assert!(s.is_finite() && s > 2.72, "{s}");
    }

    #[test]
    fn regimes_and_peers() {
        let c = classify_randomness(1.5).unwrap();
        assert_eq!(c.regime, Regime::LevyStable);
        let names: Vec<&str> = c.peers.iter().map(|p| p.event_type.as_str()).collect();
        assert!(names.contains(&"Terrorist attacks"));
        assert!(names.contains(&"Forest fires"));
        let c = classify_randomness(0.6).unwrap();
        assert_eq!(c.regime, Regime::InfiniteMean);
        assert!(c.peers.iter().any(|p| p.event_type == "Earthquakes"));
        assert!(c.peers.iter().any(|p| p.event_type == "Cybercrime"));
        assert_eq!(classify_randomness(1.0).unwrap().regime, Regime::InfiniteMean);
        assert_eq!(classify_randomness(2.0).unwrap().regime, Regime::FiniteVariance);
        assert_eq!(classify_randomness(3.0).unwrap().regime, Regime::HigherMoments);
        assert!(classify_randomness(0.0).is_err());
    }

    #[test]
    fn heuristics_counts() {
        let data = olympic();
        let fits = [Fit::Lognormal(LognormalFit::new(0.85, 0.533))];
        let means = [
            sample_mean(&data).unwrap(),
            plug_in_mean(&fits[0]),
        ];
        let h = evaluate_heuristics(&data, &fits, &means).unwrap();
        let oracle = data.iter().filter(|&&x| x >= 3.0).count() as f64 / 19.0;
        assert_eq!(h.p_threefold_empirical, oracle);
        let low = (plug_in_mean(&fits[0]).value.to_f64() - 1.0) * 100.0;
        assert_eq!(h.true_mean_range_pct.0, low);
        assert!((h.true_mean_range_pct.1 - 172.0).abs() < 1.0);

        let low = [1.1, 1.5, 2.0];
        assert_eq!(evaluate_heuristics(&low, &fits, &means).unwrap().p_threefold_empirical, 0.0);
    }

    #[test]
    fn uplift_examples() {
        let data = olympic();
        let u = rcf_uplift(&data, 0.5, None).unwrap();
        assert!((u.empirical_uplift_pct - 118.0).abs() < 1e-9);
        let u = rcf_uplift(&data, 0.2, None).unwrap();
        assert!((u.empirical_uplift_pct - 289.0).abs() < 1e-9);
        let u = rcf_uplift(&data, 1.0 - 1.0 / 19.0, None).unwrap();
        assert!((u.empirical_uplift_pct - 2.0).abs() < 1e-9);
        let u = rcf_uplift(&data, 0.99, None).unwrap();
        assert!((u.empirical_uplift_pct - 2.0).abs() < 1e-9);
        assert!(rcf_uplift(&data, 0.0, None).is_err());
        assert!(rcf_uplift(&data, 1.0, None).is_err());
        let ln = Fit::Lognormal(LognormalFit::new(0.85, 0.533));
        let u = rcf_uplift(&data, 0.5, Some(&ln)).unwrap();
        assert!((u.model_uplift_pct.unwrap() - (0.85f64.exp() - 1.0) * 100.0).abs() < 1e-9);
    }

    #[test]
    fn nearest_rank_small_cases() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        assert_eq!(nearest_rank(&s, 0.7), 7.0);
        assert_eq!(nearest_rank(&s, 0.0), 1.0);
        assert_eq!(nearest_rank(&s, 1.0), 10.0);
    }

    proptest! {
        #[test]
        fn uplift_nonincreasing(v in prop::collection::vec(0.5f64..10.0, 2..40), a in 0.01f64..0.99, b in 0.01f64..0.99) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let ln = Fit::Lognormal(LognormalFit::new(0.5, 0.6));
            let ul = rcf_uplift(&v, lo, Some(&ln)).unwrap();
            let uh = rcf_uplift(&v, hi, Some(&ln)).unwrap();
            prop_assert!(uh.empirical_uplift_pct <= ul.empirical_uplift_pct);
            prop_assert!(uh.model_uplift_pct.unwrap() <= ul.model_uplift_pct.unwrap() + 1e-9);
        }

        #[test]
        fn regime_total(alpha in 1e-6f64..10.0) {
            let r = classify_randomness(alpha).unwrap().regime;
            let expect = if alpha <= 1.0 { Regime::InfiniteMean } else if alpha < 2.0 { Regime::LevyStable }
                         else if alpha < 3.0 { Regime::FiniteVariance } else { Regime::HigherMoments };
            prop_assert_eq!(r, expect);
        }

        #[test]
        fn shadow_mean_unit_invariance(c in 0.1f64..50.0) {
            let data = [1.02, 1.13, 1.24, 1.49, 1.56, 2.18, 3.66, 8.2];
            let base = shadow_mean_dual(&data, 1.0, 10.0).unwrap().value.to_f64();
            let scaled: Vec<f64> = data.iter().map(|x| x * c).collect();
            let s = shadow_mean_dual(&scaled, c, 10.0 * c).unwrap().value.to_f64();
            prop_assert!((s / c - base).abs() <= 10.0 * SHADOW_QUAD_REL_TOL * base + 1e-12);
        }
    }
}
