//! Vuong's likelihood-ratio test for non-nested tail models.

use serde::{Deserialize, Serialize};

use crate::distfit::{tail_of, Fit, MIN_NUMERIC_TAIL};
use crate::error::{Error, Result};
use crate::special::normal_sf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VuongResult {
    /// Normalized log-likelihood ratio; positive favors model A.
    pub r_normalized: f64,
    pub p_two_sided: f64,
    pub n_tail: usize,
    /// Sample standard deviation (divisor n − 1) of the pointwise log ratios.
    pub per_point_llr_sd: f64,
    /// Sum of pointwise log ratios.
    pub log_likelihood_ratio: f64,
}

impl VuongResult {
    pub fn favors_a(&self) -> bool {
        self.r_normalized > 0.0
    }
}

/// Log-density of `model` at `x` conditioned on `X ≥ xmin`.
fn conditional_ln_pdf(model: &Fit, x: f64, xmin: f64) -> f64 {
    model.ln_pdf(x) - model.ln_sf(xmin)
}

/// Compares `model_a` against `model_b` on the tail `x ≥ xmin` of `sample`.
///
/// With `ℓ_i = ln f_a(x_i) − ln f_b(x_i)` under both laws conditioned on
/// `X ≥ xmin`, the statistic is `Σℓ_i / (s·√n)` where `s` is the sample
/// standard deviation of `ℓ_i`, and the p-value is two-sided from the
/// standard normal.
pub fn vuong_test(sample: &[f64], model_a: &Fit, model_b: &Fit, xmin: f64) -> Result<VuongResult> {
    let tail = tail_of(sample, xmin, MIN_NUMERIC_TAIL)?;
    for model in [model_a, model_b] {
        if model.lower_bound() > xmin {
            return Err(Error::Domain(format!(
                "{} model starts at {} above the comparison cutoff {xmin}",
                model.name(),
                model.lower_bound()
            )));
        }
        if let Some(x) = tail.iter().find(|&&x| !model.in_support(x)) {
            return Err(Error::Domain(format!(
                "{x} lies outside the {} support",
                model.name()
            )));
        }
    }

    let ratios: Vec<f64> = tail
        .iter()
        .map(|&x| conditional_ln_pdf(model_a, x, xmin) - conditional_ln_pdf(model_b, x, xmin))
        .collect();
    if let Some(bad) = ratios.iter().find(|l| !l.is_finite()) {
        return Err(Error::Domain(format!("non-finite log-likelihood ratio {bad}")));
    }
    let n = ratios.len() as f64;
    let total: f64 = ratios.iter().sum();
    let mean = total / n;
    let var = ratios.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return Err(Error::Degenerate(
            "pointwise log-likelihood ratios have zero variance".into(),
        ));
    }
    let r = total / (sd * n.sqrt());
    Ok(VuongResult {
        r_normalized: r,
        p_two_sided: (2.0 * normal_sf(r.abs())).min(1.0),
        n_tail: ratios.len(),
        per_point_llr_sd: sd,
        log_likelihood_ratio: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfit::{fit_lognormal, fit_pareto_hill, LognormalFit, ParetoFit};
    use crate::rng::CounterRng;
    use crate::special::normal_cdf;

    fn olympic() -> Vec<f64> {
        crate::dataset::overrun_ratios(
            &crate::dataset::GamesTable::bundled(),
            crate::dataset::Cohort::All,
        )
        .unwrap()
        .ratios
    }

    #[test]
    fn identical_models_are_degenerate() {
        let data = olympic();
        let a = Fit::Pareto(ParetoFit::new(1.02, 1.2));
        assert!(matches!(
            vuong_test(&data, &a, &a.clone(), 1.02),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn antisymmetry_and_normal_identity() {
        let data = olympic();
        let a = Fit::Pareto(fit_pareto_hill(&data, 1.49).unwrap());
        let b = Fit::Lognormal(LognormalFit::new(0.5438, 0.7124));
        let ab = vuong_test(&data, &a, &b, 1.49).unwrap();
        let ba = vuong_test(&data, &b, &a, 1.49).unwrap();
        assert_eq!(ab.r_normalized, -ba.r_normalized);
        assert_eq!(ab.p_two_sided, ba.p_two_sided);
        assert!((ab.p_two_sided - 2.0 * (1.0 - normal_cdf(ab.r_normalized.abs()))).abs() < 1e-9);
        assert_eq!(ab.n_tail, 16);
    }

    #[test]
    fn short_tail_rejected() {
        let data = olympic();
        let a = Fit::Pareto(ParetoFit::new(4.0, 2.0));
        let b = Fit::Lognormal(LognormalFit::new(0.5, 0.7));
        assert!(matches!(
            vuong_test(&data, &a, &b, 4.0),
            Err(Error::InsufficientTail { .. })
        ));
        assert!(matches!(
            vuong_test(&data, &a, &b, 100.0),
            Err(Error::EmptyTail { .. })
        ));
    }

    #[test]
    fn pareto_data_favors_pareto() {
        let mut favored = 0;
        for seed in 0..100u64 {
            let mut rng = CounterRng::new(seed);
            let draws: Vec<f64> = (0..1000).map(|_| rng.next_open01().powf(-1.0 / 1.5)).collect();
            let p = Fit::Pareto(fit_pareto_hill(&draws, 1.0).unwrap());
            let ln = Fit::Lognormal(crate::distfit::fit_truncated_lognormal(&draws, 1.0).unwrap());
            if vuong_test(&draws, &p, &ln, 1.0).unwrap().favors_a() {
                favored += 1;
            }
        }
        assert!(favored >= 95, "{favored}/100");
        // the untruncated lognormal is an even worse tail description
        let mut rng = CounterRng::new(1);
        let draws: Vec<f64> = (0..1000).map(|_| rng.next_open01().powf(-1.0 / 1.5)).collect();
        let ln = Fit::Lognormal(fit_lognormal(&draws).unwrap());
        let p = Fit::Pareto(fit_pareto_hill(&draws, 1.0).unwrap());
        assert!(vuong_test(&draws, &p, &ln, 1.0).unwrap().r_normalized > 0.0);
    }
}
