//! Descriptive statistics, exact rank tests, log-linear trend and empirical
//! CCDF.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{normal_sf, student_t_two_sided};

/// Signed-rank samples up to this many nonzero differences use the exact
/// null distribution.
pub const SIGNED_RANK_EXACT_MAX: usize = 25;
/// Rank-sum comparisons with `n_a · n_b` up to this use the exact null.
pub const RANK_SUM_EXACT_MAX_PRODUCT: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (divisor n − 1); 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    /// `(threshold, share of values strictly above it)`.
    pub prop_above: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    Exact,
    NormalApprox,
}

/// Conventional significance labels: p ≤ 0.05, ≤ 0.01, ≤ 0.001.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Significance {
    NotSignificant,
    Significant,
    VerySignificant,
    OverwhelminglySignificant,
}

pub fn significance(p: f64) -> Significance {
    if p <= 0.001 {
        Significance::OverwhelminglySignificant
    } else if p <= 0.01 {
        Significance::VerySignificant
    } else if p <= 0.05 {
        Significance::Significant
    } else {
        Significance::NotSignificant
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub sidedness: Sidedness,
    pub method: TestMethod,
}

impl TestResult {
    pub fn significance(&self) -> Significance {
        significance(self.p_value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    /// Change in ln(cost) per year.
    pub slope: f64,
    pub intercept: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub n: usize,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median with midpoint averaging for even lengths. Panics on empty input.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summary(values: &[f64], thresholds: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptySample("summary of an empty sample".into()));
    }
    let n = values.len();
    let m = mean(values);
    let sd = if n > 1 {
        (values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted_thresholds = thresholds.to_vec();
    sorted_thresholds.sort_by(f64::total_cmp);
    let prop_above = sorted_thresholds
        .into_iter()
        .map(|t| (t, values.iter().filter(|&&x| x > t).count() as f64 / n as f64))
        .collect();
    Ok(SummaryStats {
        n,
        mean: m,
        median: median(values),
        sd,
        min: values.iter().cloned().fold(f64::INFINITY, f64::min),
        max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        prop_above,
    })
}

/// Doubled average ranks (1-based) of `values`, so ties stay integral.
/// Also returns the tie-group sizes.
pub(crate) fn doubled_ranks(values: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share (i + j + 2) / 2
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

fn tie_term(ties: &[usize]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

fn two_sided_from_counts(counts: &[u128], observed: usize) -> f64 {
    let total: u128 = counts.iter().sum();
    let lower: u128 = counts[..=observed].iter().sum();
    let upper: u128 = counts[observed..].iter().sum();
    let tail = lower.min(upper) as f64 / total as f64;
    (2.0 * tail).min(1.0)
}

/// Wilcoxon signed-rank test of overrun ratios against 1 (no overrun).
pub fn wilcoxon_signed_rank(ratios: &[f64]) -> Result<TestResult> {
    let diffs: Vec<f64> = ratios.iter().map(|r| r - 1.0).collect();
    signed_rank_test(&diffs)
}

/// Wilcoxon signed-rank test on paired differences. Zeros are dropped; ties
/// get average ranks. `V` is the rank sum of positive differences.
pub fn signed_rank_test(differences: &[f64]) -> Result<TestResult> {
    if differences.is_empty() {
        return Err(Error::EmptySample("signed-rank test needs data".into()));
    }
    let nonzero: Vec<f64> = differences.iter().cloned().filter(|d| *d != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::Degenerate("all differences are zero".into()));
    }
    let m = nonzero.len();
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = doubled_ranks(&abs);
    let v2: u64 = ranks
        .iter()
        .zip(&nonzero)
        .filter(|(_, d)| **d > 0.0)
        .map(|(r, _)| *r)
        .sum();
    let v = v2 as f64 / 2.0;

    let (p_value, method) = if m <= SIGNED_RANK_EXACT_MAX {
        // counts[s] = number of sign assignments whose doubled positive-rank sum is s
        let max: usize = ranks.iter().sum::<u64>() as usize;
        let mut counts = vec![0u128; max + 1];
        counts[0] = 1;
        let mut reach = 0usize;
        for &r in &ranks {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if counts[s] != 0 {
                    counts[s + r] += counts[s];
                }
            }
            reach += r;
        }
        (two_sided_from_counts(&counts, v2 as usize), TestMethod::Exact)
    } else {
        let mf = m as f64;
        let mu = mf * (mf + 1.0) / 4.0;
        let var = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
        (normal_two_sided(v - mu, var), TestMethod::NormalApprox)
    };

    Ok(TestResult {
        statistic_name: "V".into(),
        statistic: v,
        p_value,
        sidedness: Sidedness::Two,
        method,
    })
}

fn normal_two_sided(deviation: f64, variance: f64) -> f64 {
    if variance <= 0.0 {
        return 1.0;
    }
    let z = (deviation.abs() - 0.5).max(0.0) / variance.sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}

/// Wilcoxon rank-sum / Mann–Whitney test. `W` is the U statistic of
/// `sample_a`: its rank sum minus `n_a(n_a + 1)/2`.
pub fn rank_sum(sample_a: &[f64], sample_b: &[f64]) -> Result<TestResult> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::EmptySample("rank-sum test needs two nonempty samples".into()));
    }
    let na = sample_a.len();
    let nb = sample_b.len();
    let pooled: Vec<f64> = sample_a.iter().chain(sample_b).cloned().collect();
    let (ranks, ties) = doubled_ranks(&pooled);
    let ra2: u64 = ranks[..na].iter().sum();
    let offset2 = (na * (na + 1)) as u64;
    let u = (ra2 - offset2) as f64 / 2.0;

    let (p_value, method) = if na * nb <= RANK_SUM_EXACT_MAX_PRODUCT {
        // counts[k][s]: subsets of size k with doubled rank sum s
        let total: usize = ranks.iter().sum::<u64>() as usize;
        let mut counts = vec![vec![0u128; total + 1]; na + 1];
        counts[0][0] = 1;
        let mut reach = 0usize;
        for &r in &ranks {
            let r = r as usize;
            for k in (0..na).rev() {
                let (lo, hi) = counts.split_at_mut(k + 1);
                let from = &lo[k];
                let to = &mut hi[0];
                for s in (0..=reach).rev() {
                    if from[s] != 0 {
                        to[s + r] += from[s];
                    }
                }
            }
            reach += r;
        }
        (two_sided_from_counts(&counts[na], ra2 as usize), TestMethod::Exact)
    } else {
        let n = (na + nb) as f64;
        let mu = (na * nb) as f64 / 2.0;
        let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term(&ties) / (n * (n - 1.0)));
        (normal_two_sided(u - mu, var), TestMethod::NormalApprox)
    };

    Ok(TestResult {
        statistic_name: "W".into(),
        statistic: u,
        p_value,
        sidedness: Sidedness::Two,
        method,
    })
}

/// Ordinary least squares of ln(cost) on year with a two-sided t-test on the
/// slope.
pub fn log_trend(points: &[(i32, f64)]) -> Result<TrendFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "trend fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(year, cost)) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::Domain(format!("non-positive cost {cost} in {year}")));
    }
    let n = points.len();
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xbar = mean(&xs);
    let ybar = mean(&ys);
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all years identical".into()));
    }

    if ys.iter().all(|&y| y == ys[0]) {
        return Ok(TrendFit {
            slope: 0.0,
            intercept: ys[0],
            t_stat: 0.0,
            p_value: 1.0,
            n,
        });
    }

    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let df = (n - 2) as f64;
    let se = (sse / df / sxx).sqrt();
    let t_stat = if se > 0.0 {
        slope / se
    } else {
        slope.signum() * f64::INFINITY
    };
    Ok(TrendFit {
        slope,
        intercept,
        t_stat,
        p_value: student_t_two_sided(t_stat, df),
        n,
    })
}

/// Empirical `P(X ≥ x)` at each distinct value, ascending in x.
pub fn empirical_ccdf(sample: &[f64]) -> Vec<(f64, f64)> {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        out.push((v[i], (v.len() - i) as f64 / n));
        let x = v[i];
        while i < v.len() && v[i] == x {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact two-sided signed-rank p by brute-force enumeration of all sign
    /// assignments over plain average ranks.
    fn brute_signed_rank(diffs: &[f64]) -> (f64, f64) {
        let nz: Vec<f64> = diffs.iter().cloned().filter(|d| *d != 0.0).collect();
        let abs: Vec<f64> = nz.iter().map(|d| d.abs()).collect();
        let ranks: Vec<f64> = abs
            .iter()
            .map(|a| {
                let below = abs.iter().filter(|b| *b < a).count() as f64;
                let equal = abs.iter().filter(|b| *b == a).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect();
        let v: f64 = ranks.iter().zip(&nz).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
        let m = nz.len();
        let (mut le, mut ge) = (0u64, 0u64);
        for mask in 0u64..(1 << m) {
            let s: f64 = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if s <= v + 1e-9 {
                le += 1;
            }
            if s >= v - 1e-9 {
                ge += 1;
            }
        }
        let total = (1u64 << m) as f64;
        (v, (2.0 * le.min(ge) as f64 / total).min(1.0))
    }

    /// Exact two-sided rank-sum p by enumerating every split of the pooled sample.
    fn brute_rank_sum(a: &[f64], b: &[f64]) -> (f64, f64) {
        let pooled: Vec<f64> = a.iter().chain(b).cloned().collect();
        let n = pooled.len();
        let ranks: Vec<f64> = pooled
            .iter()
            .map(|x| {
                let below = pooled.iter().filter(|y| *y < x).count() as f64;
                let equal = pooled.iter().filter(|y| *y == x).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect();
        let na = a.len();
        let off = (na * (na + 1)) as f64 / 2.0;
        let u: f64 = ranks[..na].iter().sum::<f64>() - off;
        let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize != na {
                continue;
            }
            total += 1;
            let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum::<f64>() - off;
            if s <= u + 1e-9 {
                le += 1;
            }
            if s >= u - 1e-9 {
                ge += 1;
            }
        }
        (u, (2.0 * le.min(ge) as f64 / total as f64).min(1.0))
    }

    #[test]
    fn signed_rank_examples() {
        let r = wilcoxon_signed_rank(&[2.0]).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert_eq!(r.p_value, 1.0);

        let r = wilcoxon_signed_rank(&[1.5, 0.5]).unwrap();
        assert_eq!(r.statistic, 1.5);
        assert_eq!(r.p_value, 1.0);

        let all_up: Vec<f64> = (1..=19).map(|i| 1.0 + i as f64 / 10.0).collect();
        let r = wilcoxon_signed_rank(&all_up).unwrap();
        assert_eq!(r.statistic, 190.0);
        assert_eq!(r.p_value, 2.0 / 524_288.0);
        assert_eq!(r.method, TestMethod::Exact);

        assert!(matches!(
            wilcoxon_signed_rank(&[1.0, 1.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn signed_rank_matches_enumeration_with_ties_and_zeros() {
        let diffs = [0.3, -0.3, 0.0, 1.2, -0.5, 0.5, 0.5, 2.0, -0.1, 0.7, 0.0, -2.0];
        let r = signed_rank_test(&diffs).unwrap();
        let (v, p) = brute_signed_rank(&diffs);
        assert_eq!(r.statistic, v);
        assert!((r.p_value - p).abs() < 1e-12);
    }

    #[test]
    fn rank_sum_examples() {
        let r = rank_sum(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 4.5);
        assert_eq!(r.p_value, 1.0);

        let r = rank_sum(&[10.0, 20.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.statistic, 4.0);
        assert!((r.p_value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rank_sum_matches_enumeration_with_ties() {
        let a = [1.0, 3.0, 3.0, 5.5, 7.0, 9.0];
        let b = [2.0, 3.0, 4.0, 5.5, 5.5, 8.0, 10.0];
        let r = rank_sum(&a, &b).unwrap();
        let (u, p) = brute_rank_sum(&a, &b);
        assert_eq!(r.statistic, u);
        assert!((r.p_value - p).abs() < 1e-12);
    }

    #[test]
    fn large_samples_use_normal_approximation() {
        let a: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..30).map(|i| i as f64 + 0.5).collect();
        assert_eq!(rank_sum(&a, &b).unwrap().method, TestMethod::NormalApprox);
        let d: Vec<f64> = (1..=30).map(|i| if i % 3 == 0 { -(i as f64) } else { i as f64 }).collect();
        assert_eq!(signed_rank_test(&d).unwrap().method, TestMethod::NormalApprox);
    }

    #[test]
    fn summary_medians_and_thresholds() {
        let s = summary(&[4.0, 1.0, 3.0, 2.0], &[2.0, 1.5]).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.prop_above, vec![(1.5, 0.75), (2.0, 0.5)]);
        assert!(summary(&[], &[]).is_err());
    }

    #[test]
    fn trend_flat_and_errors() {
        let flat: Vec<(i32, f64)> = (0..6).map(|i| (1960 + 4 * i, 0.7)).collect();
        let t = log_trend(&flat).unwrap();
        assert_eq!(t.slope, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-9);
        assert!(log_trend(&flat[..2]).is_err());
        assert!(matches!(
            log_trend(&[(1960, 1.0), (1964, 0.0), (1968, 2.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn trend_known_regression() {
                let pts = [(1990, 1.0f64.exp()), (1995, 1.2f64.exp()), (2000, 2.1f64.exp()), (2005, 2.4f64.exp())];
        let t = log_trend(&pts).unwrap();
        // xbar 1997.5, ybar 1.675, sxy = (-7.5)(-.675)+(-2.5)(-.475)+(2.5)(.425)+(7.5)(.725) = 12.75, sxx = 125
        assert!((t.slope - 12.75 / 125.0).abs() < 1e-12);
        assert!(t.p_value < 0.05);
    }

    #[test]
    fn ccdf_examples() {
        assert_eq!(empirical_ccdf(&[5.0]), vec![(5.0, 1.0)]);
        assert_eq!(empirical_ccdf(&[1.0, 1.0, 2.0]), vec![(1.0, 1.0), (2.0, 1.0 / 3.0)]);
    }

    #[test]
    fn significance_labels() {
        assert_eq!(significance(0.0005), Significance::OverwhelminglySignificant);
        assert_eq!(significance(0.001), Significance::OverwhelminglySignificant);
        assert_eq!(significance(0.01), Significance::VerySignificant);
        assert_eq!(significance(0.05), Significance::Significant);
        assert_eq!(significance(0.778), Significance::NotSignificant);
    }

    proptest! {
        #[test]
        fn signed_rank_sums_partition(d in prop::collection::vec(-5i32..=5, 1..20)) {
            let diffs: Vec<f64> = d.iter().map(|&x| x as f64).collect();
            prop_assume!(diffs.iter().any(|x| *x != 0.0));
            let neg: Vec<f64> = diffs.iter().map(|x| -x).collect();
            let v = signed_rank_test(&diffs).unwrap();
            let w = signed_rank_test(&neg).unwrap();
            let m = diffs.iter().filter(|x| **x != 0.0).count() as f64;
            prop_assert_eq!(v.statistic + w.statistic, m * (m + 1.0) / 2.0);
            prop_assert!((v.p_value - w.p_value).abs() < 1e-12);
        }

        #[test]
        fn rank_sum_swap(a in prop::collection::vec(0i32..8, 1..9), b in prop::collection::vec(0i32..8, 1..9)) {
            let a: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let b: Vec<f64> = b.iter().map(|&x| x as f64).collect();
            let ab = rank_sum(&a, &b).unwrap();
            let ba = rank_sum(&b, &a).unwrap();
            prop_assert_eq!(ab.statistic + ba.statistic, (a.len() * b.len()) as f64);
            prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab.p_value));
        }

        #[test]
        fn ccdf_steps(v in prop::collection::vec(1u32..50, 1..40)) {
            let v: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let c = empirical_ccdf(&v);
            prop_assert_eq!(c[0].1, 1.0);
            let n = v.len() as f64;
            for w in c.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
                prop_assert!(w[0].1 > w[1].1);
            }
            for (_, p) in &c {
                let k = p * n;
                prop_assert!((k - k.round()).abs() < 1e-9);
            }
        }

        #[test]
        fn trend_scale_invariance(costs in prop::collection::vec(0.1f64..50.0, 4..12), scale in 0.01f64..100.0) {
            let pts: Vec<(i32, f64)> = costs.iter().enumerate().map(|(i, c)| (1960 + 4 * i as i32, *c)).collect();
            let scaled: Vec<(i32, f64)> = pts.iter().map(|(y, c)| (*y, c * scale)).collect();
            let a = log_trend(&pts).unwrap();
            let b = log_trend(&scaled).unwrap();
            prop_assert!((a.slope - b.slope).abs() < 1e-9);
            prop_assert!((b.intercept - a.intercept - scale.ln()).abs() < 1e-6);
        }
    }
}
