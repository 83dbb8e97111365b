//! Analysis pipeline shared by the command line and the examples: cutoff
//! resolution, the mean-estimate family, the full report bundle and
//! plot-ready CSV tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{
    derive_unit_costs, overrun_ratios, Cohort, GamesTable, OverrunSample, Season, UnitCosts,
};
use crate::distfit::{
    fit_gpd, fit_lognormal, fit_pareto_hill, fit_truncated_lognormal, lognormal_kurtosis,
    select_xmin, snap_cutoff, tail_probability, Fit, GpdFit, LognormalFit, ParetoFit, XminResult,
    DEFAULT_MIN_TAIL,
};
use crate::error::{Error, Result};
use crate::model_select::{vuong_test, VuongResult};
use crate::stats::{
    empirical_ccdf, log_trend, rank_sum, summary, wilcoxon_signed_rank, SummaryStats, TestResult,
    TrendFit,
};
use crate::tail_risk::{
    classify_randomness, evaluate_heuristics, plug_in_mean, rcf_uplift, sample_mean,
    shadow_mean_dual, spliced_mean, HeuristicReport, MeanEstimate, RandomnessClass, UpliftResult,
};
use crate::tail_sim::{
    matched_gaussian, mean_dispersion, record_exceedance, running_mean_experiment,
    SimDistribution, SimulationSummary,
};

/// Overrun thresholds, in percent, whose exceedance shares are reported.
pub const OVERRUN_THRESHOLDS_PCT: [f64; 2] = [50.0, 100.0];
/// Default GPD threshold on the ratio scale.
pub const DEFAULT_GPD_THRESHOLD: f64 = 1.0;
/// Acceptable risks at which the report lists uplifts.
pub const REPORT_RISKS: [f64; 3] = [0.5, 0.2, 0.1];

/// A report section that either holds a result or explains why the data
/// could not support it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Ok { result: T },
    Insufficient { reason: String },
}

impl<T> Section<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Section::Ok { result } => Some(result),
            Section::Insufficient { .. } => None,
        }
    }
}

impl<T> From<std::result::Result<T, String>> for Section<T> {
    fn from(r: std::result::Result<T, String>) -> Self {
        match r {
            Ok(result) => Section::Ok { result },
            Err(reason) => Section::Insufficient { reason },
        }
    }
}

impl<T> From<Result<T>> for Section<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(result) => Section::Ok { result },
            Err(e) => Section::Insufficient {
                reason: e.to_string(),
            },
        }
    }
}

/// How the tail cutoff is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XminSpec {
    /// Minimum-KS scan over observed values.
    Auto,
    /// The sample minimum, so the whole sample is the tail.
    Min,
    /// A given value, snapped down onto an observation within the data's
    /// rounding resolution.
    Value(f64),
}

impl FromStr for XminSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(XminSpec::Auto),
            "min" => Ok(XminSpec::Min),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .map(XminSpec::Value)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "xmin must be 'auto', 'min' or a positive number, got '{s}'"
                    ))
                }),
        }
    }
}

/// A resolved cutoff, with the scan when one was run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedXmin {
    pub requested: String,
    pub xmin: f64,
    pub selection: Option<XminResult>,
}

pub fn resolve_xmin(sample: &OverrunSample, spec: XminSpec) -> Result<ResolvedXmin> {
    let ratios = sample.values();
    match spec {
        XminSpec::Auto => {
            let sel = select_xmin(ratios, DEFAULT_MIN_TAIL)?;
            Ok(ResolvedXmin {
                requested: "auto".into(),
                xmin: sel.xmin,
                selection: Some(sel),
            })
        }
        XminSpec::Min => Ok(ResolvedXmin {
            requested: "min".into(),
            xmin: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
            selection: None,
        }),
        XminSpec::Value(v) => Ok(ResolvedXmin {
            requested: v.to_string(),
            xmin: snap_cutoff(ratios, v, sample.half_resolution),
            selection: None,
        }),
    }
}

/// Default bounds for the shadow mean: `L = 1` when every project overran
/// (else half the minimum) and `H = max(10, 2·max)`.
pub fn default_shadow_bounds(sample: &[f64]) -> (f64, f64) {
    let min = sample.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lower = if min > 1.0 { 1.0 } else { 0.5 * min };
    (lower, (2.0 * max).max(10.0))
}

/// Fits used by the risk heuristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFits {
    pub lognormal: Section<LognormalFit>,
    pub xmin: Section<XminResult>,
    pub truncated_lognormal: Section<LognormalFit>,
}

impl TailFits {
    pub fn compute(sample: &OverrunSample) -> TailFits {
        let ratios = sample.values();
        let xmin = select_xmin(ratios, DEFAULT_MIN_TAIL);
        let truncated = match &xmin {
            Ok(sel) => fit_truncated_lognormal(ratios, sel.xmin),
            Err(e) => Err(Error::Degenerate(format!("no tail cutoff: {e}"))),
        };
        TailFits {
            lognormal: fit_lognormal(ratios).into(),
            xmin: xmin.into(),
            truncated_lognormal: truncated.into(),
        }
    }

    pub fn fits(&self) -> Vec<Fit> {
        let mut out = Vec::new();
        if let Some(f) = self.lognormal.ok() {
            out.push(Fit::Lognormal(f.clone()));
        }
        if let Some(sel) = self.xmin.ok() {
            out.push(Fit::Pareto(sel.fit.clone()));
        }
        if let Some(f) = self.truncated_lognormal.ok() {
            out.push(Fit::Lognormal(f.clone()));
        }
        out
    }
}

/// Every mean estimate, keyed by a stable label.
pub fn mean_estimates(
    sample: &OverrunSample,
    fits: &TailFits,
    bounds: (f64, f64),
) -> BTreeMap<String, Section<MeanEstimate>> {
    let ratios = sample.values();
    let mut out = BTreeMap::new();
    out.insert("sample".into(), sample_mean(ratios).into());
    out.insert(
        "lognormal_plug_in".into(),
        match &fits.lognormal {
            Section::Ok { result } => Ok(plug_in_mean(&Fit::Lognormal(result.clone()))),
            Section::Insufficient { reason } => Err(reason.clone()),
        }
        .into(),
    );
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    out.insert(
        "pareto_at_min".into(),
        fit_pareto_hill(ratios, min)
            .map(|f| plug_in_mean(&Fit::Pareto(f)))
            .into(),
    );
    let selected: std::result::Result<ParetoFit, String> = match &fits.xmin {
        Section::Ok { result } => Ok(result.fit.clone()),
        Section::Insufficient { reason } => Err(reason.clone()),
    };
    out.insert(
        "pareto_at_xmin".into(),
        selected.clone().map(|f| plug_in_mean(&Fit::Pareto(f))).into(),
    );
    out.insert(
        "pareto_spliced".into(),
        selected
            .and_then(|f| spliced_mean(ratios, &f).map_err(|e| e.to_string()))
            .into(),
    );
    out.insert(
        "shadow_dual".into(),
        shadow_mean_dual(ratios, bounds.0, bounds.1).into(),
    );
    out
}

/// Output of the risk analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskAnalysis {
    pub shadow_bounds: (f64, f64),
    pub fits: TailFits,
    pub means: BTreeMap<String, Section<MeanEstimate>>,
    pub randomness: Section<RandomnessClass>,
    pub heuristics: Section<HeuristicReport>,
    pub uplift: UpliftResult,
}

pub fn risk_analysis(sample: &OverrunSample, risk: f64, upper: Option<f64>) -> Result<RiskAnalysis> {
    let ratios = sample.values();
    let (lower, default_upper) = default_shadow_bounds(ratios);
    let bounds = (lower, upper.unwrap_or(default_upper));
    let fits = TailFits::compute(sample);
    let lognormal = fits.lognormal.ok().cloned().map(Fit::Lognormal);
    let uplift = rcf_uplift(ratios, risk, lognormal.as_ref())?;
    let means = mean_estimates(sample, &fits, bounds);
    let mean_values: Vec<MeanEstimate> =
        means.values().filter_map(|s| s.ok().cloned()).collect();
    let randomness = match fits.xmin.ok() {
        Some(sel) => classify_randomness(sel.alpha),
        None => Err(Error::Degenerate("no tail exponent".into())),
    };
    Ok(RiskAnalysis {
        shadow_bounds: bounds,
        heuristics: evaluate_heuristics(ratios, &fits.fits(), &mean_values).into(),
        randomness: randomness.into(),
        means,
        fits,
        uplift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub provenance: String,
    pub records: usize,
    pub with_cost: usize,
    pub with_overrun: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    /// Overrun in percent.
    pub overrun_pct: Section<SummaryStats>,
    /// Outturn cost in billions of 2015 USD.
    pub cost_busd2015: Section<SummaryStats>,
}

pub fn cohort_summary(table: &GamesTable, cohort: Cohort) -> CohortSummary {
    // summarise the recorded percentages directly so 620% stays 620, not 619.999...
    let overrun = overrun_ratios(table, cohort).and_then(|_| {
        let pct: Vec<f64> = table
            .records
            .iter()
            .filter(|r| cohort.admits(r.season))
            .filter_map(|r| r.overrun_pct)
            .collect();
        summary(&pct, &OVERRUN_THRESHOLDS_PCT)
    });
    CohortSummary {
        overrun_pct: overrun.into(),
        cost_busd2015: summary(&table.costs(cohort), &[]).into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestsSection {
    /// Signed-rank test of ratios against 1 (no overrun).
    pub signed_rank_all: Section<TestResult>,
    /// Rank-sum test of Summer against Winter overruns.
    pub rank_sum_summer_winter: Section<TestResult>,
    pub trend_summer: Section<TrendFit>,
    pub trend_winter: Section<TrendFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitsSection {
    pub lognormal: Section<LognormalFit>,
    pub lognormal_excess_kurtosis: Section<f64>,
    pub pareto_at_min: Section<ParetoFit>,
    pub xmin: Section<XminResult>,
    pub truncated_lognormal_at_xmin: Section<LognormalFit>,
    pub gpd: Section<GpdFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VuongEntry {
    pub xmin: f64,
    pub model_a: Fit,
    pub model_b: Fit,
    pub result: VuongResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSection {
    pub distribution: String,
    pub running_mean: SimulationSummary,
    /// P(new maximum) for 19 future draws against 19 past ones.
    pub record_exceedance_19_19: f64,
    /// The same for 76 future draws.
    pub record_exceedance_19_76: f64,
    pub mean_dispersion_19: f64,
    pub mean_dispersion_matched_gaussian_19: f64,
}

/// Every quantity of the analysis in one serializable bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub seed: u64,
    pub dataset: DatasetInfo,
    pub summary: BTreeMap<String, CohortSummary>,
    pub unit_costs: UnitCosts,
    pub tests: TestsSection,
    pub fits: FitsSection,
    pub vuong: BTreeMap<String, Section<VuongEntry>>,
    pub means: BTreeMap<String, Section<MeanEstimate>>,
    pub randomness: Section<RandomnessClass>,
    pub heuristics: Section<HeuristicReport>,
    pub uplifts: Section<Vec<UpliftResult>>,
    pub simulation: Section<SimulationSection>,
}

fn insufficient<T>(e: &Error) -> Section<T> {
    Section::Insufficient {
        reason: e.to_string(),
    }
}

pub const SIM_HORIZON: usize = 1000;
pub const SIM_RUNS: usize = 200;

fn vuong_entry(
    sample: &OverrunSample,
    xmin: f64,
    a: Result<Fit>,
    b: Result<Fit>,
) -> Result<VuongEntry> {
    let (a, b) = (a?, b?);
    let result = vuong_test(sample.values(), &a, &b, xmin)?;
    Ok(VuongEntry {
        xmin,
        model_a: a,
        model_b: b,
        result,
    })
}

fn simulation_section(alpha: Result<f64>, seed: u64) -> Result<SimulationSection> {
    let dist = SimDistribution::pareto(alpha?, 1.0)?;
    let gauss = matched_gaussian(&dist);
    Ok(SimulationSection {
        distribution: dist.to_string(),
        running_mean: running_mean_experiment(&dist, SIM_HORIZON, SIM_RUNS, seed)?.summary(),
        record_exceedance_19_19: record_exceedance(&dist, 19, 19, SIM_RUNS, seed)?,
        record_exceedance_19_76: record_exceedance(&dist, 19, 76, SIM_RUNS, seed)?,
        mean_dispersion_19: mean_dispersion(&dist, 19, SIM_RUNS, seed)?,
        mean_dispersion_matched_gaussian_19: mean_dispersion(&gauss, 19, SIM_RUNS, seed)?,
    })
}

impl ReportBundle {
    pub fn build(table: &GamesTable, seed: u64) -> ReportBundle {
        let summary = [Cohort::All, Cohort::Summer, Cohort::Winter]
            .into_iter()
            .map(|c| (cohort_name(c).to_string(), cohort_summary(table, c)))
            .collect();

        let all = overrun_ratios(table, Cohort::All);
        let ratios_of = |c| overrun_ratios(table, c).map(|s| s.ratios);
        let tests = TestsSection {
            signed_rank_all: match &all {
                Ok(s) => wilcoxon_signed_rank(&s.ratios).into(),
                Err(e) => insufficient(e),
            },
            rank_sum_summer_winter: ratios_of(Cohort::Summer)
                .and_then(|s| rank_sum(&s, &ratios_of(Cohort::Winter)?))
                .into(),
            trend_summer: log_trend(&table.cost_series(Season::Summer)).into(),
            trend_winter: log_trend(&table.cost_series(Season::Winter)).into(),
        };

        let no_sample = |e: &Error| Error::EmptySample(format!("no overrun sample: {e}"));
        let (fits, vuong, risk) = match &all {
            Ok(sample) => {
                let tail = TailFits::compute(sample);
                let ratios = sample.values();
                let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                let pareto_min = || fit_pareto_hill(ratios, min);
                let fits = FitsSection {
                    lognormal: tail.lognormal.clone(),
                    lognormal_excess_kurtosis: fit_lognormal(ratios)
                        .map(|f| lognormal_kurtosis(&f))
                        .into(),
                    pareto_at_min: pareto_min().into(),
                    xmin: tail.xmin.clone(),
                    truncated_lognormal_at_xmin: tail.truncated_lognormal.clone(),
                    gpd: fit_gpd(ratios, DEFAULT_GPD_THRESHOLD).into(),
                };
                let mut vuong = BTreeMap::new();
                vuong.insert(
                    "at_sample_min".to_string(),
                    vuong_entry(
                        sample,
                        min,
                        pareto_min().map(Fit::Pareto),
                        fit_lognormal(ratios).map(Fit::Lognormal),
                    )
                    .into(),
                );
                let at_xmin = match tail.xmin.ok() {
                    Some(sel) => vuong_entry(
                        sample,
                        sel.xmin,
                        Ok(Fit::Pareto(sel.fit.clone())),
                        fit_truncated_lognormal(ratios, sel.xmin).map(Fit::Lognormal),
                    ),
                    None => Err(Error::Degenerate("no tail cutoff".into())),
                };
                vuong.insert("at_selected_xmin".to_string(), at_xmin.into());
                let (lower, upper) = default_shadow_bounds(ratios);
                let means = mean_estimates(sample, &tail, (lower, upper));
                let mean_values: Vec<MeanEstimate> =
                    means.values().filter_map(|s| s.ok().cloned()).collect();
                let heuristics: Section<HeuristicReport> =
                    evaluate_heuristics(ratios, &tail.fits(), &mean_values).into();
                let lognormal = tail.lognormal.ok().cloned().map(Fit::Lognormal);
                let uplifts: Result<Vec<UpliftResult>> = REPORT_RISKS
                    .iter()
                    .map(|&r| rcf_uplift(ratios, r, lognormal.as_ref()))
                    .collect();
                let alpha = || match tail.xmin.ok() {
                    Some(sel) => Ok(sel.alpha),
                    None => Err(Error::Degenerate("no tail exponent".into())),
                };
                (
                    fits,
                    vuong,
                    (
                        means,
                        alpha().and_then(classify_randomness).into(),
                        heuristics,
                        uplifts.into(),
                        simulation_section(alpha(), seed).into(),
                    ),
                )
            }
            Err(e) => {
                let e = no_sample(e);
                (
                    FitsSection {
                        lognormal: insufficient(&e),
                        lognormal_excess_kurtosis: insufficient(&e),
                        pareto_at_min: insufficient(&e),
                        xmin: insufficient(&e),
                        truncated_lognormal_at_xmin: insufficient(&e),
                        gpd: insufficient(&e),
                    },
                    BTreeMap::new(),
                    (
                        BTreeMap::new(),
                        insufficient(&e),
                        insufficient(&e),
                        insufficient(&e),
                        insufficient(&e),
                    ),
                )
            }
        };
        let (means, randomness, heuristics, uplifts, simulation) = risk;

        ReportBundle {
            seed,
            dataset: DatasetInfo {
                provenance: table.provenance.clone(),
                records: table.len(),
                with_cost: table.records.iter().filter(|r| r.outturn_cost.is_some()).count(),
                with_overrun: table.records.iter().filter(|r| r.overrun_pct.is_some()).count(),
            },
            summary,
            unit_costs: derive_unit_costs(table),
            tests,
            fits,
            vuong,
            means,
            randomness,
            heuristics,
            uplifts,
            simulation,
        }
    }

    /// Key-sorted, pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Serializes through `serde_json::Value`, whose maps are ordered by key.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn cohort_name(c: Cohort) -> &'static str {
    match c {
        Cohort::All => "all",
        Cohort::Summer => "summer",
        Cohort::Winter => "winter",
    }
}

/// Plot-ready tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Empirical and fitted complementary CDFs of overrun ratios.
    Ccdf,
    /// Outturn cost by year.
    CostTime,
    /// Outturn cost per athlete by year.
    AthleteTime,
}

impl Figure {
    pub fn file_stem(self) -> &'static str {
        match self {
            Figure::Ccdf => "ccdf",
            Figure::CostTime => "cost-time",
            Figure::AthleteTime => "athlete-time",
        }
    }
}

/// `x,p_empirical,p_pareto,p_lognormal`, one row per distinct ratio. The
/// Pareto column is Hill's fit over the whole sample.
pub fn ccdf_csv(sample: &OverrunSample) -> Result<String> {
    let ratios = sample.values();
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let pareto = Fit::Pareto(fit_pareto_hill(ratios, min)?);
    let lognormal = Fit::Lognormal(fit_lognormal(ratios)?);
    let mut out = String::from("x,p_empirical,p_pareto,p_lognormal\n");
    for (x, p) in empirical_ccdf(ratios) {
        writeln!(
            out,
            "{x},{p},{},{}",
            tail_probability(&pareto, x),
            tail_probability(&lognormal, x)
        )
        .expect("string write");
    }
    Ok(out)
}

/// `year,season,value` rows of outturn cost (billions of 2015 USD).
pub fn cost_time_csv(table: &GamesTable) -> String {
    time_csv(
        table
            .records
            .iter()
            .filter_map(|r| r.outturn_cost.map(|c| (r.year, r.season, c))),
    )
}

/// `year,season,value` rows of cost per athlete (millions of 2015 USD).
/// Without the outlier, the row with the largest value is dropped.
pub fn athlete_time_csv(table: &GamesTable, with_outlier: bool) -> String {
    let mut rows: Vec<(i32, Season, f64)> = derive_unit_costs(table)
        .rows
        .into_iter()
        .map(|u| (u.year, u.season, u.cost_per_athlete))
        .collect();
    if !with_outlier {
        if let Some(i) = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
            .map(|(i, _)| i)
        {
            rows.remove(i);
        }
    }
    time_csv(rows.into_iter())
}

fn time_csv(rows: impl Iterator<Item = (i32, Season, f64)>) -> String {
    let mut out = String::from("year,season,value\n");
    for (year, season, v) in rows {
        writeln!(out, "{year},{season},{v}").expect("string write");
    }
    out
}

/// Every plot table as `(file name, contents)`.
pub fn plot_files(table: &GamesTable) -> Result<Vec<(String, String)>> {
    let sample = overrun_ratios(table, Cohort::All)?;
    Ok(vec![
        ("ccdf.csv".into(), ccdf_csv(&sample)?),
        ("cost-time.csv".into(), cost_time_csv(table)),
        ("athlete-time.csv".into(), athlete_time_csv(table, true)),
        (
            "athlete-time-without-outlier.csv".into(),
            athlete_time_csv(table, false),
        ),
    ])
}

/// Writes every file into `dir`, creating it if needed. If any write fails,
/// the files written so far are removed.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, contents).map_err(io_err(&path)) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}

/// Builds the report and writes `report.json` plus the plot tables. Plot
/// tables the data cannot support are skipped.
pub fn write_report(table: &GamesTable, seed: u64, dir: &Path) -> Result<Vec<PathBuf>> {
    let bundle = ReportBundle::build(table, seed);
    let mut files = vec![("report.json".to_string(), bundle.to_json())];
    match plot_files(table) {
        Ok(plots) => files.extend(plots),
        Err(_) => {
            files.push(("cost-time.csv".into(), cost_time_csv(table)));
            files.push(("athlete-time.csv".into(), athlete_time_csv(table, true)));
            files.push((
                "athlete-time-without-outlier.csv".into(),
                athlete_time_csv(table, false),
            ));
        }
    }
    write_files(dir, &files)
}
