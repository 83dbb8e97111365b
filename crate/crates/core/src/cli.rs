//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for input or usage errors, 3 for numerical
//! failures. JSON output is key-sorted with shortest round-trip numbers;
//! text output rounds to 6 significant digits.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dataset::{derive_unit_costs, load_games_csv, overrun_ratios, Cohort, GamesTable, UnitCosts};
use crate::distfit::{
    fit_gpd, fit_lognormal, fit_pareto_hill, fit_truncated_lognormal, ks_distance,
    lognormal_kurtosis, tail_of, Fit,
};
use crate::error::{Error, Result};
use crate::model_select::{vuong_test, VuongResult};
use crate::report::{
    athlete_time_csv, ccdf_csv, cohort_summary, cost_time_csv, resolve_xmin, risk_analysis,
    to_sorted_json, write_files, write_report, CohortSummary, Figure, ResolvedXmin, Section,
    XminSpec, DEFAULT_GPD_THRESHOLD,
};
use crate::stats::SummaryStats;
use crate::tail_risk::{plug_in_mean, MeanEstimate};
use crate::tail_sim::{running_mean_experiment, SimDistribution};

#[derive(Debug, Parser)]
#[command(
    name = "tailrisk",
    version,
    about = "Fat-tailed cost-risk analysis of Olympic Games cost overruns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summary statistics of overruns and costs, with unit costs.
    Describe {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "all")]
        filter: Cohort,
        #[arg(long, value_enum, default_value = "text")]
        format: DescribeFormat,
    },
    /// Fit one model to the overrun ratios.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        model: ModelKind,
        /// Tail cutoff: auto, min or a ratio.
        #[arg(long, default_value = "auto")]
        xmin: String,
        /// Exceedance threshold of the gpd model.
        #[arg(long, default_value_t = DEFAULT_GPD_THRESHOLD)]
        threshold: f64,
        #[arg(long, value_enum, default_value = "all")]
        filter: Cohort,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Vuong test of the Pareto tail (model A) against the lognormal tail
    /// refit above the same cutoff (model B).
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// Tail cutoff: auto, min or a ratio.
        #[arg(long, default_value = "auto")]
        xmin: String,
        #[arg(long, value_enum, default_value = "all")]
        filter: Cohort,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Mean estimates, hosting heuristics and the budget uplift for an
    /// acceptable overrun risk.
    Risk {
        #[command(flatten)]
        data: DataArgs,
        /// Acceptable probability of exceeding the uplifted budget.
        #[arg(long, default_value_t = 0.2)]
        risk: f64,
        /// Upper bound of the ratio for the shadow mean.
        #[arg(long = "bound-H")]
        bound_h: Option<f64>,
        #[arg(long, value_enum, default_value = "all")]
        filter: Cohort,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Running-mean simulation; writes trace.csv and summary.json.
    Simulate {
        /// pareto:ALPHA:XMIN, lognormal:MU:SIGMA or gaussian:MEAN:SD.
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plot-ready CSV for one figure.
    Plotdata {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Everything: report.json plus every plot table.
    Report {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Games CSV; the bundled dataset when omitted.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

impl DataArgs {
    pub fn load(&self) -> Result<GamesTable> {
        match &self.input {
            Some(p) => load_games_csv(p),
            None => Ok(GamesTable::bundled()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DescribeFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Lognormal,
    Pareto1,
    Gpd,
    TruncLognormal,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    // a closed pipe is not the analysis' failure
    let _ = out.write_all(text.as_bytes());
    Ok(())
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Describe {
            data,
            filter,
            format,
        } => {
            let table = data.load()?;
            let d = describe(&table, filter)?;
            let text = match format {
                DescribeFormat::Json => to_sorted_json(&d),
                DescribeFormat::Csv => d.to_csv(),
                DescribeFormat::Text => d.to_text(),
            };
            emit(out, &text)
        }
        Command::Fit {
            data,
            model,
            xmin,
            threshold,
            filter,
            format,
        } => {
            let spec: XminSpec = xmin.parse()?;
            let sample = overrun_ratios(&data.load()?, filter)?;
            let record = fit_model(&sample, model, spec, threshold)?;
            emit(out, &match format {
                Format::Json => to_sorted_json(&record),
                Format::Text => record.to_text(),
            })
        }
        Command::Compare {
            data,
            xmin,
            filter,
            format,
        } => {
            let spec: XminSpec = xmin.parse()?;
            let sample = overrun_ratios(&data.load()?, filter)?;
            let record = compare(&sample, spec)?;
            emit(out, &match format {
                Format::Json => to_sorted_json(&record),
                Format::Text => record.to_text(),
            })
        }
        Command::Risk {
            data,
            risk,
            bound_h,
            filter,
            format,
        } => {
            if !(risk > 0.0 && risk < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "--risk must lie strictly between 0 and 1, got {risk}"
                )));
            }
            let sample = overrun_ratios(&data.load()?, filter)?;
            let analysis = risk_analysis(&sample, risk, bound_h)?;
            emit(out, &match format {
                Format::Json => to_sorted_json(&analysis),
                Format::Text => risk_text(&analysis),
            })
        }
        Command::Simulate {
            dist,
            horizon,
            runs,
            seed,
            out: dir,
        } => {
            let dist: SimDistribution = dist.parse()?;
            let trace = running_mean_experiment(&dist, horizon, runs, seed)?;
            let mut csv = Vec::new();
            trace.write_csv(&mut csv).expect("in-memory write");
            let summary = trace.summary();
            let files = vec![
                ("trace.csv".to_string(), String::from_utf8(csv).expect("ascii")),
                ("summary.json".to_string(), to_sorted_json(&summary)),
            ];
            let written = write_files(&dir, &files)?;
            let mut text = format!(
                "{dist}: {runs} runs x {horizon} steps, seed {seed}\n\
                 final running mean q05 {} q50 {} q95 {}\n",
                num(summary.final_q05),
                num(summary.final_q50),
                num(summary.final_q95)
            );
            for f in &summary.flags {
                text.push_str(&format!("flag: {f}\n"));
            }
            text.push_str(&written_list(&written));
            emit(out, &text)
        }
        Command::Plotdata { data, figure, out: path } => {
            let table = data.load()?;
            let mut files = Vec::new();
            match figure {
                Figure::Ccdf => files.push((path.clone(), ccdf_csv(&overrun_ratios(&table, Cohort::All)?)?)),
                Figure::CostTime => files.push((path.clone(), cost_time_csv(&table))),
                Figure::AthleteTime => {
                    files.push((path.clone(), athlete_time_csv(&table, true)));
                    files.push((without_outlier_path(&path), athlete_time_csv(&table, false)));
                }
            }
            let mut written = Vec::new();
            for (p, contents) in files {
                let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
                let name = p.file_name().ok_or_else(|| {
                    Error::InvalidArgument(format!("--out {} names no file", p.display()))
                })?;
                written.extend(write_files(dir, &[(name.to_string_lossy().into_owned(), contents)])?);
            }
            emit(out, &written_list(&written))
        }
        Command::Report {
            data,
            seed,
            out: dir,
        } => {
            let table = data.load()?;
            let written = write_report(&table, seed, &dir)?;
            emit(out, &written_list(&written))
        }
    }
}

/// `dir/stem-without-outlier.ext` next to `path`.
pub fn without_outlier_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-without-outlier.{}", ext.to_string_lossy()),
        None => format!("{stem}-without-outlier"),
    };
    path.with_file_name(name)
}

fn written_list(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| format!("wrote {}\n", p.display())).collect()
}

/// Rounds to 6 significant digits and drops trailing zeros.
pub fn num(x: f64) -> String {
    format_significant(x, 6)
}

pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Description {
    pub filter: Cohort,
    pub summary: CohortSummary,
    pub unit_costs: UnitCosts,
}

pub fn describe(table: &GamesTable, filter: Cohort) -> Result<Description> {
    let summary = cohort_summary(table, filter);
    if let (Section::Insufficient { reason }, Section::Insufficient { .. }) =
        (&summary.overrun_pct, &summary.cost_busd2015)
    {
        return Err(Error::EmptySample(reason.clone()));
    }
    let mut unit_costs = derive_unit_costs(table);
    unit_costs.rows.retain(|u| filter.admits(u.season));
    Ok(Description {
        filter,
        summary,
        unit_costs,
    })
}

impl Description {
    pub fn to_text(&self) -> String {
        let mut s = format!("cohort: {}\n", crate::report::cohort_name(self.filter));
        stats_text(&mut s, "overrun (%)", &self.summary.overrun_pct);
        stats_text(&mut s, "outturn cost (billion 2015 USD)", &self.summary.cost_busd2015);
        s.push_str("unit costs (million 2015 USD)\n");
        s.push_str(&format!("  {:<24} {:>5} {:<7} {:>10} {:>12}\n", "games", "year", "season", "per event", "per athlete"));
        for u in &self.unit_costs.rows {
            s.push_str(&format!(
                "  {:<24} {:>5} {:<7} {:>10} {:>12}\n",
                u.name,
                u.year,
                u.season,
                num(u.cost_per_event),
                num(u.cost_per_athlete)
            ));
        }
        s
    }

    /// Long format: `section,key,statistic,value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "key", "statistic", "value"])
            .expect("in-memory write");
        let mut row = |a: &str, b: &str, c: &str, v: f64| {
            w.write_record([a, b, c, &v.to_string()]).expect("in-memory write");
        };
        for (name, sec) in [
            ("overrun_pct", &self.summary.overrun_pct),
            ("cost_busd2015", &self.summary.cost_busd2015),
        ] {
            if let Some(st) = sec.ok() {
                row(name, "", "n", st.n as f64);
                row(name, "", "mean", st.mean);
                row(name, "", "median", st.median);
                row(name, "", "sd", st.sd);
                row(name, "", "min", st.min);
                row(name, "", "max", st.max);
                for (t, p) in &st.prop_above {
                    row(name, "", &format!("share_above_{t}"), *p);
                }
            }
        }
        for u in &self.unit_costs.rows {
            let key = format!("{} {}", u.name, u.year);
            row("unit_cost_musd2015", &key, "per_event", u.cost_per_event);
            row("unit_cost_musd2015", &key, "per_athlete", u.cost_per_athlete);
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn stats_text(s: &mut String, title: &str, sec: &Section<SummaryStats>) {
    match sec {
        Section::Ok { result: st } => {
            s.push_str(&format!(
                "{title}: n {}  mean {}  median {}  sd {}  min {}  max {}\n",
                st.n,
                num(st.mean),
                num(st.median),
                num(st.sd),
                num(st.min),
                num(st.max)
            ));
            for (t, p) in &st.prop_above {
                let count = (p * st.n as f64).round() as usize;
                s.push_str(&format!(
                    "  above {}: {} of {} ({}%)\n",
                    num(*t),
                    count,
                    st.n,
                    num(p * 100.0)
                ));
            }
        }
        Section::Insufficient { reason } => s.push_str(&format!("{title}: unavailable ({reason})\n")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRecord {
    pub fit: Fit,
    pub ks_distance: Option<f64>,
    pub xmin: Option<ResolvedXmin>,
    pub excess_kurtosis: Option<f64>,
    pub mean: MeanEstimate,
}

pub fn fit_model(
    sample: &crate::dataset::OverrunSample,
    model: ModelKind,
    spec: XminSpec,
    threshold: f64,
) -> Result<FitRecord> {
    let ratios = sample.values();
    let (fit, xmin, ks, kurt) = match model {
        ModelKind::Lognormal => {
            let f = fit_lognormal(ratios)?;
            let k = lognormal_kurtosis(&f);
            let fit = Fit::Lognormal(f);
            let ks = ks_distance(ratios, &fit)?;
            (fit, None, Some(ks), Some(k))
        }
        ModelKind::Pareto1 => {
            let r = resolve_xmin(sample, spec)?;
            let fit = match &r.selection {
                Some(sel) => sel.fit.clone(),
                None => fit_pareto_hill(ratios, r.xmin)?,
            };
            let fit = Fit::Pareto(fit);
            let ks = ks_distance(&tail_of(ratios, r.xmin, 1)?, &fit)?;
            (fit, Some(r), Some(ks), None)
        }
        ModelKind::TruncLognormal => {
            let r = resolve_xmin(sample, spec)?;
            let fit = Fit::Lognormal(fit_truncated_lognormal(ratios, r.xmin)?);
            let ks = ks_distance(&tail_of(ratios, r.xmin, 1)?, &fit)?;
            (fit, Some(r), Some(ks), None)
        }
        ModelKind::Gpd => {
            let fit = Fit::Gpd(fit_gpd(ratios, threshold)?);
            let exceed: Vec<f64> = ratios.iter().cloned().filter(|&x| x > threshold).collect();
            let ks = ks_distance(&exceed, &fit)?;
            (fit, None, Some(ks), None)
        }
    };
    Ok(FitRecord {
        mean: plug_in_mean(&fit),
        fit,
        ks_distance: ks,
        xmin,
        excess_kurtosis: kurt,
    })
}

impl FitRecord {
    pub fn to_text(&self) -> String {
        let mut s = match &self.fit {
            Fit::Lognormal(f) => {
                let mut s = format!("lognormal: mu {}  sigma {}  n {}\n", num(f.mu), num(f.sigma), f.n);
                if let Some(t) = f.truncation_min {
                    s.push_str(&format!("  conditioned on x >= {}\n", num(t)));
                }
                s.push_str(&format!("  log-likelihood {}\n", num(f.log_likelihood)));
                s
            }
            Fit::Pareto(f) => format!(
                "pareto: xmin {}  alpha {}  tail {} of {}\n  log-likelihood {}\n",
                num(f.xmin),
                num(f.alpha),
                f.n_tail,
                f.n_sample,
                num(f.log_likelihood)
            ),
            Fit::Gpd(f) => format!(
                "gpd: threshold {}  scale {}  shape {}  implied alpha {}  exceedances {}\n  log-likelihood {}\n",
                num(f.threshold),
                num(f.scale),
                num(f.shape),
                f.implied_alpha,
                f.n_exceed,
                num(f.log_likelihood)
            ),
        };
        if let Some(k) = self.excess_kurtosis {
            s.push_str(&format!("  excess kurtosis {}\n", num(k)));
        }
        if let Some(ks) = self.ks_distance {
            s.push_str(&format!("  KS distance {}\n", num(ks)));
        }
        if let Some(sel) = self.xmin.as_ref().and_then(|r| r.selection.as_ref()) {
            s.push_str(&format!("  xmin chosen by KS scan over {} candidates\n", sel.scan.len()));
        }
        s.push_str(&format!("  mean {}\n", fmt_ext(self.mean.value)));
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRecord {
    pub xmin: ResolvedXmin,
    pub model_a: Fit,
    pub model_b: Fit,
    pub vuong: VuongResult,
    pub favored: String,
}

pub fn compare(sample: &crate::dataset::OverrunSample, spec: XminSpec) -> Result<CompareRecord> {
    let ratios = sample.values();
    let r = resolve_xmin(sample, spec)?;
    let pareto = Fit::Pareto(match &r.selection {
        Some(sel) => sel.fit.clone(),
        None => fit_pareto_hill(ratios, r.xmin)?,
    });
    let lognormal = Fit::Lognormal(fit_truncated_lognormal(ratios, r.xmin)?);
    let vuong = vuong_test(ratios, &pareto, &lognormal, r.xmin)?;
    let favored = if vuong.r_normalized > 0.0 { "pareto" } else { "lognormal" }.to_string();
    Ok(CompareRecord {
        xmin: r,
        model_a: pareto,
        model_b: lognormal,
        vuong,
        favored,
    })
}

impl CompareRecord {
    pub fn to_text(&self) -> String {
        format!(
            "tail x >= {} ({} points)\nA: {}\nB: {}\nVuong R {}  two-sided p {}  (positive favors A; leans {})\n",
            num(self.xmin.xmin),
            self.vuong.n_tail,
            fit_label(&self.model_a),
            fit_label(&self.model_b),
            num(self.vuong.r_normalized),
            num(self.vuong.p_two_sided),
            self.favored
        )
    }
}

fn fit_label(f: &Fit) -> String {
    match f {
        Fit::Lognormal(l) => format!("lognormal mu {} sigma {}", num(l.mu), num(l.sigma)),
        Fit::Pareto(p) => format!("pareto xmin {} alpha {}", num(p.xmin), num(p.alpha)),
        Fit::Gpd(g) => format!("gpd scale {} shape {}", num(g.scale), num(g.shape)),
    }
}

fn risk_text(a: &crate::report::RiskAnalysis) -> String {
    let mut s = String::from("mean estimates (ratio; overrun %)\n");
    for (name, sec) in &a.means {
        match sec {
            Section::Ok { result } => s.push_str(&format!(
                "  {name:<18} {}  ({}%)\n",
                fmt_ext(result.value),
                fmt_ext(result.overrun_pct())
            )),
            Section::Insufficient { reason } => {
                s.push_str(&format!("  {name:<18} unavailable: {reason}\n"))
            }
        }
    }
    s.push_str(&format!(
        "shadow bounds L {} H {}\n",
        num(a.shadow_bounds.0),
        num(a.shadow_bounds.1)
    ));
    if let Some(c) = a.randomness.ok() {
        let peers: Vec<String> = c
            .peers
            .iter()
            .map(|p| {
                if p.alpha_low == p.alpha_high {
                    format!("{} ({})", p.event_type, num(p.alpha_low))
                } else {
                    format!("{} ({}-{})", p.event_type, num(p.alpha_low), num(p.alpha_high))
                }
            })
            .collect();
        s.push_str(&format!(
            "tail alpha {}: {}; peers: {}\n",
            num(c.alpha),
            c.regime.label(),
            peers.join(", ")
        ));
    }
    match &a.heuristics {
        Section::Ok { result } => {
            for v in &result.verdicts {
                s.push_str(&format!("- {v}\n"));
            }
        }
        Section::Insufficient { reason } => s.push_str(&format!("heuristics unavailable: {reason}\n")),
    }
    s.push_str(&format!(
        "uplift for {}% acceptable risk: {}% empirical",
        num(a.uplift.acceptable_risk * 100.0),
        num(a.uplift.empirical_uplift_pct)
    ));
    if let Some(m) = a.uplift.model_uplift_pct {
        s.push_str(&format!(", {}% lognormal", num(m)));
    }
    s.push('\n');
    s
}

fn fmt_ext(v: crate::extended::Extended) -> String {
    match v.finite() {
        Some(x) => num(x),
        None => "inf".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["tailrisk"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn significant_digits() {
        assert_eq!(num(5.974), "5.974");
        assert_eq!(num(172.421_052_631), "172.421");
        assert_eq!(num(0.000_123_456_78), "0.000123457");
        assert_eq!(num(3.0), "3");
        assert_eq!(num(1234567.0), "1234567");
        assert_eq!(num(1e-9), "1.00000e-9");
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["describe", "--filter", "spring"]).0, 2);
        assert_eq!(run_capture(&["risk", "--risk", "1.5"]).0, 2);
        assert_eq!(run_capture(&["fit", "--model", "lognormal", "--xmin", "x"]).0, 2);
        assert_eq!(run_capture(&["plotdata", "--figure", "map", "--out", "x.csv"]).0, 2);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("describe"));
    }

    #[test]
    fn compare_at_maximum_is_numerical_failure() {
        let (code, _, err) = run_capture(&["compare", "--xmin", "8.2"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn without_outlier_name() {
        assert_eq!(
            without_outlier_path(Path::new("out/a.csv")),
            PathBuf::from("out/a-without-outlier.csv")
        );
    }
}
