//! Games cost dataset: CSV loading, validation and sample extraction.
//!
//! The CSV schema is fixed:
//!
//! ```text
//! name,year,season,country,events,athletes,outturn_cost_busd2015,overrun_pct_real
//! ```
//!
//! Empty cells mean "not available". Costs are billions of 2015 USD and
//! overruns are percentages in real terms.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEADER: [&str; 8] = [
    "name",
    "year",
    "season",
    "country",
    "events",
    "athletes",
    "outturn_cost_busd2015",
    "overrun_pct_real",
];

pub const BUNDLED_OLYMPICS: &str = include_str!("../data/olympics.csv");
pub const BUNDLED_POWERLAW_REFERENCE: &str = include_str!("../data/powerlaw_reference.csv");

const YEAR_RANGE: std::ops::RangeInclusive<i32> = 1896..=2100;
const SUSPICIOUS_OVERRUN_PCT: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Summer,
    Winter,
}

impl Season {
    pub fn as_str(self) -> &'static str {
        match self {
            Season::Summer => "summer",
            Season::Winter => "winter",
        }
    }
}

impl fmt::Display for Season {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which Games enter a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Cohort {
    All,
    Summer,
    Winter,
}

impl Cohort {
    pub fn admits(self, season: Season) -> bool {
        match self {
            Cohort::All => true,
            Cohort::Summer => season == Season::Summer,
            Cohort::Winter => season == Season::Winter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GamesRecord {
    pub name: String,
    pub year: i32,
    pub season: Season,
    pub country: String,
    pub events: Option<u32>,
    pub athletes: Option<u32>,
    /// Billions of 2015 USD.
    pub outturn_cost: Option<f64>,
    /// Percent, real terms.
    pub overrun_pct: Option<f64>,
}

impl GamesRecord {
    pub fn overrun_ratio(&self) -> Option<f64> {
        // (100 + p)/100 is correctly rounded, so 118% gives exactly 2.18
        self.overrun_pct.map(|p| (100.0 + p) / 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GamesTable {
    pub records: Vec<GamesRecord>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `(record index, message)`; the index is 0-based over data rows.
    pub errors: Vec<(usize, String)>,
    pub warnings: Vec<(usize, String)>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .errors
            .iter()
            .map(|(row, msg)| format!("record {row}: {msg}"))
            .collect();
        format!("{} error(s): {}", self.errors.len(), parts.join("; "))
    }
}

/// Overrun ratios (actual / estimated cost) for one cohort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverrunSample {
    pub ratios: Vec<f64>,
    pub labels: Vec<String>,
    pub filter: Cohort,
    /// Half the unit of the last published digit, on the ratio scale. Integer
    /// percentages give 0.005.
    pub half_resolution: f64,
}

impl OverrunSample {
    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.ratios
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCost {
    pub name: String,
    pub year: i32,
    pub season: Season,
    /// Millions of 2015 USD per event.
    pub cost_per_event: f64,
    /// Millions of 2015 USD per athlete.
    pub cost_per_athlete: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCosts {
    pub rows: Vec<UnitCost>,
    /// Names of records lacking cost, events or athletes.
    pub skipped: Vec<String>,
}

impl GamesTable {
    pub fn bundled() -> Self {
        parse_games_csv(BUNDLED_OLYMPICS.as_bytes(), "bundled:data/olympics.csv")
            .expect("bundled dataset is valid")
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `(year, cost)` points of one season with a known outturn cost.
    pub fn cost_series(&self, season: Season) -> Vec<(i32, f64)> {
        self.records
            .iter()
            .filter(|r| r.season == season)
            .filter_map(|r| r.outturn_cost.map(|c| (r.year, c)))
            .collect()
    }

    pub fn costs(&self, cohort: Cohort) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| cohort.admits(r.season))
            .filter_map(|r| r.outturn_cost)
            .collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.name.clone(),
                r.year.to_string(),
                r.season.to_string(),
                r.country.clone(),
                opt_cell(r.events),
                opt_cell(r.athletes),
                opt_cell(r.outturn_cost),
                opt_cell(r.overrun_pct),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn opt_cell<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn load_games_csv(path: impl AsRef<Path>) -> Result<GamesTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_games_csv(file, &path.display().to_string())
}

/// Parses and validates a games CSV. Records come back ordered by year, then
/// season (summer first).
pub fn parse_games_csv<R: Read>(reader: R, provenance: &str) -> Result<GamesTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = rdr.records();

    let header = match rows.next() {
        Some(h) => h.map_err(|e| csv_error(1, e))?,
        None => {
            return Err(Error::Parse {
                row: 1,
                column: "header".into(),
                message: "missing header row".into(),
            })
        }
    };
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != HEADER {
        return Err(Error::Parse {
            row: 1,
            column: "header".into(),
            message: format!("expected `{}`, found `{}`", HEADER.join(","), got.join(",")),
        });
    }

    let mut records = Vec::new();
    for (i, row) in rows.enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| csv_error(line, e))?;
        if row.len() != HEADER.len() {
            return Err(Error::Parse {
                row: line,
                column: "*".into(),
                message: format!("expected {} fields, found {}", HEADER.len(), row.len()),
            });
        }
        records.push(parse_record(&row, line)?);
    }

    let mut table = GamesTable {
        records,
        provenance: provenance.to_string(),
    };
    let report = validate(&table);
    if !report.is_accepted() {
        return Err(Error::Validation(report));
    }
    table.records.sort_by_key(|r| (r.year, r.season));
    Ok(table)
}

fn csv_error(line: usize, e: csv::Error) -> Error {
    Error::Parse {
        row: line,
        column: "*".into(),
        message: e.to_string(),
    }
}

fn parse_record(row: &csv::StringRecord, line: usize) -> Result<GamesRecord> {
    let cell = |i: usize| row.get(i).unwrap_or("").trim();
    let fail = |i: usize, message: String| Error::Parse {
        row: line,
        column: HEADER[i].to_string(),
        message,
    };

    let year = cell(1)
        .parse::<i32>()
        .map_err(|e| fail(1, format!("`{}`: {e}", cell(1))))?;
    let season = match cell(2).to_ascii_lowercase().as_str() {
        "summer" => Season::Summer,
        "winter" => Season::Winter,
        other => return Err(fail(2, format!("`{other}` is not summer or winter"))),
    };

    fn optional<T: std::str::FromStr>(s: &str) -> std::result::Result<Option<T>, T::Err> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some)
        }
    }
    let events =
        optional::<u32>(cell(4)).map_err(|e| fail(4, format!("`{}`: {e}", cell(4))))?;
    let athletes =
        optional::<u32>(cell(5)).map_err(|e| fail(5, format!("`{}`: {e}", cell(5))))?;
    let outturn_cost =
        optional::<f64>(cell(6)).map_err(|e| fail(6, format!("`{}`: {e}", cell(6))))?;
    let overrun_pct =
        optional::<f64>(cell(7)).map_err(|e| fail(7, format!("`{}`: {e}", cell(7))))?;

    Ok(GamesRecord {
        name: cell(0).to_string(),
        year,
        season,
        country: cell(3).to_string(),
        events,
        athletes,
        outturn_cost,
        overrun_pct,
    })
}

pub fn validate(table: &GamesTable) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();

    for (i, r) in table.records.iter().enumerate() {
        let mut err = |msg: String| report.errors.push((i, msg));
        if r.name.is_empty() {
            err("empty name".into());
        }
        if !YEAR_RANGE.contains(&r.year) {
            err(format!("year {} outside {YEAR_RANGE:?}", r.year));
        }
        if !seen.insert((r.year, r.season)) {
            err(format!("duplicate ({}, {})", r.year, r.season));
        }
        if r.events == Some(0) {
            err("events must be positive".into());
        }
        if r.athletes == Some(0) {
            err("athletes must be positive".into());
        }
        if let Some(c) = r.outturn_cost {
            if !(c.is_finite() && c > 0.0) {
                err(format!("outturn cost {c} must be positive"));
            }
        }
        if let Some(p) = r.overrun_pct {
            if !(p.is_finite() && p > -100.0) {
                err(format!("overrun {p}% must exceed -100%"));
            } else if p > SUSPICIOUS_OVERRUN_PCT {
                report
                    .warnings
                    .push((i, format!("overrun {p}% exceeds {SUSPICIOUS_OVERRUN_PCT}%")));
            }
        }
    }
    report
}

pub fn overrun_ratios(table: &GamesTable, filter: Cohort) -> Result<OverrunSample> {
    let mut ratios = Vec::new();
    let mut labels = Vec::new();
    let mut decimals = 0usize;
    for r in table.records.iter().filter(|r| filter.admits(r.season)) {
        if let Some(p) = r.overrun_pct {
            ratios.push((100.0 + p) / 100.0);
            labels.push(r.name.clone());
            decimals = decimals.max(published_decimals(p));
        }
    }
    if ratios.is_empty() {
        return Err(Error::EmptySample(format!(
            "no {filter:?} records carry an overrun"
        )));
    }
    Ok(OverrunSample {
        ratios,
        labels,
        filter,
        half_resolution: 0.5 * 10f64.powi(-(decimals as i32)) / 100.0,
    })
}

/// Decimal places in the shortest round-trip form of `v`.
fn published_decimals(v: f64) -> usize {
    let s = v.to_string();
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

pub fn derive_unit_costs(table: &GamesTable) -> UnitCosts {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for r in &table.records {
        match (r.outturn_cost, r.events, r.athletes) {
            (Some(cost), Some(events), Some(athletes)) => rows.push(UnitCost {
                name: r.name.clone(),
                year: r.year,
                season: r.season,
                cost_per_event: cost * 1000.0 / events as f64,
                cost_per_athlete: cost * 1000.0 / athletes as f64,
            }),
            _ => skipped.push(r.name.clone()),
        }
    }
    UnitCosts { rows, skipped }
}

/// One row of the bundled table of power-law tail exponents by event type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawReference {
    pub event_type: String,
    pub alpha_low: f64,
    pub alpha_high: f64,
    pub measure: String,
    pub source: String,
}

pub fn powerlaw_reference() -> Vec<PowerLawReference> {
    let mut rdr = csv::Reader::from_reader(BUNDLED_POWERLAW_REFERENCE.as_bytes());
    rdr.deserialize()
        .collect::<std::result::Result<Vec<PowerLawReference>, _>>()
        .expect("bundled reference table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str =
        "name,year,season,country,events,athletes,outturn_cost_busd2015,overrun_pct_real\n";

    fn parse(body: &str) -> Result<GamesTable> {
        parse_games_csv(format!("{HEAD}{body}").as_bytes(), "test")
    }

    #[test]
    fn bundled_counts() {
        let t = GamesTable::bundled();
        assert_eq!(t.len(), 30);
        assert_eq!(t.records.iter().filter(|r| r.outturn_cost.is_some()).count(), 25);
        assert_eq!(t.records.iter().filter(|r| r.overrun_pct.is_some()).count(), 19);
        assert!(validate(&t).errors.is_empty());
    }

    #[test]
    fn header_only_is_empty_table() {
        let t = parse("").unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn beijing_row() {
        let t = parse("Beijing 2008,2008,summer,China,302,10942,6.810,2\n").unwrap();
        let r = &t.records[0];
        assert_eq!(r.overrun_pct, Some(2.0));
        assert_eq!(r.outturn_cost, Some(6.81));
        assert_eq!(r.events, Some(302));
        assert_eq!(r.athletes, Some(10942));
        assert_eq!(r.season, Season::Summer);
    }

    #[test]
    fn malformed_cell_names_row_and_column() {
        let err = parse("A,2000,summer,X,1,2,abc,\n").unwrap_err();
        match err {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "outturn_cost_busd2015");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("A,2000,autumn,X,1,2,1,\n").unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn wrong_header_rejected() {
        let err = parse_games_csv("a,b\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
    }

    #[test]
    fn duplicate_rejected_on_load() {
        let err = parse("A,1964,winter,X,,,,\nB,1964,winter,Y,,,,\n").unwrap_err();
        match err {
            Error::Validation(rep) => assert_eq!(rep.errors.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validate_flags_invariants() {
        let mut t = GamesTable::bundled();
        let dup = t
            .records
            .iter()
            .find(|r| r.year == 1964 && r.season == Season::Winter)
            .unwrap()
            .clone();
        t.records.push(dup);
        assert_eq!(validate(&t).errors.len(), 1);

        let mut t = GamesTable::bundled();
        t.records[0].overrun_pct = Some(-150.0);
        assert_eq!(validate(&t).errors.len(), 1);

        let mut t = GamesTable::bundled();
        t.records[0].overrun_pct = Some(1500.0);
        let rep = validate(&t);
        assert!(rep.errors.is_empty());
        assert_eq!(rep.warnings.len(), 1);

        let mut t = GamesTable::bundled();
        t.records[0].year = 1800;
        assert_eq!(validate(&t).errors.len(), 1);
    }

    #[test]
    fn ratios_by_cohort() {
        let t = GamesTable::bundled();
        let all = overrun_ratios(&t, Cohort::All).unwrap();
        assert_eq!(all.len(), 19);
        let min = all.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = all.ratios.iter().cloned().fold(0.0, f64::max);
        assert!((min - 1.02).abs() < 1e-12);
        assert!((max - 8.2).abs() < 1e-12);
        let idx = all.labels.iter().position(|l| l == "Beijing 2008").unwrap();
        assert!((all.ratios[idx] - 1.02).abs() < 1e-12);
        assert!((all.half_resolution - 0.005).abs() < 1e-15);

        let summer = overrun_ratios(&t, Cohort::Summer).unwrap();
        let winter = overrun_ratios(&t, Cohort::Winter).unwrap();
        assert_eq!(summer.len(), 8);
        assert_eq!(winter.len(), 11);
    }

    #[test]
    fn zero_overrun_is_unit_ratio_and_empty_cohort_errors() {
        let t = parse("A,2000,summer,X,,,,0\n").unwrap();
        assert_eq!(overrun_ratios(&t, Cohort::All).unwrap().ratios, vec![1.0]);
        assert!(matches!(
            overrun_ratios(&t, Cohort::Winter),
            Err(Error::EmptySample(_))
        ));
    }

    #[test]
    fn finer_precision_shrinks_resolution() {
        let t = parse("A,2000,summer,X,,,,12.25\nB,2004,summer,X,,,,3\n").unwrap();
        let s = overrun_ratios(&t, Cohort::All).unwrap();
        assert!((s.half_resolution - 0.00005).abs() < 1e-15);
    }

    #[test]
    fn unit_costs_match_published_cells() {
        let u = derive_unit_costs(&GamesTable::bundled());
        let get = |n: &str| u.rows.iter().find(|r| r.name == n).unwrap();
        let london = get("London 2012");
        assert!((london.cost_per_event - 49.5).abs() < 0.05);
        assert!((london.cost_per_athlete - 1.4).abs() < 0.05);
        let sochi = get("Sochi 2014");
        assert!((sochi.cost_per_event - 223.4).abs() < 0.05);
        assert!((sochi.cost_per_athlete - 7.9).abs() < 0.05);
        let tokyo = get("Tokyo 1964");
        assert!((tokyo.cost_per_event - 1.7).abs() < 0.05);
        assert!((tokyo.cost_per_athlete - 0.055).abs() < 0.001);
        assert_eq!(u.rows.len(), 25);
        assert_eq!(u.skipped.len(), 5);
    }

    #[test]
    fn reference_table_loads() {
        let refs = powerlaw_reference();
        assert_eq!(refs.len(), 9);
        assert!(refs.iter().any(|r| r.event_type == "Terrorist attacks" && r.alpha_low == 1.4));
    }
}
