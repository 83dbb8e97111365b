//! Builds the full report bundle and prints a digest of it.

use tailrisk::report::{ReportBundle, Section};
use tailrisk::GamesTable;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let bundle = ReportBundle::build(&GamesTable::bundled(), seed);

    if let Some(v) = bundle.tests.signed_rank_all.ok() {
        println!("V = {}, p = {:.3e}", v.statistic, v.p_value);
    }
    if let Some(w) = bundle.tests.rank_sum_summer_winter.ok() {
        println!("W = {}, p = {:.3}", w.statistic, w.p_value);
    }
    if let Some(sel) = bundle.fits.xmin.ok() {
        println!("tail from {} with alpha {:.3}", sel.xmin, sel.alpha);
    }
    for (name, m) in &bundle.means {
        match m {
            Section::Ok { result } => println!("mean[{name}] = {:.4}", result.value),
            Section::Insufficient { reason } => println!("mean[{name}] unavailable: {reason}"),
        }
    }
    let json = bundle.to_json();
    println!("report.json would be {} bytes", json.len());
}
