//! Cohort summaries, cost-per-event/athlete and CSV validation.
//!
//! Run with `cargo run --example describe_dataset [path/to/games.csv]`.

use tailrisk::dataset::{derive_unit_costs, load_games_csv, parse_games_csv, validate};
use tailrisk::report::{cohort_summary, Section};
use tailrisk::{Cohort, GamesTable};

fn main() -> tailrisk::Result<()> {
    let table = match std::env::args().nth(1) {
        Some(path) => load_games_csv(path)?,
        None => GamesTable::bundled(),
    };
    println!("{} records from {}", table.len(), table.provenance);

    for cohort in [Cohort::All, Cohort::Summer, Cohort::Winter] {
        let s = cohort_summary(&table, cohort);
        print!("{cohort:?}: ");
        if let Section::Ok { result } = &s.overrun_pct {
            print!("overrun mean {:.0}% median {:.1}% ", result.mean, result.median);
            for (t, p) in &result.prop_above {
                print!("(>{t}%: {:.0}%) ", p * 100.0);
            }
        }
        if let Section::Ok { result } = &s.cost_busd2015 {
            print!("cost mean {:.3} median {:.3} bn", result.mean, result.median);
        }
        println!();
    }

    let units = derive_unit_costs(&table);
    let dearest = units
        .rows
        .iter()
        .max_by(|a, b| a.cost_per_athlete.total_cmp(&b.cost_per_athlete))
        .expect("unit costs");
    println!(
        "highest cost per athlete: {} at {:.1} million USD ({} games lack the inputs)",
        dearest.name,
        dearest.cost_per_athlete,
        units.skipped.len()
    );

    // Validation reports every problem row at once.
    let bad = "name,year,season,country,events,athletes,outturn_cost_busd2015,overrun_pct_real\n\
               A,1990,summer,X,10,100,1.0,-120\n\
               B,1990,summer,Y,10,100,1.0,20\n";
    match parse_games_csv(bad.as_bytes(), "inline") {
        Ok(t) => println!("unexpectedly valid: {}", validate(&t).summary()),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
