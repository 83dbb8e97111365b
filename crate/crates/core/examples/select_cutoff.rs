//! Minimum-KS scan for the power-law cutoff.

use tailrisk::distfit::{select_xmin, DEFAULT_MIN_TAIL};
use tailrisk::{overrun_ratios, Cohort, GamesTable};

fn main() -> tailrisk::Result<()> {
    let sample = overrun_ratios(&GamesTable::bundled(), Cohort::All)?;
    let r = select_xmin(sample.values(), DEFAULT_MIN_TAIL)?;
    println!("{:>6} {:>5} {:>7} {:>7}", "xmin", "tail", "alpha", "KS");
    for c in &r.scan {
        let mark = if c.xmin == r.xmin { " <" } else { "" };
        println!("{:>6} {:>5} {:>7.4} {:>7.4}{mark}", c.xmin, c.n_tail, c.alpha, c.ks);
    }
    println!("selected xmin {} with alpha {:.4}", r.xmin, r.alpha);
    Ok(())
}
