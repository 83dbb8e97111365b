//! Vuong test of a Pareto tail against a lognormal tail.
//!
//! Positive R favors the first model. Both densities are conditioned on the
//! tail, so the comparison is like for like.

use tailrisk::distfit::{fit_lognormal, fit_pareto_hill, fit_truncated_lognormal, select_xmin};
use tailrisk::{overrun_ratios, vuong_test, Cohort, Fit, GamesTable, LognormalFit, ParetoFit};

fn main() -> tailrisk::Result<()> {
    let sample = overrun_ratios(&GamesTable::bundled(), Cohort::All)?;
    let x = sample.values();

    let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let whole = vuong_test(
        x,
        &Fit::Pareto(fit_pareto_hill(x, min)?),
        &Fit::Lognormal(fit_lognormal(x)?),
        min,
    )?;
    println!("whole sample: R {:.3}, p {:.3}", whole.r_normalized, whole.p_two_sided);

    let sel = select_xmin(x, 5)?;
    let tail = vuong_test(
        x,
        &Fit::Pareto(sel.fit.clone()),
        &Fit::Lognormal(fit_truncated_lognormal(x, sel.xmin)?),
        sel.xmin,
    )?;
    println!(
        "tail above {}: R {:.3}, p {:.3} over {} points",
        sel.xmin, tail.r_normalized, tail.p_two_sided, tail.n_tail
    );

    // Published tail parameters, evaluated on the same tail.
    let mut published_ln = LognormalFit::new(0.5438, 0.7124);
    published_ln.truncation_min = Some(sel.xmin);
    let published = vuong_test(
        x,
        &Fit::Pareto(ParetoFit::new(sel.xmin, 1.711_926)),
        &Fit::Lognormal(published_ln),
        sel.xmin,
    )?;
    println!(
        "published parameters: R {:.3}, p {:.3}",
        published.r_normalized, published.p_two_sided
    );
    Ok(())
}
