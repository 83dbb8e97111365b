//! Sample, plug-in, spliced and shadow means.

use tailrisk::distfit::{fit_lognormal, select_xmin};
use tailrisk::tail_risk::{plug_in_mean, sample_mean, shadow_mean_dual, spliced_mean};
use tailrisk::{overrun_ratios, Cohort, Fit, GamesTable};

fn main() -> tailrisk::Result<()> {
    let sample = overrun_ratios(&GamesTable::bundled(), Cohort::All)?;
    let x = sample.values();
    let sel = select_xmin(x, 5)?;

    let estimates = [
        sample_mean(x)?,
        plug_in_mean(&Fit::Lognormal(fit_lognormal(x)?)),
        plug_in_mean(&Fit::Pareto(sel.fit.clone())),
        spliced_mean(x, &sel.fit)?,
    ];
    for m in &estimates {
        println!("{:<20} {:>8.4}  overrun {:.1}%", format!("{:?}", m.method), m.value, m.overrun_pct());
    }

    // The shadow mean depends on the assumed maximum possible ratio H.
    for h in [10.0, 20.0, 50.0, 1e3, 1e6] {
        let m = shadow_mean_dual(x, 1.0, h)?;
        println!("shadow mean with H = {h:>9}: {:.4}", m.value.to_f64());
    }
    Ok(())
}
