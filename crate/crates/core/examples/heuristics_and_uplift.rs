//! Randomness regime, hosting heuristics and reference-class uplifts.

use tailrisk::report::{risk_analysis, Section};
use tailrisk::tail_risk::{classify_randomness, rcf_uplift};
use tailrisk::{overrun_ratios, Cohort, GamesTable};

fn main() -> tailrisk::Result<()> {
    let sample = overrun_ratios(&GamesTable::bundled(), Cohort::All)?;

    for alpha in [0.6, 1.2, 1.7, 2.5, 3.5] {
        let c = classify_randomness(alpha)?;
        let peers: Vec<&str> = c.peers.iter().map(|p| p.event_type.as_str()).collect();
        println!("alpha {alpha}: {} [{}]", c.regime.label(), peers.join(", "));
    }

    let analysis = risk_analysis(&sample, 0.2, None)?;
    if let Section::Ok { result } = &analysis.heuristics {
        for v in &result.verdicts {
            println!("* {v}");
        }
    }

    println!("acceptable risk -> budget uplift");
    for risk in [0.5, 0.4, 0.3, 0.2, 0.1, 0.05] {
        let u = rcf_uplift(sample.values(), risk, None)?;
        println!("  {:>4.0}% -> {:>4.0}%", risk * 100.0, u.empirical_uplift_pct);
    }
    Ok(())
}
