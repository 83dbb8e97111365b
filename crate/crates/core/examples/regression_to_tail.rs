//! Running means, record exceedance and sample-mean spread in thin and fat
//! tails.

use tailrisk::tail_sim::{
    matched_gaussian, mean_dispersion, record_exceedance, running_mean_experiment, SimDistribution,
};

fn main() -> tailrisk::Result<()> {
    let seed = 2016;
    for spec in ["gaussian:0:1", "lognormal:0.85:0.533", "pareto:3:1", "pareto:1.2:1", "pareto:0.8:1"] {
        let d: SimDistribution = spec.parse()?;
        let t = running_mean_experiment(&d, 10_000, 200, seed)?;
        let at = |step: usize| t.running_mean_quantiles[step - 1];
        let (early, late) = (at(100), at(10_000));
        println!(
            "{spec:<22} median mean {:>9.3} -> {:>9.3}, 90% band {:>9.3} -> {:>9.3}, records {:.1}",
            early.q50,
            late.q50,
            early.q95 - early.q05,
            late.q95 - late.q05,
            t.record_count_mean
        );
    }

    let pareto = SimDistribution::pareto(1.2, 1.0)?;
    println!(
        "P(next 76 beat the last 19) = {:.3}",
        record_exceedance(&pareto, 19, 76, 2000, seed)?
    );
    let fat = mean_dispersion(&pareto, 19, 2000, seed)?;
    let thin = mean_dispersion(&matched_gaussian(&pareto), 19, 2000, seed)?;
    println!("spread of 19-point means: pareto {fat:.3}, matched gaussian {thin:.3}");
    Ok(())
}
