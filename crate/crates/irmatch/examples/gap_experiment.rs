//! Monte Carlo gap experiment on fifty disjoint copies of the failure
//! gadget: how often does any player's internal optimum exceed his share of
//! the pinned optimum by more than the explicit high-probability bound?

use irmatch::experiment::{run, ExperimentConfig, ExperimentKind, InstanceSpec};
use irmatch::generators;
use irmatch::ownership::PlayerProfile;

fn main() -> irmatch::Result<()> {
    let inst = generators::disjoint_copies(&generators::ir_failure(), 50)?;
    let mut config = ExperimentConfig::new(
        InstanceSpec::Inline(inst),
        PlayerProfile::parse("1/2,1/2")?,
        3,
    );
    config.trials = 2_000;
    config.seed = 7;
    config.workers = 4;

    let report = run(ExperimentKind::Theorem1, &config)?;
    for key in [
        "opt_size",
        "bound_gap",
        "exceed_freq",
        "mean_max_gap",
        "quantile_max_gap",
        "verdict_raw",
    ] {
        println!("{key} = {}", report.aggregate(key).unwrap());
    }
    Ok(())
}
