//! Altruist chain network: with unbounded chains, the player who owns the
//! altruist expects a linear advantage from defecting, because his internal
//! chain can hop through almost every layer while his share of the fixed
//! longest chain is only half of it.

use irmatch::experiment::{run, ExperimentConfig, ExperimentKind, InstanceSpec};
use irmatch::ownership::PlayerProfile;

fn main() -> irmatch::Result<()> {
    let mut config = ExperimentConfig::new(
        InstanceSpec::named("long-chain", Some(1800), None),
        PlayerProfile::uniform(2)?,
        3,
    );
    config.trials = 100;
    config.seed = 9;
    config.workers = 4;

    let report = run(ExperimentKind::Appc, &config)?;
    for key in [
        "n",
        "layers",
        "chain_len",
        "mean_good_layers",
        "expected_good_layers",
        "mean_internal_opt",
        "mean_share",
        "expected_share",
        "mean_gap",
        "gap_threshold",
        "freq_gap_ge_threshold",
    ] {
        println!("{key} = {}", report.aggregate(key).unwrap());
    }
    Ok(())
}
