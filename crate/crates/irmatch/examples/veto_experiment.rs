//! Veto-mechanism trials: veto frequency, efficiency loss against the
//! explicit loss bound, and the per-trial individual-rationality check.

use irmatch::experiment::{run, ExperimentConfig, ExperimentKind, InstanceSpec};
use irmatch::generators;
use irmatch::ownership::PlayerProfile;

fn main() -> irmatch::Result<()> {
    let inst = generators::disjoint_copies(&generators::ir_failure(), 50)?;
    let mut config = ExperimentConfig::new(
        InstanceSpec::Inline(inst),
        PlayerProfile::uniform(2)?,
        3,
    );
    config.trials = 2_000;
    config.seed = 21;
    config.workers = 4;

    let report = run(ExperimentKind::Veto, &config)?;
    for key in [
        "opt_size",
        "bound_loss",
        "veto_freq",
        "mean_final_size",
        "mean_loss",
        "loss_exceed_freq",
        "ir_violations",
    ] {
        println!("{key} = {}", report.aggregate(key).unwrap());
    }
    Ok(())
}
