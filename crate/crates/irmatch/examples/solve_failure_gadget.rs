//! The seven-vertex gadget where the pooled optimum is twice the only
//! individually rational outcome: solve it, restrict it, and run the veto
//! mechanism with the problematic ownership pattern.

use irmatch::generators;
use irmatch::mechanisms::{ir_gaps, veto_mechanism};
use irmatch::ownership::OwnershipAssignment;
use irmatch::solver::{max_cycle_cover, SolveOptions};

fn main() -> irmatch::Result<()> {
    let inst = generators::ir_failure();
    let opts = SolveOptions::new(inst.cycle_cap)?;
    let pinned = max_cycle_cover(&inst.graph, &opts)?;
    println!("instance: {} ({})", inst.name, inst.notes);
    println!("pinned optimum matches {} vertices:", pinned.matched_count());
    for cycle in pinned.cycles() {
        println!("  cycle {:?}", cycle.vertices());
    }

    // One player owns exactly the middle 3-cycle {1, 2, 5}.
    let assignment = OwnershipAssignment::fixed(vec![0, 1, 1, 0, 0, 1, 0], 2)?;
    for record in ir_gaps(&inst.graph, &assignment, &opts, &pinned)? {
        println!(
            "player {}: internal {} vs share {} (gap {})",
            record.player + 1,
            record.internal_opt,
            record.share,
            record.gap
        );
    }

    let outcome = veto_mechanism(&inst.graph, &assignment, &opts, &pinned)?;
    println!(
        "veto mechanism: accepted={} vetoed_by={:?} final={} matched",
        outcome.accepted,
        outcome.vetoing_players.iter().map(|p| p + 1).collect::<Vec<_>>(),
        outcome.final_matching.matched_count()
    );
    Ok(())
}
