//! In the pairwise regime a fully individually rational optimum always
//! exists: seed with every player's internal matching and grow it with
//! augmenting paths. Every internally matched vertex stays matched.

use irmatch::generators;
use irmatch::mechanisms::augment_mechanism;
use irmatch::ownership::{sample_ownership, PlayerProfile};
use irmatch::solver::matching_number;

fn main() -> irmatch::Result<()> {
    let mut state = 0x5EEDu64;
    let profile = PlayerProfile::uniform(3)?;
    for round in 0..5 {
        let g = generators::random_graph(&mut state, 12);
        let a = sample_ownership(&g, &profile, 500, round);
        let outcome = augment_mechanism(&g, &a);
        let nu = matching_number(&g.to_undirected());
        println!(
            "round {round}: n={} internal sizes {:?} -> final {} matched (2*nu = {})",
            g.vertex_count(),
            outcome
                .internal
                .iter()
                .map(|m| m.matched_count())
                .collect::<Vec<_>>(),
            outcome.matching.matched_count(),
            2 * nu
        );
        let flags = outcome.matching.matched_flags(g.vertex_count());
        let preserved = outcome.internal.iter().all(|m| {
            m.edges().iter().all(|&(u, v)| flags[u] && flags[v])
        });
        println!("  every internally matched vertex kept: {preserved}");
    }
    Ok(())
}
