//! The two matching mechanisms: augmenting-path growth for the pairwise
//! regime and the veto rule for bounded cycles, plus per-player gap records
//! and the explicit probabilistic bounds they are measured against.

use crate::graph::{Cycle, Graph, Matching};
use crate::ownership::{internal_subgraph, restrict_matching, OwnershipAssignment};
use crate::solver::{grow_to_maximum, max_cycle_cover, max_matching_blossom, Matching2, SolveOptions};
use crate::{Error, Result};

/// Outcome of the veto mechanism for one assignment.
///
/// If nobody vetoes, the proposed pinned optimum is kept and each player's
/// allocation is his share of it. Otherwise the fallback is the union of the
/// players' internal optima, which are vertex-disjoint by construction, and
/// each allocation equals the internal optimum. Either way the allocation is
/// at least the internal optimum, so the mechanism is individually rational.
#[derive(Clone, Debug)]
pub struct MechanismOutcome {
    pub accepted: bool,
    pub final_matching: Matching,
    pub per_player: Vec<PlayerOutcome>,
    pub vetoing_players: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlayerOutcome {
    pub internal_opt: usize,
    pub share: usize,
    pub final_allocation: usize,
}

impl MechanismOutcome {
    pub fn ir_holds(&self) -> bool {
        self.per_player
            .iter()
            .all(|p| p.final_allocation >= p.internal_opt)
    }
}

/// Per-player difference between the internal optimum and the share of the
/// pinned global matching. Positive gap means the player would rather match
/// internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapRecord {
    pub player: usize,
    pub internal_opt: usize,
    pub share: usize,
    pub gap: i64,
}

/// Pairwise-regime mechanism: seed with every player's internal maximum
/// matching, then grow to a global maximum by augmenting paths. Augmenting
/// only expands the matched set, so every internally matched vertex stays
/// matched in the result.
#[derive(Clone, Debug)]
pub struct AugmentOutcome {
    pub matching: Matching,
    /// The internal matchings used as the seed, in host vertex ids.
    pub internal: Vec<Matching2>,
}

pub fn augment_mechanism(g: &Graph, assignment: &OwnershipAssignment) -> AugmentOutcome {
    let ug = g.to_undirected();
    let n = ug.vertex_count();
    let k = assignment.player_count();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut internal = Vec::with_capacity(k);
    for player in 0..k {
        let owned: Vec<bool> = (0..n).map(|v| assignment.owner(v) == player).collect();
        let restricted = ug.restricted_to(&owned);
        let m = max_matching_blossom(&restricted);
        for &(u, v) in m.edges() {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        internal.push(m);
    }
    grow_to_maximum(&ug, &mut mate);
    let mut cycles = Vec::new();
    for (u, &m) in mate.iter().enumerate() {
        if let Some(v) = m {
            if u < v {
                cycles.push(Cycle::new(vec![u, v]));
            }
        }
    }
    AugmentOutcome {
        matching: Matching::new(cycles),
        internal,
    }
}

/// The veto rule against a pinned optimal matching: keep it if every
/// player's share covers his internal optimum, otherwise fall back to the
/// union of internal optima.
pub fn veto_mechanism(
    g: &Graph,
    assignment: &OwnershipAssignment,
    opts: &SolveOptions,
    pinned: &Matching,
) -> Result<MechanismOutcome> {
    let k = assignment.player_count();
    let mut per_player = Vec::with_capacity(k);
    let mut vetoing = Vec::new();
    let mut internal_matchings = Vec::with_capacity(k);
    for player in 0..k {
        let sub = internal_subgraph(g, assignment, player)?;
        let internal = max_cycle_cover(&sub.graph, opts)?;
        let internal_opt = internal.matched_count();
        let share = restrict_matching(pinned, assignment, player);
        if internal_opt > share {
            vetoing.push(player);
        }
        per_player.push(PlayerOutcome {
            internal_opt,
            share,
            final_allocation: 0,
        });
        internal_matchings.push(internal.map_vertices(|v| sub.vertex_map[v]));
    }

    let accepted = vetoing.is_empty();
    let final_matching = if accepted {
        pinned.clone()
    } else {
        let cycles = internal_matchings
            .iter()
            .flat_map(|m| m.cycles().iter().cloned())
            .collect();
        Matching::new(cycles)
    };
    for (player, outcome) in per_player.iter_mut().enumerate() {
        outcome.final_allocation = if accepted {
            outcome.share
        } else {
            internal_matchings[player].matched_count()
        };
    }
    Ok(MechanismOutcome {
        accepted,
        final_matching,
        per_player,
        vetoing_players: vetoing,
    })
}

/// One gap record per player against the pinned matching.
pub fn ir_gaps(
    g: &Graph,
    assignment: &OwnershipAssignment,
    opts: &SolveOptions,
    pinned: &Matching,
) -> Result<Vec<GapRecord>> {
    let mut records = Vec::with_capacity(assignment.player_count());
    for player in 0..assignment.player_count() {
        let sub = internal_subgraph(g, assignment, player)?;
        let internal_opt = crate::solver::max_cycle_cover_size(&sub.graph, opts)?;
        let share = restrict_matching(pinned, assignment, player);
        records.push(GapRecord {
            player,
            internal_opt,
            share,
            gap: internal_opt as i64 - share as i64,
        });
    }
    Ok(records)
}

/// High-probability bound on any player's gap: (2L+1) sqrt(opt ln(4k/delta)).
pub fn ir_gap_bound(opt_size: usize, cap: usize, players: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let l = cap as f64;
    Ok((2.0 * l + 1.0) * (opt_size as f64 * (4.0 * players as f64 / delta).ln()).sqrt())
}

/// High-probability bound on the veto mechanism's efficiency loss:
/// k(2L+1) sqrt(opt ln(2k/delta)) + kL sqrt((2/k) opt ln(2k/delta)).
pub fn veto_loss_bound(opt_size: usize, cap: usize, players: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let l = cap as f64;
    let k = players as f64;
    let log_term = (2.0 * k / delta).ln();
    let first = k * (2.0 * l + 1.0) * (opt_size as f64 * log_term).sqrt();
    let second = k * l * ((2.0 / k) * opt_size as f64 * log_term).sqrt();
    Ok(first + second)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::ownership::{sample_ownership, OwnershipAssignment, PlayerProfile};
    use crate::solver::{matching_number, max_cycle_cover_size};

    fn fig1_setup() -> (Graph, Matching, SolveOptions) {
        let g = generators::ir_failure().graph;
        let opts = SolveOptions::new(3).unwrap();
        let pinned = max_cycle_cover(&g, &opts).unwrap();
        (g, pinned, opts)
    }

    #[test]
    fn veto_on_the_failure_gadget() {
        let (g, pinned, opts) = fig1_setup();
        let blue_owns_middle = OwnershipAssignment::fixed(vec![0, 1, 1, 0, 0, 1, 0], 2).unwrap();
        let outcome = veto_mechanism(&g, &blue_owns_middle, &opts, &pinned).unwrap();
        assert!(!outcome.accepted);
        assert_eq!(outcome.vetoing_players, vec![1]);
        assert_eq!(outcome.final_matching.matched_count(), 3);
        assert!(outcome.ir_holds());
        assert_eq!(outcome.per_player[1].internal_opt, 3);
        assert_eq!(outcome.per_player[1].share, 2);
        assert_eq!(outcome.per_player[1].final_allocation, 3);
    }

    #[test]
    fn veto_accepts_when_single_player() {
        let (g, pinned, opts) = fig1_setup();
        let a = OwnershipAssignment::fixed(vec![0; 7], 1).unwrap();
        let outcome = veto_mechanism(&g, &a, &opts, &pinned).unwrap();
        assert!(outcome.accepted);
        assert_eq!(outcome.final_matching, pinned);
        assert_eq!(outcome.per_player[0].final_allocation, 6);
    }

    #[test]
    fn veto_accepts_harmless_assignment() {
        // Player 1 owns only the never-matched vertex: internal 0, share 0.
        let (g, pinned, opts) = fig1_setup();
        let a = OwnershipAssignment::fixed(vec![0, 0, 0, 0, 0, 1, 0], 2).unwrap();
        let outcome = veto_mechanism(&g, &a, &opts, &pinned).unwrap();
        assert!(outcome.accepted);
        assert!(outcome.vetoing_players.is_empty());
    }

    #[test]
    fn veto_consistency_holds_randomly() {
        let (g, pinned, opts) = fig1_setup();
        let profile = PlayerProfile::parse("0.5,0.5").unwrap();
        for t in 0..200 {
            let a = sample_ownership(&g, &profile, 3, t);
            let outcome = veto_mechanism(&g, &a, &opts, &pinned).unwrap();
            assert_eq!(outcome.accepted, outcome.vetoing_players.is_empty());
            assert!(outcome.ir_holds());
            let total: usize = (0..2)
                .map(|i| restrict_matching(&pinned, &a, i))
                .sum();
            assert_eq!(total, pinned.matched_count());
        }
    }

    #[test]
    fn gap_records_on_the_failure_gadget() {
        let (g, pinned, opts) = fig1_setup();
        let a = OwnershipAssignment::fixed(vec![0, 1, 1, 0, 0, 1, 0], 2).unwrap();
        let gaps = ir_gaps(&g, &a, &opts, &pinned).unwrap();
        assert_eq!(gaps[1].gap, 1);
        assert_eq!(gaps[0].internal_opt, 0);
        assert_eq!(gaps[0].share, 4);
        assert_eq!(gaps[0].gap, -4);
    }

    #[test]
    fn single_player_gap_is_zero() {
        let (g, pinned, opts) = fig1_setup();
        let a = OwnershipAssignment::fixed(vec![0; 7], 1).unwrap();
        let gaps = ir_gaps(&g, &a, &opts, &pinned).unwrap();
        assert_eq!(gaps[0].gap, 0);
    }

    #[test]
    fn empty_graph_gaps_are_zero() {
        let g = Graph::new(0, &[], None).unwrap();
        let opts = SolveOptions::new(2).unwrap();
        let pinned = Matching::empty();
        let a = OwnershipAssignment::fixed(vec![], 2).unwrap();
        let gaps = ir_gaps(&g, &a, &opts, &pinned).unwrap();
        assert!(gaps.iter().all(|r| r.gap == 0));
    }

    #[test]
    fn augment_keeps_internal_vertices_and_is_maximum() {
        let mut state = 0xBEE5_u64;
        let opts = SolveOptions::new(2).unwrap();
        for round in 0..150 {
            let g = generators::random_graph(&mut state, 12);
            let profile = PlayerProfile::uniform(3).unwrap();
            let a = sample_ownership(&g, &profile, 1000 + round, 0);
            let outcome = augment_mechanism(&g, &a);
            let nu = matching_number(&g.to_undirected());
            assert_eq!(outcome.matching.matched_count(), 2 * nu);
            assert_eq!(
                outcome.matching.matched_count(),
                max_cycle_cover_size(&g, &opts).unwrap()
            );
            let flags = outcome.matching.matched_flags(g.vertex_count());
            for internal in &outcome.internal {
                for &(u, v) in internal.edges() {
                    assert!(flags[u] && flags[v], "internally matched vertex dropped");
                }
            }
        }
    }

    #[test]
    fn augment_trivial_cases() {
        let g = Graph::new(2, &[(0, 1), (1, 0)], None).unwrap();
        let a = OwnershipAssignment::fixed(vec![0, 0], 1).unwrap();
        let outcome = augment_mechanism(&g, &a);
        assert_eq!(outcome.matching.matched_count(), 2);

        let edgeless = Graph::new(3, &[], None).unwrap();
        let a = OwnershipAssignment::fixed(vec![0, 1, 0], 2).unwrap();
        assert_eq!(augment_mechanism(&edgeless, &a).matching.matched_count(), 0);
    }

    #[test]
    fn gap_bound_values() {
        let b = ir_gap_bound(300, 3, 2, 0.01).unwrap();
        assert!((b - 313.49).abs() < 0.2, "bound {b}");
        assert_eq!(ir_gap_bound(0, 3, 2, 0.01).unwrap(), 0.0);
        let b = ir_gap_bound(6, 3, 2, 0.1).unwrap();
        assert!((b - 35.9).abs() < 0.2, "bound {b}");
        assert!(ir_gap_bound(6, 3, 2, 1.5).is_err());
    }

    #[test]
    fn loss_bound_values() {
        assert_eq!(veto_loss_bound(0, 3, 2, 0.01).unwrap(), 0.0);
        // k = 1 reduces to (2L+1) sqrt(opt ln(2/d)) + L sqrt(2 opt ln(2/d)).
        let (opt, l, delta) = (50usize, 3usize, 0.05);
        let b = veto_loss_bound(opt, l, 1, delta).unwrap();
        let log_term = (2.0 / delta).ln();
        let expected = 7.0 * (opt as f64 * log_term).sqrt()
            + 3.0 * (2.0 * opt as f64 * log_term).sqrt();
        assert!((b - expected).abs() < 1e-9);

        // Independent re-derivation of the two terms at the larger scale.
        let b = veto_loss_bound(300, 3, 2, 0.01).unwrap();
        let log_term = (400.0f64).ln();
        let first = 2.0 * 7.0 * (300.0 * log_term).sqrt();
        let second = 2.0 * 3.0 * (300.0 * log_term).sqrt();
        assert!((b - (first + second)).abs() < 1e-9);
    }
}
