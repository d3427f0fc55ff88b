//! Random assignment of vertices to players and restriction of a fixed
//! matching to one player's vertices.

use num::{BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::graph::{Graph, InducedSubgraph, Matching, VertexId};
use crate::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Ownership probabilities p_1..p_k, kept as exact rationals alongside the
/// float values used for sampling. Player indices are 0-based in the API.
#[derive(Clone, Debug)]
pub struct PlayerProfile {
    ratios: Vec<BigRational>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl PlayerProfile {
    pub fn from_ratios(ratios: Vec<BigRational>) -> Result<PlayerProfile> {
        if ratios.is_empty() {
            return Err(Error::InvalidProfile("at least one player required".into()));
        }
        for r in &ratios {
            if r.is_negative() || r > &BigRational::one() {
                return Err(Error::InvalidProfile(format!(
                    "probability {r} outside [0, 1]"
                )));
            }
        }
        let sum: BigRational = ratios.iter().sum();
        let drift = (&sum - BigRational::one()).to_f64().unwrap_or(f64::NAN);
        if !(drift.abs() <= SUM_TOLERANCE) {
            return Err(Error::InvalidProfile(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        let probs: Vec<f64> = ratios
            .iter()
            .map(|r| r.to_f64().expect("probability fits f64"))
            .collect();
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        Ok(PlayerProfile {
            ratios,
            probs,
            cumulative,
        })
    }

    pub fn from_probs(probs: &[f64]) -> Result<PlayerProfile> {
        let ratios = probs
            .iter()
            .map(|&p| {
                BigRational::from_f64(p)
                    .ok_or_else(|| Error::InvalidProfile(format!("probability {p} not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        PlayerProfile::from_ratios(ratios)
    }

    /// Uniform profile with k players of probability 1/k each.
    pub fn uniform(k: usize) -> Result<PlayerProfile> {
        if k == 0 {
            return Err(Error::InvalidProfile("at least one player required".into()));
        }
        PlayerProfile::from_ratios(vec![
            BigRational::new(1.into(), (k as i64).into());
            k
        ])
    }

    /// Parses `0.5,0.5` or `2/3,1/3`; fraction tokens stay exact.
    pub fn parse(text: &str) -> Result<PlayerProfile> {
        let ratios = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if let Some((num, den)) = tok.split_once('/') {
                    let num: i64 = num
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidProfile(format!("bad fraction `{tok}`")))?;
                    let den: i64 = den
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidProfile(format!("bad fraction `{tok}`")))?;
                    if den == 0 {
                        return Err(Error::InvalidProfile(format!("zero denominator `{tok}`")));
                    }
                    Ok(BigRational::new(num.into(), den.into()))
                } else {
                    let p: f64 = tok
                        .parse()
                        .map_err(|_| Error::InvalidProfile(format!("bad probability `{tok}`")))?;
                    BigRational::from_f64(p)
                        .ok_or_else(|| Error::InvalidProfile(format!("bad probability `{tok}`")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PlayerProfile::from_ratios(ratios)
    }

    pub fn player_count(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, player: usize) -> f64 {
        self.probs[player]
    }

    pub fn ratio(&self, player: usize) -> &BigRational {
        &self.ratios[player]
    }

    /// Whether 1/p_i is an integer, exactly. Surfaced as a hypothesis flag,
    /// never an error.
    pub fn reciprocal_integral(&self, player: usize) -> bool {
        let r = &self.ratios[player];
        !r.is_zero() && r.numer().is_one()
    }

    pub fn all_reciprocal_integral(&self) -> bool {
        (0..self.player_count()).all(|i| self.reciprocal_integral(i))
    }

    pub fn all_at_most_half(&self) -> bool {
        let half = BigRational::new(1.into(), 2.into());
        self.ratios.iter().all(|r| r <= &half)
    }

    pub fn is_uniform(&self) -> bool {
        self.ratios.iter().all(|r| r == &self.ratios[0])
    }

    pub fn describe(&self) -> String {
        self.ratios
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn pick(&self, u: f64) -> usize {
        for (i, &c) in self.cumulative.iter().enumerate() {
            if u < c {
                return i;
            }
        }
        self.player_count() - 1
    }
}

/// One draw of vertex owners. A pure function of (seed, trial, vertex), so
/// assignments are reproducible regardless of scheduling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwnershipAssignment {
    owners: Vec<usize>,
    player_count: usize,
    pub seed: u64,
    pub trial_index: u64,
}

impl OwnershipAssignment {
    /// Explicit owner vector, for replayed regression scenarios.
    pub fn fixed(owners: Vec<usize>, player_count: usize) -> Result<OwnershipAssignment> {
        if player_count == 0 {
            return Err(Error::InvalidPlayer(0));
        }
        if let Some(&bad) = owners.iter().find(|&&o| o >= player_count) {
            return Err(Error::InvalidPlayer(bad));
        }
        Ok(OwnershipAssignment {
            owners,
            player_count,
            seed: 0,
            trial_index: 0,
        })
    }

    pub fn owner(&self, v: VertexId) -> usize {
        self.owners[v]
    }

    pub fn player_count(&self) -> usize {
        self.player_count
    }

    pub fn vertex_count(&self) -> usize {
        self.owners.len()
    }

    /// Vertices owned by `player`, ascending.
    pub fn player_vertices(&self, player: usize) -> Vec<VertexId> {
        (0..self.owners.len())
            .filter(|&v| self.owners[v] == player)
            .collect()
    }
}

/// Draws each vertex's owner independently via inverse CDF on a
/// counter-based stream keyed by (seed, trial, vertex).
pub fn sample_ownership(
    g: &Graph,
    profile: &PlayerProfile,
    seed: u64,
    trial_index: u64,
) -> OwnershipAssignment {
    let owners = (0..g.vertex_count())
        .map(|v| profile.pick(unit_from_key(seed, trial_index, v as u64)))
        .collect();
    OwnershipAssignment {
        owners,
        player_count: profile.player_count(),
        seed,
        trial_index,
    }
}

/// Subgraph induced by the vertices `player` owns. The altruist survives
/// only if owned by that player.
pub fn internal_subgraph(
    g: &Graph,
    assignment: &OwnershipAssignment,
    player: usize,
) -> Result<InducedSubgraph> {
    if player >= assignment.player_count() {
        return Err(Error::InvalidPlayer(player));
    }
    g.induced_subgraph(&assignment.player_vertices(player))
}

/// Number of `player`'s vertices matched by `m`: the player's share of a
/// fixed matching.
pub fn restrict_matching(m: &Matching, assignment: &OwnershipAssignment, player: usize) -> usize {
    m.matched_vertices()
        .iter()
        .filter(|&&v| assignment.owner(v) == player)
        .count()
}

fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_from_key(seed: u64, trial: u64, vertex: u64) -> f64 {
    let h = splitmix_mix(
        splitmix_mix(splitmix_mix(seed ^ 0x9E37_79B9_7F4A_7C15).wrapping_add(trial)) ^ vertex,
    );
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
