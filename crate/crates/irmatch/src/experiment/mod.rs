//! Monte Carlo harness: runs trial batches over random ownership draws and
//! compares the empirical statistics against the explicit bounds.
//!
//! Trials are pure functions of (seed, trial index), distributed over a
//! worker pool and merged in trial order, so a report is a pure function of
//! its configuration, independent of the worker count.

mod report;

pub use report::{emit_report, format_float, Cell, ExperimentReport, ReportFormat};

use std::path::PathBuf;

use num::{BigInt, BigRational, ToPrimitive};
use rayon::prelude::*;

use crate::decomposition::exact_internal_expectation;
use crate::generators::{self, LongChainShape, NamedInstance};
use crate::graph::Graph;
use crate::mechanisms::{ir_gap_bound, veto_loss_bound, veto_mechanism, GapRecord};
use crate::ownership::{internal_subgraph, sample_ownership, PlayerProfile};
use crate::solver::{longest_chain_dag, max_cycle_cover, max_cycle_cover_size, SolveOptions};
use crate::{Error, Result};

/// Which experiment to run. The tokens are the CLI names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Lemma1,
    Concentration,
    Theorem1,
    Veto,
    Appc,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Lemma1,
        ExperimentKind::Concentration,
        ExperimentKind::Theorem1,
        ExperimentKind::Veto,
        ExperimentKind::Appc,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ExperimentKind::Lemma1 => "lemma1",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::Theorem1 => "theorem1",
            ExperimentKind::Veto => "veto",
            ExperimentKind::Appc => "appc",
        }
    }

    pub fn from_token(token: &str) -> Result<ExperimentKind> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.token() == token)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown experiment `{token}`; known: lemma1, concentration, theorem1, veto, appc"
                ))
            })
    }
}

/// Where the experiment graph comes from.
#[derive(Clone, Debug)]
pub enum InstanceSpec {
    File(PathBuf),
    Named {
        name: String,
        n: Option<usize>,
        copies: Option<usize>,
    },
    Inline(NamedInstance),
}

impl InstanceSpec {
    pub fn named(name: &str, n: Option<usize>, copies: Option<usize>) -> InstanceSpec {
        InstanceSpec::Named {
            name: name.to_string(),
            n,
            copies,
        }
    }

    fn resolve(&self) -> Result<ResolvedInstance> {
        match self {
            InstanceSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let graph = Graph::parse(&text)?;
                Ok(ResolvedInstance {
                    name: path.display().to_string(),
                    graph,
                    long_chain: None,
                })
            }
            InstanceSpec::Named { name, n, copies } => {
                let inst = generators::by_name(name, *n, *copies)?;
                let long_chain = if name == "long-chain" {
                    Some((n.unwrap(), generators::long_chain_shape(n.unwrap())?))
                } else {
                    None
                };
                Ok(ResolvedInstance {
                    name: inst.name,
                    graph: inst.graph,
                    long_chain,
                })
            }
            InstanceSpec::Inline(inst) => {
                let long_chain = inst
                    .name
                    .strip_prefix("long-chain-")
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .and_then(|n| generators::long_chain_shape(n).ok().map(|s| (n, s)));
                Ok(ResolvedInstance {
                    name: inst.name.clone(),
                    graph: inst.graph.clone(),
                    long_chain,
                })
            }
        }
    }
}

struct ResolvedInstance {
    name: String,
    graph: Graph,
    long_chain: Option<(usize, LongChainShape)>,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub profile: PlayerProfile,
    pub cycle_cap: usize,
    pub trials: u64,
    pub seed: u64,
    pub delta: f64,
    pub workers: usize,
    pub exact: bool,
    pub node_limit: u64,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSpec, profile: PlayerProfile, cycle_cap: usize) -> ExperimentConfig {
        ExperimentConfig {
            instance,
            profile,
            cycle_cap,
            trials: 10_000,
            seed: 0,
            delta: 0.01,
            workers: 1,
            exact: false,
            node_limit: crate::solver::DEFAULT_NODE_LIMIT,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be at least 1".into()));
        }
        Ok(())
    }

    fn solve_options(&self) -> Result<SolveOptions> {
        Ok(SolveOptions::new(self.cycle_cap)?.with_node_limit(self.node_limit))
    }
}

pub fn run(kind: ExperimentKind, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let instance = config.instance.resolve()?;
    match kind {
        ExperimentKind::Lemma1 => run_expectation(config, &instance),
        ExperimentKind::Concentration => run_concentration(config, &instance),
        ExperimentKind::Theorem1 => run_gap(config, &instance),
        ExperimentKind::Veto => run_veto(config, &instance),
        ExperimentKind::Appc => run_chain(config, &instance),
    }
}

/// Runs pure per-trial closures on a worker pool, merged in trial order.
fn map_trials<T: Send>(
    trials: u64,
    workers: usize,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    if workers <= 1 {
        (0..trials).map(f).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
        pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}

fn mean(values: impl Iterator<Item = f64>, count: u64) -> f64 {
    values.sum::<f64>() / count as f64
}

/// Hoeffding half-width for a frequency estimate at confidence 1 - delta.
fn frequency_ci(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

fn config_aggregates(
    kind: ExperimentKind,
    config: &ExperimentConfig,
    instance: &ResolvedInstance,
) -> Vec<(String, Cell)> {
    vec![
        ("kind".into(), Cell::Text(kind.token().into())),
        ("instance".into(), Cell::Text(instance.name.clone())),
        (
            "probs".into(),
            Cell::Text(config.profile.describe().replace(',', " ")),
        ),
        ("cycle_cap".into(), Cell::Int(config.cycle_cap as i64)),
        ("trials".into(), Cell::Int(config.trials as i64)),
        ("seed".into(), Cell::Int(config.seed as i64)),
        ("delta".into(), Cell::Float(config.delta)),
        (
            "hyp_two_cycle_p_half".into(),
            Cell::Bool(config.cycle_cap == 2 && config.profile.all_at_most_half()),
        ),
        (
            "hyp_reciprocal_integral".into(),
            Cell::Bool(config.profile.all_reciprocal_integral()),
        ),
        (
            "hyp_uniform".into(),
            Cell::Bool(config.profile.is_uniform()),
        ),
    ]
}

/// Expected internal optimum per player versus p times the pinned optimum.
/// With `exact` set (and at most 20 vertices) the expectation is computed by
/// full subset enumeration in rational arithmetic instead of sampling.
fn run_expectation(
    config: &ExperimentConfig,
    instance: &ResolvedInstance,
) -> Result<ExperimentReport> {
    let g = &instance.graph;
    let opts = config.solve_options()?;
    let k = config.profile.player_count();
    let opt_size = max_cycle_cover_size(g, &opts)?;
    let mut aggregates = config_aggregates(ExperimentKind::Lemma1, config, instance);
    aggregates.push(("opt_size".into(), Cell::Int(opt_size as i64)));
    aggregates.push(("exact".into(), Cell::Bool(config.exact)));

    let mut rows = Vec::new();
    if config.exact {
        for player in 0..k {
            let p = config.profile.ratio(player);
            let expectation = exact_internal_expectation(g, config.cycle_cap, p)?;
            let p_opt = p * BigRational::from_integer(BigInt::from(opt_size as i64));
            let violates = expectation > p_opt;
            let prefix = format!("player_{}", player + 1);
            aggregates.push((
                format!("{prefix}_exact_expectation"),
                Cell::Text(expectation.to_string()),
            ));
            aggregates.push((
                format!("{prefix}_expectation"),
                Cell::Float(expectation.to_f64().unwrap_or(f64::NAN)),
            ));
            aggregates.push((
                format!("{prefix}_p_opt"),
                Cell::Float(p_opt.to_f64().unwrap_or(f64::NAN)),
            ));
            aggregates.push((format!("{prefix}_violates"), Cell::Bool(violates)));
        }
    } else {
        let per_trial = map_trials(config.trials, config.workers, |t| {
            let a = sample_ownership(g, &config.profile, config.seed, t);
            let mut internal = Vec::with_capacity(k);
            for player in 0..k {
                let sub = internal_subgraph(g, &a, player)?;
                internal.push(max_cycle_cover_size(&sub.graph, &opts)?);
            }
            Ok(internal)
        })?;
        for (t, internal) in per_trial.iter().enumerate() {
            for (player, &value) in internal.iter().enumerate() {
                rows.push(vec![
                    Cell::Int(t as i64),
                    Cell::Int(player as i64 + 1),
                    Cell::Int(value as i64),
                ]);
            }
        }
        let components = g.weakly_connected_components().len();
        let ci = config.cycle_cap as f64
            * components as f64
            * ((2.0 / config.delta).ln() / (2.0 * config.trials as f64)).sqrt();
        aggregates.push(("hoeffding_ci".into(), Cell::Float(ci)));
        for player in 0..k {
            let est = mean(
                per_trial.iter().map(|v| v[player] as f64),
                config.trials,
            );
            let p_opt = config.profile.prob(player) * opt_size as f64;
            let prefix = format!("player_{}", player + 1);
            aggregates.push((format!("{prefix}_expectation"), Cell::Float(est)));
            aggregates.push((format!("{prefix}_p_opt"), Cell::Float(p_opt)));
            aggregates.push((
                format!("{prefix}_violates"),
                Cell::Bool(est > p_opt + ci),
            ));
        }
    }

    Ok(ExperimentReport {
        kind: "lemma1",
        columns: vec!["trial", "player", "internal_opt"],
        rows,
        aggregates,
    })
}

/// Tail frequencies of the internal optimum around its estimated mean,
/// against the stated deviation budgets and the theoretical tail curves.
fn run_concentration(
    config: &ExperimentConfig,
    instance: &ResolvedInstance,
) -> Result<ExperimentReport> {
    let g = &instance.graph;
    let opts = config.solve_options()?;
    let k = config.profile.player_count();
    let cap = config.cycle_cap as f64;
    let opt_size = max_cycle_cover_size(g, &opts)?;

    let per_trial = map_trials(config.trials, config.workers, |t| {
        let a = sample_ownership(g, &config.profile, config.seed, t);
        let mut internal = Vec::with_capacity(k);
        for player in 0..k {
            let sub = internal_subgraph(g, &a, player)?;
            internal.push(max_cycle_cover_size(&sub.graph, &opts)?);
        }
        Ok(internal)
    })?;

    let mut rows = Vec::new();
    for (t, internal) in per_trial.iter().enumerate() {
        for (player, &value) in internal.iter().enumerate() {
            rows.push(vec![
                Cell::Int(t as i64),
                Cell::Int(player as i64 + 1),
                Cell::Int(value as i64),
            ]);
        }
    }

    let mut aggregates = config_aggregates(ExperimentKind::Concentration, config, instance);
    aggregates.push(("opt_size".into(), Cell::Int(opt_size as i64)));
    let budget = config.delta / (2.0 * k as f64);
    aggregates.push(("tail_budget".into(), Cell::Float(budget)));
    let log_term = (2.0 * k as f64 / config.delta).ln();

    let mut max_dev: f64 = 0.0;
    let mut means = Vec::with_capacity(k);
    for player in 0..k {
        let est = mean(per_trial.iter().map(|v| v[player] as f64), config.trials);
        means.push(est);
        let lower = est - cap * (2.0 * est * log_term).sqrt();
        let upper = est + 2.0 * cap * (opt_size as f64 * log_term).sqrt();
        let lower_exceed = per_trial
            .iter()
            .filter(|v| (v[player] as f64) <= lower)
            .count() as f64
            / config.trials as f64;
        let upper_exceed = per_trial
            .iter()
            .filter(|v| (v[player] as f64) >= upper)
            .count() as f64
            / config.trials as f64;
        for v in per_trial.iter() {
            max_dev = max_dev.max((v[player] as f64 - est).abs());
        }
        let prefix = format!("player_{}", player + 1);
        aggregates.push((format!("{prefix}_mean"), Cell::Float(est)));
        aggregates.push((format!("{prefix}_lower_threshold"), Cell::Float(lower)));
        aggregates.push((format!("{prefix}_upper_threshold"), Cell::Float(upper)));
        aggregates.push((
            format!("{prefix}_lower_exceed_freq"),
            Cell::Float(lower_exceed),
        ));
        aggregates.push((
            format!("{prefix}_upper_exceed_freq"),
            Cell::Float(upper_exceed),
        ));
        aggregates.push((
            format!("{prefix}_within_budget"),
            Cell::Bool(lower_exceed <= budget && upper_exceed <= budget),
        ));
    }

    // Theoretical tail curves over an epsilon grid spanning the observed
    // deviations: upper tail exp(-e^2 / (4 L^2 opt)) and lower tail
    // exp(-e^2 / (2 L^2 E)).
    let steps = 10usize;
    for j in 0..=steps {
        let eps = max_dev * j as f64 / steps as f64;
        aggregates.push((format!("eps_{j}"), Cell::Float(eps)));
        let upper_tail = if opt_size == 0 {
            if j == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-eps * eps / (4.0 * cap * cap * opt_size as f64)).exp()
        };
        aggregates.push((format!("tail_upper_eps_{j}"), Cell::Float(upper_tail)));
        for (player, &est) in means.iter().enumerate() {
            let lower_tail = if est == 0.0 {
                if j == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-eps * eps / (2.0 * cap * cap * est)).exp()
            };
            aggregates.push((
                format!("tail_lower_player_{}_eps_{j}", player + 1),
                Cell::Float(lower_tail),
            ));
        }
    }

    Ok(ExperimentReport {
        kind: "concentration",
        columns: vec!["trial", "player", "internal_opt"],
        rows,
        aggregates,
    })
}

/// Per-trial gap distribution against the high-probability gap bound.
fn run_gap(config: &ExperimentConfig, instance: &ResolvedInstance) -> Result<ExperimentReport> {
    let g = &instance.graph;
    let opts = config.solve_options()?;
    let k = config.profile.player_count();
    let pinned = max_cycle_cover(g, &opts)?;
    let opt_size = pinned.matched_count();
    let bound = ir_gap_bound(opt_size, config.cycle_cap, k, config.delta)?;

    let per_trial: Vec<Vec<GapRecord>> = map_trials(config.trials, config.workers, |t| {
        let a = sample_ownership(g, &config.profile, config.seed, t);
        crate::mechanisms::ir_gaps(g, &a, &opts, &pinned)
    })?;

    let mut rows = Vec::new();
    let mut max_gaps = Vec::with_capacity(per_trial.len());
    for (t, records) in per_trial.iter().enumerate() {
        let mut max_gap = i64::MIN;
        for r in records {
            max_gap = max_gap.max(r.gap);
            rows.push(vec![
                Cell::Int(t as i64),
                Cell::Int(r.player as i64 + 1),
                Cell::Int(r.internal_opt as i64),
                Cell::Int(r.share as i64),
                Cell::Int(r.gap),
            ]);
        }
        max_gaps.push(max_gap);
    }

    let exceed_count = max_gaps.iter().filter(|&&gp| gp as f64 >= bound).count();
    let exceed_freq = exceed_count as f64 / config.trials as f64;
    let ci = frequency_ci(config.trials, config.delta);
    let mut sorted = max_gaps.clone();
    sorted.sort_unstable();
    let q_index = (((1.0 - config.delta) * config.trials as f64).ceil() as usize)
        .clamp(1, config.trials as usize)
        - 1;

    let mut aggregates = config_aggregates(ExperimentKind::Theorem1, config, instance);
    aggregates.push(("opt_size".into(), Cell::Int(opt_size as i64)));
    aggregates.push(("bound_gap".into(), Cell::Float(bound)));
    aggregates.push(("exceed_count".into(), Cell::Int(exceed_count as i64)));
    aggregates.push(("exceed_freq".into(), Cell::Float(exceed_freq)));
    aggregates.push(("freq_ci".into(), Cell::Float(ci)));
    aggregates.push((
        "verdict_raw".into(),
        Cell::Bool(exceed_freq <= config.delta),
    ));
    aggregates.push((
        "verdict_ci".into(),
        Cell::Bool(exceed_freq <= config.delta + ci),
    ));
    aggregates.push((
        "mean_max_gap".into(),
        Cell::Float(mean(max_gaps.iter().map(|&v| v as f64), config.trials)),
    ));
    aggregates.push((
        "quantile_max_gap".into(),
        Cell::Int(sorted[q_index]),
    ));

    Ok(ExperimentReport {
        kind: "theorem1",
        columns: vec!["trial", "player", "internal_opt", "share", "gap"],
        rows,
        aggregates,
    })
}

/// Veto mechanism trials: veto frequency, efficiency loss against the loss
/// bound, and the per-trial individual-rationality check.
fn run_veto(config: &ExperimentConfig, instance: &ResolvedInstance) -> Result<ExperimentReport> {
    let g = &instance.graph;
    let opts = config.solve_options()?;
    let k = config.profile.player_count();
    let pinned = max_cycle_cover(g, &opts)?;
    let opt_size = pinned.matched_count();
    let bound = veto_loss_bound(opt_size, config.cycle_cap, k, config.delta)?;

    let per_trial = map_trials(config.trials, config.workers, |t| {
        let a = sample_ownership(g, &config.profile, config.seed, t);
        veto_mechanism(g, &a, &opts, &pinned)
    })?;

    let mut rows = Vec::new();
    let mut vetoed = 0u64;
    let mut ir_violations = 0u64;
    let mut losses = Vec::with_capacity(per_trial.len());
    for (t, outcome) in per_trial.iter().enumerate() {
        if !outcome.accepted {
            vetoed += 1;
        }
        if !outcome.ir_holds() {
            ir_violations += 1;
        }
        let final_size = outcome.final_matching.matched_count();
        losses.push(opt_size as i64 - final_size as i64);
        for (player, p) in outcome.per_player.iter().enumerate() {
            rows.push(vec![
                Cell::Int(t as i64),
                Cell::Int(player as i64 + 1),
                Cell::Int(p.internal_opt as i64),
                Cell::Int(p.share as i64),
                Cell::Int(p.internal_opt as i64 - p.share as i64),
                Cell::Bool(outcome.accepted),
                Cell::Int(p.final_allocation as i64),
            ]);
        }
    }

    let loss_exceed = losses.iter().filter(|&&l| l as f64 > bound).count();
    let loss_exceed_freq = loss_exceed as f64 / config.trials as f64;
    let ci = frequency_ci(config.trials, config.delta);

    let mut aggregates = config_aggregates(ExperimentKind::Veto, config, instance);
    aggregates.push(("opt_size".into(), Cell::Int(opt_size as i64)));
    aggregates.push(("bound_loss".into(), Cell::Float(bound)));
    aggregates.push((
        "veto_freq".into(),
        Cell::Float(vetoed as f64 / config.trials as f64),
    ));
    aggregates.push((
        "mean_final_size".into(),
        Cell::Float(mean(
            losses.iter().map(|&l| opt_size as f64 - l as f64),
            config.trials,
        )),
    ));
    aggregates.push((
        "mean_loss".into(),
        Cell::Float(mean(losses.iter().map(|&l| l as f64), config.trials)),
    ));
    aggregates.push((
        "max_loss".into(),
        Cell::Int(losses.iter().copied().max().unwrap_or(0)),
    ));
    aggregates.push(("loss_exceed_freq".into(), Cell::Float(loss_exceed_freq)));
    aggregates.push(("freq_ci".into(), Cell::Float(ci)));
    aggregates.push((
        "verdict_raw".into(),
        Cell::Bool(loss_exceed_freq <= config.delta),
    ));
    aggregates.push((
        "verdict_ci".into(),
        Cell::Bool(loss_exceed_freq <= config.delta + ci),
    ));
    aggregates.push(("ir_violations".into(), Cell::Int(ir_violations as i64)));
    aggregates.push((
        "warn_nonuniform".into(),
        Cell::Bool(!config.profile.is_uniform()),
    ));

    Ok(ExperimentReport {
        kind: "veto",
        columns: vec![
            "trial",
            "player",
            "internal_opt",
            "share",
            "gap",
            "accepted",
            "final_allocation",
        ],
        rows,
        aggregates,
    })
}

/// Altruist chain network: good-layer counts, the chain-oracle internal
/// optimum of the altruist's owner, and his share of the fixed longest
/// chain.
fn run_chain(config: &ExperimentConfig, instance: &ResolvedInstance) -> Result<ExperimentReport> {
    let Some((n, shape)) = instance.long_chain else {
        return Err(Error::InvalidParameter(
            "the appc experiment requires a long-chain instance".into(),
        ));
    };
    if config.profile.player_count() != 2 || !config.profile.is_uniform() {
        return Err(Error::InvalidParameter(
            "the appc experiment requires two players with probability 1/2 each".into(),
        ));
    }
    let g = &instance.graph;
    let altruist = shape.altruist();
    let chain_range = shape.chain_vertices();

    struct ChainTrial {
        owner: usize,
        good_layers: usize,
        internal_opt: usize,
        share: usize,
    }

    let per_trial = map_trials(config.trials, config.workers, |t| {
        let a = sample_ownership(g, &config.profile, config.seed, t);
        let owner = a.owner(altruist);
        let good_layers = (0..shape.layer_count())
            .filter(|&layer| {
                shape
                    .layer_vertices(layer)
                    .any(|v| a.owner(v) == owner)
            })
            .count();
        let sub = internal_subgraph(g, &a, owner)?;
        let internal_opt = longest_chain_dag(&sub.graph)?.matched_count();
        let share = chain_range.clone().filter(|&v| a.owner(v) == owner).count();
        Ok(ChainTrial {
            owner,
            good_layers,
            internal_opt,
            share,
        })
    })?;

    let mut rows = Vec::new();
    for (t, trial) in per_trial.iter().enumerate() {
        rows.push(vec![
            Cell::Int(t as i64),
            Cell::Int(trial.owner as i64 + 1),
            Cell::Int(trial.good_layers as i64),
            Cell::Int(trial.internal_opt as i64),
            Cell::Int(trial.share as i64),
            Cell::Int(trial.internal_opt as i64 - trial.share as i64),
        ]);
    }

    let trials = config.trials;
    let threshold = n as f64 / 72.0;
    let gap_ge = per_trial
        .iter()
        .filter(|t| (t.internal_opt as f64 - t.share as f64) >= threshold)
        .count() as f64
        / trials as f64;

    let mut aggregates = config_aggregates(ExperimentKind::Appc, config, instance);
    aggregates.push(("n".into(), Cell::Int(n as i64)));
    aggregates.push(("layers".into(), Cell::Int(shape.layer_count() as i64)));
    aggregates.push(("chain_len".into(), Cell::Int(shape.chain_len() as i64)));
    aggregates.push((
        "mean_good_layers".into(),
        Cell::Float(mean(per_trial.iter().map(|t| t.good_layers as f64), trials)),
    ));
    aggregates.push((
        "expected_good_layers".into(),
        Cell::Float(0.875 * shape.layer_count() as f64),
    ));
    aggregates.push((
        "mean_internal_opt".into(),
        Cell::Float(mean(per_trial.iter().map(|t| t.internal_opt as f64), trials)),
    ));
    aggregates.push((
        "mean_share".into(),
        Cell::Float(mean(per_trial.iter().map(|t| t.share as f64), trials)),
    ));
    aggregates.push((
        "expected_share".into(),
        Cell::Float(shape.chain_len() as f64 / 2.0),
    ));
    aggregates.push((
        "mean_gap".into(),
        Cell::Float(mean(
            per_trial
                .iter()
                .map(|t| t.internal_opt as f64 - t.share as f64),
            trials,
        )),
    ));
    aggregates.push(("gap_threshold".into(), Cell::Float(threshold)));
    aggregates.push(("freq_gap_ge_threshold".into(), Cell::Float(gap_ge)));

    Ok(ExperimentReport {
        kind: "appc",
        columns: vec![
            "trial",
            "owner_player",
            "good_layers",
            "internal_opt",
            "share",
            "gap",
        ],
        rows,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn triangle_config(probs: &str, exact: bool) -> ExperimentConfig {
        let mut config = ExperimentConfig::new(
            InstanceSpec::Inline(generators::two_cycle_triangle(1).unwrap()),
            PlayerProfile::parse(probs).unwrap(),
            2,
        );
        config.trials = 200;
        config.exact = exact;
        config
    }

    #[test]
    fn exact_expectation_run_flags_violation() {
        let report = run(ExperimentKind::Lemma1, &triangle_config("2/3,1/3", true)).unwrap();
        assert_eq!(
            report.aggregate("player_1_exact_expectation"),
            Some(&Cell::Text("40/27".into()))
        );
        assert_eq!(report.aggregate("player_1_violates"), Some(&Cell::Bool(true)));
        assert_eq!(report.aggregate("player_2_violates"), Some(&Cell::Bool(false)));
        assert!(report.rows.is_empty());
    }

    #[test]
    fn single_player_expectation_is_opt() {
        let mut config = triangle_config("1/1", false);
        config.trials = 50;
        let report = run(ExperimentKind::Lemma1, &config).unwrap();
        let est = report.aggregate_f64("player_1_expectation").unwrap();
        assert_eq!(est, 2.0);
        assert_eq!(report.rows.len(), 50);
    }

    #[test]
    fn concentration_degenerate_single_trial() {
        let mut config = triangle_config("1/2,1/2", false);
        config.trials = 1;
        let report = run(ExperimentKind::Concentration, &config).unwrap();
        for key in ["player_1_lower_exceed_freq", "player_1_upper_exceed_freq"] {
            let f = report.aggregate_f64(key).unwrap();
            assert!(f == 0.0 || f == 1.0);
        }
        // Zero deviation grid still reports the epsilon = 0 endpoint as 1.
        assert_eq!(report.aggregate_f64("tail_upper_eps_0"), Some(1.0));
    }

    #[test]
    fn gap_run_single_player_is_zero() {
        let mut config = triangle_config("1/1", false);
        config.trials = 30;
        let report = run(ExperimentKind::Theorem1, &config).unwrap();
        assert_eq!(report.aggregate_f64("mean_max_gap"), Some(0.0));
        assert_eq!(report.aggregate("verdict_raw"), Some(&Cell::Bool(true)));
    }

    #[test]
    fn veto_run_single_player_never_vetoes() {
        let mut config = triangle_config("1/1", false);
        config.trials = 30;
        let report = run(ExperimentKind::Veto, &config).unwrap();
        assert_eq!(report.aggregate_f64("veto_freq"), Some(0.0));
        assert_eq!(report.aggregate_f64("mean_loss"), Some(0.0));
        assert_eq!(report.aggregate("ir_violations"), Some(&Cell::Int(0)));
    }

    #[test]
    fn chain_run_requires_long_chain_instance() {
        let config = triangle_config("1/2,1/2", false);
        assert!(matches!(
            run(ExperimentKind::Appc, &config),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn chain_run_small_instance() {
        let mut config = ExperimentConfig::new(
            InstanceSpec::named("long-chain", Some(90), None),
            PlayerProfile::uniform(2).unwrap(),
            3,
        );
        config.trials = 50;
        let report = run(ExperimentKind::Appc, &config).unwrap();
        assert_eq!(report.aggregate_f64("expected_share"), Some(15.0));
        let mean_good = report.aggregate_f64("mean_good_layers").unwrap();
        assert!(mean_good > 14.0 && mean_good < 20.0, "mean {mean_good}");
        // Internal optimum is at least the good-layer chain.
        for row in &report.rows {
            let good = row[2].as_f64().unwrap();
            let internal = row[3].as_f64().unwrap();
            assert!(internal >= good);
        }
    }

    #[test]
    fn reports_are_schedule_independent() {
        let mut config = triangle_config("1/2,1/2", false);
        config.trials = 200;
        config.seed = 99;
        let kinds = [
            ExperimentKind::Lemma1,
            ExperimentKind::Concentration,
            ExperimentKind::Theorem1,
            ExperimentKind::Veto,
        ];
        for kind in kinds {
            let mut single = config.clone();
            single.workers = 1;
            let mut pooled = config.clone();
            pooled.workers = 8;
            let a = run(kind, &single).unwrap().to_csv();
            let b = run(kind, &pooled).unwrap().to_csv();
            assert_eq!(a, b, "kind {:?}", kind);
        }
    }

    #[test]
    fn aggregates_recompute_from_rows() {
        let mut config = triangle_config("1/2,1/2", false);
        config.trials = 300;
        let report = run(ExperimentKind::Veto, &config).unwrap();
        // Recompute veto frequency and mean loss from the rows.
        let opt = report.aggregate_f64("opt_size").unwrap();
        let mut vetoed = 0u64;
        let mut loss_sum = 0.0;
        for chunk in report.rows.chunks(2) {
            let accepted = matches!(chunk[0][5], Cell::Bool(true));
            if !accepted {
                vetoed += 1;
            }
            let final_size: f64 = chunk.iter().map(|r| r[6].as_f64().unwrap()).sum();
            loss_sum += opt - final_size;
        }
        let veto_freq = vetoed as f64 / 300.0;
        assert_eq!(report.aggregate_f64("veto_freq"), Some(veto_freq));
        assert_eq!(report.aggregate_f64("mean_loss"), Some(loss_sum / 300.0));
    }

    #[test]
    fn kind_tokens_round_trip() {
        for kind in ExperimentKind::ALL {
            assert_eq!(ExperimentKind::from_token(kind.token()).unwrap(), kind);
        }
        assert!(ExperimentKind::from_token("nope").is_err());
    }
}
