//! Command-line interface. Exit codes: 0 success, 2 validation error,
//! 3 solver resource cap exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::decomposition::{build_partition, check_partition_identity, edmonds_gallai, render_report};
use crate::experiment::{
    emit_report, ExperimentConfig, ExperimentKind, InstanceSpec, ReportFormat,
};
use crate::generators;
use crate::graph::Graph;
use crate::mechanisms::{augment_mechanism, veto_mechanism};
use crate::ownership::{restrict_matching, sample_ownership, PlayerProfile};
use crate::solver::{max_cycle_cover, SolveOptions, DEFAULT_NODE_LIMIT};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "irmatch",
    about = "Bounded-cycle matching, individual-rationality mechanisms, and Monte Carlo experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a graph file exactly under a cycle cap.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Structure decomposition and the partition identity for the
    /// undirected reduction of a graph file.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Write a named benchmark instance as a graph file.
    Generate {
        /// ir-failure, decomposition-demo, star-forest, layered, triangle,
        /// pentagon, or long-chain.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one mechanism on one sampled (or replayed) assignment.
    Mechanism {
        /// veto or augment.
        which: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cap: usize,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo experiment batches.
    Experiment {
        /// lemma1, concentration, theorem1, veto, or appc.
        kind: String,
        #[arg(long, conflicts_with = "instance")]
        graph: Option<PathBuf>,
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        cap: usize,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
        /// Full subset enumeration instead of sampling (lemma1, n <= 20).
        #[arg(long)]
        exact: bool,
        /// Also write gap-histogram plot data.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Comma-separated probabilities, decimals or fractions: `0.5,0.5` or `2/3,1/3`.
    #[arg(long)]
    probs: Option<String>,
    /// Uniform profile over this many players.
    #[arg(long, conflicts_with = "probs")]
    players: Option<usize>,
}

impl ProfileArgs {
    fn resolve(&self) -> Result<PlayerProfile> {
        match (&self.probs, self.players) {
            (Some(text), None) => PlayerProfile::parse(text),
            (None, Some(k)) => PlayerProfile::uniform(k),
            (None, None) => Err(Error::InvalidProfile(
                "pass either --probs or --players".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NodeLimit(_) | Error::TooLarge(_) => 3,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            graph,
            cap,
            node_limit,
        } => {
            let g = load(&graph)?;
            let opts = SolveOptions::new(cap)?.with_node_limit(node_limit);
            let matching = max_cycle_cover(&g, &opts)?;
            println!("matched {}", matching.matched_count());
            for cycle in matching.cycles() {
                let ids: Vec<String> = cycle.vertices().iter().map(|v| v.to_string()).collect();
                println!("cycle {}", ids.join(" "));
            }
            Ok(())
        }
        Command::Decompose { graph } => {
            let g = load(&graph)?;
            let ug = g.to_undirected();
            let eg = edmonds_gallai(&ug);
            let partition = build_partition(&ug, &eg);
            let identity = check_partition_identity(&ug, &partition);
            print!("{}", render_report(&ug, &eg, &partition, &identity));
            Ok(())
        }
        Command::Generate {
            name,
            n,
            copies,
            out,
        } => {
            let inst = generators::by_name(&name, n, copies)?;
            std::fs::write(&out, inst.graph.to_text())?;
            println!(
                "wrote {} ({} vertices, {} edges, cap {}, opt {})",
                out.display(),
                inst.graph.vertex_count(),
                inst.graph.edge_count(),
                inst.cycle_cap,
                inst.known_opt
            );
            Ok(())
        }
        Command::Mechanism {
            which,
            graph,
            cap,
            profile,
            seed,
            trial,
            out,
        } => {
            let g = load(&graph)?;
            let profile = profile.resolve()?;
            let assignment = sample_ownership(&g, &profile, seed, trial);
            let opts = SolveOptions::new(cap)?;
            let pinned = max_cycle_cover(&g, &opts)?;
            let mut csv = String::from(
                "trial,player,internal_opt,share,gap,accepted,final_allocation\n",
            );
            match which.as_str() {
                "veto" => {
                    let outcome = veto_mechanism(&g, &assignment, &opts, &pinned)?;
                    for (player, p) in outcome.per_player.iter().enumerate() {
                        let _ = writeln!(
                            csv,
                            "{trial},{},{},{},{},{},{}",
                            player + 1,
                            p.internal_opt,
                            p.share,
                            p.internal_opt as i64 - p.share as i64,
                            outcome.accepted,
                            p.final_allocation
                        );
                    }
                }
                "augment" => {
                    let outcome = augment_mechanism(&g, &assignment);
                    let flags = outcome.matching.matched_flags(g.vertex_count());
                    for player in 0..profile.player_count() {
                        let internal_opt = outcome.internal[player].matched_count();
                        let share = restrict_matching(&pinned, &assignment, player);
                        let allocation = (0..g.vertex_count())
                            .filter(|&v| flags[v] && assignment.owner(v) == player)
                            .count();
                        let _ = writeln!(
                            csv,
                            "{trial},{},{},{},{},true,{}",
                            player + 1,
                            internal_opt,
                            share,
                            internal_opt as i64 - share as i64,
                            allocation
                        );
                    }
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown mechanism `{other}`; known: veto, augment"
                    )))
                }
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Experiment {
            kind,
            graph,
            instance,
            n,
            copies,
            cap,
            profile,
            trials,
            seed,
            delta,
            workers,
            out,
            exact,
            plot,
            node_limit,
        } => {
            let kind = ExperimentKind::from_token(&kind)?;
            let spec = match (graph, instance) {
                (Some(path), None) => InstanceSpec::File(path),
                (None, Some(name)) => InstanceSpec::named(&name, n, copies),
                (None, None) => {
                    return Err(Error::InvalidParameter(
                        "pass either --graph or --instance".into(),
                    ))
                }
                (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
            };
            let mut config = ExperimentConfig::new(spec, profile.resolve()?, cap);
            config.trials = trials;
            config.seed = seed;
            config.delta = delta;
            config.workers = workers;
            config.exact = exact;
            config.node_limit = node_limit;
            let report = crate::experiment::run(kind, &config)?;
            emit_report(&report, ReportFormat::Csv, &out)?;
            println!("wrote {} ({} rows)", out.display(), report.rows.len());
            if let Some(path) = plot {
                emit_report(&report, ReportFormat::Plot, &path)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn load(path: &PathBuf) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    Graph::parse(&text)
}
