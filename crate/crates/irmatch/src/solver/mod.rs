//! Exact maximum-cardinality matching under a cycle-length cap.
//!
//! The general solver enumerates all cycles up to the cap and runs a
//! branch-and-bound set packing that maximizes matched vertices, solving each
//! weakly connected component independently. Ties between optimal cycle sets
//! are broken toward the lexicographically least set under the canonical
//! cycle ordering, so the "fixed" optimal matching of the analysis is pinned
//! and reproducible.

mod blossom;
mod chain;

pub use blossom::{matching_number, max_matching_blossom, Matching2};
pub use chain::{longest_chain_dag, Chain};

pub(crate) use blossom::grow_to_maximum;

use crate::graph::{Cycle, Graph, Matching, VertexId};
use crate::{Error, Result};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Options for the exact solver.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    cycle_cap: usize,
    node_limit: u64,
}

impl SolveOptions {
    pub fn new(cycle_cap: usize) -> Result<SolveOptions> {
        if cycle_cap < 2 {
            return Err(Error::InvalidParameter(
                "cycle cap must be at least 2".into(),
            ));
        }
        Ok(SolveOptions {
            cycle_cap,
            node_limit: DEFAULT_NODE_LIMIT,
        })
    }

    pub fn with_node_limit(mut self, node_limit: u64) -> SolveOptions {
        self.node_limit = node_limit;
        self
    }

    pub fn cycle_cap(&self) -> usize {
        self.cycle_cap
    }

    pub fn node_limit(&self) -> u64 {
        self.node_limit
    }
}

/// A maximum-cardinality vertex-disjoint cycle cover with cycle lengths in
/// `[2, cap]`. Deterministic: returns the lexicographically least optimal
/// cycle set. Errors with `NodeLimit` when the search budget is exhausted.
pub fn max_cycle_cover(g: &Graph, opts: &SolveOptions) -> Result<Matching> {
    let mut budget = opts.node_limit;
    let mut all = Vec::new();
    for comp in g.weakly_connected_components() {
        if comp.len() < 2 {
            continue;
        }
        let sub = g.induced_subgraph(&comp)?;
        let local = solve_component(&sub.graph, opts.cycle_cap, &mut budget)
            .map_err(|e| remap_limit(e, opts))?;
        for cyc in local.cycles() {
            all.push(cyc.map_vertices(|v| sub.vertex_map[v]));
        }
    }
    Ok(Matching::new(all))
}

/// Optimal matched-vertex count only, skipping the lexicographic extraction.
pub fn max_cycle_cover_size(g: &Graph, opts: &SolveOptions) -> Result<usize> {
    let mut budget = opts.node_limit;
    let mut total = 0;
    for comp in g.weakly_connected_components() {
        if comp.len() < 2 {
            continue;
        }
        let sub = g.induced_subgraph(&comp)?;
        total += solve_component_value(&sub.graph, opts.cycle_cap, &mut budget)
            .map_err(|e| remap_limit(e, opts))?;
    }
    Ok(total)
}

fn remap_limit(e: Error, opts: &SolveOptions) -> Error {
    match e {
        Error::NodeLimit(_) => Error::NodeLimit(opts.node_limit),
        other => other,
    }
}

fn solve_component_value(g: &Graph, cap: usize, budget: &mut u64) -> Result<usize> {
    let cycles = g.enumerate_cycles_budgeted(cap, budget)?;
    if cycles.is_empty() {
        return Ok(0);
    }
    Packer::new(g.vertex_count(), &cycles, budget).optimum()
}

fn solve_component(g: &Graph, cap: usize, budget: &mut u64) -> Result<Matching> {
    let cycles = g.enumerate_cycles_budgeted(cap, budget)?;
    if cycles.is_empty() {
        return Ok(Matching::empty());
    }
    let mut packer = Packer::new(g.vertex_count(), &cycles, budget);
    let target = packer.optimum()?;
    let chosen = packer.extract(target)?;
    Ok(Matching::new(
        chosen.into_iter().map(|i| cycles[i].clone()).collect(),
    ))
}

/// Branch-and-bound packer over an ordered cycle list. The admissible bound
/// per node is the number of free vertices still covered by some fully-free
/// cycle; matched vertices can never exceed covered vertices.
struct Packer<'a> {
    n: usize,
    cycles: &'a [Cycle],
    by_vertex: Vec<Vec<usize>>,
    free: Vec<bool>,
    budget: &'a mut u64,
    best: usize,
}

impl<'a> Packer<'a> {
    fn new(n: usize, cycles: &'a [Cycle], budget: &'a mut u64) -> Packer<'a> {
        let mut by_vertex = vec![Vec::new(); n];
        for (i, c) in cycles.iter().enumerate() {
            for &v in c.vertices() {
                by_vertex[v].push(i);
            }
        }
        Packer {
            n,
            cycles,
            by_vertex,
            free: vec![true; n],
            budget,
            best: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        if *self.budget == 0 {
            return Err(Error::NodeLimit(0));
        }
        *self.budget -= 1;
        Ok(())
    }

    fn is_available(&self, ci: usize) -> bool {
        self.cycles[ci].vertices().iter().all(|&v| self.free[v])
    }

    /// Free vertices covered by at least one available cycle of index >= min_idx.
    fn cover_bound(&self, min_idx: usize) -> usize {
        let mut covered = vec![false; self.n];
        let mut count = 0;
        for ci in min_idx..self.cycles.len() {
            if self.is_available(ci) {
                for &v in self.cycles[ci].vertices() {
                    if !covered[v] {
                        covered[v] = true;
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn take(&mut self, ci: usize) {
        for &v in self.cycles[ci].vertices() {
            self.free[v] = false;
        }
    }

    fn untake(&mut self, ci: usize) {
        for &v in self.cycles[ci].vertices() {
            self.free[v] = true;
        }
    }

    /// Lowest free vertex lying on an available cycle of index >= min_idx.
    fn branch_vertex(&self, min_idx: usize) -> Option<VertexId> {
        (0..self.n)
            .filter(|&v| self.free[v])
            .find(|&v| self.by_vertex[v].iter().any(|&ci| ci >= min_idx && self.is_available(ci)))
    }

    fn optimum(&mut self) -> Result<usize> {
        self.best = 0;
        self.dfs_optimum(0)?;
        Ok(self.best)
    }

    fn dfs_optimum(&mut self, current: usize) -> Result<()> {
        self.tick()?;
        if current > self.best {
            self.best = current;
        }
        if current + self.cover_bound(0) <= self.best {
            return Ok(());
        }
        let Some(v) = self.branch_vertex(0) else {
            return Ok(());
        };
        let candidates: Vec<usize> = self.by_vertex[v]
            .iter()
            .copied()
            .filter(|&ci| self.is_available(ci))
            .collect();
        for ci in candidates {
            self.take(ci);
            self.dfs_optimum(current + self.cycles[ci].len())?;
            self.untake(ci);
        }
        // Leave v unmatched.
        self.free[v] = false;
        self.dfs_optimum(current)?;
        self.free[v] = true;
        Ok(())
    }

    /// True iff `needed` more matched vertices are achievable using only
    /// cycles of index >= min_idx on the current free set.
    fn achievable(&mut self, min_idx: usize, needed: usize) -> Result<bool> {
        if needed == 0 {
            return Ok(true);
        }
        self.tick()?;
        if self.cover_bound(min_idx) < needed {
            return Ok(false);
        }
        let Some(v) = self.branch_vertex(min_idx) else {
            return Ok(false);
        };
        let candidates: Vec<usize> = self.by_vertex[v]
            .iter()
            .copied()
            .filter(|&ci| ci >= min_idx && self.is_available(ci))
            .collect();
        for ci in candidates {
            self.take(ci);
            let ok = self.achievable(min_idx, needed.saturating_sub(self.cycles[ci].len()))?;
            self.untake(ci);
            if ok {
                return Ok(true);
            }
        }
        self.free[v] = false;
        let ok = self.achievable(min_idx, needed)?;
        self.free[v] = true;
        Ok(ok)
    }

    /// Greedy lexicographic extraction: scan cycles in canonical order and
    /// commit each one that still extends to the optimum using later cycles.
    fn extract(&mut self, target: usize) -> Result<Vec<usize>> {
        let mut chosen = Vec::new();
        let mut got = 0;
        for ci in 0..self.cycles.len() {
            if got == target {
                break;
            }
            if !self.is_available(ci) {
                continue;
            }
            let len = self.cycles[ci].len();
            self.take(ci);
            if got + len <= target && self.achievable(ci + 1, target - got - len)? {
                chosen.push(ci);
                got += len;
            } else {
                self.untake(ci);
            }
        }
        assert_eq!(got, target, "lexicographic extraction missed the optimum");
        Ok(chosen)
    }
}

/// Exhaustive cycle-cover oracle, independent of the branch-and-bound path.
/// Finds cycles by its own DFS and recurses over the lowest free vertex with
/// no pruning bound. Guarded to 12 vertices.
pub fn brute_force_cover(g: &Graph, cap: usize) -> Result<Matching> {
    let n = g.vertex_count();
    if n > 12 {
        return Err(Error::TooLarge(format!(
            "brute-force cover is limited to 12 vertices, got {n}"
        )));
    }
    if cap < 2 {
        return Err(Error::InvalidParameter(
            "cycle cap must be at least 2".into(),
        ));
    }
    let mut free = vec![true; n];
    let (_, cycles) = brute_best(g, cap, &mut free, 0);
    Ok(Matching::new(cycles))
}

fn brute_best(g: &Graph, cap: usize, free: &mut [bool], from: usize) -> (usize, Vec<Cycle>) {
    let Some(v) = (from..g.vertex_count()).find(|&v| free[v]) else {
        return (0, Vec::new());
    };
    // Option 1: leave v unmatched.
    free[v] = false;
    let (mut best, mut best_cycles) = brute_best(g, cap, free, v + 1);
    free[v] = true;
    // Option 2: match v on some cycle through it within the free set.
    let mut path = vec![v];
    let mut found = Vec::new();
    collect_cycles_through(g, cap, v, &mut path, free, &mut found);
    for cyc in found {
        for &u in cyc.vertices() {
            free[u] = false;
        }
        let (sub, sub_cycles) = brute_best(g, cap, free, v + 1);
        for &u in cyc.vertices() {
            free[u] = true;
        }
        if cyc.len() + sub > best {
            best = cyc.len() + sub;
            best_cycles = sub_cycles;
            best_cycles.push(cyc);
        }
    }
    (best, best_cycles)
}

fn collect_cycles_through(
    g: &Graph,
    cap: usize,
    root: usize,
    path: &mut Vec<usize>,
    free: &[bool],
    out: &mut Vec<Cycle>,
) {
    let v = *path.last().unwrap();
    if path.len() >= 2 && g.has_edge(v, root) {
        out.push(Cycle::new(path.clone()));
    }
    if path.len() == cap {
        return;
    }
    for &w in g.out_neighbors(v) {
        if w > root && free[w] && !path.contains(&w) {
            path.push(w);
            collect_cycles_through(g, cap, root, path, free, out);
            path.pop();
        }
    }
}
