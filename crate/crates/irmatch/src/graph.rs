//! Directed compatibility graphs, bounded-length cycle enumeration, induced
//! subgraphs, weak components, and the 2-cycle/undirected reduction.

use std::fmt::Write as _;

use crate::{Error, Result};

pub type VertexId = usize;

/// Directed graph with dense 0-based vertex ids and an optional designated
/// altruist vertex. No self-loops, no parallel edges. Edge and adjacency
/// lists are kept sorted so every traversal is deterministic.
///
/// Values are immutable after construction and safe to share across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    altruist: Option<VertexId>,
}

impl Graph {
    pub fn new(
        n: usize,
        edge_list: &[(VertexId, VertexId)],
        altruist: Option<VertexId>,
    ) -> Result<Graph> {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        if let Some(a) = altruist {
            if a >= n {
                return Err(Error::InvalidVertex(a));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for l in in_adj.iter_mut() {
            l.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            out_adj,
            in_adj,
            altruist,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by (source, target).
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn altruist(&self) -> Option<VertexId> {
        self.altruist
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    /// Parses the text graph format: `n m` header, an optional `altruist <id>`
    /// line, then `m` lines `u v`. Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut content = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = content.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(header_line, "expected header `n m`"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(header_line, "expected header `n m`"))?;
        if it.next().is_some() {
            return Err(malformed(header_line, "trailing tokens after header"));
        }

        let mut rest = content.peekable();
        let mut altruist = None;
        if let Some(&(line, l)) = rest.peek() {
            if let Some(tok) = l.strip_prefix("altruist") {
                let a: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| malformed(line, "expected `altruist <id>`"))?;
                if a >= n {
                    return Err(malformed(line, &format!("altruist {a} out of range")));
                }
                altruist = Some(a);
                rest.next();
            }
        }

        let mut edges = Vec::with_capacity(m);
        let mut last_line = header_line;
        for (line, l) in rest {
            if edges.len() == m {
                return Err(malformed(line, "more edge lines than declared in header"));
            }
            let mut it = l.split_whitespace();
            let parse_endpoint = |t: Option<&str>| -> Result<usize> {
                t.and_then(|t| t.parse().ok())
                    .ok_or_else(|| malformed(line, "expected edge line `u v`"))
            };
            let u = parse_endpoint(it.next())?;
            let v = parse_endpoint(it.next())?;
            if it.next().is_some() {
                return Err(malformed(line, "trailing tokens after edge"));
            }
            if u >= n || v >= n {
                return Err(malformed(line, &format!("endpoint out of range in `{l}`")));
            }
            if u == v {
                return Err(malformed(line, &format!("self-loop on vertex {u}")));
            }
            if edges.contains(&(u, v)) {
                return Err(malformed(line, &format!("duplicate edge ({u}, {v})")));
            }
            edges.push((u, v));
            last_line = line;
        }
        if edges.len() < m {
            return Err(malformed(
                last_line + 1,
                &format!("expected {m} edges, found {}", edges.len()),
            ));
        }
        Graph::new(n, &edges, altruist)
    }

    /// Serializes to the text format; edges emitted sorted by (u, v).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        if let Some(a) = self.altruist {
            let _ = writeln!(s, "altruist {a}");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// All simple directed cycles with length in `[2, cap]`, each in canonical
    /// form, in lexicographic order of their vertex lists.
    pub fn enumerate_cycles(&self, cap: usize) -> Vec<Cycle> {
        assert!(cap >= 2, "cycle cap must be at least 2");
        let mut budget = u64::MAX;
        self.enumerate_cycles_budgeted(cap, &mut budget)
            .expect("unlimited budget")
    }

    /// Same enumeration with a step budget; errors with `NodeLimit` when the
    /// budget is exhausted. Used by the solver to bound total search work.
    pub(crate) fn enumerate_cycles_budgeted(
        &self,
        cap: usize,
        budget: &mut u64,
    ) -> Result<Vec<Cycle>> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.n];
        let mut path: Vec<VertexId> = Vec::with_capacity(cap);
        for root in 0..self.n {
            path.clear();
            path.push(root);
            on_path[root] = true;
            self.cycle_dfs(root, cap, &mut path, &mut on_path, &mut out, budget)?;
            on_path[root] = false;
        }
        Ok(out)
    }

    fn cycle_dfs(
        &self,
        root: VertexId,
        cap: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<Cycle>,
        budget: &mut u64,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::NodeLimit(0));
        }
        *budget -= 1;
        let v = *path.last().unwrap();
        // Emit before descending: a shorter cycle precedes its extensions.
        if path.len() >= 2 && self.has_edge(v, root) {
            out.push(Cycle::from_canonical(path.clone()));
        }
        if path.len() == cap {
            return Ok(());
        }
        for &w in &self.out_adj[v] {
            // Only vertices above the root: each cycle is found exactly once,
            // rooted at its minimum vertex.
            if w <= root || on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            self.cycle_dfs(root, cap, path, on_path, out, budget)?;
            on_path[w] = false;
            path.pop();
        }
        Ok(())
    }

    /// Undirected reduction: edge {u, v} iff both (u, v) and (v, u) exist.
    /// One-directional edges are dropped.
    pub fn to_undirected(&self) -> UndirectedGraph {
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if u < v && self.has_edge(v, u) {
                edges.push((u, v));
            }
        }
        UndirectedGraph::new(self.n, &edges).expect("reduction preserves validity")
    }

    /// Subgraph induced by `keep`, relabeled to dense ids. The returned map
    /// translates new ids back to originals.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<InducedSubgraph> {
        let mut kept: Vec<VertexId> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&v) = kept.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidVertex(v));
        }
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &kept {
            for &w in &self.out_adj[v] {
                if new_id[w] != usize::MAX {
                    edges.push((new_id[v], new_id[w]));
                }
            }
        }
        let altruist = self
            .altruist
            .and_then(|a| (a < self.n && new_id[a] != usize::MAX).then(|| new_id[a]));
        Ok(InducedSubgraph {
            graph: Graph::new(kept.len(), &edges, altruist)?,
            vertex_map: kept,
        })
    }

    /// Maximal weakly connected vertex sets, ordered by minimum vertex id.
    pub fn weakly_connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in self.out_adj[v].iter().chain(self.in_adj[v].iter()) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Adds an edge from every other vertex to the altruist, so chains from
    /// the altruist become cycles. Existing edges are kept as-is.
    pub fn add_altruist_backedges(&self) -> Result<Graph> {
        let a = self.altruist.ok_or(Error::NoAltruist)?;
        let mut edges = self.edges.clone();
        for v in 0..self.n {
            if v != a && !self.has_edge(v, a) {
                edges.push((v, a));
            }
        }
        Graph::new(self.n, &edges, Some(a))
    }

    /// Disjoint union of `copies` copies of this graph, ids shifted per copy.
    pub fn disjoint_copies(&self, copies: usize) -> Result<Graph> {
        if copies == 0 {
            return Err(Error::InvalidParameter("copies must be at least 1".into()));
        }
        if copies > 1 && self.altruist.is_some() {
            return Err(Error::InvalidParameter(
                "cannot duplicate a graph with a designated altruist".into(),
            ));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * copies);
        for c in 0..copies {
            let off = c * self.n;
            edges.extend(self.edges.iter().map(|&(u, v)| (u + off, v + off)));
        }
        Graph::new(self.n * copies, &edges, self.altruist)
    }
}

fn malformed(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

/// A simple directed cycle in canonical rotation: minimum vertex id first.
/// Cycles are directed, so no reflection is applied.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Canonicalizes an arbitrary rotation of a simple cycle.
    pub fn new(seq: Vec<VertexId>) -> Cycle {
        assert!(seq.len() >= 2, "cycle length must be at least 2");
        let min_pos = seq
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let mut vertices = Vec::with_capacity(seq.len());
        vertices.extend_from_slice(&seq[min_pos..]);
        vertices.extend_from_slice(&seq[..min_pos]);
        Cycle { vertices }
    }

    fn from_canonical(vertices: Vec<VertexId>) -> Cycle {
        debug_assert!(vertices.iter().skip(1).all(|&v| v > vertices[0]));
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Relabels vertices and re-canonicalizes.
    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Cycle {
        Cycle::new(self.vertices.iter().map(|&v| f(v)).collect())
    }
}

/// A set of pairwise vertex-disjoint directed cycles; the unit of "opt".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    cycles: Vec<Cycle>,
}

impl Matching {
    pub fn new(mut cycles: Vec<Cycle>) -> Matching {
        cycles.sort_unstable();
        let mut seen = std::collections::HashSet::new();
        for c in &cycles {
            for &v in c.vertices() {
                assert!(seen.insert(v), "cycles in a matching must be disjoint");
            }
        }
        Matching { cycles }
    }

    pub fn empty() -> Matching {
        Matching { cycles: Vec::new() }
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Number of matched vertices, i.e. the sum of cycle lengths.
    pub fn matched_count(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    /// Sorted list of matched vertices.
    pub fn matched_vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .cycles
            .iter()
            .flat_map(|c| c.vertices().iter().copied())
            .collect();
        vs.sort_unstable();
        vs
    }

    pub fn matched_flags(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; n];
        for c in &self.cycles {
            for &v in c.vertices() {
                flags[v] = true;
            }
        }
        flags
    }

    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Matching {
        Matching::new(self.cycles.iter().map(|c| c.map_vertices(&f)).collect())
    }
}

/// Undirected view used by the 2-cycle reduction, matching, and the
/// decomposition machinery. Edges stored as (u, v) with u < v, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edge_list: &[(VertexId, VertexId)]) -> Result<UndirectedGraph> {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= n {
                return Err(Error::InvalidVertex(a));
            }
            if b >= n {
                return Err(Error::InvalidVertex(b));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        Ok(UndirectedGraph { n, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Connected components ordered by minimum vertex id.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Induced subgraph on `keep`, relabeled dense; returns the new-to-old map.
    pub fn induced(&self, keep: &[VertexId]) -> (UndirectedGraph, Vec<VertexId>) {
        let mut kept: Vec<VertexId> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                edges.push((new_id[u], new_id[v]));
            }
        }
        let g = UndirectedGraph::new(kept.len(), &edges).expect("induced subgraph is valid");
        (g, kept)
    }

    /// Keeps vertex ids but drops every edge incident to a vertex outside
    /// `keep`. Handy when part sizes should stay comparable to the host.
    pub fn restricted_to(&self, keep: &[bool]) -> UndirectedGraph {
        let edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep[u] && keep[v])
            .collect();
        UndirectedGraph::new(self.n, &edges).expect("restriction is valid")
    }

    /// Expands each undirected edge into a directed 2-cycle.
    pub fn to_directed_two_cycles(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.edges.len() * 2);
        for &(u, v) in &self.edges {
            edges.push((u, v));
            edges.push((v, u));
        }
        Graph::new(self.n, &edges, None).expect("expansion preserves validity")
    }
}

/// Result of inducing a subgraph: the relabeled graph plus the id map from
/// new (dense) ids back to the original ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub vertex_map: Vec<VertexId>,
}

impl InducedSubgraph {
    pub fn to_original(&self, new_id: VertexId) -> VertexId {
        self.vertex_map[new_id]
    }
}
