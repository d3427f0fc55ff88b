//! Maximum-cardinality matching in general undirected graphs via blossom
//! contraction, O(V^3). Deterministic for a fixed input.

use std::collections::VecDeque;

use crate::graph::{UndirectedGraph, VertexId};

/// A matching of an undirected graph: disjoint unordered vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching2 {
    edges: Vec<(VertexId, VertexId)>,
}

impl Matching2 {
    pub(crate) fn from_mate(mate: &[Option<VertexId>]) -> Matching2 {
        let mut edges = Vec::new();
        for (u, &m) in mate.iter().enumerate() {
            if let Some(v) = m {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Matching2 { edges }
    }

    /// Matched pairs (u, v) with u < v, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Matching number: the number of matched pairs.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn matched_count(&self) -> usize {
        self.edges.len() * 2
    }

    pub fn matched_flags(&self, n: usize) -> Vec<bool> {
        let mut flags = vec![false; n];
        for &(u, v) in &self.edges {
            flags[u] = true;
            flags[v] = true;
        }
        flags
    }

    pub fn to_mate(&self, n: usize) -> Vec<Option<VertexId>> {
        let mut mate = vec![None; n];
        for &(u, v) in &self.edges {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }
}

/// Computes a maximum-cardinality matching.
pub fn max_matching_blossom(ug: &UndirectedGraph) -> Matching2 {
    let n = ug.vertex_count();
    let mut mate: Vec<Option<VertexId>> = vec![None; n];
    // Greedy seed; augmentation below brings it to maximum.
    for &(u, v) in ug.edges() {
        if mate[u].is_none() && mate[v].is_none() {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
    }
    grow_to_maximum(ug, &mut mate);
    Matching2::from_mate(&mate)
}

/// Convenience: the matching number of `ug`.
pub fn matching_number(ug: &UndirectedGraph) -> usize {
    max_matching_blossom(ug).size()
}

/// Repeatedly augments `mate` until no augmenting path remains. Augmenting
/// never unmatches a matched vertex, so the matched set only expands.
pub(crate) fn grow_to_maximum(ug: &UndirectedGraph, mate: &mut [Option<VertexId>]) {
    let n = ug.vertex_count();
    for root in 0..n {
        if mate[root].is_none() {
            augment_from(ug, mate, root);
        }
    }
}

fn augment_from(ug: &UndirectedGraph, mate: &mut [Option<VertexId>], root: VertexId) -> bool {
    let n = ug.vertex_count();
    let mut used = vec![false; n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut base: Vec<VertexId> = (0..n).collect();
    let mut queue = VecDeque::new();
    used[root] = true;
    queue.push_back(root);
    let mut exposed: Option<VertexId> = None;

    'bfs: while let Some(v) = queue.pop_front() {
        for &to in ug.neighbors(v) {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            if to == root || mate[to].is_some_and(|m| parent[m].is_some()) {
                // Odd cycle: contract the blossom at the lowest common base.
                let curbase = blossom_base(mate, &parent, &base, v, to);
                let mut in_blossom = vec![false; n];
                mark_path(mate, &mut parent, &base, &mut in_blossom, v, curbase, to);
                mark_path(mate, &mut parent, &base, &mut in_blossom, to, curbase, v);
                for i in 0..n {
                    if in_blossom[base[i]] {
                        base[i] = curbase;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match mate[to] {
                    None => {
                        exposed = Some(to);
                        break 'bfs;
                    }
                    Some(m) => {
                        if !used[m] {
                            used[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
    }

    match exposed {
        None => false,
        Some(mut v) => {
            // Flip matched/unmatched edges back to the root.
            while let Some(pv) = parent[v] {
                let next = mate[pv];
                mate[v] = Some(pv);
                mate[pv] = Some(v);
                match next {
                    Some(nv) => v = nv,
                    None => break,
                }
            }
            true
        }
    }
}

fn blossom_base(
    mate: &[Option<VertexId>],
    parent: &[Option<VertexId>],
    base: &[VertexId],
    mut a: VertexId,
    mut b: VertexId,
) -> VertexId {
    let mut on_path = vec![false; base.len()];
    loop {
        a = base[a];
        on_path[a] = true;
        match mate[a] {
            None => break, // reached the exposed root
            Some(m) => match parent[m] {
                Some(p) => a = p,
                None => break,
            },
        }
    }
    loop {
        b = base[b];
        if on_path[b] {
            return b;
        }
        b = parent[mate[b].expect("interior vertex is matched")]
            .expect("interior vertex has a parent");
    }
}

fn mark_path(
    mate: &[Option<VertexId>],
    parent: &mut [Option<VertexId>],
    base: &[VertexId],
    in_blossom: &mut [bool],
    mut v: VertexId,
    curbase: VertexId,
    mut child: VertexId,
) {
    while base[v] != curbase {
        let m = mate[v].expect("blossom interior vertex is matched");
        in_blossom[base[v]] = true;
        in_blossom[base[m]] = true;
        parent[v] = Some(child);
        child = m;
        v = parent[m].expect("blossom interior vertex has a parent");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UndirectedGraph;

    use crate::testutil::brute_nu;

    #[test]
    fn path_of_three() {
        let ug = UndirectedGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(matching_number(&ug), 1);
    }

    #[test]
    fn triangle() {
        let ug = UndirectedGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(matching_number(&ug), 1);
    }

    #[test]
    fn odd_cycles_need_contraction() {
        // C5 plus a pendant forcing an augmenting path through a blossom.
        let ug = UndirectedGraph::new(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5)],
        )
        .unwrap();
        assert_eq!(matching_number(&ug), 3);
    }

    #[test]
    fn petersen_graph_is_perfectly_matchable() {
        let outer = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let spokes = [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)];
        let inner = [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
        let edges: Vec<_> = outer.iter().chain(&spokes).chain(&inner).copied().collect();
        let ug = UndirectedGraph::new(10, &edges).unwrap();
        assert_eq!(matching_number(&ug), 5);
    }

    #[test]
    fn agrees_with_exhaustive_search_on_random_graphs() {
        let mut state = 0x5EED_u64;
        for _ in 0..300 {
            let g = crate::generators::random_graph(&mut state, 9);
            let ug = g.to_undirected();
            assert_eq!(matching_number(&ug), brute_nu(&ug), "graph: {:?}", ug.edges());
        }
    }

    #[test]
    fn growing_preserves_initial_matched_vertices() {
        let mut state = 0xFACE_u64;
        for _ in 0..100 {
            let g = crate::generators::random_graph(&mut state, 10);
            let ug = g.to_undirected();
            let n = ug.vertex_count();
            // Seed with an arbitrary single matched edge, then grow.
            if let Some(&(u, v)) = ug.edges().first() {
                let mut mate: Vec<Option<usize>> = vec![None; n];
                mate[u] = Some(v);
                mate[v] = Some(u);
                grow_to_maximum(&ug, &mut mate);
                assert!(mate[u].is_some() && mate[v].is_some());
                let m = Matching2::from_mate(&mate);
                assert_eq!(m.size(), matching_number(&ug));
            }
        }
    }
}
