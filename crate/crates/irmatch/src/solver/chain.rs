//! Longest chain from the altruist in an acyclic graph, by dynamic
//! programming over a topological order.

use crate::graph::{Graph, VertexId};
use crate::{Error, Result};

/// A directed path starting at the altruist. The altruist itself is not
/// counted as a matched vertex: `matched_count` is the number of vertices
/// the chain reaches after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    vertices: Vec<VertexId>,
}

impl Chain {
    /// Full vertex sequence, altruist first.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of non-altruist vertices on the chain.
    pub fn matched_count(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Maximum-length chain starting at the altruist. Length ties are broken
/// toward the lexicographically least vertex sequence. Errors if no altruist
/// is designated or the graph contains a directed cycle.
pub fn longest_chain_dag(g: &Graph) -> Result<Chain> {
    let altruist = g.altruist().ok_or(Error::NoAltruist)?;
    let order = topological_order(g)?;

    // Longest path length (in vertices) starting at each vertex.
    let n = g.vertex_count();
    let mut len_from = vec![1usize; n];
    for &v in order.iter().rev() {
        for &w in g.out_neighbors(v) {
            len_from[v] = len_from[v].max(1 + len_from[w]);
        }
    }

    let mut vertices = vec![altruist];
    let mut cur = altruist;
    while len_from[cur] > 1 {
        // Neighbors are sorted, so the first continuation is the least one.
        let next = g
            .out_neighbors(cur)
            .iter()
            .copied()
            .find(|&w| len_from[w] == len_from[cur] - 1)
            .expect("a longest path has a continuation");
        vertices.push(next);
        cur = next;
    }
    Ok(Chain { vertices })
}

fn topological_order(g: &Graph) -> Result<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut indegree = vec![0usize; n];
    for &(_, v) in g.edges() {
        indegree[v] += 1;
    }
    let mut queue: Vec<VertexId> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        order.push(v);
        for &w in g.out_neighbors(v) {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push(w);
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotAcyclic);
    }
    Ok(order)
}
