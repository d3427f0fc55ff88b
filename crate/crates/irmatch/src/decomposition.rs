//! Edmonds-Gallai decomposition, the edge-disjoint partition built from it,
//! and exact expectation machinery over random vertex subsets.

use std::fmt::Write as _;

use num::{BigInt, BigRational, One, Zero};

use crate::graph::{Graph, UndirectedGraph, VertexId};
use crate::solver::matching_number;
use crate::{Error, Result};

/// The canonical partition of an undirected graph by maximum-matching
/// structure: `d` collects the vertices missed by some maximum matching,
/// `a` their neighbors outside `d`, and `c` the rest. Components of the
/// subgraph induced on `d` are factor-critical.
#[derive(Clone, Debug)]
pub struct EgDecomposition {
    pub d: Vec<VertexId>,
    pub a: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub d_components: Vec<Vec<VertexId>>,
    /// Matching number of the host graph.
    pub nu: usize,
}

pub fn edmonds_gallai(ug: &UndirectedGraph) -> EgDecomposition {
    let n = ug.vertex_count();
    let nu = matching_number(ug);
    let mut in_d = vec![false; n];
    for v in 0..n {
        let keep: Vec<VertexId> = (0..n).filter(|&u| u != v).collect();
        let (sub, _) = ug.induced(&keep);
        if matching_number(&sub) == nu {
            in_d[v] = true;
        }
    }
    let d: Vec<VertexId> = (0..n).filter(|&v| in_d[v]).collect();
    let a: Vec<VertexId> = (0..n)
        .filter(|&v| !in_d[v] && ug.neighbors(v).iter().any(|&w| in_d[w]))
        .collect();
    let c: Vec<VertexId> = (0..n)
        .filter(|&v| !in_d[v] && a.binary_search(&v).is_err())
        .collect();

    let keep_flags = in_d.clone();
    let restricted = ug.restricted_to(&keep_flags);
    let d_components: Vec<Vec<VertexId>> = restricted
        .connected_components()
        .into_iter()
        .filter(|comp| comp.iter().any(|&v| in_d[v]))
        .map(|comp| comp.into_iter().filter(|&v| in_d[v]).collect())
        .collect();

    EgDecomposition {
        d,
        a,
        c,
        d_components,
        nu,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartKind {
    Star,
    CComponent,
    DComponent,
}

/// One part of the edge-disjoint partition, in host vertex ids.
#[derive(Clone, Debug)]
pub struct Part {
    pub kind: PartKind,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl Part {
    pub fn to_graph(&self, n: usize) -> UndirectedGraph {
        UndirectedGraph::new(n, &self.edges).expect("part edges come from the host")
    }
}

/// Edge-disjoint (not vertex-disjoint) parts covering every edge of the
/// host: one part per component of the subgraph on `c`, one per component of
/// the subgraph on `d`, and one star per `a`-vertex. An edge between two
/// `a`-vertices goes to the star of its lower-id endpoint.
#[derive(Clone, Debug)]
pub struct EdgePartition {
    pub parts: Vec<Part>,
}

pub fn build_partition(ug: &UndirectedGraph, eg: &EgDecomposition) -> EdgePartition {
    let n = ug.vertex_count();
    let mut in_a = vec![false; n];
    for &v in &eg.a {
        in_a[v] = true;
    }
    let mut in_set = vec![false; n];
    for &v in &eg.c {
        in_set[v] = true;
    }
    let mut parts = Vec::new();

    let c_sub = ug.restricted_to(&in_set);
    for comp in c_sub.connected_components() {
        let edges: Vec<(VertexId, VertexId)> = c_sub
            .edges()
            .iter()
            .copied()
            .filter(|&(u, _)| comp.binary_search(&u).is_ok())
            .collect();
        if !edges.is_empty() {
            parts.push(Part {
                kind: PartKind::CComponent,
                edges,
            });
        }
    }

    for v in in_set.iter_mut() {
        *v = false;
    }
    for &v in &eg.d {
        in_set[v] = true;
    }
    let d_sub = ug.restricted_to(&in_set);
    for comp in &eg.d_components {
        let edges: Vec<(VertexId, VertexId)> = d_sub
            .edges()
            .iter()
            .copied()
            .filter(|&(u, _)| comp.binary_search(&u).is_ok())
            .collect();
        if !edges.is_empty() {
            parts.push(Part {
                kind: PartKind::DComponent,
                edges,
            });
        }
    }

    for &av in &eg.a {
        let edges: Vec<(VertexId, VertexId)> = ug
            .neighbors(av)
            .iter()
            .copied()
            .filter(|&w| !(in_a[w] && w < av))
            .map(|w| (av.min(w), av.max(w)))
            .collect();
        if !edges.is_empty() {
            parts.push(Part {
                kind: PartKind::Star,
                edges,
            });
        }
    }

    EdgePartition { parts }
}

/// Checks that the parts preserve total matched vertices: the host optimum
/// against the sum of per-part optima.
#[derive(Clone, Debug)]
pub struct PartitionIdentity {
    /// Matched vertices in the host graph.
    pub lhs: usize,
    /// Sum of matched vertices over the parts.
    pub rhs: usize,
    pub per_part: Vec<usize>,
}

impl PartitionIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn check_partition_identity(
    ug: &UndirectedGraph,
    partition: &EdgePartition,
) -> PartitionIdentity {
    let lhs = 2 * matching_number(ug);
    let per_part: Vec<usize> = partition
        .parts
        .iter()
        .map(|p| 2 * matching_number(&p.to_graph(ug.vertex_count())))
        .collect();
    PartitionIdentity {
        lhs,
        rhs: per_part.iter().sum(),
        per_part,
    }
}

/// Renders the decomposition and identity check as a text table.
pub fn render_report(
    ug: &UndirectedGraph,
    eg: &EgDecomposition,
    partition: &EdgePartition,
    identity: &PartitionIdentity,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices {}  edges {}  nu {}", ug.vertex_count(), ug.edge_count(), eg.nu);
    let fmt_set = |vs: &[VertexId]| {
        vs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(s, "D ({}): {}", eg.d.len(), fmt_set(&eg.d));
    let _ = writeln!(s, "A ({}): {}", eg.a.len(), fmt_set(&eg.a));
    let _ = writeln!(s, "C ({}): {}", eg.c.len(), fmt_set(&eg.c));
    for (i, comp) in eg.d_components.iter().enumerate() {
        let _ = writeln!(s, "d-component {i}: {}", fmt_set(comp));
    }
    for (i, part) in partition.parts.iter().enumerate() {
        let kind = match part.kind {
            PartKind::Star => "star",
            PartKind::CComponent => "c-component",
            PartKind::DComponent => "d-component",
        };
        let _ = writeln!(
            s,
            "part {i}: kind={kind} edges={} opt={}",
            part.edges.len(),
            identity.per_part[i]
        );
    }
    let sum = identity
        .per_part
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" + ");
    let _ = writeln!(
        s,
        "identity: {} = {} [{}]",
        identity.lhs,
        sum,
        if identity.holds() { "OK" } else { "VIOLATED" }
    );
    s
}

/// Exact expectation of the optimal matched-vertex count of the subgraph
/// induced by keeping each vertex independently with probability `p`,
/// computed by a full scan of all vertex subsets with rational arithmetic.
/// Guarded to 20 vertices.
pub fn exact_internal_expectation(g: &Graph, cap: usize, p: &BigRational) -> Result<BigRational> {
    let n = g.vertex_count();
    if n > 20 {
        return Err(Error::TooLarge(format!(
            "exact expectation scans 2^n subsets; limited to 20 vertices, got {n}"
        )));
    }
    if cap < 2 {
        return Err(Error::InvalidParameter(
            "cycle cap must be at least 2".into(),
        ));
    }
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::InvalidParameter(format!("probability {p} out of range")));
    }
    if n == 0 {
        return Ok(BigRational::zero());
    }

    // Optimal value for every subset in one pass: the lowest vertex of a
    // subset is either unmatched or covered by exactly one cycle through it.
    let cycles = g.enumerate_cycles(cap);
    let mut by_min: Vec<Vec<(u32, u8)>> = vec![Vec::new(); n];
    for c in &cycles {
        let mask = c
            .vertices()
            .iter()
            .fold(0u32, |m, &v| m | (1u32 << v));
        by_min[c.vertices()[0]].push((mask, c.len() as u8));
    }
    let full = (1u64 << n) as usize;
    let mut opt = vec![0u8; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let mut best = opt[mask & (mask - 1)];
        for &(cmask, clen) in &by_min[v] {
            let cmask = cmask as usize;
            if mask & cmask == cmask {
                best = best.max(clen + opt[mask ^ cmask]);
            }
        }
        opt[mask] = best;
    }

    // Group by subset size: the weight p^|S| (1-p)^(n-|S|) is shared.
    let mut sums = vec![0u64; n + 1];
    for (mask, &val) in opt.iter().enumerate() {
        sums[mask.count_ones() as usize] += val as u64;
    }
    let q = BigRational::one() - p;
    let mut expectation = BigRational::zero();
    let mut p_pow = BigRational::one();
    for (s, &total) in sums.iter().enumerate() {
        if total != 0 {
            let weight = &p_pow * q.pow((n - s) as i32);
            expectation += BigRational::from_integer(BigInt::from(total)) * weight;
        }
        p_pow = &p_pow * p;
    }
    Ok(expectation)
}

/// Exact expectation upper bound for graphs on `2t + 1` vertices whose
/// optimum misses at most one vertex, together with the `2tp` cap it stays
/// under for `p <= 1/2`. The bound is tight for complete graphs.
pub fn near_perfect_expectation(t: u32, p: f64) -> (f64, f64) {
    let odd = (2 * t + 1) as f64;
    let value = odd * p - 0.5 + 0.5 * (1.0 - 2.0 * p).powi(2 * t as i32 + 1);
    (value, 2.0 * t as f64 * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::UndirectedGraph;
    use num::ToPrimitive;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn demo_instance_decomposition() {
        let ug = generators::decomposition_demo().graph.to_undirected();
        let eg = edmonds_gallai(&ug);
        assert_eq!(eg.nu, 8);
        assert_eq!(eg.a.len(), 2);
        assert_eq!(eg.c.len(), 6);
        assert_eq!(eg.d_components.len(), 3);
        assert!(eg.d_components.iter().all(|c| c.len() == 3));
        // No edge joins C and D.
        for &(u, v) in ug.edges() {
            let in_c = |x: usize| eg.c.binary_search(&x).is_ok();
            let in_d = |x: usize| eg.d.binary_search(&x).is_ok();
            assert!(!(in_c(u) && in_d(v)) && !(in_c(v) && in_d(u)));
        }
    }

    #[test]
    fn demo_instance_partition_and_identity() {
        let ug = generators::decomposition_demo().graph.to_undirected();
        let eg = edmonds_gallai(&ug);
        let partition = build_partition(&ug, &eg);
        assert_eq!(partition.parts.len(), 7);
        let identity = check_partition_identity(&ug, &partition);
        assert!(identity.holds());
        assert_eq!(identity.lhs, 16);
        let mut sizes = identity.per_part.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 2, 2, 2, 4]);

        // Edge-disjoint cover of all edges.
        let mut all: Vec<(usize, usize)> = partition
            .parts
            .iter()
            .flat_map(|p| p.edges.iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, ug.edges());
    }

    #[test]
    fn single_edge_and_path() {
        let single = UndirectedGraph::new(2, &[(0, 1)]).unwrap();
        let eg = edmonds_gallai(&single);
        assert!(eg.d.is_empty());
        assert!(eg.a.is_empty());
        assert_eq!(eg.c, vec![0, 1]);

        let path = UndirectedGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let eg = edmonds_gallai(&path);
        assert_eq!(eg.d, vec![0, 2]);
        assert_eq!(eg.a, vec![1]);
        assert!(eg.c.is_empty());
    }

    #[test]
    fn single_triangle_partition() {
        let tri = UndirectedGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let eg = edmonds_gallai(&tri);
        assert_eq!(eg.d.len(), 3);
        let partition = build_partition(&tri, &eg);
        assert_eq!(partition.parts.len(), 1);
        assert_eq!(partition.parts[0].kind, PartKind::DComponent);
        assert_eq!(partition.parts[0].edges.len(), 3);
    }

    #[test]
    fn edgeless_graph_has_empty_partition() {
        let ug = UndirectedGraph::new(4, &[]).unwrap();
        let eg = edmonds_gallai(&ug);
        let partition = build_partition(&ug, &eg);
        assert!(partition.parts.is_empty());
    }

    #[test]
    fn factor_critical_components() {
        let mut state = 0xD15EA5E_u64;
        for _ in 0..60 {
            let ug = generators::random_graph(&mut state, 10).to_undirected();
            let eg = edmonds_gallai(&ug);
            for comp in &eg.d_components {
                assert_eq!(comp.len() % 2, 1, "factor-critical components are odd");
                let (sub, _) = ug.induced(comp);
                for v in 0..comp.len() {
                    let keep: Vec<usize> =
                        (0..comp.len()).filter(|&u| u != v).collect();
                    let (minus, _) = sub.induced(&keep);
                    assert_eq!(
                        matching_number(&minus),
                        (comp.len() - 1) / 2,
                        "deleting any vertex must leave a perfect matching"
                    );
                }
            }
        }
    }

    #[test]
    fn pinned_matching_sends_a_into_distinct_d_components() {
        let mut state = 0xA11CE_u64;
        for _ in 0..60 {
            let ug = generators::random_graph(&mut state, 10).to_undirected();
            let eg = edmonds_gallai(&ug);
            let mate = crate::solver::max_matching_blossom(&ug).to_mate(ug.vertex_count());
            let comp_of = |v: usize| {
                eg.d_components
                    .iter()
                    .position(|c| c.binary_search(&v).is_ok())
            };
            let mut used = std::collections::HashSet::new();
            for &av in &eg.a {
                let m = mate[av].expect("A-vertices are matched by every maximum matching");
                let comp = comp_of(m).expect("A-vertices are matched into D");
                assert!(used.insert(comp), "two A-vertices share a D-component");
            }
        }
    }

    #[test]
    fn identity_holds_on_random_corpus() {
        let mut checked = 0;
        for g in generators::random_corpus(0xC0FFEE, 200, 12) {
            let ug = g.to_undirected();
            let eg = edmonds_gallai(&ug);
            let partition = build_partition(&ug, &eg);
            let identity = check_partition_identity(&ug, &partition);
            assert!(identity.holds(), "identity failed on {:?}", ug.edges());
            // Cross-check per-part optima against exhaustive matching.
            for (part, &val) in partition.parts.iter().zip(&identity.per_part) {
                let g = part.to_graph(ug.vertex_count());
                let vertices: Vec<usize> = part
                    .edges
                    .iter()
                    .flat_map(|&(u, v)| [u, v])
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let (dense, _) = g.induced(&vertices);
                assert_eq!(val, 2 * crate::testutil::brute_nu(&dense));
            }
            checked += 1;
        }
        assert_eq!(checked, 200);
    }

    #[test]
    fn triangle_expectation_is_exact() {
        let tri = generators::two_cycle_triangle(1).unwrap();
        let e = exact_internal_expectation(&tri.graph, 2, &ratio(2, 3)).unwrap();
        assert_eq!(e, ratio(40, 27));
        assert!(e > ratio(4, 3), "expectation exceeds p times the optimum");

        let zero = exact_internal_expectation(&tri.graph, 2, &ratio(0, 1)).unwrap();
        assert_eq!(zero, BigRational::zero());

        let half = exact_internal_expectation(&tri.graph, 2, &ratio(1, 2)).unwrap();
        assert_eq!(half, ratio(1, 1));
    }

    #[test]
    fn expectation_guard_and_empty() {
        let big = Graph::new(21, &[], None).unwrap();
        assert!(matches!(
            exact_internal_expectation(&big, 2, &ratio(1, 2)),
            Err(Error::TooLarge(_))
        ));
        let empty = Graph::new(0, &[], None).unwrap();
        assert_eq!(
            exact_internal_expectation(&empty, 2, &ratio(1, 2)).unwrap(),
            BigRational::zero()
        );
    }

    #[test]
    fn near_perfect_bound_examples() {
        let (v, cap) = near_perfect_expectation(1, 0.5);
        assert!((v - 1.0).abs() < 1e-12);
        assert!((cap - 1.0).abs() < 1e-12);

        let (v, cap) = near_perfect_expectation(1, 2.0 / 3.0);
        assert!((v - 40.0 / 27.0).abs() < 1e-12);
        assert!((cap - 4.0 / 3.0).abs() < 1e-12);
        assert!(v > cap);

        let (v, cap) = near_perfect_expectation(2, 0.25);
        assert!((v - 49.0 / 64.0).abs() < 1e-12);
        assert!((cap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_perfect_bound_matches_exact_enumeration_on_cliques() {
        for t in 1..=3u32 {
            let n = 2 * t as usize + 1;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            let g = UndirectedGraph::new(n, &edges)
                .unwrap()
                .to_directed_two_cycles();
            for (num, den) in [(1i64, 10i64), (1, 4), (1, 2)] {
                let exact = exact_internal_expectation(&g, 2, &ratio(num, den)).unwrap();
                let p = num as f64 / den as f64;
                let (formula, cap) = near_perfect_expectation(t, p);
                let exact_f = exact.to_f64().unwrap();
                assert!((exact_f - formula).abs() < 1e-9, "t={t} p={p}");
                assert!(exact_f <= cap + 1e-9);
            }
        }
    }

    #[test]
    fn per_part_expectation_bound_on_demo_parts() {
        let ug = generators::decomposition_demo().graph.to_undirected();
        let eg = edmonds_gallai(&ug);
        let partition = build_partition(&ug, &eg);
        for part in &partition.parts {
            let host = part.to_graph(ug.vertex_count());
            let vertices: Vec<usize> = part
                .edges
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let (dense, _) = host.induced(&vertices);
            let directed = dense.to_directed_two_cycles();
            let opt = 2 * matching_number(&dense);
            for (num, den) in [(1i64, 10i64), (1, 4), (1, 2)] {
                let p = ratio(num, den);
                let e = exact_internal_expectation(&directed, 2, &p).unwrap();
                let bound = &p * BigRational::from_integer(BigInt::from(opt as i64));
                assert!(
                    e <= bound,
                    "part expectation exceeded p*opt: {:?}",
                    part.edges
                );
            }
        }
    }

    #[test]
    fn star_expectation_bound() {
        for leaves in 1..=6usize {
            let mut edges = Vec::new();
            for leaf in 1..=leaves {
                edges.push((0, leaf));
            }
            let star = UndirectedGraph::new(leaves + 1, &edges)
                .unwrap()
                .to_directed_two_cycles();
            for (num, den) in [(1i64, 10i64), (1, 4), (1, 2)] {
                let p = ratio(num, den);
                let e = exact_internal_expectation(&star, 2, &p).unwrap();
                let bound = ratio(2, 1) * &p;
                assert!(e <= bound, "star with {leaves} leaves at p={num}/{den}");
            }
        }
    }

    #[test]
    fn render_report_mentions_identity() {
        let ug = generators::decomposition_demo().graph.to_undirected();
        let eg = edmonds_gallai(&ug);
        let partition = build_partition(&ug, &eg);
        let identity = check_partition_identity(&ug, &partition);
        let text = render_report(&ug, &eg, &partition, &identity);
        assert!(text.contains("identity: 16 ="));
        assert!(text.contains("OK"));
    }
}
