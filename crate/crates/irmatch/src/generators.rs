//! Deterministic constructors for the benchmark instances used throughout
//! the experiments, each carrying its known optimal value.

use crate::graph::{Graph, UndirectedGraph, VertexId};
use crate::{Error, Result};

/// A benchmark graph with its associated cycle cap and known optimum.
///
/// `known_opt` is the matched-vertex count of a maximum cover under
/// `cycle_cap`, except for altruist chain instances where it is the length
/// of the longest chain from the altruist.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: String,
    pub graph: Graph,
    pub cycle_cap: usize,
    pub known_opt: usize,
    pub notes: String,
}

/// Seven vertices in three overlapping directed 3-cycles. The optimum
/// matches six vertices but leaves the owner of the middle cycle worse off
/// than matching internally, so individual rationality fails.
pub fn ir_failure() -> NamedInstance {
    let graph = Graph::new(
        7,
        &[
            (0, 1),
            (1, 4),
            (4, 0),
            (1, 2),
            (2, 5),
            (5, 1),
            (2, 3),
            (3, 6),
            (6, 2),
        ],
        None,
    )
    .expect("static instance");
    NamedInstance {
        name: "ir-failure".into(),
        graph,
        cycle_cap: 3,
        known_opt: 6,
        notes: "three overlapping 3-cycles; the optimum skips the middle cycle".into(),
    }
}

/// Seventeen-vertex undirected showcase (as directed 2-cycles) whose
/// structure decomposition yields two stars, two even components, and three
/// factor-critical triangles.
pub fn decomposition_demo() -> NamedInstance {
    // Ids: 0..5 even-component vertices, 6..7 star centers, 8..16 triangles.
    let undirected = [
        (0, 3),
        (1, 4),
        (2, 5),
        (1, 2),
        (4, 5),
        (6, 7),
        (6, 0),
        (6, 8),
        (6, 9),
        (7, 2),
        (7, 10),
        (7, 11),
        (8, 12),
        (8, 13),
        (12, 13),
        (9, 10),
        (10, 14),
        (14, 9),
        (11, 15),
        (11, 16),
        (15, 16),
    ];
    let graph = UndirectedGraph::new(17, &undirected)
        .expect("static instance")
        .to_directed_two_cycles();
    NamedInstance {
        name: "decomposition-demo".into(),
        graph,
        cycle_cap: 2,
        known_opt: 16,
        notes: "17 vertices, 21 undirected edges; one vertex is always exposed".into(),
    }
}

/// Forest of `n / log2(n)` stars, each a center joined to `log2(n) - 1`
/// leaves by 2-cycles. Requires `n` to be a power of two, `n >= 4`.
pub fn star_forest(n: usize) -> Result<NamedInstance> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "star forest needs a power-of-two n >= 4, got {n}"
        )));
    }
    let star_size = n.trailing_zeros() as usize;
    let stars = n / star_size;
    let mut edges = Vec::new();
    for s in 0..stars {
        let center = s * star_size;
        for leaf in center + 1..center + star_size {
            edges.push((center, leaf));
            edges.push((leaf, center));
        }
    }
    let graph = Graph::new(stars * star_size, &edges, None)?;
    Ok(NamedInstance {
        name: format!("star-forest-{n}"),
        graph,
        cycle_cap: 2,
        known_opt: 2 * stars,
        notes: format!("{stars} stars of {star_size} vertices; one 2-cycle matched per star"),
    })
}

/// Vertex ranges of the star forest layout.
#[derive(Clone, Copy, Debug)]
pub struct StarForestShape {
    star_size: usize,
    stars: usize,
}

pub fn star_forest_shape(n: usize) -> Result<StarForestShape> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "star forest needs a power-of-two n >= 4, got {n}"
        )));
    }
    let star_size = n.trailing_zeros() as usize;
    Ok(StarForestShape {
        star_size,
        stars: n / star_size,
    })
}

impl StarForestShape {
    pub fn star_count(&self) -> usize {
        self.stars
    }

    pub fn star_size(&self) -> usize {
        self.star_size
    }

    pub fn center(&self, star: usize) -> VertexId {
        star * self.star_size
    }

    pub fn leaves(&self, star: usize) -> std::ops::Range<VertexId> {
        star * self.star_size + 1..(star + 1) * self.star_size
    }
}

/// Four fully connected layers of `n/4` vertices each: any triple across the
/// first three layers forms a 3-cycle and any pair across the last two forms
/// a 2-cycle. Requires `n` divisible by 4.
pub fn layered(n: usize) -> Result<NamedInstance> {
    let shape = layered_shape(n)?;
    let q = n / 4;
    let mut edges = Vec::with_capacity(3 * q * q + 2 * q * q);
    for a in shape.layer_a() {
        for b in shape.layer_b() {
            edges.push((a, b));
        }
    }
    for b in shape.layer_b() {
        for c in shape.layer_c() {
            edges.push((b, c));
        }
    }
    for c in shape.layer_c() {
        for a in shape.layer_a() {
            edges.push((c, a));
        }
    }
    for c in shape.layer_c() {
        for d in shape.layer_d() {
            edges.push((c, d));
            edges.push((d, c));
        }
    }
    let graph = Graph::new(n, &edges, None)?;
    Ok(NamedInstance {
        name: format!("layered-{n}"),
        graph,
        cycle_cap: 3,
        known_opt: 3 * q,
        notes: format!("four layers of {q}; every cycle uses exactly one third-layer vertex"),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct LayeredShape {
    q: usize,
}

pub fn layered_shape(n: usize) -> Result<LayeredShape> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::InvalidParameter(format!(
            "layered instance needs n divisible by 4, got {n}"
        )));
    }
    Ok(LayeredShape { q: n / 4 })
}

impl LayeredShape {
    pub fn layer_size(&self) -> usize {
        self.q
    }

    pub fn layer_a(&self) -> std::ops::Range<VertexId> {
        0..self.q
    }

    pub fn layer_b(&self) -> std::ops::Range<VertexId> {
        self.q..2 * self.q
    }

    pub fn layer_c(&self) -> std::ops::Range<VertexId> {
        2 * self.q..3 * self.q
    }

    pub fn layer_d(&self) -> std::ops::Range<VertexId> {
        3 * self.q..4 * self.q
    }
}

/// Closed-form internal optimum for a player owning `(a, b, c, d)` vertices
/// per layer of the layered instance: take as many 3-cycles as the first two
/// layers allow, then 2-cycles between the remaining third-layer vertices
/// and the fourth layer.
pub fn layered_internal_opt(a: usize, b: usize, c: usize, d: usize) -> usize {
    let m = a.min(b).min(c);
    3 * m + 2 * (c - m).min(d)
}

/// Disjoint triangles whose sides are all 2-cycles.
pub fn two_cycle_triangle(copies: usize) -> Result<NamedInstance> {
    if copies == 0 {
        return Err(Error::InvalidParameter("copies must be at least 1".into()));
    }
    let one = UndirectedGraph::new(3, &[(0, 1), (1, 2), (0, 2)])
        .expect("static instance")
        .to_directed_two_cycles();
    let graph = one.disjoint_copies(copies)?;
    Ok(NamedInstance {
        name: if copies == 1 {
            "triangle".into()
        } else {
            format!("triangle-x{copies}")
        },
        graph,
        cycle_cap: 2,
        known_opt: 2 * copies,
        notes: "triangle of 2-cycles; only one pair can be matched per copy".into(),
    })
}

/// Five-vertex ring of 2-cycles. Contains no directed 3-cycles, so the
/// optimum is four matched vertices under either cap 2 or 3.
pub fn two_cycle_pentagon() -> NamedInstance {
    let graph = UndirectedGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        .expect("static instance")
        .to_directed_two_cycles();
    NamedInstance {
        name: "pentagon".into(),
        graph,
        cycle_cap: 3,
        known_opt: 4,
        notes: "ring of five 2-cycles; no chords, hence no directed 3-cycles".into(),
    }
}

/// Altruist chain network: an altruist, a path of `n/3` vertices, and
/// `2n/9` layers of three vertices with edges from every layer to all later
/// layers and from the altruist to everything. Acyclic; the optimum is the
/// chain of `n/3` vertices. Requires `n` divisible by 9.
pub fn long_chain(n: usize) -> Result<NamedInstance> {
    let shape = long_chain_shape(n)?;
    let mut edges = Vec::new();
    let d = shape.altruist();
    let chain = shape.chain_vertices();
    edges.push((d, chain.start));
    for v in chain.start..chain.end - 1 {
        edges.push((v, v + 1));
    }
    for layer in 0..shape.layer_count() {
        for v in shape.layer_vertices(layer) {
            edges.push((d, v));
        }
        for later in layer + 1..shape.layer_count() {
            for v in shape.layer_vertices(layer) {
                for w in shape.layer_vertices(later) {
                    edges.push((v, w));
                }
            }
        }
    }
    let graph = Graph::new(shape.vertex_count(), &edges, Some(d))?;
    Ok(NamedInstance {
        name: format!("long-chain-{n}"),
        graph,
        cycle_cap: 3,
        known_opt: n / 3,
        notes: format!(
            "altruist chain network: chain of {} plus {} layers of three",
            n / 3,
            shape.layer_count()
        ),
    })
}

/// Vertex layout of the long-chain instance: altruist 0, then the chain,
/// then the layers.
#[derive(Clone, Copy, Debug)]
pub struct LongChainShape {
    chain_len: usize,
    layers: usize,
}

pub fn long_chain_shape(n: usize) -> Result<LongChainShape> {
    if n < 9 || n % 9 != 0 {
        return Err(Error::InvalidParameter(format!(
            "long-chain instance needs n divisible by 9, got {n}"
        )));
    }
    Ok(LongChainShape {
        chain_len: n / 3,
        layers: 2 * n / 9,
    })
}

impl LongChainShape {
    pub fn altruist(&self) -> VertexId {
        0
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    pub fn chain_vertices(&self) -> std::ops::Range<VertexId> {
        1..1 + self.chain_len
    }

    pub fn layer_vertices(&self, layer: usize) -> std::ops::Range<VertexId> {
        let base = 1 + self.chain_len + 3 * layer;
        base..base + 3
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.chain_len + 3 * self.layers
    }
}

/// Disjoint union of `copies` copies of an instance.
pub fn disjoint_copies(inst: &NamedInstance, copies: usize) -> Result<NamedInstance> {
    let graph = inst.graph.disjoint_copies(copies)?;
    Ok(NamedInstance {
        name: if copies == 1 {
            inst.name.clone()
        } else {
            format!("{}-x{copies}", inst.name)
        },
        graph,
        cycle_cap: inst.cycle_cap,
        known_opt: inst.known_opt * copies,
        notes: inst.notes.clone(),
    })
}

/// Resolves a CLI instance name. `n` and `copies` apply where meaningful.
pub fn by_name(name: &str, n: Option<usize>, copies: Option<usize>) -> Result<NamedInstance> {
    let need_n = |what: &str| -> Result<usize> {
        n.ok_or_else(|| Error::InvalidParameter(format!("instance `{what}` requires --n")))
    };
    let base = match name {
        "ir-failure" => ir_failure(),
        "decomposition-demo" => decomposition_demo(),
        "star-forest" => star_forest(need_n("star-forest")?)?,
        "layered" => layered(need_n("layered")?)?,
        "triangle" => two_cycle_triangle(1)?,
        "pentagon" => two_cycle_pentagon(),
        "long-chain" => long_chain(need_n("long-chain")?)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown instance `{other}`; known: ir-failure, decomposition-demo, \
                 star-forest, layered, triangle, pentagon, long-chain"
            )))
        }
    };
    match copies {
        None | Some(1) => Ok(base),
        Some(c) => disjoint_copies(&base, c),
    }
}

/// Small Erdos-Renyi style graphs for internal oracle corpora. Deterministic
/// in `state`; density varies per draw so both sparse and cyclic graphs
/// appear.
pub fn random_graph(state: &mut u64, max_n: usize) -> Graph {
    let n = 2 + (xorshift(state) as usize) % (max_n - 1);
    let density = 0.15 + 0.35 * unit(state);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && unit(state) < density {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges, None).expect("random graph is valid")
}

pub fn random_corpus(seed: u64, count: usize, max_n: usize) -> Vec<Graph> {
    let mut state = seed | 1;
    (0..count).map(|_| random_graph(&mut state, max_n)).collect()
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

fn unit(state: &mut u64) -> f64 {
    (xorshift(state) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
