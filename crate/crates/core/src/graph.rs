//! Finite connected simple graphs and the two families used throughout:
//! complete graphs `K_n` and complete bipartite graphs `K_{n,m}`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Immutable undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    Empty,
    OutOfRange,
    SelfLoop,
    DuplicateNeighbor,
    UnsortedAdjacency,
    AsymmetricEdge,
    IsolatedVertex,
    Disconnected,
}

impl Violation {
    pub fn as_str(self) -> &'static str {
        match self {
            Violation::Empty => "empty graph",
            Violation::OutOfRange => "neighbor id out of range",
            Violation::SelfLoop => "self-loop",
            Violation::DuplicateNeighbor => "duplicate neighbor",
            Violation::UnsortedAdjacency => "unsorted adjacency",
            Violation::AsymmetricEdge => "asymmetric edge",
            Violation::IsolatedVertex => "isolated vertex",
            Violation::Disconnected => "disconnected",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every invariant that `adjacency` breaks, each reported once, in a fixed
/// order.
pub fn validate_adjacency(adjacency: &[Vec<Vertex>]) -> Vec<Violation> {
    let n = adjacency.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Violation::Empty);
        return out;
    }
    let flag = |v: Violation, out: &mut Vec<Violation>| {
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for (v, nbrs) in adjacency.iter().enumerate() {
        if nbrs.is_empty() {
            flag(Violation::IsolatedVertex, &mut out);
        }
        for w in nbrs.windows(2) {
            if w[0] == w[1] {
                flag(Violation::DuplicateNeighbor, &mut out);
            } else if w[0] > w[1] {
                flag(Violation::UnsortedAdjacency, &mut out);
            }
        }
        for &u in nbrs {
            let u = u as usize;
            if u >= n {
                flag(Violation::OutOfRange, &mut out);
            } else if u == v {
                flag(Violation::SelfLoop, &mut out);
            } else if !adjacency[u].contains(&(v as Vertex)) {
                flag(Violation::AsymmetricEdge, &mut out);
            }
        }
    }
    // Connectivity over the undirected closure of the given arcs.
    let mut seen = vec![false; n];
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, nbrs) in adjacency.iter().enumerate() {
        for &u in nbrs {
            if (u as usize) < n {
                reverse[u as usize].push(v);
            }
        }
    }
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        let forward = adjacency[v].iter().map(|&u| u as usize);
        for u in forward.chain(reverse[v].iter().copied()) {
            if u < n && !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        flag(Violation::Disconnected, &mut out);
    }
    out
}

impl Graph {
    /// Builds a graph from adjacency lists, rejecting anything that is not a
    /// connected simple graph.
    pub fn from_adjacency(mut adjacency: Vec<Vec<Vertex>>) -> Result<Self> {
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        match validate_adjacency(&adjacency).first() {
            None => Ok(Self { adjacency }),
            Some(v) => Err(Error::InvalidGraph(v.as_str())),
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::InvalidGraph(Violation::OutOfRange.as_str()));
            }
            adjacency[u as usize].push(v);
            if u != v {
                adjacency[v as usize].push(u);
            }
        }
        Self::from_adjacency(adjacency)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| (u as Vertex) < v)
                .map(move |&v| (u as Vertex, v))
        })
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_adjacency(&self.adjacency)
    }
}

/// Sizes of the two sides of `K_{n,m}`: `n` in the large group `L`, `m` in
/// the small group `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteSpec {
    n: usize,
    m: usize,
}

impl BipartiteSpec {
    /// Accepts `m <= n` with `m >= 2`, or `m = 1` and `n >= 3`; below that the
    /// two-opinion chain off consensus is not irreducible.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let ok = m <= n && (m >= 2 || (m == 1 && n >= 3));
        if ok {
            Ok(Self { n, m })
        } else {
            Err(Error::InvalidBipartite { n, m })
        }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn m(self) -> usize {
        self.m
    }

    pub fn vertex_count(self) -> usize {
        self.n + self.m
    }

    /// `L` occupies ids `0..n`, `S` occupies `n..n+m`.
    pub fn in_large(self, v: Vertex) -> bool {
        (v as usize) < self.n
    }
}

pub fn make_complete_bipartite(spec: BipartiteSpec) -> Graph {
    let (n, m) = (spec.n, spec.m);
    let large: Vec<Vertex> = (0..n as Vertex).collect();
    let small: Vec<Vertex> = (n as Vertex..(n + m) as Vertex).collect();
    let mut adjacency = Vec::with_capacity(n + m);
    adjacency.extend((0..n).map(|_| small.clone()));
    adjacency.extend((0..m).map(|_| large.clone()));
    Graph { adjacency }
}

pub fn make_complete(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidComplete { n });
    }
    let adjacency = (0..n as Vertex)
        .map(|v| (0..n as Vertex).filter(|&u| u != v).collect())
        .collect();
    Ok(Graph { adjacency })
}
