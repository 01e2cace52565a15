//! Coalescing random walks, the time-reversed dual of the voter model.
//!
//! Reading a recorded voter run backwards, a vertex's opinion at time `T`
//! was copied along a chain of `(voter, source)` events; following those
//! arrows from `(v, 0)` in reversed time gives a lazy random walk
//! `X^T(v)` that stays put with probability `1 - 1/|V|`. Walks that meet
//! move together afterwards, and the consensus time from all-distinct
//! opinions has the law of the time `sigma` at which all walks have met.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{BipartiteSpec, Graph, Vertex};
use crate::matrix::SubstochasticMatrix;
use crate::rng::RandomStream;
use crate::sibuya::gamma_from_nm;
use crate::voter::{sample_event, EventLog, OpinionConfig, MAX_ENUMERATED_STATES};

/// Largest walker count accepted by [`coalescent_chain`].
pub const MAX_COALESCENT_WALKERS: usize = 8;

/// Current vertex of the walker started at each start vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WalkerPositions {
    pub position: Vec<Vertex>,
}

impl WalkerPositions {
    /// One walker on every vertex, `Y_0(v) = v`.
    pub fn identity(vertex_count: usize) -> Self {
        Self {
            position: (0..vertex_count as Vertex).collect(),
        }
    }

    pub fn distinct_positions(&self) -> usize {
        let mut p = self.position.clone();
        p.sort_unstable();
        p.dedup();
        p.len()
    }

    pub fn coalesced(&self) -> bool {
        self.position.windows(2).all(|w| w[0] == w[1])
    }

    fn apply(&mut self, (v, u): (Vertex, Vertex)) {
        for p in &mut self.position {
            if *p == v {
                *p = u;
            }
        }
    }
}

/// Samples a vertex `v` and a neighbor `u`; every walker on `v` jumps to `u`.
pub fn crw_step(g: &Graph, w: &WalkerPositions, rng: &mut RandomStream) -> WalkerPositions {
    let mut next = w.clone();
    next.apply(sample_event(g, rng));
    next
}

/// Paths `X^T(v)`, `v in V`, stored row-major with `T + 1` entries each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardPaths {
    horizon: usize,
    flat: Vec<Vertex>,
}

impl BackwardPaths {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn vertex_count(&self) -> usize {
        self.flat.len() / (self.horizon + 1)
    }

    pub fn path(&self, v: Vertex) -> &[Vertex] {
        let len = self.horizon + 1;
        &self.flat[v as usize * len..(v as usize + 1) * len]
    }

    /// `X_T^T(v)`: whose time-0 opinion `v` holds at time `T`.
    pub fn endpoint(&self, v: Vertex) -> Vertex {
        *self.path(v).last().unwrap()
    }

    /// `sigma^T_{v,v'}`: first reversed time the two paths coincide.
    pub fn meeting_time(&self, v: Vertex, w: Vertex) -> Option<usize> {
        self.path(v).iter().zip(self.path(w)).position(|(a, b)| a == b)
    }

    /// Checks `eta_T(v) = eta_0(X_T^T(v))` for every `v`.
    pub fn explains(&self, initial: &OpinionConfig, last: &OpinionConfig) -> bool {
        (0..self.vertex_count() as Vertex).all(|v| last.get(v) == initial.get(self.endpoint(v)))
    }
}

/// Follows the arrows of a recorded run backwards from every `(v, 0)`: at
/// reversed time `n` the walker jumps to the source of event `T - n` if it
/// sits on that event's voter, and stays otherwise.
pub fn backward_trace(g: &Graph, log: &EventLog) -> Result<BackwardPaths> {
    if !log.is_consistent_with(g) {
        return Err(Error::Mismatch("event log does not match the graph"));
    }
    let horizon = log.len();
    let nv = g.vertex_count();
    let mut flat = Vec::with_capacity(nv * (horizon + 1));
    for v in 0..nv as Vertex {
        let mut x = v;
        flat.push(x);
        for &(voter, source) in log.events.iter().rev() {
            if x == voter {
                x = source;
            }
            flat.push(x);
        }
    }
    Ok(BackwardPaths { horizon, flat })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Meeting {
    At(u64),
    /// Not met within the cap.
    Censored(u64),
}

impl Meeting {
    pub fn time(self) -> Option<u64> {
        match self {
            Meeting::At(t) => Some(t),
            Meeting::Censored(_) => None,
        }
    }

    pub fn exceeds(self, t: u64) -> bool {
        match self {
            Meeting::At(s) => s > t,
            Meeting::Censored(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetingTimes {
    /// `sigma_{v,v'}` keyed by `(v, v')` with `v < v'`.
    pub sigma_pair: BTreeMap<(Vertex, Vertex), Meeting>,
    /// `sigma = max sigma_{v,v'}`.
    pub sigma_max: Meeting,
}

/// Runs coalescing walks from `Y_0(v) = v`, `v in starts`, until all have
/// met or `cap` steps elapse.
pub fn sample_sigma(
    g: &Graph,
    starts: &[Vertex],
    rng: &mut RandomStream,
    cap: u64,
) -> Result<MeetingTimes> {
    check_starts(g, starts)?;
    let mut walkers = WalkerPositions {
        position: starts.to_vec(),
    };
    let w = starts.len();
    let mut open: Vec<(usize, usize)> = (0..w)
        .flat_map(|i| (i + 1..w).map(move |j| (i, j)))
        .collect();
    let mut sigma_pair = BTreeMap::new();
    let key = |i: usize, j: usize| {
        let (a, b) = (starts[i], starts[j]);
        (a.min(b), a.max(b))
    };
    let mut t = 0;
    while !open.is_empty() && t < cap {
        t += 1;
        walkers.apply(sample_event(g, rng));
        open.retain(|&(i, j)| {
            if walkers.position[i] == walkers.position[j] {
                sigma_pair.insert(key(i, j), Meeting::At(t));
                false
            } else {
                true
            }
        });
    }
    for &(i, j) in &open {
        sigma_pair.insert(key(i, j), Meeting::Censored(cap));
    }
    let sigma_max = if open.is_empty() {
        Meeting::At(t)
    } else {
        Meeting::Censored(cap)
    };
    Ok(MeetingTimes {
        sigma_pair,
        sigma_max,
    })
}

fn check_starts(g: &Graph, starts: &[Vertex]) -> Result<()> {
    if starts.len() < 2 {
        return Err(Error::Domain("need at least two walkers"));
    }
    if starts.iter().any(|&v| v as usize >= g.vertex_count()) {
        return Err(Error::Mismatch("start vertex out of range"));
    }
    let mut sorted = starts.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("start vertices must be distinct"));
    }
    Ok(())
}

/// `sigma_max` for replicas `range`, replica `r` on substream `r` of `seed`.
pub fn sample_sigma_replicas(
    g: &Graph,
    starts: &[Vertex],
    cap: u64,
    seed: u64,
    range: Range<u64>,
) -> Result<Vec<MeetingTimes>> {
    check_starts(g, starts)?;
    range
        .map(|r| sample_sigma(g, starts, &mut RandomStream::substream(seed, r), cap))
        .collect()
}

/// Two-walker chain on unordered distinct pairs, killed when the walkers
/// meet. Its spectral radius is `lambda_CRW(G)`.
pub fn pair_chain_matrix(g: &Graph) -> Result<SubstochasticMatrix<(Vertex, Vertex)>> {
    let nv = g.vertex_count();
    let pairs = nv * nv.saturating_sub(1) / 2;
    if pairs > MAX_ENUMERATED_STATES {
        return Err(Error::StateSpaceTooLarge {
            states: pairs as u128,
            limit: MAX_ENUMERATED_STATES,
        });
    }
    if nv < 2 {
        return Err(Error::Domain("pair chain needs two vertices"));
    }
    // (a, b) with a < b maps to a row-major index over the upper triangle.
    let index = |a: usize, b: usize| a * (2 * nv - a - 1) / 2 + (b - a - 1);
    let mut labels = Vec::with_capacity(pairs);
    let mut entries = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            let row = index(a, b) as u32;
            labels.push((a as Vertex, b as Vertex));
            let mut stay = 0.0;
            for x in 0..nv {
                let nbrs = g.neighbors(x as Vertex);
                let p = 1.0 / (nv as f64 * nbrs.len() as f64);
                if x != a && x != b {
                    stay += p * nbrs.len() as f64;
                    continue;
                }
                let other = if x == a { b } else { a };
                for &u in nbrs {
                    let u = u as usize;
                    if u != other {
                        entries.push((row, index(u.min(other), u.max(other)) as u32, p));
                    }
                }
            }
            entries.push((row, row, stay));
        }
    }
    SubstochasticMatrix::from_triplets(labels, entries)
}

/// Where the two walkers of a pair sit on `K_{n,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairClass {
    BothLarge,
    BothSmall,
    Split,
}

/// The pair chain of `K_{n,m}` lumped by [`PairClass`]. For `m = 1` two
/// walkers never sit apart in `S`, so that class is dropped.
pub fn bipartite_pair_chain(spec: BipartiteSpec) -> SubstochasticMatrix<PairClass> {
    let (n, m) = (spec.n() as f64, spec.m() as f64);
    let total = n + m;
    let stay = (total - 2.0) / total;
    let cross = 2.0 / total;
    let to_large = (n - 1.0) / n / total;
    let to_small = (m - 1.0) / m / total;
    let (labels, entries) = if spec.m() == 1 {
        (
            vec![PairClass::BothLarge, PairClass::Split],
            vec![(0, 0, stay), (0, 1, cross), (1, 0, to_large), (1, 1, stay)],
        )
    } else {
        (
            vec![PairClass::BothLarge, PairClass::BothSmall, PairClass::Split],
            vec![
                (0, 0, stay),
                (0, 2, cross),
                (1, 1, stay),
                (1, 2, cross),
                (2, 0, to_large),
                (2, 1, to_small),
                (2, 2, stay),
            ],
        )
    };
    SubstochasticMatrix::from_triplets(labels, entries)
        .expect("lumped pair chain is substochastic")
}

pub fn pair_class(spec: BipartiteSpec, (a, b): (Vertex, Vertex)) -> PairClass {
    match (spec.in_large(a), spec.in_large(b)) {
        (true, true) => PairClass::BothLarge,
        (false, false) => PairClass::BothSmall,
        _ => PairClass::Split,
    }
}

/// `lambda_CRW(K_{n,m}) = 1 - gamma_{n,m} / (n + m)`.
pub fn lambda_crw_bipartite(n: usize, m: usize) -> Result<f64> {
    let gamma = gamma_from_nm(n, m)?;
    Ok(1.0 - gamma / (n + m) as f64)
}

/// Exact chain of all walker positions started from `starts`, restricted to
/// states reachable before full coalescence. Row 0 is the start state, so
/// `P(sigma > t)` is the mass of `e_0 S^t`.
pub fn coalescent_chain(
    g: &Graph,
    starts: &[Vertex],
) -> Result<SubstochasticMatrix<WalkerPositions>> {
    check_starts(g, starts)?;
    if starts.len() > MAX_COALESCENT_WALKERS {
        return Err(Error::StateSpaceTooLarge {
            states: (g.vertex_count() as u128).pow(starts.len() as u32),
            limit: MAX_ENUMERATED_STATES,
        });
    }
    let nv = g.vertex_count();
    let start = WalkerPositions {
        position: starts.to_vec(),
    };
    let mut index: BTreeMap<WalkerPositions, u32> = BTreeMap::new();
    let mut labels = vec![start.clone()];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0u32]);
    let mut entries = Vec::new();
    while let Some(row) = queue.pop_front() {
        let state = labels[row as usize].clone();
        for x in 0..nv as Vertex {
            let nbrs = g.neighbors(x);
            let p = 1.0 / (nv as f64 * nbrs.len() as f64);
            for &u in nbrs {
                let mut next = state.clone();
                next.apply((x, u));
                if next.coalesced() {
                    continue;
                }
                let col = match index.get(&next) {
                    Some(&c) => c,
                    None => {
                        let c = labels.len() as u32;
                        if c as usize >= MAX_ENUMERATED_STATES {
                            return Err(Error::StateSpaceTooLarge {
                                states: c as u128 + 1,
                                limit: MAX_ENUMERATED_STATES,
                            });
                        }
                        index.insert(next.clone(), c);
                        labels.push(next);
                        queue.push_back(c);
                        c
                    }
                };
                entries.push((row, col, p));
            }
        }
    }
    SubstochasticMatrix::from_triplets(labels, entries)
}
