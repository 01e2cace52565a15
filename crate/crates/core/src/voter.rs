//! Forward simulation of the discrete-time voter model.
//!
//! Each step picks a voter uniformly from `V`, the voter picks a neighbor
//! uniformly, and the voter adopts the neighbor's opinion. Colorings where
//! everybody agrees are absorbing.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{BipartiteSpec, Graph, Vertex};
use crate::matrix::SubstochasticMatrix;
use crate::rng::RandomStream;

/// Upper bound on the number of colorings enumerated by the exact methods.
pub const MAX_ENUMERATED_STATES: usize = 1_000_000;

/// One opinion label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpinionConfig(pub Vec<u32>);

impl OpinionConfig {
    pub fn new(opinions: Vec<u32>) -> Self {
        Self(opinions)
    }

    pub fn uniform(len: usize, opinion: u32) -> Self {
        Self(vec![opinion; len])
    }

    /// Every vertex holds its own id as opinion.
    pub fn all_distinct(len: usize) -> Self {
        Self((0..len as u32).collect())
    }

    /// Everybody holds `0` except `dissenter`, who holds `1`.
    pub fn single_dissenter(len: usize, dissenter: Vertex) -> Self {
        let mut c = Self::uniform(len, 0);
        c.0[dissenter as usize] = 1;
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn opinions(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, v: Vertex) -> u32 {
        self.0[v as usize]
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::Mismatch("configuration length differs from vertex count"))
        }
    }
}

/// True iff all opinions agree. A configuration on zero vertices is an error:
/// graphs always have at least one vertex.
pub fn is_consensus(cfg: &OpinionConfig) -> Result<bool> {
    match cfg.0.split_first() {
        None => Err(Error::Domain("empty configuration")),
        Some((first, rest)) => Ok(rest.iter().all(|o| o == first)),
    }
}

/// `(voter, source)`: the voter adopted the source's opinion.
pub type Event = (Vertex, Vertex);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    pub events: Vec<Event>,
}

impl EventLog {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Every source is a neighbor of its voter in `g`.
    pub fn is_consistent_with(&self, g: &Graph) -> bool {
        let n = g.vertex_count() as Vertex;
        self.events
            .iter()
            .all(|&(v, u)| v < n && u < n && g.has_edge(v, u))
    }
}

pub fn sample_event(g: &Graph, rng: &mut RandomStream) -> Event {
    let voter = rng.index(g.vertex_count()) as Vertex;
    let nbrs = g.neighbors(voter);
    (voter, nbrs[rng.index(nbrs.len())])
}

/// One voter-model step; returns the new configuration and the sampled event.
pub fn step(g: &Graph, cfg: &OpinionConfig, rng: &mut RandomStream) -> (OpinionConfig, Event) {
    let mut next = cfg.clone();
    let event = step_in_place(g, &mut next, rng);
    (next, event)
}

pub fn step_in_place(g: &Graph, cfg: &mut OpinionConfig, rng: &mut RandomStream) -> Event {
    let (v, u) = sample_event(g, rng);
    cfg.0[v as usize] = cfg.0[u as usize];
    (v, u)
}

pub fn apply_event(cfg: &mut OpinionConfig, (v, u): Event) {
    cfg.0[v as usize] = cfg.0[u as usize];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tau {
    /// First consensus time; `0` when the initial state is a consensus.
    Absorbed(u64),
    /// No consensus within `cap` steps.
    Censored(u64),
}

impl Tau {
    pub fn absorbed(self) -> Option<u64> {
        match self {
            Tau::Absorbed(t) => Some(t),
            Tau::Censored(_) => None,
        }
    }

    /// Indicator of `tau > t`, exact for any `t` below the cap.
    pub fn exceeds(self, t: u64) -> bool {
        match self {
            Tau::Absorbed(tau) => tau > t,
            Tau::Censored(cap) => {
                debug_assert!(t < cap, "survival beyond the censoring cap is unknown");
                true
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorptionSample {
    pub tau: Tau,
    pub final_config: OpinionConfig,
}

/// Default censoring cap `50 |V|^2`.
pub fn default_cap(vertex_count: usize) -> u64 {
    50 * (vertex_count as u64).pow(2)
}

/// Dense relabeling of the opinions present in `cfg`, plus per-label counts.
struct LabelCounts {
    dense: Vec<u32>,
    counts: Vec<u32>,
    present: usize,
}

impl LabelCounts {
    fn new(cfg: &OpinionConfig) -> (Self, Vec<u32>) {
        let mut ids: BTreeMap<u32, u32> = BTreeMap::new();
        let mut labels = Vec::new();
        let dense: Vec<u32> = cfg
            .0
            .iter()
            .map(|&o| {
                *ids.entry(o).or_insert_with(|| {
                    labels.push(o);
                    labels.len() as u32 - 1
                })
            })
            .collect();
        let mut counts = vec![0u32; labels.len()];
        for &d in &dense {
            counts[d as usize] += 1;
        }
        let present = labels.len();
        (
            Self {
                dense,
                counts,
                present,
            },
            labels,
        )
    }

    /// Applies `(v, u)`; returns true once one label remains.
    fn apply(&mut self, (v, u): Event) -> bool {
        let old = self.dense[v as usize];
        let new = self.dense[u as usize];
        if old != new {
            self.dense[v as usize] = new;
            self.counts[old as usize] -= 1;
            if self.counts[old as usize] == 0 {
                self.present -= 1;
            }
            self.counts[new as usize] += 1;
        }
        self.present == 1
    }
}

/// Runs until the first consensus or `cap` steps.
pub fn sample_tau(
    g: &Graph,
    init: &OpinionConfig,
    rng: &mut RandomStream,
    cap: u64,
) -> Result<AbsorptionSample> {
    init.check(g)?;
    if cap == 0 {
        return Err(Error::Domain("cap must be at least 1"));
    }
    let (mut state, labels) = LabelCounts::new(init);
    let finish = |state: &LabelCounts| {
        OpinionConfig(state.dense.iter().map(|&d| labels[d as usize]).collect())
    };
    if state.present == 1 {
        return Ok(AbsorptionSample {
            tau: Tau::Absorbed(0),
            final_config: init.clone(),
        });
    }
    for t in 1..=cap {
        if state.apply(sample_event(g, rng)) {
            return Ok(AbsorptionSample {
                tau: Tau::Absorbed(t),
                final_config: finish(&state),
            });
        }
    }
    Ok(AbsorptionSample {
        tau: Tau::Censored(cap),
        final_config: finish(&state),
    })
}

/// Absorption times of replicas `range`, replica `r` drawing from substream
/// `r` of `seed`.
pub fn sample_tau_replicas(
    g: &Graph,
    init: &OpinionConfig,
    cap: u64,
    seed: u64,
    range: Range<u64>,
) -> Result<Vec<Tau>> {
    init.check(g)?;
    range
        .map(|r| {
            let mut rng = RandomStream::substream(seed, r);
            sample_tau(g, init, &mut rng, cap).map(|s| s.tau)
        })
        .collect()
}

/// Runs exactly `horizon` steps, keeping every intermediate configuration.
pub fn run_recorded(
    g: &Graph,
    init: &OpinionConfig,
    horizon: usize,
    rng: &mut RandomStream,
) -> Result<(Vec<OpinionConfig>, EventLog)> {
    init.check(g)?;
    let mut configs = Vec::with_capacity(horizon + 1);
    let mut events = Vec::with_capacity(horizon);
    let mut cur = init.clone();
    configs.push(cur.clone());
    for _ in 0..horizon {
        events.push(step_in_place(g, &mut cur, rng));
        configs.push(cur.clone());
    }
    Ok((configs, EventLog { events }))
}

/// Like [`run_recorded`] but keeps only the final configuration.
pub fn run_logged(
    g: &Graph,
    init: &OpinionConfig,
    horizon: usize,
    rng: &mut RandomStream,
) -> Result<(OpinionConfig, EventLog)> {
    init.check(g)?;
    let mut cur = init.clone();
    let events = (0..horizon)
        .map(|_| step_in_place(g, &mut cur, rng))
        .collect();
    Ok((cur, EventLog { events }))
}

/// Deterministic replay of a log from `init`.
pub fn replay(init: &OpinionConfig, log: &EventLog) -> Vec<OpinionConfig> {
    let mut cur = init.clone();
    let mut out = Vec::with_capacity(log.len() + 1);
    out.push(cur.clone());
    for &e in &log.events {
        apply_event(&mut cur, e);
        out.push(cur.clone());
    }
    out
}

/// Empirical law of `eta_t` given `tau > t`, by plain rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionalEmpirical {
    Survivors {
        counts: BTreeMap<OpinionConfig, u64>,
        survivors: u64,
        replicas: u64,
    },
    /// Every replica was absorbed by time `t`; retry with more replicas or
    /// a smaller `t`.
    NoSurvivors { replicas: u64 },
}

impl ConditionalEmpirical {
    pub fn survivors(&self) -> u64 {
        match self {
            ConditionalEmpirical::Survivors { survivors, .. } => *survivors,
            ConditionalEmpirical::NoSurvivors { .. } => 0,
        }
    }

    pub fn replicas(&self) -> u64 {
        match self {
            ConditionalEmpirical::Survivors { replicas, .. }
            | ConditionalEmpirical::NoSurvivors { replicas } => *replicas,
        }
    }

    pub fn counts(&self) -> Option<&BTreeMap<OpinionConfig, u64>> {
        match self {
            ConditionalEmpirical::Survivors { counts, .. } => Some(counts),
            ConditionalEmpirical::NoSurvivors { .. } => None,
        }
    }

    pub fn from_counts(counts: BTreeMap<OpinionConfig, u64>, replicas: u64) -> Self {
        let survivors = counts.values().sum();
        if survivors == 0 {
            ConditionalEmpirical::NoSurvivors { replicas }
        } else {
            ConditionalEmpirical::Survivors {
                counts,
                survivors,
                replicas,
            }
        }
    }

    /// Adds another batch's counts; merging is order independent.
    pub fn merge(self, other: Self) -> Self {
        let replicas = self.replicas() + other.replicas();
        let mut counts = match self {
            ConditionalEmpirical::Survivors { counts, .. } => counts,
            ConditionalEmpirical::NoSurvivors { .. } => BTreeMap::new(),
        };
        if let ConditionalEmpirical::Survivors { counts: more, .. } = other {
            for (cfg, c) in more {
                *counts.entry(cfg).or_insert(0) += c;
            }
        }
        Self::from_counts(counts, replicas)
    }
}

/// One replica: `Some(eta_t)` if it survives to `t`, else `None`.
pub fn conditional_replica(
    g: &Graph,
    init: &OpinionConfig,
    t: u64,
    rng: &mut RandomStream,
) -> Option<OpinionConfig> {
    let (mut state, labels) = LabelCounts::new(init);
    if state.present == 1 {
        return None;
    }
    for _ in 0..t {
        if state.apply(sample_event(g, rng)) {
            return None;
        }
    }
    Some(OpinionConfig(
        state.dense.iter().map(|&d| labels[d as usize]).collect(),
    ))
}

pub fn conditional_empirical_range(
    g: &Graph,
    init: &OpinionConfig,
    t: u64,
    seed: u64,
    range: Range<u64>,
) -> Result<ConditionalEmpirical> {
    init.check(g)?;
    if is_consensus(init)? {
        return Err(Error::Domain("initial configuration is a consensus"));
    }
    let replicas = range.end.saturating_sub(range.start);
    let mut counts = BTreeMap::new();
    for r in range {
        let mut rng = RandomStream::substream(seed, r);
        if let Some(cfg) = conditional_replica(g, init, t, &mut rng) {
            *counts.entry(cfg).or_insert(0u64) += 1;
        }
    }
    Ok(ConditionalEmpirical::from_counts(counts, replicas))
}

/// Rejection-sampled law of `eta_t` conditioned on `tau > t` over
/// `replicas` independent runs from `init`.
pub fn conditional_empirical(
    g: &Graph,
    init: &OpinionConfig,
    t: u64,
    replicas: u64,
    seed: u64,
) -> Result<ConditionalEmpirical> {
    if replicas == 0 {
        return Err(Error::Domain("replicas must be positive"));
    }
    conditional_empirical_range(g, init, t, seed, 0..replicas)
}

/// Colorings of `V` with `q` opinions encoded in base `q`, vertex 0 least
/// significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringCodec {
    vertices: usize,
    opinions: u32,
    total: u64,
    repunit: u64,
}

impl ColoringCodec {
    pub fn new(vertices: usize, opinions: u32) -> Result<Self> {
        if opinions == 0 {
            return Err(Error::Domain("need at least one opinion"));
        }
        let total = (opinions as u128).checked_pow(vertices as u32).unwrap_or(u128::MAX);
        if total > MAX_ENUMERATED_STATES as u128 {
            return Err(Error::StateSpaceTooLarge {
                states: total,
                limit: MAX_ENUMERATED_STATES,
            });
        }
        let q = opinions as u64;
        let repunit = (0..vertices).fold(0u64, |acc, _| acc * q + 1);
        Ok(Self {
            vertices,
            opinions,
            total: total as u64,
            repunit,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of non-consensus colorings.
    pub fn transient_count(&self) -> usize {
        (self.total - self.opinions as u64) as usize
    }

    pub fn encode(&self, cfg: &OpinionConfig) -> u64 {
        cfg.0
            .iter()
            .rev()
            .fold(0u64, |acc, &o| acc * self.opinions as u64 + o as u64)
    }

    pub fn decode(&self, mut code: u64) -> OpinionConfig {
        let q = self.opinions as u64;
        OpinionConfig(
            (0..self.vertices)
                .map(|_| {
                    let o = (code % q) as u32;
                    code /= q;
                    o
                })
                .collect(),
        )
    }

    pub fn is_consensus_code(&self, code: u64) -> bool {
        code.is_multiple_of(self.repunit)
    }

    /// Dense index among non-consensus codes; consensus codes are `c * repunit`.
    pub fn transient_index(&self, code: u64) -> usize {
        debug_assert!(!self.is_consensus_code(code));
        (code - code.div_ceil(self.repunit)) as usize
    }
}

/// Exact voter kernel restricted to non-consensus colorings with
/// `num_opinions` labels, rows and columns in increasing code order.
pub fn transition_matrix_full(
    g: &Graph,
    num_opinions: u32,
) -> Result<SubstochasticMatrix<OpinionConfig>> {
    let codec = ColoringCodec::new(g.vertex_count(), num_opinions)?;
    if num_opinions < 2 {
        return Err(Error::Domain("need at least two opinions for transient states"));
    }
    let nv = g.vertex_count();
    let q = num_opinions as u64;
    let powers: Vec<u64> = (0..nv).map(|v| q.pow(v as u32)).collect();
    let mut labels = Vec::with_capacity(codec.transient_count());
    let mut entries = Vec::new();
    for code in (0..codec.total()).filter(|&c| !codec.is_consensus_code(c)) {
        let cfg = codec.decode(code);
        let row = codec.transient_index(code) as u32;
        for v in 0..nv as Vertex {
            let nbrs = g.neighbors(v);
            let p = 1.0 / (nv as f64 * nbrs.len() as f64);
            let old = cfg.0[v as usize] as u64;
            for &u in nbrs {
                let new = cfg.0[u as usize] as u64;
                let next = code - old * powers[v as usize] + new * powers[v as usize];
                if !codec.is_consensus_code(next) {
                    entries.push((row, codec.transient_index(next) as u32, p));
                }
            }
        }
        labels.push(cfg);
    }
    SubstochasticMatrix::from_triplets(labels, entries)
}

/// `(k, h)`: number of opinion-1 vertices in `L` and in `S`.
pub fn collapse_bipartite(spec: BipartiteSpec, cfg: &OpinionConfig) -> (usize, usize) {
    let (large, small) = cfg.0.split_at(spec.n());
    (
        large.iter().filter(|&&o| o == 1).count(),
        small.iter().filter(|&&o| o == 1).count(),
    )
}
