//! Replica-parallel drivers. Replicas are cut into fixed-size chunks, each chunk
//! runs on `rayon`, and results are concatenated or merged in chunk order, so
//! output depends only on the seed and never on the thread count.

use std::ops::Range;

use rayon::prelude::*;
use voter_qsd::crw::{backward_trace, sample_sigma_replicas, MeetingTimes};
use voter_qsd::voter::{
    conditional_empirical_range, run_logged, sample_tau_replicas, ConditionalEmpirical,
    OpinionConfig, Tau,
};
use voter_qsd::{Graph, RandomStream, Result};

pub const CHUNK: u64 = 4096;

fn chunks(replicas: u64) -> Vec<Range<u64>> {
    (0..replicas.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(replicas))
        .collect()
}

fn concat<T: Send>(
    replicas: u64,
    f: impl Fn(Range<u64>) -> Result<Vec<T>> + Sync + Send,
) -> Result<Vec<T>> {
    let parts: Result<Vec<Vec<T>>> = chunks(replicas).into_par_iter().map(&f).collect();
    Ok(parts?.into_iter().flatten().collect())
}

pub fn taus(g: &Graph, init: &OpinionConfig, cap: u64, seed: u64, replicas: u64) -> Result<Vec<Tau>> {
    concat(replicas, |r| sample_tau_replicas(g, init, cap, seed, r))
}

pub fn sigmas(
    g: &Graph,
    starts: &[u32],
    cap: u64,
    seed: u64,
    replicas: u64,
) -> Result<Vec<MeetingTimes>> {
    concat(replicas, |r| sample_sigma_replicas(g, starts, cap, seed, r))
}

pub fn conditional(
    g: &Graph,
    init: &OpinionConfig,
    t: u64,
    seed: u64,
    replicas: u64,
) -> Result<ConditionalEmpirical> {
    let parts: Result<Vec<ConditionalEmpirical>> = chunks(replicas)
        .into_par_iter()
        .map(|r| conditional_empirical_range(g, init, t, seed, r))
        .collect();
    Ok(parts?
        .into_iter()
        .reduce(ConditionalEmpirical::merge)
        .unwrap_or(ConditionalEmpirical::NoSurvivors { replicas: 0 }))
}

/// Outcome of checking `eta_T(v) = eta_0(X_T^T(v))` on recorded runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceTally {
    pub runs: u64,
    pub explained: u64,
}

/// Records `replicas` runs of `horizon` steps (run `r` on substream `r`) and
/// counts those whose final configuration the backward paths reproduce.
pub fn backward_identity(
    g: &Graph,
    init: &OpinionConfig,
    horizon: usize,
    seed: u64,
    replicas: u64,
) -> Result<TraceTally> {
    let counts = concat(replicas, |range| {
        let mut ok = 0u64;
        let runs = range.end - range.start;
        for r in range {
            let (last, log) = run_logged(g, init, horizon, &mut RandomStream::substream(seed, r))?;
            if backward_trace(g, &log)?.explains(init, &last) {
                ok += 1;
            }
        }
        Ok(vec![(runs, ok)])
    })?;
    Ok(counts.into_iter().fold(TraceTally { runs: 0, explained: 0 }, |t, (r, e)| TraceTally {
        runs: t.runs + r,
        explained: t.explained + e,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use voter_qsd::graph::make_complete_bipartite;
    use voter_qsd::BipartiteSpec;

    #[test]
    fn chunked_runs_match_serial_ones() {
        let g = make_complete_bipartite(BipartiteSpec::new(3, 1).unwrap());
        let init = OpinionConfig::all_distinct(4);
        let n = 2 * CHUNK + 17;
        assert_eq!(taus(&g, &init, 10_000, 5, n).unwrap(), sample_tau_replicas(&g, &init, 10_000, 5, 0..n).unwrap());
        assert_eq!(
            conditional(&g, &init, 4, 5, n).unwrap(),
            conditional_empirical_range(&g, &init, 4, 5, 0..n).unwrap()
        );
        let tally = backward_identity(&g, &init, 30, 1, n).unwrap();
        assert_eq!(tally, TraceTally { runs: n, explained: n });
        assert!(chunks(0).is_empty());
    }
}
