mod common;

use common::{ks_distance, mean_and_se, tail_rate};
use voter_qsd::crw::*;
use voter_qsd::graph::{make_complete, make_complete_bipartite};
use voter_qsd::voter::{run_logged, sample_tau_replicas, transition_matrix_full, OpinionConfig};
use voter_qsd::{BipartiteSpec, Graph, RandomStream};

fn k31() -> Graph {
    make_complete_bipartite(BipartiteSpec::new(3, 1).unwrap())
}

fn sigma_times(g: &Graph, starts: &[u32], seed: u64, replicas: u64) -> Vec<u64> {
    sample_sigma_replicas(g, starts, 1_000_000, seed, 0..replicas)
        .unwrap()
        .into_iter()
        .map(|m| m.sigma_max.time().unwrap())
        .collect()
}

#[test]
fn two_walkers_on_triangle_meet_in_three_steps_on_average() {
    let g = make_complete(3).unwrap();
    let xs: Vec<f64> = sigma_times(&g, &[0, 1], 1, 200_000).into_iter().map(|t| t as f64).collect();
    let (mean, se) = mean_and_se(&xs);
    assert!((mean - 3.0).abs() < 3.0 * se, "{mean} ({se})");
}

#[test]
fn one_step_meeting_probability_on_complete_graph() {
    for n in [4usize, 5, 7] {
        let g = make_complete(n).unwrap();
        let trials = 200_000;
        let hits = sigma_times(&g, &[0, 1], n as u64, trials).into_iter().filter(|&t| t == 1).count();
        let p = 2.0 / (n * (n - 1)) as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        let freq = hits as f64 / trials as f64;
        assert!((freq - p).abs() < 4.0 * se, "n={n}: {freq} vs {p}");
    }
}

#[test]
fn exact_duality_on_star_with_four_opinions() {
    let g = k31();
    let full = transition_matrix_full(&g, 4).unwrap();
    let init = OpinionConfig::all_distinct(4);
    let mut start = vec![0.0; full.dim()];
    start[full.labels().iter().position(|c| *c == init).unwrap()] = 1.0;
    let tau = full.survival_curve(&start, 40);
    let coal = coalescent_chain(&g, &[0, 1, 2, 3]).unwrap();
    let mut e0 = vec![0.0; coal.dim()];
    e0[0] = 1.0;
    let sigma = coal.survival_curve(&e0, 40);
    for t in 0..=40 {
        assert!((tau[t] - sigma[t]).abs() < 1e-12, "t={t}: {} vs {}", tau[t], sigma[t]);
    }
}

#[test]
fn sigma_and_tau_have_the_same_law() {
    let g = k31();
    let taus: Vec<u64> = sample_tau_replicas(&g, &OpinionConfig::all_distinct(4), 1_000_000, 7, 0..1_000_000)
        .unwrap()
        .into_iter()
        .map(|t| t.absorbed().unwrap())
        .collect();
    let sigmas = sigma_times(&g, &[0, 1, 2, 3], 8, 1_000_000);
    let d = ks_distance(&taus, &sigmas);
    assert!(d < 0.01, "ks {d}");
}

#[test]
fn single_walker_is_a_lazy_walk() {
    let g = k31();
    let steps = 3;
    let trials = 200_000;
    let mut rng = RandomStream::new(13);
    let mut hits = [0u32; 4];
    for _ in 0..trials {
        let mut w = WalkerPositions::identity(4);
        for _ in 0..steps {
            w = crw_step(&g, &w, &mut rng);
        }
        hits[w.position[0] as usize] += 1;
    }
    let mut p = [1.0, 0.0, 0.0, 0.0];
    for _ in 0..steps {
        let mut next = [0.0; 4];
        for v in 0..4u32 {
            let nb = g.neighbors(v);
            next[v as usize] += p[v as usize] * 0.75;
            for &u in nb {
                next[u as usize] += p[v as usize] * 0.25 / nb.len() as f64;
            }
        }
        p = next;
    }
    for v in 0..4 {
        let freq = hits[v] as f64 / trials as f64;
        let se = (p[v] * (1.0 - p[v]) / trials as f64).sqrt();
        assert!((freq - p[v]).abs() <= 4.0 * se, "v={v}: {freq} vs {}", p[v]);
    }
}

#[test]
fn pair_meeting_tail_rate_is_lambda_crw() {
    let spec = BipartiteSpec::new(3, 1).unwrap();
    let g = make_complete_bipartite(spec);
    let lambda = lambda_crw_bipartite(3, 1).unwrap();
    let sig = sigma_times(&g, &[0, 1], 17, 200_000);
    let (rate, count) = tail_rate(&sig, 10);
    let se = lambda.sqrt() * (1.0 - lambda) / (count as f64).sqrt();
    assert!((rate - lambda).abs() < 4.0 * se, "{rate} vs {lambda}");
}

#[test]
fn backward_meeting_times_match_forward_ones() {
    let spec = BipartiteSpec::new(2, 2).unwrap();
    let g = make_complete_bipartite(spec);
    let horizon = 200;
    let init = OpinionConfig::all_distinct(4);
    let mut backward = Vec::new();
    for r in 0..100_000 {
        let (_, log) = run_logged(&g, &init, horizon, &mut RandomStream::substream(31, r)).unwrap();
        let paths = backward_trace(&g, &log).unwrap();
        backward.push(paths.meeting_time(0, 2).map_or(horizon as u64 + 1, |t| t as u64));
    }
    let forward: Vec<u64> = sigma_times(&g, &[0, 2], 32, 100_000)
        .into_iter()
        .map(|t| t.min(horizon as u64 + 1))
        .collect();
    let d = ks_distance(&backward, &forward);
    assert!(d < 0.02, "ks {d}");
}

#[test]
fn backward_trace_explains_recorded_runs() {
    for spec in [BipartiteSpec::new(2, 2).unwrap(), BipartiteSpec::new(3, 1).unwrap()] {
        let g = make_complete_bipartite(spec);
        let init = OpinionConfig::all_distinct(4);
        for r in 0..10_000 {
            let (last, log) = run_logged(&g, &init, 100, &mut RandomStream::substream(3, r)).unwrap();
            assert!(backward_trace(&g, &log).unwrap().explains(&init, &last));
        }
    }
}

#[test]
fn start_validation() {
    let g = k31();
    let mut rng = RandomStream::new(0);
    assert!(sample_sigma(&g, &[1], &mut rng, 10).is_err());
    assert!(sample_sigma(&g, &[1, 1], &mut rng, 10).is_err());
    assert!(sample_sigma(&g, &[1, 9], &mut rng, 10).is_err());
    assert!(coalescent_chain(&make_complete(9).unwrap(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]).is_err());
}
