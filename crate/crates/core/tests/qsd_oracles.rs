mod common;

use voter_qsd::crw::{bipartite_pair_chain, lambda_crw_bipartite, pair_chain_matrix};
use voter_qsd::graph::{make_complete, make_complete_bipartite};
use voter_qsd::qsd::*;
use voter_qsd::sibuya::Sibuya;
use voter_qsd::BipartiteSpec;

fn spec(n: usize, m: usize) -> BipartiteSpec {
    BipartiteSpec::new(n, m).unwrap()
}

#[test]
fn three_routes_to_lambda() {
    for (n, m) in [(3, 1), (4, 1), (5, 1), (2, 2), (3, 2), (4, 2), (6, 3), (8, 4)] {
        let closed = lambda_crw_bipartite(n, m).unwrap();
        let collapsed = solve_collapsed(spec(n, m), PowerOptions::default()).unwrap();
        let pair = spectral_radius(&pair_chain_matrix(&make_complete_bipartite(spec(n, m))).unwrap())
            .unwrap();
        let lumped = spectral_radius(&bipartite_pair_chain(spec(n, m))).unwrap();
        for (name, value) in [("collapsed", collapsed.lambda()), ("pair", pair), ("lumped", lumped)] {
            assert!((value - closed).abs() < 1e-10, "({n},{m}) {name}: {value} vs {closed}");
        }
    }
    let q = solve_collapsed(spec(4, 2), PowerOptions::default()).unwrap();
    assert!((q.lambda() - 0.9301898).abs() < 1e-7);
}

#[test]
fn star_recurrence_against_power_iteration() {
    for n in 3..=50 {
        let star = solve_star_recurrence(n).unwrap();
        let q = solve_collapsed(spec(n, 1), PowerOptions::default()).unwrap();
        for k in 1..n {
            for h in 0..=1 {
                let diff = (star.mass(k, h) - q.mass(k, h)).abs();
                assert!(diff < 1e-8, "n={n} ({k},{h}): {diff:e}");
            }
        }
    }
}

#[test]
fn star_seed_value() {
    let q = solve_collapsed(spec(3, 1), PowerOptions::default()).unwrap();
    assert!((q.mass(1, 0) - 0.4226497).abs() < 1e-7);
}

#[test]
fn complete_graph_uniform_qsd() {
    for n in 3..=30 {
        let s = complete_graph_count_chain(n).unwrap();
        let sol = power_iterate_left(&s, PowerOptions::default()).unwrap();
        let lambda = 1.0 - 2.0 / (n * (n - 1)) as f64;
        assert!((sol.lambda - lambda).abs() < 1e-10, "n={n}");
        for p in &sol.nu {
            assert!((p - 1.0 / (n - 1) as f64).abs() < 1e-10, "n={n}");
        }
    }
}

#[test]
fn complete_graph_full_coloring_qsd() {
    for n in [3, 4, 5] {
        let q = full_qsd_small_graph(&make_complete(n).unwrap(), 2, PowerOptions::default()).unwrap();
        for (_, p) in q.count_pushforward() {
            assert!((p - 1.0 / (n - 1) as f64).abs() < 1e-10);
        }
    }
}

#[test]
fn full_coloring_qsd_pushes_forward_to_collapsed() {
    for (n, m) in [(3, 1), (4, 1), (2, 2), (3, 2), (4, 3)] {
        let sp = spec(n, m);
        let full = full_qsd_small_graph(&make_complete_bipartite(sp), 2, PowerOptions::default())
            .unwrap();
        let collapsed = solve_collapsed(sp, PowerOptions::default()).unwrap();
        let push = full.pushforward(sp);
        assert_eq!(push.len(), collapsed.states.len());
        for (st, p) in push {
            assert!((p - collapsed.mass(st.k, st.h)).abs() < 1e-8, "({n},{m}) {st:?}");
        }
        assert!((full.solution.lambda - collapsed.lambda()).abs() < 1e-10);
    }
}

#[test]
fn geometric_absorption_and_residuals() {
    for (n, m) in [(3, 1), (10, 1), (4, 2), (10, 3)] {
        let s = collapsed_chain(spec(n, m));
        let sol = power_iterate_left(&s, PowerOptions::default()).unwrap();
        assert!(sol.residual < 1e-10);
        assert!((sol.nu.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(sol.nu.iter().all(|&p| p > 0.0));
        for (t, p) in sol.survival_curve(&s, 30).into_iter().enumerate() {
            assert!((p - sol.lambda.powi(t as i32)).abs() < 1e-8);
        }
    }
}

#[test]
fn boundary_identity_on_grid() {
    for (n, m) in [(3, 1), (5, 1), (10, 1), (2, 2), (4, 2), (10, 3), (20, 5)] {
        let q = solve_collapsed(spec(n, m), PowerOptions::default()).unwrap();
        assert!(lambda_boundary_gap(&q) < 1e-10, "({n},{m})");
        assert!(relabeling_asymmetry(&q) < 1e-10, "({n},{m})");
    }
}

#[test]
fn vanishing_mixed_states_and_sibuya_limit() {
    let grid = [10usize, 20, 40, 80, 160, 320, 640];
    for m in 1..=3 {
        let limit = limiting_qsd(m, 8).unwrap();
        let sols: Vec<_> = grid
            .iter()
            .map(|&n| solve_collapsed(spec(n, m), PowerOptions::default()).unwrap())
            .collect();
        for k in 1..=8 {
            let errs: Vec<f64> = sols.iter().map(|q| (q.mass(k, 0) - limit[k - 1]).abs()).collect();
            assert!(errs[2..].windows(2).all(|w| w[1] < w[0]), "m={m} k={k}: {errs:?}");
        }
        for k in 0..=2 {
            for h in 1..=m {
                if m == 1 || (k == 0 && h == m) {
                    continue;
                }
                let masses: Vec<f64> = sols.iter().map(|q| q.mass(k, h)).collect();
                let tail = &masses[1..];
                assert!(tail.windows(2).all(|w| w[1] < w[0]), "m={m} ({k},{h}): {masses:?}");
                assert!(*masses.last().unwrap() < 1e-2);
            }
        }
    }
}

#[test]
fn limit_sums_to_half() {
    let lim = limiting_qsd(2, 200_000).unwrap();
    let total: f64 = lim.iter().sum();
    let law = Sibuya::for_small_group(2).unwrap();
    let tail = 0.5 * law.survival(200_000);
    assert!((total + tail - 0.5).abs() < 1e-9);
    assert!(total < 0.5);
}
