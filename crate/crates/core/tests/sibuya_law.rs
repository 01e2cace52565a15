mod common;

use common::chi_square_p;
use voter_qsd::sibuya::{gamma_from_m, PmfTable, Sibuya};
use voter_qsd::RandomStream;

#[test]
fn first_mass_is_gamma() {
    for g in [0.01, 0.3, 0.5857864, 0.99, 1.0] {
        assert_eq!(Sibuya::new(g).unwrap().pmf(1), g);
    }
}

#[test]
fn survival_is_one_minus_cumulative_mass() {
    for g in [0.1, 0.3, 0.5, 0.9] {
        let law = Sibuya::new(g).unwrap();
        let mut cum = 0.0;
        for k in 1..=2000u64 {
            cum += law.pmf(k);
            assert!((law.survival(k) - (1.0 - cum)).abs() < 1e-12, "gamma={g} k={k}");
        }
    }
}

#[test]
fn product_and_log_forms_agree() {
    let law = Sibuya::new(0.37).unwrap();
    for k in 1..=30 {
        let (a, b) = (law.pmf(k), law.pmf_product(k));
        assert!((a - b).abs() < 1e-14 * b.max(1e-300) + 1e-16, "k={k}");
    }
}

#[test]
fn pgf_matches_truncated_series() {
    for g in [0.1, 0.5, 0.9] {
        let law = Sibuya::new(g).unwrap();
        let mut table = PmfTable::new(law);
        let series: f64 = (1..=200u64).map(|k| table.pmf(k) * 0.5f64.powi(k as i32)).sum();
        assert!((series - law.pgf(0.5).unwrap()).abs() < 1e-10, "gamma={g}");
    }
}

#[test]
fn power_law_tail() {
    for g in [0.3, 0.5857864] {
        let law = Sibuya::new(g).unwrap();
        let k = 1_000_000u64;
        let ratio = law.pmf(k) * (k as f64).powf(1.0 + g) / law.tail_constant().unwrap();
        assert!((ratio - 1.0).abs() < 0.01, "gamma={g}: {ratio}");
    }
    assert!(Sibuya::new(1.0).unwrap().tail_constant().is_err());
    assert!((gamma_from_m(1).unwrap() - 0.5857864).abs() < 1e-7);
}

#[test]
fn sampler_chi_square() {
    let law = Sibuya::new(0.3).unwrap();
    let mut rng = RandomStream::new(2024);
    let samples = 10_000_000u64;
    let mut counts = vec![0.0f64; 51];
    for _ in 0..samples {
        let d = law.sample(&mut rng);
        counts[(d.min(51) - 1) as usize] += 1.0;
    }
    let mut expected: Vec<f64> = (1..=50).map(|k| law.pmf(k) * samples as f64).collect();
    expected.push(law.survival(50) * samples as f64);
    let p = chi_square_p(&counts, &expected);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn sampler_far_tail() {
    let law = Sibuya::new(0.3).unwrap();
    let mut rng = RandomStream::new(7);
    let samples = 1_000_000u64;
    let k = 10_000;
    let hits = (0..samples).filter(|_| law.sample(&mut rng) > k).count() as f64;
    let p = law.survival(k);
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    assert!((hits / samples as f64 - p).abs() < 3.0 * se, "{} vs {p}", hits / samples as f64);
}

#[test]
fn degenerate_and_invalid_parameters() {
    let one = Sibuya::new(1.0).unwrap();
    let mut rng = RandomStream::new(1);
    assert!((0..1000).all(|_| one.sample(&mut rng) == 1));
    assert!(Sibuya::new(0.0).is_err());
    assert!(Sibuya::new(1.5).is_err());
    assert!(Sibuya::new(f64::NAN).is_err());
    assert!(one.try_pmf(0).is_err());
    assert!(one.pgf(1.5).is_err());
}
