//! Small statistics used by the experiment reports.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `observed` against `expected` counts (same totals).
pub fn chi_square(observed: &[f64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len());
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = observed.len() - 1;
    let p_value = ChiSquared::new(dof as f64).unwrap().sf(statistic);
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}

/// Two-sample Kolmogorov-Smirnov distance of integer samples.
pub fn ks_distance(a: &[u64], b: &[u64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Two-sample KS distance exceeded with probability about `0.001` under the
/// null hypothesis (asymptotic critical value `1.95`).
pub fn ks_critical(na: usize, nb: usize) -> f64 {
    1.95 * ((na + nb) as f64 / (na * nb) as f64).sqrt()
}

/// Geometric-tail fit over the samples above `t0`: the MLE of `lambda` in
/// `P(X > x) = lambda^x` for `X = sample - t0`, and the number of samples used.
pub fn tail_rate(samples: &[u64], t0: u64) -> (f64, usize) {
    let (count, sum) = samples
        .iter()
        .filter(|&&t| t > t0)
        .fold((0usize, 0u64), |(c, s), &t| (c + 1, s + (t - t0)));
    (1.0 - count as f64 / sum as f64, count)
}

/// Ratio `P(X > t + 1) / P(X > t)` at the end of a survival curve.
pub fn curve_decay_rate(curve: &[f64]) -> f64 {
    let n = curve.len();
    curve[n - 1] / curve[n - 2]
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_identical_and_disjoint_samples() {
        assert_eq!(ks_distance(&[1, 2, 3], &[3, 2, 1]), 0.0);
        assert_eq!(ks_distance(&[1, 1], &[5, 6]), 1.0);
    }

    #[test]
    fn chi_square_of_exact_fit() {
        let c = chi_square(&[10.0, 20.0], &[10.0, 20.0]);
        assert_eq!(c.statistic, 0.0);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_rate_of_exact_geometric() {
        // P(X = x) = (1/2)^x: mean 2, so the fit is 1/2.
        let samples = [1, 1, 2, 4];
        assert_eq!(tail_rate(&samples, 0), (0.5, 4));
    }
}
