#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Expected absorption times `(I - S)^{-1} 1` from a dense `S`.
pub fn mean_absorption(s: &[Vec<f64>]) -> Vec<f64> {
    let n = s.len();
    let a = (0..n)
        .map(|i| (0..n).map(|j| f64::from(i == j) - s[i][j]).collect())
        .collect();
    solve_dense(a, vec![1.0; n])
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Pearson chi-square p-value of `observed` against `expected` counts.
pub fn chi_square_p(observed: &[f64], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    let df = (observed.len() - 1) as f64;
    ChiSquared::new(df).unwrap().sf(stat)
}

/// Two-sample Kolmogorov-Smirnov distance between integer samples.
pub fn ks_distance(a: &[u64], b: &[u64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
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

/// Geometric-tail MLE from samples exceeding `t0`: with `X = tau - t0`,
/// `P(X > x) = lambda^x` gives `lambda = 1 - count / sum X`.
pub fn tail_rate(samples: &[u64], t0: u64) -> (f64, usize) {
    let tail: Vec<u64> = samples.iter().filter(|&&t| t > t0).map(|&t| t - t0).collect();
    let sum: u64 = tail.iter().sum();
    (1.0 - tail.len() as f64 / sum as f64, tail.len())
}
