//! Sparse substochastic matrices: the transient block `S` of an absorbing
//! chain's kernel. Row `i`'s deficit `1 - sum_j S[i][j]` is the one-step
//! absorption probability from state `i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::compensated::Neumaier;
use crate::error::{Error, Result};

/// Slack allowed above 1 in a row sum, for rounding in summed entries.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// CSR matrix with one label per state.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstochasticMatrix<L> {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    labels: Vec<L>,
}

impl<L> SubstochasticMatrix<L> {
    /// Builds from `(row, col, probability)` triplets; duplicates are summed
    /// and zero entries dropped.
    pub fn from_triplets(labels: Vec<L>, mut entries: Vec<(u32, u32, f64)>) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Domain("matrix needs at least one state"));
        }
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, p) in entries {
            if r as usize >= dim || c as usize >= dim {
                return Err(Error::Domain("matrix entry index out of range"));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain("matrix entry outside [0, 1]"));
            }
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += p;
                continue;
            }
            last = Some((r, c));
            cols.push(c);
            vals.push(p);
            row_ptr[r as usize + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut matrix = Self {
            row_ptr,
            cols,
            vals,
            labels,
        };
        matrix.drop_zeros();
        let sums: Vec<f64> = (0..dim).map(|i| matrix.row_sum(i)).collect();
        if sums.iter().any(|&s| s > 1.0 + ROW_SUM_TOLERANCE) {
            return Err(Error::Domain("row sum exceeds 1"));
        }
        if sums.iter().all(|&s| s >= 1.0) {
            return Err(Error::Domain("no row leaks mass: absorption is not accessible"));
        }
        Ok(matrix)
    }

    fn drop_zeros(&mut self) {
        if self.vals.iter().all(|&v| v > 0.0) {
            return;
        }
        let mut row_ptr = vec![0usize; self.dim() + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for i in 0..self.dim() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.vals[k] > 0.0 {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[i + 1] = cols.len();
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        let mut acc = Neumaier::default();
        for (_, v) in self.row(i) {
            acc.add(v);
        }
        acc.total()
    }

    /// One-step absorption probability from each state.
    pub fn deficits(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| (1.0 - self.row_sum(i)).max(0.0)).collect()
    }

    /// `out = x S`.
    pub fn left_mul_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.cols[k] as usize] += xi * self.vals[k];
            }
        }
    }

    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.left_mul_into(x, &mut out);
        out
    }

    /// `S y`.
    pub fn right_mul(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.dim());
        (0..self.dim())
            .map(|i| self.row(i).map(|(c, v)| v * y[c]).sum())
            .collect()
    }

    /// `P(tau > t) = x S^t 1` for `t = 0..=t_max`, starting from the row
    /// vector `initial`.
    pub fn survival_curve(&self, initial: &[f64], t_max: usize) -> Vec<f64> {
        let mut x = initial.to_vec();
        let mut next = vec![0.0; self.dim()];
        let mut out = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            out.push(x.iter().sum());
            if t < t_max {
                self.left_mul_into(&x, &mut next);
                core::mem::swap(&mut x, &mut next);
            }
        }
        out
    }

    /// Indices of states reachable in one or more steps from `start`.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.dim()];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (c, _) in self.row(i) {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// True when every state reaches every other state.
    pub fn is_irreducible(&self) -> bool {
        if !self.reachable_from(0).iter().all(|&s| s) {
            return false;
        }
        let transpose = self.transpose_pattern();
        let mut seen = vec![false; self.dim()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &c in &transpose[i] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn transpose_pattern(&self) -> Vec<Vec<usize>> {
        let mut t = vec![Vec::new(); self.dim()];
        for i in 0..self.dim() {
            for (c, _) in self.row(i) {
                t[c].push(i);
            }
        }
        t
    }

    /// Principal submatrix on the states where `keep` is true, preserving
    /// their order.
    pub fn restrict(&self, keep: &[bool]) -> Result<Self>
    where
        L: Clone,
    {
        assert_eq!(keep.len(), self.dim());
        let mut new_index = vec![u32::MAX; self.dim()];
        let mut labels = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            new_index[i] = labels.len() as u32;
            labels.push(self.labels[i].clone());
        }
        let mut entries = Vec::new();
        for i in (0..self.dim()).filter(|&i| keep[i]) {
            for (c, v) in self.row(i) {
                if keep[c] {
                    entries.push((new_index[i], new_index[c], v));
                }
            }
        }
        Self::from_triplets(labels, entries)
    }

    /// Dense copy, for tests and tiny matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.dim()]; self.dim()];
        for (i, row) in d.iter_mut().enumerate() {
            for (c, v) in self.row(i) {
                row[c] = v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> SubstochasticMatrix<u8> {
        SubstochasticMatrix::from_triplets(
            vec![0, 1],
            vec![(0, 0, 0.5), (0, 1, 0.25), (1, 0, 0.5), (1, 1, 0.25), (0, 1, 0.25)],
        )
        .unwrap()
    }

    #[test]
    fn duplicates_are_summed() {
        let s = two_state();
        assert_eq!(s.get(0, 1), 0.5);
        assert_eq!(s.nnz(), 4);
        assert_eq!(s.deficits(), vec![0.0, 0.25]);
    }

    #[test]
    fn rejects_stochastic_and_overfull() {
        let stochastic =
            SubstochasticMatrix::from_triplets(vec![(), ()], vec![(0, 1, 1.0), (1, 0, 1.0)]);
        assert!(stochastic.is_err());
        let over = SubstochasticMatrix::from_triplets(vec![()], vec![(0, 0, 0.7), (0, 0, 0.7)]);
        assert!(over.is_err());
    }

    #[test]
    fn survival_of_a_single_leaky_state() {
        let s = SubstochasticMatrix::from_triplets(vec![()], vec![(0, 0, 0.5)]).unwrap();
        assert_eq!(s.survival_curve(&[1.0], 3), vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn left_and_right_products_agree_on_bilinear_form() {
        let s = SubstochasticMatrix::from_triplets(
            vec![(), (), ()],
            vec![(0, 1, 0.3), (1, 2, 0.6), (2, 0, 0.2), (1, 1, 0.1)],
        )
        .unwrap();
        let x = [0.2, 0.5, 0.3];
        let y = [1.0, -2.0, 0.5];
        let lhs: f64 = s.left_mul(&x).iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = s.right_mul(&y).iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-15);
        assert!(s.is_irreducible());
        let cut = s.restrict(&[true, true, false]).unwrap();
        assert!(!cut.is_irreducible());
    }
}
