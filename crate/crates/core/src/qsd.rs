//! Exact quasi-stationary distributions.
//!
//! A QSD of an absorbing chain is a probability vector `nu` on the transient
//! states with `nu S = lambda nu`, `lambda` the spectral radius of the
//! transient block `S`. Under `nu` the absorption time is geometric with
//! parameter `1 - lambda`.
//!
//! For the two-opinion voter model on `K_{n,m}` the colorings lump into the
//! counts `(k, h)` of "yes" in `L` and in `S`; this module builds that chain,
//! solves it by left power iteration, and provides the closed-form pieces
//! tied to it: the boundary-mass identity for `lambda`, the star-graph
//! recurrence, and the Sibuya limit as `n -> infinity`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::compensated::DoubleDouble;
use crate::error::{Error, Result};
use crate::graph::{BipartiteSpec, Graph};
use crate::matrix::SubstochasticMatrix;
use crate::sibuya::{gamma_from_m, gamma_from_nm, PmfTable, Sibuya};
use crate::voter::{collapse_bipartite, transition_matrix_full, OpinionConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once successive normalized iterates differ by less than this in
    /// max norm...
    pub tol: f64,
    /// ...and the eigen-residual `|nu S - lambda nu|_inf` is below this.
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            residual_tol: 1e-10,
            max_iter: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QsdSolution {
    pub nu: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl QsdSolution {
    /// `P_nu(tau > t)` for `t = 0..=t_max` by repeated multiplication.
    pub fn survival_curve<L>(&self, s: &SubstochasticMatrix<L>, t_max: usize) -> Vec<f64> {
        s.survival_curve(&self.nu, t_max)
    }
}

/// Left power iteration from the uniform vector.
pub fn power_iterate_left<L>(s: &SubstochasticMatrix<L>, opts: PowerOptions) -> Result<QsdSolution> {
    let start = vec![1.0 / s.dim() as f64; s.dim()];
    power_iterate_left_from(s, &start, opts)
}

/// Left power iteration with L1 normalization from a nonnegative start
/// vector.
pub fn power_iterate_left_from<L>(
    s: &SubstochasticMatrix<L>,
    start: &[f64],
    opts: PowerOptions,
) -> Result<QsdSolution> {
    let dim = s.dim();
    if start.len() != dim || start.iter().any(|&x| x.is_nan() || x < 0.0) {
        return Err(Error::Domain("start vector must be nonnegative with one entry per state"));
    }
    let total: f64 = start.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("start vector has zero mass"));
    }
    let mut x: Vec<f64> = start.iter().map(|v| v / total).collect();
    let mut y = vec![0.0; dim];
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        s.left_mul_into(&x, &mut y);
        let lambda: f64 = y.iter().sum();
        if lambda <= 0.0 {
            return Err(Error::Domain("iterate vanished: nilpotent restriction"));
        }
        let mut diff = 0.0f64;
        residual = 0.0;
        for (xi, yi) in x.iter_mut().zip(&y) {
            residual = residual.max((yi - lambda * *xi).abs());
            let next = yi / lambda;
            diff = diff.max((next - *xi).abs());
            *xi = next;
        }
        if diff < opts.tol && residual < opts.residual_tol {
            // Residual of the returned vector itself.
            s.left_mul_into(&x, &mut y);
            let lambda: f64 = y.iter().sum();
            let residual = x
                .iter()
                .zip(&y)
                .map(|(xi, yi)| (yi - lambda * xi).abs())
                .fold(0.0, f64::max);
            return Ok(QsdSolution {
                nu: x,
                lambda,
                residual,
                iterations: iter,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Spectral radius by left power iteration; the matrix must be primitive on
/// the states charged by the uniform start.
pub fn spectral_radius<L>(s: &SubstochasticMatrix<L>) -> Result<f64> {
    power_iterate_left(s, PowerOptions::default()).map(|sol| sol.lambda)
}

/// Counts of "yes" (opinion 1) in `L` and in `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollapsedState {
    pub k: usize,
    pub h: usize,
}

/// Dense row-major index of the admissible `(k, h)`, skipping the two
/// consensus states `(0,0)`, `(n,m)` and the two anti-aligned states `(0,m)`,
/// `(n,0)` that nothing else can reach.
#[derive(Debug, Clone)]
pub struct CollapsedIndex {
    spec: BipartiteSpec,
    slots: Vec<Option<u32>>,
    states: Vec<CollapsedState>,
}

impl CollapsedIndex {
    pub fn new(spec: BipartiteSpec) -> Self {
        let (n, m) = (spec.n(), spec.m());
        let mut slots = Vec::with_capacity((n + 1) * (m + 1));
        let mut states = Vec::new();
        for k in 0..=n {
            for h in 0..=m {
                if Self::excluded(n, m, k, h) {
                    slots.push(None);
                } else {
                    slots.push(Some(states.len() as u32));
                    states.push(CollapsedState { k, h });
                }
            }
        }
        Self { spec, slots, states }
    }

    fn excluded(n: usize, m: usize, k: usize, h: usize) -> bool {
        (k == 0 || k == n) && (h == 0 || h == m)
    }

    pub fn spec(&self) -> BipartiteSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, k: usize, h: usize) -> Option<usize> {
        if k > self.spec.n() || h > self.spec.m() {
            return None;
        }
        self.slots[k * (self.spec.m() + 1) + h].map(|i| i as usize)
    }

    pub fn states(&self) -> &[CollapsedState] {
        &self.states
    }
}

/// The five one-step moves out of `(k, h)`, as `(target, probability)`:
/// up in `L`, down in `L`, up in `S`, down in `S`, stay.
pub fn collapsed_moves(n: usize, m: usize, k: usize, h: usize) -> [((usize, usize), f64); 5] {
    let (nf, mf, kf, hf) = (n as f64, m as f64, k as f64, h as f64);
    let total = nf + mf;
    [
        ((k + 1, h), (nf - kf) / total * (hf / mf)),
        ((k.wrapping_sub(1), h), kf / total * ((mf - hf) / mf)),
        ((k, h + 1), (mf - hf) / total * (kf / nf)),
        ((k, h.wrapping_sub(1)), hf / total * ((nf - kf) / nf)),
        ((k, h), (kf * hf + (nf - kf) * (mf - hf)) / (nf * mf)),
    ]
}

/// Transient kernel of the `(k, h)` chain. Moves into excluded states become
/// row deficit.
pub fn collapsed_chain(spec: BipartiteSpec) -> SubstochasticMatrix<CollapsedState> {
    let index = CollapsedIndex::new(spec);
    let (n, m) = (spec.n(), spec.m());
    let mut entries = Vec::with_capacity(index.len() * 5);
    for (row, st) in index.states().iter().enumerate() {
        for ((k, h), p) in collapsed_moves(n, m, st.k, st.h) {
            if p <= 0.0 {
                continue;
            }
            if let Some(col) = index.get(k, h) {
                entries.push((row as u32, col as u32, p));
            }
        }
    }
    SubstochasticMatrix::from_triplets(index.states, entries)
        .expect("collapsed chain of a valid K_{n,m} is substochastic")
}

/// QSD `mu_{n,m}` of the collapsed chain.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedQsd {
    pub spec: BipartiteSpec,
    pub states: Vec<CollapsedState>,
    pub solution: QsdSolution,
}

impl CollapsedQsd {
    pub fn mass(&self, k: usize, h: usize) -> f64 {
        self.states
            .binary_search(&CollapsedState { k, h })
            .map_or(0.0, |i| self.solution.nu[i])
    }

    pub fn lambda(&self) -> f64 {
        self.solution.lambda
    }
}

pub fn solve_collapsed(spec: BipartiteSpec, opts: PowerOptions) -> Result<CollapsedQsd> {
    let chain = collapsed_chain(spec);
    let solution = power_iterate_left(&chain, opts)?;
    Ok(CollapsedQsd {
        spec,
        states: chain.labels().to_vec(),
        solution,
    })
}

/// `|lambda - (1 - 2/(n+m) (mu(1,0) + mu(0,1)))|`; `mu(0,1) = 0` when
/// `m = 1` because `(0,1)` is excluded.
pub fn lambda_boundary_gap(qsd: &CollapsedQsd) -> f64 {
    let spec = qsd.spec;
    let boundary = qsd.mass(1, 0) + qsd.mass(0, 1);
    let predicted = 1.0 - 2.0 / (spec.vertex_count() as f64) * boundary;
    (qsd.lambda() - predicted).abs()
}

/// Largest deviation from the opinion-swap symmetry
/// `mu(k,h) = mu(n-k, m-h)`.
pub fn relabeling_asymmetry(qsd: &CollapsedQsd) -> f64 {
    let (n, m) = (qsd.spec.n(), qsd.spec.m());
    qsd.states
        .iter()
        .map(|s| (qsd.mass(s.k, s.h) - qsd.mass(n - s.k, m - s.h)).abs())
        .fold(0.0, f64::max)
}

/// `mu_{n,1}` on the star `K_{n,1}` from the nonlocal recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct StarQsd {
    pub n: usize,
    /// `mu(k, 0)` at position `k - 1`, `k = 1..n-1`.
    pub center_no: Vec<f64>,
}

impl StarQsd {
    pub fn mass(&self, k: usize, h: usize) -> f64 {
        let k = match h {
            0 => k,
            1 => self.n - k,
            _ => return 0.0,
        };
        if (1..self.n).contains(&k) {
            self.center_no[k - 1]
        } else {
            0.0
        }
    }

    /// `sum_{k,h} mu(k,h)`, which is `2 sum_k mu(k,0)` by the mirror identity.
    pub fn total_mass(&self) -> f64 {
        2.0 * self.center_no.iter().sum::<f64>()
    }
}

/// Solves the star recurrence in double-double arithmetic.
///
/// Starts from `mu(1,0) = gamma_{n,1}/2` and `mu(n,0) = 0`, then alternates:
/// knowing `mu(j,0)` and `mu(n-j,0)` for `j <= k`, the equation at `k`
/// gives `mu(k+1,0)` and the equation at `n-k-1` gives `mu(n-k-1,0)`.
pub fn solve_star_recurrence(n: usize) -> Result<StarQsd> {
    if n < 3 {
        return Err(Error::InvalidBipartite { n, m: 1 });
    }
    type D = DoubleDouble;
    let nd = D::from_f64(n as f64);
    let n1 = D::from_f64((n + 1) as f64);
    // gamma_{n,1} = 2 (1 - sqrt(1/2 - 1/(2n)))
    let inner = D::from_ratio(1.0, 2.0).sub(D::from_ratio(1.0, 2.0 * n as f64));
    let gamma = D::from_f64(2.0).mul(D::from_f64(1.0).sub(inner.sqrt()));
    let gamma_over = gamma.div(n1);
    // coef(k) = k/n - gamma/(n+1)
    let coef = |k: usize| D::from_f64(k as f64).div(nd).sub(gamma_over);
    let cross = |j: usize| D::from_f64(j as f64).div(nd.mul(n1));

    let mut mu: Vec<Option<D>> = vec![None; n + 1];
    mu[n] = Some(D::default());
    mu[1] = Some(gamma.mul(D::from_ratio(1.0, 2.0)));

    // Equation at j, solved for mu(j): needs mu(j+1) and mu(n-j).
    let backward = |mu: &[Option<D>], j: usize| {
        let a = mu[j + 1].unwrap().mul(D::from_f64((j + 1) as f64)).div(n1);
        let b = mu[n - j].unwrap().mul(cross(n - j));
        a.add(b).div(coef(j))
    };
    // Equation at k, solved for mu(k+1): needs mu(k) and mu(n-k).
    let forward = |mu: &[Option<D>], k: usize| {
        let lhs = coef(k).mul(mu[k].unwrap());
        let b = mu[n - k].unwrap().mul(cross(n - k));
        lhs.sub(b).mul(n1).div(D::from_f64((k + 1) as f64))
    };

    mu[n - 1] = Some(backward(&mu, n - 1));
    let mut k = 1;
    while mu.iter().skip(1).take(n - 1).any(Option::is_none) {
        if mu[k + 1].is_none() {
            mu[k + 1] = Some(forward(&mu, k));
        }
        let j = n - k - 1;
        if j >= 1 && mu[j].is_none() {
            mu[j] = Some(backward(&mu, j));
        }
        k += 1;
    }
    Ok(StarQsd {
        n,
        center_no: mu[1..n].iter().map(|v| v.unwrap().to_f64()).collect(),
    })
}

/// `lim_n mu_{n,m}(k, 0) = f_{gamma_m}(k) / 2` for `k = 1..=k_max`.
pub fn limiting_qsd(m: usize, k_max: usize) -> Result<Vec<f64>> {
    let mut table = PmfTable::new(Sibuya::new(gamma_from_m(m)?)?);
    Ok((1..=k_max).map(|k| 0.5 * table.pmf(k as u64)).collect())
}

/// Finite-`n` analogue of the limit: `gamma_{n,m}` in place of `gamma_m`.
pub fn sibuya_approximation(spec: BipartiteSpec, k_max: usize) -> Result<Vec<f64>> {
    let mut table = PmfTable::new(Sibuya::new(gamma_from_nm(spec.n(), spec.m())?)?);
    Ok((1..=k_max).map(|k| 0.5 * table.pmf(k as u64)).collect())
}

/// Two-opinion chain of the "yes" count on `K_n`, states `1..n-1`.
pub fn complete_graph_count_chain(n: usize) -> Result<SubstochasticMatrix<usize>> {
    if n < 3 {
        return Err(Error::InvalidComplete { n });
    }
    let denom = (n * (n - 1)) as f64;
    let mut entries = Vec::new();
    for k in 1..n {
        let row = (k - 1) as u32;
        let flip = (k * (n - k)) as f64 / denom;
        let stay = (k * (k - 1) + (n - k) * (n - k - 1)) as f64 / denom;
        entries.push((row, row, stay));
        if k + 1 < n {
            entries.push((row, row + 1, flip));
        }
        if k > 1 {
            entries.push((row, row - 1, flip));
        }
    }
    SubstochasticMatrix::from_triplets((1..n).collect(), entries)
}

/// QSD over full colorings.
#[derive(Debug, Clone, PartialEq)]
pub struct FullQsd {
    pub states: Vec<OpinionConfig>,
    pub solution: QsdSolution,
}

impl FullQsd {
    /// Law of `(k, h)` under the QSD.
    pub fn pushforward(&self, spec: BipartiteSpec) -> BTreeMap<CollapsedState, f64> {
        let mut out = BTreeMap::new();
        for (cfg, &p) in self.states.iter().zip(&self.solution.nu) {
            let (k, h) = collapse_bipartite(spec, cfg);
            *out.entry(CollapsedState { k, h }).or_insert(0.0) += p;
        }
        out
    }

    /// Law of the number of opinion-1 vertices.
    pub fn count_pushforward(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (cfg, &p) in self.states.iter().zip(&self.solution.nu) {
            let yes = cfg.opinions().iter().filter(|&&o| o == 1).count();
            *out.entry(yes).or_insert(0.0) += p;
        }
        out
    }
}

/// Repeatedly drops states with no incoming transition from another kept
/// state. On a bipartite graph this removes the anti-aligned colorings.
pub fn inaccessible_removed<L: Clone>(s: &SubstochasticMatrix<L>) -> Result<SubstochasticMatrix<L>> {
    let mut keep = vec![true; s.dim()];
    loop {
        let mut entered = vec![false; s.dim()];
        for i in (0..s.dim()).filter(|&i| keep[i]) {
            for (c, _) in s.row(i) {
                if c != i {
                    entered[c] = true;
                }
            }
        }
        let mut changed = false;
        for i in 0..s.dim() {
            if keep[i] && !entered[i] {
                keep[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !keep.iter().any(|&k| k) {
        return Err(Error::Reducible);
    }
    s.restrict(&keep)
}

/// QSD of the voter kernel on all non-consensus colorings with
/// `num_opinions` labels, after removing inaccessible states.
pub fn full_qsd_small_graph(g: &Graph, num_opinions: u32, opts: PowerOptions) -> Result<FullQsd> {
    let full = transition_matrix_full(g, num_opinions)?;
    let s = inaccessible_removed(&full)?;
    if !s.is_irreducible() {
        return Err(Error::Reducible);
    }
    let solution = power_iterate_left(&s, opts)?;
    Ok(FullQsd {
        states: s.labels().to_vec(),
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_complete_bipartite};

    fn spec(n: usize, m: usize) -> BipartiteSpec {
        BipartiteSpec::new(n, m).unwrap()
    }

    #[test]
    fn star_row_from_one_dissenter_in_l() {
        let s = collapsed_chain(spec(3, 1));
        let idx = CollapsedIndex::new(spec(3, 1));
        let row = idx.get(1, 0).unwrap();
        assert!((s.get(row, row) - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.get(row, idx.get(1, 1).unwrap()) - 1.0 / 12.0).abs() < 1e-15);
        assert!((s.row_sum(row) - 0.75).abs() < 1e-15);
        assert!((s.deficits()[row] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn moves_sum_to_one() {
        for (n, m) in [(3, 1), (4, 2), (7, 3), (10, 10)] {
            for k in 0..=n {
                for h in 0..=m {
                    let total: f64 = collapsed_moves(n, m, k, h).iter().map(|x| x.1).sum();
                    assert!((total - 1.0).abs() < 1e-14, "({n},{m}) at ({k},{h})");
                }
            }
        }
    }

    #[test]
    fn square_state_counts() {
        // 9 count pairs minus 4 excluded; the full coloring space keeps
        // 16 - 2 consensus - 2 anti-aligned = 12.
        assert_eq!(CollapsedIndex::new(spec(2, 2)).len(), 5);
        assert_eq!(collapsed_chain(spec(2, 2)).dim(), 5);
        let g = make_complete_bipartite(spec(2, 2));
        let full = full_qsd_small_graph(&g, 2, PowerOptions::default()).unwrap();
        assert_eq!(full.states.len(), 12);
        assert!(collapsed_chain(spec(5, 3)).is_irreducible());
    }

    #[test]
    fn one_by_one_matrix() {
        let s = SubstochasticMatrix::from_triplets(vec![()], vec![(0, 0, 0.3)]).unwrap();
        let sol = power_iterate_left(&s, PowerOptions::default()).unwrap();
        assert_eq!(sol.nu, vec![1.0]);
        assert!((sol.lambda - 0.3).abs() < 1e-15);
    }

    #[test]
    fn no_convergence_reports_residual() {
        // Period-2 block: iterates oscillate forever.
        let s = SubstochasticMatrix::from_triplets(vec![(), ()], vec![(0, 1, 0.5), (1, 0, 0.9)])
            .unwrap();
        let err = power_iterate_left_from(&s, &[1.0, 0.0], PowerOptions { max_iter: 50, ..Default::default() })
            .unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 50, .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn complete_graph_qsd_is_uniform() {
        for n in [3usize, 4, 7, 12] {
            let s = complete_graph_count_chain(n).unwrap();
            let sol = power_iterate_left(&s, PowerOptions::default()).unwrap();
            let expect = 1.0 - 2.0 / (n * (n - 1)) as f64;
            assert!((sol.lambda - expect).abs() < 1e-12);
            assert!(sol.nu.iter().all(|&p| (p - 1.0 / (n - 1) as f64).abs() < 1e-12));
        }
    }

    #[test]
    fn boundary_identity_and_symmetry() {
        for (n, m) in [(3, 1), (4, 2), (6, 3)] {
            let q = solve_collapsed(spec(n, m), PowerOptions::default()).unwrap();
            assert!(lambda_boundary_gap(&q) < 1e-10);
            assert!(relabeling_asymmetry(&q) < 1e-10);
            assert!(q.solution.residual < 1e-10);
            assert!((q.solution.nu.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let q = solve_collapsed(spec(3, 1), PowerOptions::default()).unwrap();
        assert_eq!(q.mass(0, 1), 0.0);
    }

    #[test]
    fn star_recurrence_seed_and_far_end() {
        let star = solve_star_recurrence(3).unwrap();
        assert!((star.mass(1, 0) - (1.0 - (1.0f64 / 3.0).sqrt())).abs() < 1e-15);
        for n in [3usize, 5, 10, 30] {
            let star = solve_star_recurrence(n).unwrap();
            let g = gamma_from_nm(n, 1).unwrap();
            let nf = n as f64;
            let far = g / (2.0 * (nf * nf - nf * g - 1.0));
            assert!((star.mass(n - 1, 0) - far).abs() < 1e-15);
            assert!((star.total_mass() - 1.0).abs() < 1e-12, "n = {n}");
            assert_eq!(star.mass(2, 1), star.mass(n - 2, 0));
        }
        assert!(solve_star_recurrence(2).is_err());
    }

    #[test]
    fn limiting_law() {
        let lim = limiting_qsd(1, 10).unwrap();
        assert!((lim[0] - (1.0 - 1.0 / 2.0f64.sqrt())).abs() < 1e-15);
        let g = gamma_from_m(2).unwrap();
        let lim = limiting_qsd(2, 20).unwrap();
        for k in 1..20 {
            let ratio = lim[k] / lim[k - 1];
            assert!((ratio - (k as f64 - g) / (k as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn full_qsd_on_triangle_pushes_to_uniform_counts() {
        let g = make_complete(3).unwrap();
        let q = full_qsd_small_graph(&g, 2, PowerOptions::default()).unwrap();
        let counts = q.count_pushforward();
        assert_eq!(counts.len(), 2);
        assert!(counts.values().all(|&p| (p - 0.5).abs() < 1e-10));
        assert!((q.solution.lambda - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn full_qsd_on_star_matches_collapsed() {
        let sp = spec(3, 1);
        let g = make_complete_bipartite(sp);
        let full = full_qsd_small_graph(&g, 2, PowerOptions::default()).unwrap();
        assert_eq!(full.states.len(), 12);
        let collapsed = solve_collapsed(sp, PowerOptions::default()).unwrap();
        for (st, p) in full.pushforward(sp) {
            assert!((p - collapsed.mass(st.k, st.h)).abs() < 1e-8);
        }
        // Exchangeability within L.
        for (cfg, &p) in full.states.iter().zip(&full.solution.nu) {
            let mut swapped = cfg.clone();
            swapped.0.swap(0, 2);
            let j = full.states.iter().position(|c| *c == swapped).unwrap();
            assert!((p - full.solution.nu[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn geometric_absorption_under_qsd() {
        let s = collapsed_chain(spec(5, 2));
        let sol = power_iterate_left(&s, PowerOptions::default()).unwrap();
        let curve = sol.survival_curve(&s, 30);
        for (t, p) in curve.iter().enumerate() {
            assert!((p - sol.lambda.powi(t as i32)).abs() < 1e-8);
        }
        // Normalizing nu S gives nu back.
        let next = s.left_mul(&sol.nu);
        let z: f64 = next.iter().sum();
        for (a, b) in next.iter().zip(&sol.nu) {
            assert!((a / z - b).abs() < 1e-10);
        }
    }
}
