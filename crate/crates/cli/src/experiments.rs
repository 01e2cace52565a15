//! The experiment commands. Each returns a [`Report`]: a CSV table (or its
//! JSON rendering), optional metadata, and the consistency checks that decide
//! the exit status.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use voter_qsd::crw::{coalescent_chain, lambda_crw_bipartite, pair_chain_matrix};
use voter_qsd::graph::{make_complete, make_complete_bipartite, Vertex};
use voter_qsd::qsd::{
    full_qsd_small_graph, lambda_boundary_gap, limiting_qsd, solve_collapsed,
    solve_star_recurrence, spectral_radius, CollapsedQsd, PowerOptions,
};
use voter_qsd::sibuya::{gamma_from_m, PmfTable, Sibuya};
use voter_qsd::voter::{
    is_consensus, replay, step_in_place, transition_matrix_full, ColoringCodec, EventLog,
    OpinionConfig,
};
use voter_qsd::{BipartiteSpec, Graph, RandomStream};

use crate::io::{num, QsdMetadata, Table};
use crate::{parallel, stats, CliError};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `value < limit`; NaN fails.
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value < limit, format!("{value:e} < {limit:e}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub metadata: Option<Value>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    fn new(table: Table) -> Self {
        Self {
            table,
            metadata: None,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut t = self.table.clone();
        let checks = self.checks.iter().map(|c| {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            format!("check {}: {verdict} ({})", c.name, c.detail)
        });
        t.comments.extend(checks);
        t.to_string()
    }

    pub fn to_json(&self) -> String {
        let cell = |s: &String| match s.parse::<f64>() {
            Ok(x) if x.is_finite() => json!(x),
            _ => json!(s),
        };
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .table
                    .header
                    .iter()
                    .cloned()
                    .zip(r.iter().map(cell))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        let doc = json!({
            "metadata": self.metadata.clone().unwrap_or(Value::Null),
            "comments": self.table.comments,
            "rows": rows,
            "checks": checks,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Where a command's graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Bipartite(BipartiteSpec),
    Complete(usize),
    File(Graph),
}

impl GraphSource {
    pub fn graph(&self) -> Result<Graph, CliError> {
        Ok(match self {
            GraphSource::Bipartite(spec) => make_complete_bipartite(*spec),
            GraphSource::Complete(n) => make_complete(*n)?,
            GraphSource::File(g) => g.clone(),
        })
    }

    pub fn describe(&self) -> String {
        match self {
            GraphSource::Bipartite(s) => format!("K_{{{},{}}}", s.n(), s.m()),
            GraphSource::Complete(n) => format!("K_{n}"),
            GraphSource::File(g) => format!("file graph, {} vertices, {} edges", g.vertex_count(), g.edge_count()),
        }
    }

    /// Closed-form `lambda_CRW` where one is known.
    fn closed_form_lambda(&self) -> Option<f64> {
        match self {
            GraphSource::Bipartite(s) => lambda_crw_bipartite(s.n(), s.m()).ok(),
            GraphSource::Complete(n) => Some(1.0 - 2.0 / (n * (n - 1)) as f64),
            GraphSource::File(_) => None,
        }
    }
}

/// Initial configuration syntax: `distinct`, `dissenter:<v>`,
/// `uniform:<opinion>`, or a comma-separated opinion list.
pub fn parse_init(text: &str, vertex_count: usize) -> Result<OpinionConfig, CliError> {
    let bad = || CliError::Validation(format!("cannot parse initial configuration {text:?}"));
    let cfg = if text == "distinct" {
        OpinionConfig::all_distinct(vertex_count)
    } else if let Some(v) = text.strip_prefix("dissenter:") {
        let v: Vertex = v.parse().map_err(|_| bad())?;
        if v as usize >= vertex_count {
            return Err(CliError::Validation(format!("dissenter {v} is not a vertex")));
        }
        OpinionConfig::single_dissenter(vertex_count, v)
    } else if let Some(o) = text.strip_prefix("uniform:") {
        OpinionConfig::uniform(vertex_count, o.parse().map_err(|_| bad())?)
    } else {
        let ops: Result<Vec<u32>, _> = text.split(',').map(|s| s.trim().parse()).collect();
        OpinionConfig::new(ops.map_err(|_| bad())?)
    };
    if cfg.len() != vertex_count {
        return Err(CliError::Validation(format!(
            "configuration has {} entries for {vertex_count} vertices",
            cfg.len()
        )));
    }
    Ok(cfg)
}

fn solver_options(tol: f64) -> PowerOptions {
    PowerOptions {
        residual_tol: tol,
        ..PowerOptions::default()
    }
}

fn metadata(q: &CollapsedQsd, solver: &str) -> QsdMetadata {
    QsdMetadata {
        n: q.spec.n(),
        m: q.spec.m(),
        lambda: q.lambda(),
        residual: q.solution.residual,
        iterations: q.solution.iterations,
        solver: solver.to_string(),
        boundary_gap: Some(lambda_boundary_gap(q)),
    }
}

/// Collapsed QSD of `K_{n,m}`, or with `full` the QSD over full two-opinion
/// colorings.
pub fn cmd_qsd(spec: BipartiteSpec, full: bool, tol: f64) -> Result<Report, CliError> {
    let opts = solver_options(tol);
    let q = solve_collapsed(spec, opts)?;
    let closed = lambda_crw_bipartite(spec.n(), spec.m())?;
    let gap = lambda_boundary_gap(&q);
    let meta = metadata(&q, "power-iteration");
    let mut report = if full {
        let g = make_complete_bipartite(spec);
        let fq = full_qsd_small_graph(&g, 2, opts)?;
        let codec = ColoringCodec::new(g.vertex_count(), 2)?;
        let mut t = Table::new(&["state_index", "coloring", "k", "h", "mass"]);
        let mut rows: Vec<_> = fq.states.iter().zip(&fq.solution.nu).collect();
        rows.sort_by_key(|(c, _)| codec.encode(c));
        for (cfg, &p) in rows {
            let (k, h) = voter_qsd::voter::collapse_bipartite(spec, cfg);
            let coloring: String = cfg.opinions().iter().map(|o| o.to_string()).collect();
            t.push(vec![
                codec.encode(cfg).to_string(),
                coloring,
                k.to_string(),
                h.to_string(),
                num(p),
            ]);
        }
        let mut r = Report::new(t);
        let push_err = fq
            .pushforward(spec)
            .into_iter()
            .map(|(s, p)| (p - q.mass(s.k, s.h)).abs())
            .fold(0.0, f64::max);
        r.checks.push(Check::below("full QSD pushes forward to the collapsed QSD", push_err, 1e-8));
        r.checks.push(Check::below(
            "full and collapsed lambda agree",
            (fq.solution.lambda - q.lambda()).abs(),
            tol,
        ));
        r.checks.push(Check::below("full QSD residual", fq.solution.residual, tol));
        r.checks.push(Check::below(
            "full QSD normalized",
            (fq.solution.nu.iter().sum::<f64>() - 1.0).abs(),
            1e-12,
        ));
        r
    } else {
        let mut t = Table::new(&["k", "h", "mass"]);
        for (s, &p) in q.states.iter().zip(&q.solution.nu) {
            t.push(vec![s.k.to_string(), s.h.to_string(), num(p)]);
        }
        Report::new(t)
    };
    let t = &mut report.table;
    t.comments.insert(0, format!("n={} m={}", spec.n(), spec.m()));
    t.comments.insert(1, format!("lambda={}", num(q.lambda())));
    t.comments.insert(2, format!("lambda_closed_form={}", num(closed)));
    t.comments.insert(3, format!("residual={} iterations={} solver=power-iteration", num(q.solution.residual), q.solution.iterations));
    t.comments.insert(4, format!("boundary_identity_discrepancy={}", num(gap)));
    if full {
        t.comments.insert(5, format!("states={} (full colorings, consensus and anti-aligned removed)", t.rows.len()));
    }
    report.checks.push(Check::below("power-iteration residual", q.solution.residual, tol));
    report.checks.push(Check::below("lambda matches closed form", (q.lambda() - closed).abs(), tol));
    report.checks.push(Check::below("boundary identity", gap, tol));
    report.checks.push(Check::below(
        "masses sum to one",
        (q.solution.nu.iter().sum::<f64>() - 1.0).abs(),
        1e-12,
    ));
    if spec.m() == 1 {
        let star = solve_star_recurrence(spec.n())?;
        let err = (1..spec.n())
            .map(|k| (star.mass(k, 0) - q.mass(k, 0)).abs())
            .fold(0.0, f64::max);
        report.checks.push(Check::below("star recurrence agrees", err, 1e-8));
    }
    report.metadata = Some(serde_json::to_value(meta)?);
    Ok(report)
}

/// Number of disagreeing edges in collapsed state `(k, h)` of `K_{n,m}`.
fn disagreeing_edges(n: usize, m: usize, k: usize, h: usize) -> usize {
    k * (m - h) + (n - k) * h
}

/// Convergence of `mu_{n,m}(k,0)` to the Sibuya limit along `grid`.
pub fn cmd_limit(m: usize, k_max: usize, grid: &[usize], tol: f64) -> Result<Report, CliError> {
    if grid.is_empty() || k_max == 0 {
        return Err(CliError::Validation("need a non-empty n grid and k_max >= 1".into()));
    }
    let gamma = gamma_from_m(m)?;
    let limit = limiting_qsd(m, k_max)?;
    let mut t = Table::new(&["n", "k", "mu", "limit", "abs_error"]);
    t.comment(format!("m={m} gamma_m={}", num(gamma)));
    t.comment("limit law: C ~ fair coin picks the dissenting opinion, D ~ Sibuya(gamma_m) dissenters in L, limit mass f(k)/2");
    let mut checks = Vec::new();
    let mut errors: Vec<Vec<f64>> = Vec::new();
    let mut last = None;
    for &n in grid {
        let spec = BipartiteSpec::new(n, m)?;
        let q = solve_collapsed(spec, solver_options(tol))?;
        let mut errs = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let mu = q.mass(k, 0);
            let e = (mu - limit[k - 1]).abs();
            errs.push(e);
            t.push(vec![n.to_string(), k.to_string(), num(mu), num(limit[k - 1]), num(e)]);
        }
        let max = errs.iter().cloned().fold(0.0, f64::max);
        t.comment(format!("n={n} max_abs_error={} lambda={}", num(max), num(q.lambda())));
        checks.push(Check::below(format!("n={n} residual"), q.solution.residual, tol));
        checks.push(Check::below(format!("n={n} boundary identity"), lambda_boundary_gap(&q), tol));
        errors.push(errs);
        last = Some(q);
    }
    let decreasing = (0..k_max).all(|k| errors.windows(2).all(|w| w[1][k] < w[0][k]));
    t.comment(format!("errors decreasing along the grid for every k: {}", if decreasing { "yes" } else { "no" }));
    let q = last.expect("grid is non-empty");
    let (n, _) = (q.spec.n(), q.spec.m());
    let mut edges: BTreeMap<usize, f64> = BTreeMap::new();
    for (s, &p) in q.states.iter().zip(&q.solution.nu) {
        *edges.entry(disagreeing_edges(n, m, s.k, s.h)).or_insert(0.0) += p;
    }
    let law = Sibuya::new(gamma)?;
    let mut table = PmfTable::new(law);
    for j in 1..=k_max {
        t.comment(format!(
            "edge disagreements at n={n}: P(E = m*{j}) = {} vs P(D = {j}) = {}",
            num(*edges.get(&(m * j)).unwrap_or(&0.0)),
            num(table.pmf(j as u64))
        ));
    }
    let mut report = Report::new(t);
    report.checks = checks;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityParams {
    pub mode: DualityMode,
    pub t_max: usize,
    pub replicas: u64,
    pub seed: u64,
    pub horizon: usize,
    pub cap: u64,
}

/// Voter absorption from all-distinct opinions against full coalescence of
/// walkers started on every vertex.
pub fn cmd_duality(source: &GraphSource, p: &DualityParams) -> Result<Report, CliError> {
    let g = source.graph()?;
    let nv = g.vertex_count();
    let starts: Vec<Vertex> = (0..nv as Vertex).collect();
    let init = OpinionConfig::all_distinct(nv);
    let lambda_pair = pair_chain_matrix(&g).and_then(|s| spectral_radius(&s)).ok();
    let mut report = match p.mode {
        DualityMode::Exact => {
            if p.t_max < 1 {
                return Err(CliError::Validation("t_max must be at least 1".into()));
            }
            let full = transition_matrix_full(&g, nv as u32)?;
            let coal = coalescent_chain(&g, &starts)?;
            let mut start = vec![0.0; full.dim()];
            let i = full.labels().iter().position(|c| *c == init).expect("all-distinct is transient");
            start[i] = 1.0;
            let tau = full.survival_curve(&start, p.t_max);
            let mut e0 = vec![0.0; coal.dim()];
            e0[0] = 1.0;
            let sigma = coal.survival_curve(&e0, p.t_max);
            let mut t = Table::new(&["t", "tau_survival", "sigma_survival", "abs_diff"]);
            let mut max = 0.0f64;
            for s in 0..=p.t_max {
                let d = (tau[s] - sigma[s]).abs();
                max = max.max(d);
                t.push(vec![s.to_string(), num(tau[s]), num(sigma[s]), num(d)]);
            }
            t.comment(format!("graph={} mode=exact voter_states={} coalescent_states={}", source.describe(), full.dim(), coal.dim()));
            t.comment(format!("max_abs_diff={}", num(max)));
            t.comment(format!("decay_rate_at_t_max={}", num(stats::curve_decay_rate(&tau))));
            let mut r = Report::new(t);
            r.checks.push(Check::below("matrix-power survival curves coincide", max, 1e-12));
            if let (Some(l), true) = (lambda_pair, p.t_max >= 40) {
                let gap = (stats::curve_decay_rate(&tau) - l).abs();
                r.checks.push(Check::below("decay rate at t_max matches lambda_CRW", gap, 1e-3));
            }
            r
        }
        DualityMode::MonteCarlo => {
            if p.replicas == 0 {
                return Err(CliError::Validation("replicas must be positive".into()));
            }
            let taus: Vec<u64> = parallel::taus(&g, &init, p.cap, p.seed, p.replicas)?
                .into_iter()
                .map(|t| t.absorbed().unwrap_or(p.cap))
                .collect();
            let sigmas: Vec<u64> = parallel::sigmas(&g, &starts, p.cap, p.seed ^ SIGMA_STREAM, p.replicas)?
                .into_iter()
                .map(|m| m.sigma_max.time().unwrap_or(p.cap))
                .collect();
            let tally = parallel::backward_identity(&g, &init, p.horizon, p.seed ^ TRACE_STREAM, p.replicas)?;
            let ks = stats::ks_distance(&taus, &sigmas);
            let crit = stats::ks_critical(taus.len(), sigmas.len());
            let t_hi = taus.iter().chain(&sigmas).copied().max().unwrap_or(0);
            let mut tc = vec![0u64; t_hi as usize + 1];
            let mut sc = vec![0u64; t_hi as usize + 1];
            taus.iter().for_each(|&x| tc[x as usize] += 1);
            sigmas.iter().for_each(|&x| sc[x as usize] += 1);
            let mut t = Table::new(&["t", "count_tau", "count_sigma"]);
            for s in 0..=t_hi as usize {
                t.push(vec![s.to_string(), tc[s].to_string(), sc[s].to_string()]);
            }
            t.comment(format!("graph={} mode=monte-carlo replicas={} seed={}", source.describe(), p.replicas, p.seed));
            t.comment(format!("ks_distance={} critical_value_0.001={}", num(ks), num(crit)));
            t.comment(format!("backward_trace_identity={}/{} horizon={}", tally.explained, tally.runs, p.horizon));
            let t0 = (p.t_max as u64).min(t_hi.saturating_sub(1));
            let (rate, used) = stats::tail_rate(&taus, t0);
            t.comment(format!("tau_tail_rate_above_{t0}={} samples={used}", num(rate)));
            let mut r = Report::new(t);
            r.checks.push(Check::new(
                "backward trace explains every run",
                tally.explained == tally.runs,
                format!("{}/{}", tally.explained, tally.runs),
            ));
            r.checks.push(Check::below("tau and sigma samples agree (KS)", ks, crit));
            r
        }
    };
    if let Some(l) = lambda_pair {
        report.table.comments.push(format!("lambda_pair_chain={}", num(l)));
    }
    if let Some(l) = source.closed_form_lambda() {
        report.table.comments.push(format!("lambda_closed_form={}", num(l)));
    }
    Ok(report)
}

const SIGMA_STREAM: u64 = 0x5157_4d41_5f43_5257;
const TRACE_STREAM: u64 = 0x5452_4143_455f_4c4f;

#[derive(Debug, Clone, PartialEq)]
pub struct SibuyaParams {
    pub gamma: f64,
    /// Set when `gamma` came from `gamma_m`.
    pub m: Option<usize>,
    pub k_max: usize,
    pub samples: u64,
    pub seed: u64,
}

/// Samples `count` Sibuya draws, chunk `c` on substream `c` of `seed`.
pub fn sibuya_samples(law: Sibuya, count: u64, seed: u64) -> Vec<u64> {
    use rayon::prelude::*;
    let chunk = 1 << 16;
    (0..count.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut rng = RandomStream::substream(seed, c);
            let len = chunk.min(count - c * chunk);
            (0..len).map(|_| law.sample(&mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Histogram of `samples` over bins `1..=k_max` plus a `> k_max` bin against
/// the exact law.
pub fn sibuya_chi_square(law: Sibuya, samples: &[u64], k_max: usize) -> stats::ChiSquare {
    let mut observed = vec![0.0f64; k_max + 1];
    for &d in samples {
        observed[(d.min(k_max as u64 + 1) - 1) as usize] += 1.0;
    }
    let n = samples.len() as f64;
    let mut table = PmfTable::new(law);
    let mut expected: Vec<f64> = (1..=k_max as u64).map(|k| table.pmf(k) * n).collect();
    expected.push(table.survival(k_max as u64) * n);
    stats::chi_square(&observed, &expected)
}

/// `f(k) k^{1+gamma} / C`, which tends to one.
pub fn tail_ratio(law: &Sibuya, k: u64) -> Result<f64, CliError> {
    Ok(law.pmf(k) * (k as f64).powf(1.0 + law.gamma()) / law.tail_constant()?)
}

pub fn cmd_sibuya(p: &SibuyaParams) -> Result<Report, CliError> {
    if p.k_max == 0 {
        return Err(CliError::Validation("k_max must be at least 1".into()));
    }
    let law = Sibuya::new(p.gamma)?;
    let mut table = PmfTable::new(law);
    let mut t = Table::new(&["k", "pmf", "survival"]);
    let mut cum = 0.0;
    for k in 1..=p.k_max as u64 {
        let f = table.pmf(k);
        cum += f;
        t.push(vec![k.to_string(), num(f), num(table.survival(k))]);
    }
    match p.m {
        Some(m) => t.comment(format!("gamma=gamma_{m}={}", num(p.gamma))),
        None => t.comment(format!("gamma={}", num(p.gamma))),
    }
    let mut checks = vec![Check::new("f(1) = gamma", law.pmf(1) == p.gamma, num(law.pmf(1)))];
    checks.push(Check::below(
        "survival equals one minus cumulative mass",
        (table.survival(p.k_max as u64) - (1.0 - cum)).abs(),
        1e-12,
    ));
    if p.gamma < 1.0 {
        t.comment(format!("tail_constant={}", num(law.tail_constant()?)));
        for j in 1..=6 {
            let k = 10u64.pow(j);
            t.comment(format!("tail_ratio k={k} ratio={}", num(tail_ratio(&law, k)?)));
        }
        checks.push(Check::below("tail ratio at k=1e6 within 1%", (tail_ratio(&law, 1_000_000)? - 1.0).abs(), 0.01));
    }
    if p.samples > 0 && p.gamma < 1.0 {
        let draws = sibuya_samples(law, p.samples, p.seed);
        let c = sibuya_chi_square(law, &draws, p.k_max);
        t.comment(format!(
            "sampler samples={} seed={} chi2={} dof={} p={}",
            p.samples,
            p.seed,
            num(c.statistic),
            c.dof,
            num(c.p_value)
        ));
        checks.push(Check::new("sampler chi-square p > 0.001", c.p_value > 1e-3, num(c.p_value)));
    }
    let mut r = Report::new(t);
    r.checks = checks;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateParams {
    pub init: String,
    pub horizon: usize,
    pub seed: u64,
    /// With `Some(t)`, the histogram of `eta_t` given `tau > t` over
    /// `replicas` runs instead of a single trajectory.
    pub condition_on: Option<u64>,
    pub replicas: u64,
}

pub fn cmd_simulate(source: &GraphSource, p: &SimulateParams) -> Result<Report, CliError> {
    let g = source.graph()?;
    let nv = g.vertex_count();
    let init = parse_init(&p.init, nv)?;
    if let Some(t_cond) = p.condition_on {
        let q = init.opinions().iter().max().copied().unwrap_or(0) + 1;
        let codec = ColoringCodec::new(nv, q)?;
        let emp = parallel::conditional(&g, &init, t_cond, p.seed, p.replicas)?;
        let mut t = Table::new(&["state_index", "count"]);
        let mut rows: Vec<(u64, u64)> = emp
            .counts()
            .map(|c| c.iter().map(|(cfg, &n)| (codec.encode(cfg), n)).collect())
            .unwrap_or_default();
        rows.sort_unstable();
        for (i, c) in &rows {
            t.push(vec![i.to_string(), c.to_string()]);
        }
        t.comment(format!("graph={} init={} t={t_cond} replicas={} seed={}", source.describe(), p.init, p.replicas, p.seed));
        t.comment(format!("survivors={} opinions={q} (state_index = base-{q} code, vertex 0 least significant)", emp.survivors()));
        let mut r = Report::new(t);
        r.checks.push(Check::new(
            "counts add up to survivors",
            rows.iter().map(|r| r.1).sum::<u64>() == emp.survivors(),
            emp.survivors().to_string(),
        ));
        return Ok(r);
    }
    let mut rng = RandomStream::new(p.seed);
    let mut cur = init.clone();
    let mut t = Table::new(&["t", "vertex", "opinion"]);
    for (v, o) in cur.opinions().iter().enumerate() {
        t.push(vec!["0".into(), v.to_string(), o.to_string()]);
    }
    let mut events = Vec::new();
    let mut tau = is_consensus(&cur)?.then_some(0);
    for step in 1..=p.horizon {
        if tau.is_some() {
            break;
        }
        let (v, u) = step_in_place(&g, &mut cur, &mut rng);
        events.push((v, u));
        t.push(vec![step.to_string(), v.to_string(), cur.get(v).to_string()]);
        if is_consensus(&cur)? {
            tau = Some(step);
        }
    }
    t.comment(format!("graph={} init={} horizon={} seed={}", source.describe(), p.init, p.horizon, p.seed));
    t.comment("rows after t=0 record the updated voter only".to_string());
    match tau {
        Some(s) => t.comment(format!("tau={s}")),
        None => t.comment(format!("tau>{}", p.horizon)),
    }
    let log = EventLog { events };
    let mut r = Report::new(t);
    r.checks.push(Check::new("events follow graph edges", log.is_consistent_with(&g), ""));
    r.checks.push(Check::new(
        "replay reproduces the run",
        replay(&init, &log).last() == Some(&cur),
        "",
    ));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrwParams {
    pub starts: Option<Vec<Vertex>>,
    pub pair: Option<(Vertex, Vertex)>,
    pub replicas: u64,
    pub seed: u64,
    pub cap: u64,
}

/// Meeting-time histograms of coalescing walks.
pub fn cmd_crw(source: &GraphSource, p: &CrwParams) -> Result<Report, CliError> {
    let g = source.graph()?;
    let starts = p
        .starts
        .clone()
        .unwrap_or_else(|| (0..g.vertex_count() as Vertex).collect());
    if starts.len() < 2 {
        return Err(CliError::Validation("need at least two start vertices".into()));
    }
    let pair = p.pair.unwrap_or((starts[0], starts[1]));
    let key = (pair.0.min(pair.1), pair.0.max(pair.1));
    if !starts.contains(&pair.0) || !starts.contains(&pair.1) || pair.0 == pair.1 {
        return Err(CliError::Validation("pair must be two distinct start vertices".into()));
    }
    let runs = parallel::sigmas(&g, &starts, p.cap, p.seed, p.replicas)?;
    let pair_t: Vec<Option<u64>> = runs.iter().map(|r| r.sigma_pair[&key].time()).collect();
    let max_t: Vec<Option<u64>> = runs.iter().map(|r| r.sigma_max.time()).collect();
    let hi = pair_t.iter().chain(&max_t).flatten().copied().max().unwrap_or(0) as usize;
    let mut pc = vec![0u64; hi + 1];
    let mut mc = vec![0u64; hi + 1];
    pair_t.iter().flatten().for_each(|&x| pc[x as usize] += 1);
    max_t.iter().flatten().for_each(|&x| mc[x as usize] += 1);
    let mut t = Table::new(&["t", "count_sigma_pair", "count_sigma_max"]);
    for s in 1..=hi {
        t.push(vec![s.to_string(), pc[s].to_string(), mc[s].to_string()]);
    }
    let censored = max_t.iter().filter(|x| x.is_none()).count();
    let met: Vec<f64> = max_t.iter().flatten().map(|&x| x as f64).collect();
    let mean = met.iter().sum::<f64>() / met.len().max(1) as f64;
    t.comment(format!("graph={} walkers={} pair=({},{}) replicas={} seed={} cap={}", source.describe(), starts.len(), key.0, key.1, p.replicas, p.seed, p.cap));
    t.comment(format!("mean_sigma_max={} censored={censored}", num(mean)));
    let pair_samples: Vec<u64> = pair_t.iter().flatten().copied().collect();
    if !pair_samples.is_empty() {
        let median = {
            let mut s = pair_samples.clone();
            s.sort_unstable();
            s[s.len() / 2]
        };
        let (rate, used) = stats::tail_rate(&pair_samples, median);
        t.comment(format!("sigma_pair_tail_rate_above_{median}={} samples={used}", num(rate)));
    }
    if let Ok(l) = pair_chain_matrix(&g).and_then(|s| spectral_radius(&s)) {
        t.comment(format!("lambda_pair_chain={}", num(l)));
    }
    let mut r = Report::new(t);
    let ordered = runs.iter().all(|r| {
        let max = r.sigma_pair.values().filter_map(|m| m.time()).max();
        r.sigma_max.time().is_none() || r.sigma_max.time() == max
    });
    r.checks.push(Check::new("sigma_max is the largest pair meeting time", ordered, ""));
    Ok(r)
}
