use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voter_qsd::BipartiteSpec;
use voter_qsd_cli::experiments::{
    cmd_crw, cmd_duality, cmd_limit, cmd_qsd, cmd_simulate, cmd_sibuya, CrwParams, DualityMode,
    DualityParams, Format, GraphSource, Report, SibuyaParams, SimulateParams,
};
use voter_qsd_cli::{checks, io, CliError};

/// Quasi-stationary distributions of the voter model: exact solvers,
/// Monte Carlo and duality experiments.
///
/// Exit status: 0 when every consistency check passes, 1 for invalid input,
/// 2 for numerical failures or failed checks.
#[derive(Debug, Parser)]
#[command(name = "voter-qsd", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run the full verification suite and print one line per criterion.
    #[arg(long)]
    check: bool,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// RNG seed; identical seeds give byte-identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo replicas.
    #[arg(long, global = true, default_value_t = 100_000)]
    replicas: u64,
    /// Residual tolerance of the eigen-solver and of the exact checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write the table here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Also write the metadata JSON here (commands that produce it).
    #[arg(long, global = true)]
    metadata: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Clone)]
struct GraphArgs {
    /// Size of the large group of K_{n,m}.
    #[arg(long, requires = "m")]
    n: Option<usize>,
    /// Size of the small group of K_{n,m}.
    #[arg(long, requires = "n")]
    m: Option<usize>,
    /// Complete graph K_N.
    #[arg(long, conflicts_with_all = ["n", "graph"])]
    complete: Option<usize>,
    /// Graph JSON file {"n_vertices": .., "edges": [[u, v], ..]}.
    #[arg(long, conflicts_with = "n")]
    graph: Option<PathBuf>,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource, CliError> {
        match (self.n, self.m, self.complete, &self.graph) {
            (Some(n), Some(m), None, None) => Ok(GraphSource::Bipartite(BipartiteSpec::new(n, m)?)),
            (None, None, Some(n), None) => Ok(GraphSource::Complete(n)),
            (None, None, None, Some(p)) => Ok(GraphSource::File(io::read_graph(p)?)),
            _ => Err(CliError::Validation(
                "choose a graph with --n/--m, --complete or --graph".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QSD of the collapsed (k, h) chain on K_{n,m}.
    Qsd {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Tabulate the QSD over full two-opinion colorings instead.
        #[arg(long)]
        full: bool,
    },
    /// Convergence of mu_{n,m}(k,0) to the Sibuya limit f(k)/2.
    Limit {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "10,40,160,640,2560")]
        n_grid: Vec<usize>,
    },
    /// Voter absorption against coalescing random walks.
    Duality {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Last time of the exact survival curves; tail-fit threshold in mc mode.
        #[arg(long, default_value_t = 40)]
        t_max: usize,
        /// Length of each recorded run checked by the backward trace.
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        /// Censoring cap for sampled absorption and meeting times.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Sibuya law tables, tail asymptotics and a sampler check.
    Sibuya {
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        gamma: Option<f64>,
        /// Use gamma_m = 2(1 - sqrt(1 - 1/(2m))).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        /// Sampler draws; defaults to --replicas.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Voter trajectory, or the law of eta_t given survival to t.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        /// distinct | dissenter:V | uniform:O | comma-separated opinions
        #[arg(long, default_value = "distinct")]
        init: String,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        /// Histogram of eta_T over runs with tau > T.
        #[arg(long, value_name = "T")]
        condition_on: Option<u64>,
    },
    /// Meeting-time histograms of coalescing random walks.
    Crw {
        #[command(flatten)]
        graph: GraphArgs,
        /// Start vertices (default: all).
        #[arg(long, value_delimiter = ',')]
        starts: Option<Vec<u32>>,
        /// Pair whose meeting time is tabulated (default: first two starts).
        #[arg(long, value_delimiter = ',', num_args = 2)]
        pair: Option<Vec<u32>>,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
}

fn run(command: Command, c: &Common) -> Result<Report, CliError> {
    match command {
        Command::Qsd { n, m, full } => cmd_qsd(BipartiteSpec::new(n, m)?, full, c.tol),
        Command::Limit { m, k_max, n_grid } => cmd_limit(m, k_max, &n_grid, c.tol),
        Command::Duality { graph, mode, t_max, horizon, cap } => cmd_duality(
            &graph.source()?,
            &DualityParams {
                mode: match mode {
                    Mode::Exact => DualityMode::Exact,
                    Mode::Mc => DualityMode::MonteCarlo,
                },
                t_max,
                replicas: c.replicas,
                seed: c.seed,
                horizon,
                cap,
            },
        ),
        Command::Sibuya { gamma, m, k_max, samples } => {
            let gamma = match (gamma, m) {
                (Some(g), _) => g,
                (None, Some(m)) => voter_qsd::sibuya::gamma_from_m(m)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            cmd_sibuya(&SibuyaParams {
                gamma,
                m,
                k_max,
                samples: samples.unwrap_or(c.replicas),
                seed: c.seed,
            })
        }
        Command::Simulate { graph, init, horizon, condition_on } => cmd_simulate(
            &graph.source()?,
            &SimulateParams {
                init,
                horizon,
                seed: c.seed,
                condition_on,
                replicas: c.replicas,
            },
        ),
        Command::Crw { graph, starts, pair, cap } => cmd_crw(
            &graph.source()?,
            &CrwParams {
                starts,
                pair: pair.map(|p| (p[0], p[1])),
                replicas: c.replicas,
                seed: c.seed,
                cap,
            },
        ),
    }
}

fn emit(report: &Report, c: &Common) -> Result<(), CliError> {
    let format = match c.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let text = report.render(format);
    match &c.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    if let (Some(p), Some(meta)) = (&c.metadata, &report.metadata) {
        std::fs::write(p, serde_json::to_string_pretty(meta)? + "\n")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.check {
        let mut ok = true;
        for criterion in checks::all() {
            let o = criterion();
            ok &= o.passed;
            println!("{}", o.line());
        }
        return ExitCode::from(if ok { 0 } else { 2 });
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand or --check is required (see --help)");
        return ExitCode::from(1);
    };
    let result = run(command, &cli.common).and_then(|r| emit(&r, &cli.common).map(|_| r));
    match result {
        Ok(r) if r.passed() => ExitCode::SUCCESS,
        Ok(r) => {
            for f in r.failures() {
                eprintln!("check failed: {} ({})", f.name, f.detail);
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
