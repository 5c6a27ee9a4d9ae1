use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdag::backend::{Backend, BackendConfig, BackendKind, Bucket};
use qdag::circuits::{
    compile_zhegalkin, eval_circuit, parse_assignment, parse_circuit, parse_zhegalkin, rewrite_xor, ANF_GRAMMAR,
};
use qdag::dag::{check_order, relabel, Dag, Permutation};
use qdag::dp::{parse_problem, run_dp};
use qdag::format::parse_edge_list;
use qdag::generate::GeneratorMode;
use qdag::harness::{fit_rows, fit_scaling, parse_sweep, run_experiment, summarize, write_csv, Application, ExperimentSpec};
use qdag::paths::{diameter, longest_paths, shortest_paths};
use qdag::search::BoostPolicy;
use qdag::topsort::quantum_topsort;

#[derive(Parser)]
#[command(name = "qdag", version, about = "Quantum DP on DAGs, simulated with query accounting")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// statevector or cost-model
    #[arg(long, global = true)]
    backend: Option<BackendKind>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// log-n, log-q or a repetition count
    #[arg(long, global = true, default_value = "log-n")]
    policy: BoostPolicy,
    /// Failure probability of one cost-model search
    #[arg(long, global = true)]
    base_error: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    trials: usize,
    /// Write bench rows here instead of stdout
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// key=value backend settings; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Topological order of the non-sinks of an edge-list file
    Topsort { file: PathBuf },
    /// Evaluate a circuit file under an assignment
    EvalCircuit {
        file: PathBuf,
        #[arg(long)]
        assign: String,
        /// Replace XOR gates before evaluating
        #[arg(long)]
        rewrite_xor: bool,
    },
    /// Evaluate an ANF polynomial such as "1 ^ x1 ^ x1&x2"
    EvalZhegalkin {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        assign: String,
    },
    /// Run the DP sweep on a problem file and print the root value
    Dp {
        file: PathBuf,
        /// Print every vertex value
        #[arg(long)]
        all: bool,
    },
    /// Longest path lengths from a source
    LongestPath {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        source: usize,
    },
    /// Shortest path lengths from a source
    ShortestPath {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        source: usize,
    },
    /// Diameter of an unweighted DAG
    Diameter { file: PathBuf },
    /// Query-count sweep over random instances, written as CSV
    Bench {
        #[arg(long)]
        app: Application,
        /// n:m pairs, or plain n values with m = edge_factor * n^2
        #[arg(long)]
        sweep: String,
        #[arg(long, default_value_t = 0.125)]
        edge_factor: f64,
        /// uniform, chain or layered:DEPTH
        #[arg(long, default_value = "uniform")]
        mode: GeneratorMode,
        /// Append a wall_time column
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

fn input(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

fn internal(e: impl ToString) -> Failure {
    Failure::Internal(e.to_string())
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn backend_config(g: &Global) -> Result<BackendConfig, Failure> {
    let mut cfg = match &g.config {
        Some(path) => BackendConfig::from_kv_str(&read(path)?).map_err(input)?,
        None => BackendConfig::default(),
    };
    if let Some(kind) = g.backend {
        cfg.kind = kind;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(e) = g.base_error {
        cfg.base_error = e;
    }
    cfg.validate().map_err(input)?;
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// In-lists (charged when missing) and an ordered relabeling (by quantum
/// topological sort when needed). Returns the map back to input ids.
fn prepare(mut dag: Dag, backend: &mut Backend) -> Result<(Dag, Permutation), Failure> {
    let reads = dag.ensure_in_adjacency();
    backend.charge(Bucket::Preprocessing, reads);
    if dag.is_ordered() {
        let n = dag.n();
        return Ok((dag, Permutation::identity(n)));
    }
    let out = quantum_topsort(&dag, backend).map_err(internal)?;
    check_order(&dag, &out.order).map_err(|e| internal(format!("topological sort failed: {e}")))?;
    let (mut ordered, perm) = relabel(&dag, &out.order).map_err(internal)?;
    ordered.ensure_in_adjacency();
    Ok((ordered, perm))
}

fn fmt_list(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let cfg = backend_config(g)?;
    let mut backend = Backend::new(cfg.clone()).map_err(input)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut say = |line: String| writeln!(out, "{line}").map_err(internal);

    match cli.cmd {
        Cmd::Topsort { file } => {
            let dag = parse_edge_list(&read(&file)?).map_err(input)?;
            let result = quantum_topsort(&dag, &mut backend).map_err(internal)?;
            say(fmt_list(result.order.iter().map(usize::to_string)))?;
            if let Err(e) = check_order(&dag, &result.order) {
                eprintln!("warning: order is not topological ({e})");
            }
        }
        Cmd::EvalCircuit { file, assign, rewrite_xor: rewrite } => {
            let mut circuit = parse_circuit(&read(&file)?).map_err(input)?;
            if rewrite {
                circuit = rewrite_xor(&circuit);
            }
            let a = parse_assignment(&assign).map_err(input)?;
            let v = eval_circuit(&circuit, &a, g.policy, &mut backend).map_err(input)?;
            say(u8::from(v).to_string())?;
        }
        Cmd::EvalZhegalkin { formula, assign } => {
            let poly = parse_zhegalkin(&formula).map_err(|e| input(format!("{e}\n{ANF_GRAMMAR}")))?;
            let a = parse_assignment(&assign).map_err(input)?;
            let v = if poly.is_degenerate() {
                poly.constant()
            } else {
                let compiled = compile_zhegalkin(&poly).map_err(internal)?;
                eval_circuit(&compiled.circuit, &a, g.policy, &mut backend).map_err(input)?
            };
            say(u8::from(v).to_string())?;
        }
        Cmd::Dp { file, all } => {
            let mut problem = parse_problem(&read(&file)?).map_err(input)?;
            let mut perm = Permutation::identity(problem.dag().n());
            if !problem.dag().is_ordered() {
                let mut dag = problem.dag().clone();
                backend.charge(Bucket::Preprocessing, dag.ensure_in_adjacency());
                let order = quantum_topsort(&dag, &mut backend).map_err(internal)?.order;
                check_order(&dag, &order).map_err(|e| internal(format!("topological sort failed: {e}")))?;
                (problem, perm) = problem.relabeled(&order).map_err(internal)?;
            }
            let result = run_dp(&problem, g.policy, &mut backend).map_err(input)?;
            if all {
                say(fmt_list((1..=perm.len()).map(|v| result.values[perm.to_new(v) - 1].to_string())))?;
            } else {
                say(result.root().to_string())?;
            }
        }
        Cmd::LongestPath { file, source } => say(paths(&file, source, true, g.policy, &mut backend)?)?,
        Cmd::ShortestPath { file, source } => say(paths(&file, source, false, g.policy, &mut backend)?)?,
        Cmd::Diameter { file } => {
            let dag = parse_edge_list(&read(&file)?).map_err(input)?;
            let (dag, _) = prepare(dag, &mut backend)?;
            say(diameter(&dag, g.policy, &mut backend).map_err(input)?.diam.to_string())?;
        }
        Cmd::Bench { app, sweep, edge_factor, mode, timings } => {
            let points = parse_sweep(&sweep, |n| (edge_factor * (n * n) as f64).round() as usize).map_err(input)?;
            let mut spec = ExperimentSpec::new(app, points);
            spec.mode = mode;
            spec.trials = g.trials;
            spec.policy = g.policy;
            spec.seed = cfg.seed;
            spec.backend = cfg;
            let rows = run_experiment(&spec).map_err(input)?;
            match &g.csv {
                Some(path) => {
                    let f = fs::File::create(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    write_csv(&rows, f, timings).map_err(internal)?;
                }
                None => write_csv(&rows, io::stdout().lock(), timings).map_err(internal)?,
            }
            for s in summarize(&rows) {
                eprintln!(
                    "n={} m={} n_hat={:.1} trials={} quantum={:.1} classical={:.1} error_rate={:.4}",
                    s.n, s.m, s.n_hat, s.trials, s.mean_quantum, s.mean_classical, s.error_rate
                );
            }
            if let Ok(fit) = fit_scaling(&fit_rows(&rows)) {
                eprintln!(
                    "fit: exponent={:.4} constant={:.4} residual={:.4}",
                    fit.exponent, fit.constant, fit.residual
                );
            }
            return Ok(());
        }
    }
    eprintln!("{}", backend.ledger());
    Ok(())
}

fn paths(file: &Path, source: usize, longest: bool, policy: BoostPolicy, backend: &mut Backend) -> Result<String, Failure> {
    let dag = parse_edge_list(&read(file)?).map_err(input)?;
    if source == 0 || source > dag.n() {
        return Err(input(format!("source {source} is not a vertex")));
    }
    let (dag, perm) = prepare(dag, backend)?;
    let s = perm.to_new(source);
    let result = if longest {
        longest_paths(&dag, s, policy, backend)
    } else {
        shortest_paths(&dag, s, policy, backend)
    }
    .map_err(input)?;
    Ok(fmt_list((1..=dag.n()).map(|v| result.dist(perm.to_new(v)).to_string())))
}
