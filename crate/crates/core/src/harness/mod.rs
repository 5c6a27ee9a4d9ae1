//! Experiment runner: random instances per sweep point, the quantum path
//! and its classical oracle on each, one [`ExperimentRow`] per trial.

mod fit;
mod report;

pub use fit::{cost_shape, fit_rows, fit_scaling, FitError, ScalingFit, ScalingPoint};
pub use report::{summarize, write_csv, PointSummary, CSV_HEADER};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::backend::{Backend, BackendConfig, BackendError};
use crate::circuits::{
    compile_zhegalkin, eval_circuit, eval_classical, random_circuit, random_poly, Assignment, CircuitError, Gate,
};
use crate::dag::{check_order, Dag};
use crate::dp::{classical_dp, random_problem, run_dp, Domain, DpError};
use crate::generate::{random_dag, random_weighted_dag, shuffle_ids, GenerateError, GeneratorMode};
use crate::paths::{
    classical_diameter, classical_longest_paths, classical_shortest_paths, diameter, longest_paths, shortest_paths,
    PathError,
};
use crate::search::{BoostPolicy, VertexFn};
use crate::topsort::{quantum_topsort, TopsortError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Topsort(#[from] TopsortError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Application {
    Topsort,
    Dp,
    Circuit,
    Zhegalkin,
    Longest,
    Shortest,
    Diameter,
}

impl Application {
    pub const ALL: [Application; 7] = [
        Self::Topsort,
        Self::Dp,
        Self::Circuit,
        Self::Zhegalkin,
        Self::Longest,
        Self::Shortest,
        Self::Diameter,
    ];
}

impl FromStr for Application {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "topsort" => Ok(Self::Topsort),
            "dp" => Ok(Self::Dp),
            "circuit" => Ok(Self::Circuit),
            "zhegalkin" => Ok(Self::Zhegalkin),
            "longest" | "longest-path" => Ok(Self::Longest),
            "shortest" | "shortest-path" => Ok(Self::Shortest),
            "diameter" => Ok(Self::Diameter),
            _ => Err(format!("unknown application {s:?}")),
        }
    }
}

impl fmt::Display for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Topsort => "topsort",
            Self::Dp => "dp",
            Self::Circuit => "circuit",
            Self::Zhegalkin => "zhegalkin",
            Self::Longest => "longest",
            Self::Shortest => "shortest",
            Self::Diameter => "diameter",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub app: Application,
    pub mode: GeneratorMode,
    /// Sweep points `(n, m)`.
    pub points: Vec<(usize, usize)>,
    pub trials: usize,
    pub policy: BoostPolicy,
    pub backend: BackendConfig,
    pub seed: u64,
    /// Vertex functions drawn for the DP application.
    pub dp_kinds: Vec<VertexFn>,
}

impl ExperimentSpec {
    pub fn new(app: Application, points: Vec<(usize, usize)>) -> Self {
        Self {
            app,
            mode: GeneratorMode::UniformOrderedPairs,
            points,
            trials: 1,
            policy: BoostPolicy::LogNHat,
            backend: BackendConfig::default(),
            seed: 0,
            dp_kinds: vec![VertexFn::And, VertexFn::Or, VertexFn::Nand],
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::InvalidSpec("trials must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(HarnessError::InvalidSpec("no sweep points".into()));
        }
        if self.dp_kinds.is_empty() {
            return Err(HarnessError::InvalidSpec("no DP vertex functions".into()));
        }
        for &(n, m) in &self.points {
            if n < 2 || m > n * (n - 1) / 2 {
                return Err(HarnessError::InvalidSpec(format!("point (n={n}, m={m}) is not realizable")));
            }
        }
        self.backend.validate()?;
        Ok(())
    }
}

/// Parses `64:512,128:2048` or `64,128` (with `m` from `edges_of(n)`).
pub fn parse_sweep(text: &str, edges_of: impl Fn(usize) -> usize) -> Result<Vec<(usize, usize)>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let bad = || format!("bad sweep point {p:?}");
            match p.split_once(':') {
                Some((n, m)) => Ok((n.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?)),
                None => {
                    let n: usize = p.parse().map_err(|_| bad())?;
                    Ok((n, edges_of(n)))
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub point: usize,
    pub n: usize,
    pub m: usize,
    pub n_hat: usize,
    pub trial: usize,
    /// Search plus boosting charges.
    pub quantum_queries: u64,
    pub preprocessing_queries: u64,
    pub classical_queries: u64,
    pub correct: bool,
    /// Seconds; informational only.
    pub wall_time: f64,
}

/// SplitMix64 finalizer, for deriving independent seeds from indices.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every `(point, trial)` pair in parallel. Rows come back sorted by
/// point then trial and, apart from `wall_time`, depend only on the spec.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>, HarnessError> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.points.len())
        .flat_map(|p| (0..spec.trials).map(move |t| (p, t)))
        .collect();
    let mut rows = jobs
        .into_par_iter()
        .map(|(p, t)| run_trial(spec, p, t))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| (r.point, r.trial));
    Ok(rows)
}

struct Measured {
    n_hat: usize,
    classical: u64,
    correct: bool,
}

fn run_trial(spec: &ExperimentSpec, point: usize, trial: usize) -> Result<ExperimentRow, HarnessError> {
    let (n, m) = spec.points[point];
    let seed = mix_seed(spec.seed, point as u64, trial as u64);
    let instance_seed = mix_seed(seed, 1, 0);
    let mut backend = Backend::new(spec.backend.clone().with_seed(mix_seed(seed, 2, 0)))?;
    let start = Instant::now();
    let got = measure(spec, n, m, instance_seed, &mut backend)?;
    let wall_time = start.elapsed().as_secs_f64();
    let ledger = backend.ledger();
    Ok(ExperimentRow {
        point,
        n,
        m,
        n_hat: got.n_hat,
        trial,
        quantum_queries: ledger.quantum(),
        preprocessing_queries: ledger.preprocessing,
        classical_queries: got.classical,
        correct: got.correct,
        wall_time,
    })
}

fn measure(spec: &ExperimentSpec, n: usize, m: usize, seed: u64, backend: &mut Backend) -> Result<Measured, HarnessError> {
    let policy = spec.policy;
    Ok(match spec.app {
        Application::Topsort => {
            let mut dag = shuffle_ids(&random_dag(n, m, spec.mode, seed)?, mix_seed(seed, 3, 0));
            dag.ensure_in_adjacency();
            let out = quantum_topsort(&dag, backend)?;
            let correct = out.order.len() == dag.n_hat() && check_order(&dag, &out.order).is_ok();
            Measured { n_hat: dag.n_hat(), classical: dag.m() as u64, correct }
        }
        Application::Dp => {
            let dag = random_dag(n, m, spec.mode, seed)?;
            let all_boolean = spec.dp_kinds.iter().all(|k| k.is_boolean());
            let domain = if all_boolean { Domain::Boolean } else { Domain::Real };
            let problem = random_problem(dag, &spec.dp_kinds, domain, mix_seed(seed, 3, 0))?;
            let got = run_dp(&problem, policy, backend)?;
            let want = classical_dp(&problem);
            Measured {
                n_hat: problem.dag().n_hat(),
                classical: want.edge_inspections,
                correct: got.root() == want.values[0],
            }
        }
        Application::Circuit => {
            let vars = (n / 4).max(2);
            let gates = n.saturating_sub(vars).max(1);
            let extra = m.saturating_sub(2 * gates);
            let c = random_circuit(gates, vars, extra, &[Gate::And, Gate::Or, Gate::Nand], seed);
            let a = random_assignment(&c.var_names(), mix_seed(seed, 3, 0));
            let got = eval_circuit(&c, &a, policy, backend)?;
            Measured {
                n_hat: c.n_hat(),
                classical: c.edge_count() as u64,
                correct: got == eval_classical(&c, &a)?,
            }
        }
        Application::Zhegalkin => {
            let vars = n.clamp(2, 32) as u32;
            let k = (m / 4).clamp(1, 1 << 12);
            let poly = random_poly(vars, k, 4, seed);
            let compiled = compile_zhegalkin(&poly)?;
            let a = random_assignment(&compiled.circuit.var_names(), mix_seed(seed, 3, 0));
            let got = eval_circuit(&compiled.circuit, &a, policy, backend)?;
            let want = poly.eval(|i| a[&format!("x{i}")]);
            Measured { n_hat: compiled.n_hat(), classical: compiled.edge_count() as u64, correct: got == want }
        }
        Application::Longest | Application::Shortest => {
            let dag = random_weighted_dag(n, m, spec.mode, 10, seed)?;
            let (got, want) = if spec.app == Application::Longest {
                (longest_paths(&dag, 1, policy, backend)?, classical_longest_paths(&dag, 1))
            } else {
                (shortest_paths(&dag, 1, policy, backend)?, classical_shortest_paths(&dag, 1))
            };
            Measured { n_hat: dag.n_hat(), classical: dag.m() as u64, correct: got.t == want }
        }
        Application::Diameter => {
            let dag = random_dag(n, m, spec.mode, seed)?;
            let got = diameter(&dag, policy, backend)?;
            Measured {
                n_hat: dag.n_hat(),
                classical: (dag.n() * dag.m()) as u64,
                correct: got.diam == classical_diameter(&dag),
            }
        }
    })
}

fn random_assignment(names: &[String], seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    names.iter().map(|name| (name.clone(), rng.gen_bool(0.5))).collect()
}

/// `sum_i sqrt(d_i)` over the non-sinks.
pub fn sqrt_degree_sum(dag: &Dag) -> f64 {
    (1..=dag.n()).map(|v| (dag.out_degree(v) as f64).sqrt()).sum()
}

/// Checks `sum_i sqrt(d_i) <= sqrt(n_hat * m)` (up to rounding).
pub fn degree_bound_holds(dag: &Dag) -> bool {
    sqrt_degree_sum(dag) <= ((dag.n_hat() * dag.m()) as f64).sqrt() * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_spec(app: Application) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(app, vec![(20, 50), (32, 120)]);
        spec.backend = BackendConfig::zero_error();
        spec.trials = 3;
        spec.seed = 7;
        spec
    }

    #[test]
    fn zero_error_rows_are_correct_for_every_app() {
        for app in Application::ALL {
            let rows = run_experiment(&zero_spec(app)).unwrap();
            assert_eq!(rows.len(), 6, "{app}");
            assert!(rows.iter().all(|r| r.correct), "{app}");
            assert!(rows.iter().all(|r| r.quantum_queries > 0), "{app}");
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let mut spec = zero_spec(Application::Dp);
        spec.backend = BackendConfig::default().with_seed(3);
        let strip = |rows: Vec<ExperimentRow>| -> Vec<ExperimentRow> {
            rows.into_iter().map(|r| ExperimentRow { wall_time: 0.0, ..r }).collect()
        };
        assert_eq!(strip(run_experiment(&spec).unwrap()), strip(run_experiment(&spec).unwrap()));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = zero_spec(Application::Topsort);
        spec.trials = 0;
        assert!(run_experiment(&spec).is_err());
        let spec = ExperimentSpec::new(Application::Topsort, vec![(4, 7)]);
        assert!(run_experiment(&spec).is_err());
    }

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("64:512, 128:2048", |_| 0).unwrap(), vec![(64, 512), (128, 2048)]);
        assert_eq!(parse_sweep("64,128", |n| n * n / 8).unwrap(), vec![(64, 512), (128, 2048)]);
        assert!(parse_sweep("64:x", |_| 0).is_err());
    }

    #[test]
    fn degree_bound_on_random_graphs() {
        for seed in 0..20 {
            let dag = random_dag(40, 150, GeneratorMode::UniformOrderedPairs, seed).unwrap();
            assert!(degree_bound_holds(&dag));
        }
    }
}
