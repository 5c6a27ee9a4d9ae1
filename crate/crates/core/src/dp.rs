//! Dynamic programming over ordered DAGs with boosted vertex functions.
//!
//! Every non-sink `v_i` carries a function `h_i` from [`VertexFn`] and every
//! sink a constant leaf value. The quantum pass fills `t[i]` for
//! `i = n_hat, ..., 1`, each entry by one boosted search over the values
//! of `D_i`; the classical pass computes the same values exactly and is
//! the correctness oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::backend::Backend;
use crate::dag::{classical_topsort, relabel, Dag, DagError, Permutation};
use crate::format::{parse_usize, syntax, EdgeListFile, FormatError};
use crate::search::{boosted, log_reps, BoostPolicy, SearchError, VertexFn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DpError {
    #[error("the DAG is not ordered; topologically sort and relabel it first")]
    NotOrdered,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("vertex {0}: gates belong on non-sinks and leaf values on sinks")]
    NodeMismatch(usize),
    #[error("expected {expected} node entries, got {got}")]
    NodeCount { expected: usize, got: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Dag(#[from] DagError),
}

/// Value set of the DP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Boolean,
    Real,
    /// Integers `0..=Z`.
    BoundedInt(u64),
}

impl Domain {
    fn admits(self, value: f64) -> bool {
        match self {
            Self::Boolean => value == 0.0 || value == 1.0,
            Self::Real => !value.is_nan(),
            Self::BoundedInt(z) => value.fract() == 0.0 && (0.0..=z as f64).contains(&value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Gate(VertexFn),
    Leaf(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpProblem {
    dag: Dag,
    nodes: Vec<Node>,
    domain: Domain,
}

impl DpProblem {
    /// `nodes[v - 1]` describes vertex `v`.
    pub fn new(dag: Dag, nodes: Vec<Node>, domain: Domain) -> Result<Self, DpError> {
        if nodes.len() != dag.n() {
            return Err(DpError::NodeCount { expected: dag.n(), got: nodes.len() });
        }
        for (i, node) in nodes.iter().enumerate() {
            let v = i + 1;
            match (*node, dag.out_degree(v) > 0) {
                (Node::Gate(kind), true) => {
                    if kind.is_boolean() && domain != Domain::Boolean {
                        return Err(DpError::DomainMismatch(format!("{kind} at vertex {v} needs a Boolean domain")));
                    }
                }
                (Node::Leaf(x), false) => {
                    if !domain.admits(x) {
                        return Err(DpError::DomainMismatch(format!("leaf {v} value {x} outside {domain:?}")));
                    }
                }
                _ => return Err(DpError::NodeMismatch(v)),
            }
        }
        Ok(Self { dag, nodes, domain })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn node(&self, v: usize) -> Node {
        self.nodes[v - 1]
    }

    pub fn gate(&self, v: usize) -> Option<VertexFn> {
        match self.nodes[v - 1] {
            Node::Gate(k) => Some(k),
            Node::Leaf(_) => None,
        }
    }

    pub fn leaf(&self, v: usize) -> Option<f64> {
        match self.nodes[v - 1] {
            Node::Leaf(x) => Some(x),
            Node::Gate(_) => None,
        }
    }

    /// The same problem renumbered by `order` (see [`relabel`]).
    pub fn relabeled(&self, order: &[usize]) -> Result<(DpProblem, Permutation), DpError> {
        let (dag, perm) = relabel(&self.dag, order)?;
        let nodes = (1..=dag.n()).map(|v| self.nodes[perm.to_old(v) - 1]).collect();
        Ok((DpProblem { dag, nodes, domain: self.domain }, perm))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpOutput {
    /// `values[v - 1]` is the computed `f(v_v)`.
    pub values: Vec<f64>,
    /// Repetitions used per boosted search.
    pub k: u32,
}

impl DpOutput {
    /// `t[1]`, the answer at the first vertex.
    pub fn root(&self) -> f64 {
        self.values[0]
    }
}

/// Length (in edges) of the longest path starting at `target`.
pub fn farthest_hops(dag: &Dag, target: usize) -> usize {
    let topo = classical_topsort(dag);
    let mut hops = vec![0usize; dag.n()];
    for &v in topo.order.iter().rev() {
        hops[v - 1] = 1 + dag.out(v).iter().map(|&u| hops[u - 1]).max().unwrap_or(0);
    }
    hops[target - 1]
}

/// Repetition count for `policy` on `dag`, with `target` the vertex whose
/// value is the answer.
pub fn resolve_boost(policy: BoostPolicy, dag: &Dag, target: usize) -> u32 {
    match policy {
        BoostPolicy::LogNHat => log_reps(dag.n_hat()),
        BoostPolicy::LogQ => log_reps(farthest_hops(dag, target).max(2)),
        BoostPolicy::Explicit(k) => k.max(1),
    }
}

/// The backward sweep shared by the DP and circuit evaluators. Fills
/// sinks from `leaf`, then non-sinks `n_hat` down to `stop_at`; vertices
/// below `stop_at` are left as NaN. `arg(i, pos, value)` maps the value of
/// the `pos`-th child of `i` before it is passed to `h_i`.
pub(crate) fn sweep(
    dag: &Dag,
    stop_at: usize,
    k: u32,
    backend: &mut Backend,
    kind: impl Fn(usize) -> VertexFn,
    leaf: impl Fn(usize) -> f64,
    arg: impl Fn(usize, usize, f64) -> f64,
) -> Result<Vec<f64>, SearchError> {
    let n = dag.n();
    let n_hat = dag.n_hat();
    let mut t = vec![f64::NAN; n];
    for v in n_hat + 1..=n {
        t[v - 1] = leaf(v);
    }
    let mut args = Vec::new();
    for i in (stop_at.max(1)..=n_hat).rev() {
        args.clear();
        for (pos, &j) in dag.out(i).iter().enumerate() {
            debug_assert!(j > i);
            args.push(arg(i, pos, t[j - 1]));
        }
        t[i - 1] = boosted(backend, kind(i), &args, k)?.value;
    }
    Ok(t)
}

/// Quantum DP pass. The DAG must be ordered.
pub fn run_dp(problem: &DpProblem, policy: BoostPolicy, backend: &mut Backend) -> Result<DpOutput, DpError> {
    let dag = &problem.dag;
    if !dag.is_ordered() {
        return Err(DpError::NotOrdered);
    }
    let k = resolve_boost(policy, dag, 1);
    let values = sweep(
        dag,
        1,
        k,
        backend,
        |i| problem.gate(i).expect("non-sinks carry gates"),
        |v| problem.leaf(v).expect("sinks carry leaves"),
        |_, _, x| x,
    )?;
    Ok(DpOutput { values, k })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalRun {
    pub values: Vec<f64>,
    /// Out-list entries read, one per edge.
    pub edge_inspections: u64,
}

/// Exact evaluation in reverse topological order. Works on unordered DAGs.
pub fn classical_dp(problem: &DpProblem) -> ClassicalRun {
    let dag = &problem.dag;
    let mut values = vec![f64::NAN; dag.n()];
    for v in 1..=dag.n() {
        if let Node::Leaf(x) = problem.node(v) {
            values[v - 1] = x;
        }
    }
    let mut inspections = 0u64;
    let mut args = Vec::new();
    for &v in classical_topsort(dag).order.iter().rev() {
        args.clear();
        args.extend(dag.out(v).iter().map(|&u| values[u - 1]));
        inspections += args.len() as u64;
        values[v - 1] = problem.gate(v).expect("non-sink").apply(&args);
    }
    ClassicalRun { values, edge_inspections: inspections }
}

/// Attaches random gates (drawn from `kinds`) and random leaves to `dag`.
/// Boolean domains get 0/1 leaves, others integers in `0..=100` (or `0..=Z`).
pub fn random_problem(dag: Dag, kinds: &[VertexFn], domain: Domain, seed: u64) -> Result<DpProblem, DpError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = match domain {
        Domain::Boolean => 1,
        Domain::Real => 100,
        Domain::BoundedInt(z) => z,
    };
    let nodes = (1..=dag.n())
        .map(|v| {
            if dag.out_degree(v) > 0 {
                Node::Gate(kinds[rng.gen_range(0..kinds.len())])
            } else {
                Node::Leaf(rng.gen_range(0..=top) as f64)
            }
        })
        .collect();
    DpProblem::new(dag, nodes, domain)
}

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Dp(#[from] DpError),
}

/// Parses an edge list extended with `GATE id KIND`, `LEAF id value` and
/// an optional `DOMAIN boolean|real|int Z` line. Without a `DOMAIN` line
/// the domain is Boolean when every gate is AND, OR or NAND, else real.
pub fn parse_problem(text: &str) -> Result<DpProblem, ProblemFileError> {
    let file = EdgeListFile::parse(text)?;
    let dag = file.to_dag()?;
    let mut gates: Vec<Option<VertexFn>> = vec![None; file.n];
    let mut leaves: Vec<Option<f64>> = vec![None; file.n];
    let mut domain = None;
    let id = |tok: &str, line: usize| -> Result<usize, FormatError> {
        let v = parse_usize(tok, line)?;
        if v == 0 || v > file.n {
            return Err(syntax(line, format!("vertex {v} out of range")));
        }
        Ok(v)
    };
    for d in &file.directives {
        let arg = |i: usize| d.args.get(i).map(String::as_str).ok_or_else(|| syntax(d.line, format!("{} is missing arguments", d.keyword)));
        match d.keyword.as_str() {
            "GATE" => {
                let v = id(arg(0)?, d.line)?;
                gates[v - 1] = Some(arg(1)?.parse().map_err(|e: String| syntax(d.line, e))?);
            }
            "LEAF" => {
                let v = id(arg(0)?, d.line)?;
                let x = arg(1)?;
                leaves[v - 1] = Some(parse_value(x).ok_or_else(|| syntax(d.line, format!("bad value {x:?}")))?);
            }
            "DOMAIN" => {
                domain = Some(match arg(0)? {
                    "boolean" | "bool" => Domain::Boolean,
                    "real" => Domain::Real,
                    "int" => Domain::BoundedInt(arg(1)?.parse().map_err(|_| syntax(d.line, "DOMAIN int needs a bound"))?),
                    other => return Err(syntax(d.line, format!("unknown domain {other:?}")).into()),
                });
            }
            other => return Err(syntax(d.line, format!("unknown keyword {other:?}")).into()),
        }
    }
    let mut nodes = Vec::with_capacity(file.n);
    for v in 1..=file.n {
        nodes.push(match (gates[v - 1], leaves[v - 1]) {
            (Some(g), None) => Node::Gate(g),
            (None, Some(x)) => Node::Leaf(x),
            _ => return Err(DpError::NodeMismatch(v).into()),
        });
    }
    let domain = domain.unwrap_or(if gates.iter().flatten().all(|g| g.is_boolean()) {
        Domain::Boolean
    } else {
        Domain::Real
    });
    Ok(DpProblem::new(dag, nodes, domain)?)
}

pub(crate) fn parse_value(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;
    use crate::generate::{random_dag, GeneratorMode};

    fn zero() -> Backend {
        Backend::new(BackendConfig::zero_error()).unwrap()
    }

    #[test]
    fn or_root_over_two_leaves() {
        let dag = Dag::from_edges(3, &[(1, 2), (1, 3)]).unwrap();
        let p = DpProblem::new(
            dag,
            vec![Node::Gate(VertexFn::Or), Node::Leaf(0.0), Node::Leaf(1.0)],
            Domain::Boolean,
        )
        .unwrap();
        let out = run_dp(&p, BoostPolicy::LogNHat, &mut zero()).unwrap();
        assert_eq!(out.root(), 1.0);
        assert_eq!(classical_dp(&p).values[0], 1.0);
    }

    #[test]
    fn and_dag_flips_with_one_reachable_zero() {
        // 1 -> {2, 3}, 2 -> {4, 5}, 3 -> {5, 6}; all AND
        let dag = Dag::from_edges(6, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 5), (3, 6)]).unwrap();
        let gates = vec![Node::Gate(VertexFn::And); 3];
        let make = |leaves: [f64; 3]| {
            let mut nodes = gates.clone();
            nodes.extend(leaves.iter().map(|&x| Node::Leaf(x)));
            DpProblem::new(dag.clone(), nodes, Domain::Boolean).unwrap()
        };
        assert_eq!(run_dp(&make([1.0, 1.0, 1.0]), BoostPolicy::LogNHat, &mut zero()).unwrap().root(), 1.0);
        for flip in 0..3 {
            let mut leaves = [1.0; 3];
            leaves[flip] = 0.0;
            let p = make(leaves);
            let q = run_dp(&p, BoostPolicy::LogNHat, &mut zero()).unwrap();
            assert_eq!(q.root(), 0.0);
            assert_eq!(q.values, classical_dp(&p).values);
        }
    }

    #[test]
    fn max_chain_propagates() {
        let dag = Dag::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let mut nodes = vec![Node::Gate(VertexFn::Max); 3];
        nodes.push(Node::Leaf(7.0));
        let p = DpProblem::new(dag, nodes, Domain::Real).unwrap();
        assert_eq!(classical_dp(&p).values, vec![7.0; 4]);
        assert_eq!(classical_dp(&p).edge_inspections, 3);
    }

    #[test]
    fn validation_errors() {
        let dag = Dag::from_edges(2, &[(1, 2)]).unwrap();
        assert_eq!(
            DpProblem::new(dag.clone(), vec![Node::Leaf(0.0), Node::Leaf(0.0)], Domain::Boolean),
            Err(DpError::NodeMismatch(1))
        );
        assert!(matches!(
            DpProblem::new(dag.clone(), vec![Node::Gate(VertexFn::And), Node::Leaf(3.0)], Domain::Real),
            Err(DpError::DomainMismatch(_))
        ));
        assert!(matches!(
            DpProblem::new(dag.clone(), vec![Node::Gate(VertexFn::Max), Node::Leaf(9.0)], Domain::BoundedInt(5)),
            Err(DpError::DomainMismatch(_))
        ));
        assert!(DpProblem::new(dag, vec![Node::Gate(VertexFn::Max), Node::Leaf(5.0)], Domain::BoundedInt(5)).is_ok());

        let unordered = Dag::from_edges(2, &[(2, 1)]).unwrap();
        let p = DpProblem::new(unordered, vec![Node::Leaf(1.0), Node::Gate(VertexFn::Or)], Domain::Boolean).unwrap();
        assert_eq!(run_dp(&p, BoostPolicy::LogNHat, &mut zero()), Err(DpError::NotOrdered));
        assert_eq!(classical_dp(&p).values, vec![1.0, 1.0]);
        let (ordered, perm) = p.relabeled(&[2]).unwrap();
        let out = run_dp(&ordered, BoostPolicy::LogNHat, &mut zero()).unwrap();
        assert_eq!(out.values[perm.to_new(2) - 1], 1.0);
    }

    #[test]
    fn resolve_boost_modes() {
        let edges: Vec<_> = (1..=16).map(|i| (i, 17)).chain([(1, 2)]).collect();
        let dag = Dag::from_edges(17, &edges).unwrap();
        assert_eq!(resolve_boost(BoostPolicy::LogNHat, &dag, 1), 8);

        let chain: Vec<_> = (1..=5).map(|i| (i, i + 1)).collect();
        let dag = Dag::from_edges(6, &chain).unwrap();
        assert_eq!(farthest_hops(&dag, 1), 5);
        assert_eq!(resolve_boost(BoostPolicy::LogQ, &dag, 1), 5);
        assert_eq!(resolve_boost(BoostPolicy::Explicit(3), &dag, 1), 3);
    }

    #[test]
    fn ledger_within_per_vertex_bound() {
        let dag = random_dag(40, 200, GeneratorMode::UniformOrderedPairs, 5).unwrap();
        let p = random_problem(dag, &VertexFn::ALL, Domain::Boolean, 9).unwrap();
        let mut b = Backend::new(BackendConfig::default().with_seed(2)).unwrap();
        let out = run_dp(&p, BoostPolicy::LogNHat, &mut b).unwrap();
        let c = b.config().c_grover.max(b.config().c_dh);
        let bound: u64 = (1..=p.dag().n_hat())
            .map(|i| u64::from(out.k) * (c * (p.dag().out_degree(i) as f64).sqrt()).ceil() as u64)
            .sum();
        assert!(b.ledger().total() <= bound);
    }

    #[test]
    fn parses_problem_file() {
        let text = "3 2\n1 2\n1 3\nGATE 1 max\nLEAF 2 4\nLEAF 3 -inf\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.domain(), Domain::Real);
        assert_eq!(classical_dp(&p).values[0], 4.0);

        let p = parse_problem("2 1\n1 2\nGATE 1 NAND\nLEAF 2 1\n").unwrap();
        assert_eq!(p.domain(), Domain::Boolean);
        assert!(parse_problem("2 1\n1 2\nLEAF 2 1\n").is_err());
        assert!(parse_problem("2 1\n1 2\nGATE 1 XOR\nLEAF 2 1\n").is_err());
        assert!(parse_problem("2 1\n1 2\nGATE 1 AND\nLEAF 2 1\nDOMAIN int 3\n").is_err());
    }
}
