//! Boolean circuits as DAGs with negation carried on edges.
//!
//! Sinks are variables, every non-sink is a gate with at least two
//! inputs, and every edge `(i, j)` has a label `sigma`: the gate at `i`
//! reads `r_j` when `sigma = 1` and `!r_j` when `sigma = 0`. XOR gates are
//! accepted on construction but must be rewritten with [`rewrite_xor`]
//! before quantum evaluation.

mod anf;
mod compile;
mod rewrite;

pub use anf::{parse_zhegalkin, random_poly, AnfError, ZhegalkinPoly, ANF_GRAMMAR};
pub use compile::{compile_zhegalkin, CompiledPoly};
pub use rewrite::rewrite_xor;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::backend::Backend;
use crate::dag::{check_order, classical_topsort, relabel, Dag, DagError, Permutation};
use crate::dp::{resolve_boost, sweep};
use crate::format::{parse_usize, syntax, EdgeListFile, FormatError};
use crate::search::{BoostPolicy, SearchError, VertexFn};
use crate::topsort::{quantum_topsort, TopsortError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("variable {0:?} has no value")]
    UnboundVariable(String),
    #[error("circuit contains XOR gates; rewrite them first")]
    XorNotRewritten,
    #[error("gate at vertex {0} has fewer than two inputs")]
    UnaryGate(usize),
    #[error("vertex {0}: gates belong on non-sinks and variables on sinks")]
    NodeMismatch(usize),
    #[error("edge labels do not match the out-lists")]
    LabelShape,
    #[error("root {0} is not a vertex")]
    BadRoot(usize),
    #[error("polynomial is constant; nothing to compile")]
    DegeneratePoly,
    #[error("topological sort produced an invalid order: {0}")]
    TopsortFailed(DagError),
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Topsort(#[from] TopsortError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And,
    Or,
    Nand,
    Xor,
}

impl Gate {
    fn vertex_fn(self) -> Option<VertexFn> {
        match self {
            Self::And => Some(VertexFn::And),
            Self::Or => Some(VertexFn::Or),
            Self::Nand => Some(VertexFn::Nand),
            Self::Xor => None,
        }
    }

    fn apply(self, inputs: impl Iterator<Item = bool>) -> bool {
        let mut inputs = inputs;
        match self {
            Self::And => inputs.all(|b| b),
            Self::Or => inputs.any(|b| b),
            Self::Nand => !inputs.all(|b| b),
            Self::Xor => inputs.fold(false, |a, b| a ^ b),
        }
    }
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(Self::And),
            "OR" => Ok(Self::Or),
            "NAND" => Ok(Self::Nand),
            "XOR" => Ok(Self::Xor),
            _ => Err(format!("unknown gate {s:?}")),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::And => "AND",
            Self::Or => "OR",
            Self::Nand => "NAND",
            Self::Xor => "XOR",
        })
    }
}

/// Variable values by name.
pub type Assignment = BTreeMap<String, bool>;

/// Parses `x1=1,x2=0`.
pub fn parse_assignment(text: &str) -> Result<Assignment, String> {
    let mut out = Assignment::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected name=0|1, got {part:?}"))?;
        let bit = match v.trim() {
            "0" => false,
            "1" => true,
            other => return Err(format!("value of {k} must be 0 or 1, got {other:?}")),
        };
        out.insert(k.trim().to_string(), bit);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDag {
    dag: Dag,
    gates: Vec<Option<Gate>>,
    labels: Vec<Vec<bool>>,
    vars: Vec<Option<String>>,
    root: usize,
    negate_output: bool,
}

impl CircuitDag {
    /// `gates`, `labels` and `vars` are indexed by vertex id minus one;
    /// `labels[i]` is parallel to the out-list of vertex `i + 1`.
    pub fn new(
        dag: Dag,
        gates: Vec<Option<Gate>>,
        labels: Vec<Vec<bool>>,
        vars: Vec<Option<String>>,
        root: usize,
        negate_output: bool,
    ) -> Result<Self, CircuitError> {
        let n = dag.n();
        if gates.len() != n || vars.len() != n || labels.len() != n {
            return Err(CircuitError::LabelShape);
        }
        if root == 0 || root > n {
            return Err(CircuitError::BadRoot(root));
        }
        for v in 1..=n {
            if labels[v - 1].len() != dag.out_degree(v) {
                return Err(CircuitError::LabelShape);
            }
            match (&gates[v - 1], &vars[v - 1], dag.out_degree(v)) {
                (Some(_), None, d) if d >= 2 => {}
                (Some(_), None, 1) => return Err(CircuitError::UnaryGate(v)),
                (None, Some(_), 0) => {}
                _ => return Err(CircuitError::NodeMismatch(v)),
            }
        }
        Ok(Self { dag, gates, labels, vars, root, negate_output })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Whether the root output is negated.
    pub fn negate_output(&self) -> bool {
        self.negate_output
    }

    pub fn gate(&self, v: usize) -> Option<Gate> {
        self.gates[v - 1]
    }

    pub fn var(&self, v: usize) -> Option<&str> {
        self.vars[v - 1].as_deref()
    }

    /// Label of the `pos`-th out-edge of `v`: `true` passes the value, `false` negates it.
    pub fn label(&self, v: usize, pos: usize) -> bool {
        self.labels[v - 1][pos]
    }

    pub fn n_hat(&self) -> usize {
        self.dag.n_hat()
    }

    pub fn edge_count(&self) -> usize {
        self.dag.m()
    }

    pub fn has_xor(&self) -> bool {
        self.gates.contains(&Some(Gate::Xor))
    }

    /// Distinct variable names, sorted.
    pub fn var_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.vars.iter().flatten().cloned().collect();
        names.sort();
        names.dedup();
        names
    }

    /// Renumbers vertices by a topological order of the non-sinks.
    pub fn relabeled(&self, order: &[usize]) -> Result<(CircuitDag, Permutation), CircuitError> {
        let (dag, perm) = relabel(&self.dag, order)?;
        let pick = |v: usize| perm.to_old(v) - 1;
        let circuit = CircuitDag {
            gates: (1..=dag.n()).map(|v| self.gates[pick(v)]).collect(),
            labels: (1..=dag.n()).map(|v| self.labels[pick(v)].clone()).collect(),
            vars: (1..=dag.n()).map(|v| self.vars[pick(v)].clone()).collect(),
            root: perm.to_new(self.root),
            negate_output: self.negate_output,
            dag,
        };
        Ok((circuit, perm))
    }

    /// Classically reordered copy (ordered DAG). Used at compile time.
    pub fn into_ordered(self) -> CircuitDag {
        if self.dag.is_ordered() {
            return self;
        }
        let topo = classical_topsort(&self.dag);
        self.relabeled(&topo.order).expect("classical order is valid").0
    }
}

/// Incremental construction with automatically assigned ids.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Option<Gate>>,
    vars: Vec<Option<String>>,
    children: Vec<Vec<(usize, bool)>>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: impl Into<String>) -> usize {
        self.gates.push(None);
        self.vars.push(Some(name.into()));
        self.children.push(Vec::new());
        self.gates.len()
    }

    /// Adds a gate; each input is `(vertex, label)`.
    pub fn gate(&mut self, gate: Gate, inputs: &[(usize, bool)]) -> usize {
        self.gates.push(Some(gate));
        self.vars.push(None);
        self.children.push(inputs.to_vec());
        self.gates.len()
    }

    pub fn build(self, root: usize, negate_output: bool) -> Result<CircuitDag, CircuitError> {
        let n = self.gates.len();
        let out: Vec<Vec<usize>> = self.children.iter().map(|c| c.iter().map(|&(v, _)| v).collect()).collect();
        let labels = self.children.iter().map(|c| c.iter().map(|&(_, l)| l).collect()).collect();
        let dag = Dag::from_out_lists(n, out, None)?;
        CircuitDag::new(dag, self.gates, labels, self.vars, root, negate_output)
    }
}

/// Exact evaluation by memoized recursion from the root. Handles XOR.
pub fn eval_classical(circuit: &CircuitDag, assignment: &Assignment) -> Result<bool, CircuitError> {
    fn visit(c: &CircuitDag, v: usize, a: &Assignment, memo: &mut [Option<bool>]) -> Result<bool, CircuitError> {
        if let Some(b) = memo[v - 1] {
            return Ok(b);
        }
        let value = match c.gate(v) {
            None => {
                let name = c.var(v).expect("sinks are variables");
                *a.get(name).ok_or_else(|| CircuitError::UnboundVariable(name.to_string()))?
            }
            Some(gate) => {
                let mut inputs = Vec::with_capacity(c.dag.out_degree(v));
                for (pos, &u) in c.dag.out(v).iter().enumerate() {
                    inputs.push(visit(c, u, a, memo)? == c.label(v, pos));
                }
                gate.apply(inputs.into_iter())
            }
        };
        memo[v - 1] = Some(value);
        Ok(value)
    }
    let mut memo = vec![None; circuit.dag.n()];
    Ok(visit(circuit, circuit.root, assignment, &mut memo)? ^ circuit.negate_output)
}

/// Quantum evaluation: topological sort when the circuit is unordered,
/// then the boosted backward sweep from `n_hat` down to the root.
pub fn eval_circuit(
    circuit: &CircuitDag,
    assignment: &Assignment,
    policy: BoostPolicy,
    backend: &mut Backend,
) -> Result<bool, CircuitError> {
    if circuit.has_xor() {
        return Err(CircuitError::XorNotRewritten);
    }
    for name in circuit.var_names() {
        if !assignment.contains_key(&name) {
            return Err(CircuitError::UnboundVariable(name));
        }
    }
    let reordered;
    let c = if circuit.dag.is_ordered() {
        circuit
    } else {
        let mut dag = circuit.dag.clone();
        let reads = dag.ensure_in_adjacency();
        backend.charge(crate::backend::Bucket::Preprocessing, reads);
        let out = quantum_topsort(&dag, backend)?;
        check_order(&dag, &out.order).map_err(CircuitError::TopsortFailed)?;
        reordered = circuit.relabeled(&out.order)?.0;
        &reordered
    };
    let var_value = |v: usize| -> f64 {
        let name = c.var(v).expect("sinks are variables");
        if assignment[name] { 1.0 } else { 0.0 }
    };
    let s = c.root;
    let value = if c.dag.out_degree(s) == 0 {
        var_value(s)
    } else {
        let k = resolve_boost(policy, &c.dag, s);
        let t = sweep(
            &c.dag,
            s,
            k,
            backend,
            |i| c.gate(i).and_then(Gate::vertex_fn).expect("XOR-free gate"),
            var_value,
            |i, pos, x| if c.label(i, pos) { x } else { 1.0 - x },
        )?;
        t[s - 1]
    };
    Ok((value == 1.0) ^ c.negate_output)
}

/// Random ordered circuit: gates `1..=gates`, variables after them, root 1.
/// Every gate gets two distinct inputs plus a share of `extra_edges`;
/// labels are uniform. Needs at least two variables.
pub fn random_circuit(gates: usize, vars: usize, extra_edges: usize, gate_set: &[Gate], seed: u64) -> CircuitDag {
    assert!(vars >= 2 && gates >= 1 && !gate_set.is_empty());
    let n = gates + vars;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..=gates {
        let pool: Vec<usize> = (i + 1..=n).collect();
        out[i - 1] = pool.choose_multiple(&mut rng, 2).copied().collect();
    }
    for _ in 0..extra_edges {
        let i = rng.gen_range(1..=gates);
        let j = rng.gen_range(i + 1..=n);
        if !out[i - 1].contains(&j) {
            out[i - 1].push(j);
        }
    }
    let labels = out.iter().map(|l| l.iter().map(|_| rng.gen_bool(0.5)).collect()).collect();
    let gate_tags = (1..=n)
        .map(|v| (v <= gates).then(|| gate_set[rng.gen_range(0..gate_set.len())]))
        .collect();
    let names = (1..=n).map(|v| (v > gates).then(|| format!("x{}", v - gates))).collect();
    let dag = Dag::from_out_lists(n, out, None).expect("forward edges only");
    CircuitDag::new(dag, gate_tags, labels, names, 1, false).expect("well-formed by construction")
}

/// Every assignment of `names`, in binary counting order.
pub fn all_assignments(names: &[String]) -> impl Iterator<Item = Assignment> + '_ {
    (0u64..1 << names.len()).map(move |bits| {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), bits >> i & 1 == 1))
            .collect()
    })
}

#[derive(Debug, Error)]
pub enum CircuitFileError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Parses an edge list whose edge lines are `u v sigma`, plus `GATE id KIND`,
/// `VAR id name`, `ROOT id` and an optional `OUTPUT 0|1` (0 negates the root).
pub fn parse_circuit(text: &str) -> Result<CircuitDag, CircuitFileError> {
    let file = EdgeListFile::parse(text)?;
    let n = file.n;
    let mut out = vec![Vec::new(); n];
    let mut labels = vec![Vec::new(); n];
    for &(u, v, sigma) in &file.edges {
        if u == 0 || u > n {
            return Err(FormatError::Dag(DagError::IdOutOfRange { id: u, n }).into());
        }
        let label = match sigma {
            None | Some(1.0) => true,
            Some(0.0) => false,
            Some(other) => return Err(syntax(0, format!("edge ({u}, {v}) label {other} is not 0 or 1")).into()),
        };
        out[u - 1].push(v);
        labels[u - 1].push(label);
    }
    let mut gates = vec![None; n];
    let mut vars = vec![None; n];
    let mut root = None;
    let mut negate = false;
    for d in &file.directives {
        let arg = |i: usize| d.args.get(i).map(String::as_str).ok_or_else(|| syntax(d.line, format!("{} is missing arguments", d.keyword)));
        let id = |tok: &str| -> Result<usize, FormatError> {
            let v = parse_usize(tok, d.line)?;
            if v == 0 || v > n {
                return Err(syntax(d.line, format!("vertex {v} out of range")));
            }
            Ok(v)
        };
        match d.keyword.as_str() {
            "GATE" => gates[id(arg(0)?)? - 1] = Some(arg(1)?.parse::<Gate>().map_err(|e| syntax(d.line, e))?),
            "VAR" => vars[id(arg(0)?)? - 1] = Some(arg(1)?.to_string()),
            "ROOT" => root = Some(id(arg(0)?)?),
            "OUTPUT" => {
                negate = match arg(0)? {
                    "1" => false,
                    "0" => true,
                    other => return Err(syntax(d.line, format!("OUTPUT must be 0 or 1, got {other:?}")).into()),
                }
            }
            other => return Err(syntax(d.line, format!("unknown keyword {other:?}")).into()),
        }
    }
    let dag = Dag::from_out_lists(n, out, None).map_err(FormatError::from)?;
    let dag = if file.dual {
        let mut d = dag;
        d.ensure_in_adjacency();
        d
    } else {
        dag
    };
    let root = root.ok_or_else(|| syntax(0, "missing ROOT line"))?;
    Ok(CircuitDag::new(dag, gates, labels, vars, root, negate)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;

    fn zero() -> Backend {
        Backend::new(BackendConfig::zero_error()).unwrap()
    }

    fn assign(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn or_with_negated_input() {
        let mut b = CircuitBuilder::new();
        let x1 = b.var("x1");
        let x2 = b.var("x2");
        let root = b.gate(Gate::Or, &[(x1, false), (x2, true)]);
        let c = b.build(root, false).unwrap();
        let a = assign(&[("x1", true), ("x2", false)]);
        assert!(!eval_circuit(&c, &a, BoostPolicy::LogNHat, &mut zero()).unwrap());
        assert!(!eval_classical(&c, &a).unwrap());
    }

    #[test]
    fn nand_of_two_ones() {
        let mut b = CircuitBuilder::new();
        let root = b.gate(Gate::Nand, &[(2, true), (3, true)]);
        b.var("x1");
        b.var("x2");
        let c = b.build(root, false).unwrap();
        let a = assign(&[("x1", true), ("x2", true)]);
        assert!(!eval_circuit(&c, &a, BoostPolicy::LogNHat, &mut zero()).unwrap());
    }

    #[test]
    fn structural_errors() {
        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let g = b.gate(Gate::And, &[(x, true)]);
        assert!(matches!(b.build(g, false), Err(CircuitError::UnaryGate(_))));

        let mut b = CircuitBuilder::new();
        let x = b.var("x");
        let y = b.var("y");
        let g = b.gate(Gate::Xor, &[(x, true), (y, true)]);
        let c = b.build(g, false).unwrap();
        assert_eq!(
            eval_circuit(&c, &assign(&[("x", true), ("y", true)]), BoostPolicy::LogNHat, &mut zero()),
            Err(CircuitError::XorNotRewritten)
        );
        let c = rewrite_xor(&c);
        assert_eq!(
            eval_circuit(&c, &assign(&[("x", true)]), BoostPolicy::LogNHat, &mut zero()),
            Err(CircuitError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn random_circuits_match_truth_tables() {
        for seed in 0..20 {
            let c = random_circuit(12, 5, 10, &[Gate::And, Gate::Or, Gate::Nand], seed);
            let names = c.var_names();
            for a in all_assignments(&names) {
                let want = eval_classical(&c, &a).unwrap();
                assert_eq!(eval_circuit(&c, &a, BoostPolicy::LogNHat, &mut zero()).unwrap(), want);
            }
        }
    }

    #[test]
    fn unordered_circuit_is_sorted_first() {
        // root is the last vertex, so the ids are not topological
        let mut b = CircuitBuilder::new();
        let x1 = b.var("x1");
        let x2 = b.var("x2");
        let g = b.gate(Gate::And, &[(x1, true), (x2, false)]);
        let root = b.gate(Gate::Or, &[(g, true), (x2, true)]);
        let c = b.build(root, false).unwrap();
        assert!(!c.dag().is_ordered());
        for a in all_assignments(&c.var_names()) {
            assert_eq!(
                eval_circuit(&c, &a, BoostPolicy::LogNHat, &mut zero()).unwrap(),
                eval_classical(&c, &a).unwrap()
            );
        }
    }

    #[test]
    fn parses_circuit_file() {
        let text = "# (x1 or not x2), negated\n3 2\nGATE 1 OR\nVAR 2 x1\nVAR 3 x2\nROOT 1\nOUTPUT 0\n1 2 1\n1 3 0\n";
        let c = parse_circuit(text).unwrap();
        assert!(c.negate_output());
        let a = assign(&[("x1", false), ("x2", true)]);
        assert!(eval_classical(&c, &a).unwrap());
        assert!(parse_circuit("2 1\nGATE 1 AND\nVAR 2 x\n1 2 1\n").is_err());
        assert!(parse_circuit("3 2\nGATE 1 AND\nVAR 2 x\nVAR 3 y\nROOT 1\n1 2 5\n1 3 1\n").is_err());
    }

    #[test]
    fn assignment_parsing() {
        let a = parse_assignment("x1=1, x2=0").unwrap();
        assert!(a["x1"]);
        assert!(!a["x2"]);
        assert!(parse_assignment("x1=2").is_err());
        assert!(parse_assignment("x1").is_err());
    }
}
