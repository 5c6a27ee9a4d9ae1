//! Single-source longest and shortest paths and the diameter of an
//! unweighted DAG, computed by forward sweeps over the in-lists with
//! boosted MAX/MIN searches.
//!
//! Unreachable vertices hold `-inf` (longest) or `+inf` (shortest). The
//! sentinels pass through addition unchanged, so the recurrence needs no
//! special case for them.

use std::collections::VecDeque;

use thiserror::Error;

use crate::backend::Backend;
use crate::dag::{classical_topsort, Dag};
use crate::dp::farthest_hops;
use crate::search::{boosted, log_reps, BoostPolicy, SearchError, VertexFn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("the DAG is not ordered; topologically sort and relabel it first")]
    NotOrdered,
    #[error("in-adjacency lists are required")]
    MissingInAdjacency,
    #[error("source {0} is not a vertex")]
    BadSource(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub source: usize,
    /// `t[i - 1]` is the path length from the source to vertex `i`.
    pub t: Vec<f64>,
    /// In-neighbor that realized `t[i - 1]`, if any.
    pub pred: Vec<Option<usize>>,
    pub k: u32,
}

impl PathResult {
    pub fn dist(&self, v: usize) -> f64 {
        self.t[v - 1]
    }

    /// Vertices from the source to `v` following the recorded predecessors.
    pub fn witness(&self, v: usize) -> Option<Vec<usize>> {
        if !self.t[v - 1].is_finite() {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.source {
            cur = self.pred[cur - 1]?;
            path.push(cur);
            if path.len() > self.t.len() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

fn check_input(dag: &Dag) -> Result<(), PathError> {
    if !dag.is_ordered() {
        return Err(PathError::NotOrdered);
    }
    if !dag.has_in_adjacency() {
        return Err(PathError::MissingInAdjacency);
    }
    Ok(())
}

fn path_boost(policy: BoostPolicy, dag: &Dag, s: usize) -> u32 {
    match policy {
        BoostPolicy::LogNHat => log_reps(dag.n()),
        BoostPolicy::LogQ => log_reps(farthest_hops(dag, s).max(2)),
        BoostPolicy::Explicit(k) => k.max(1),
    }
}

fn sweep_paths(
    dag: &Dag,
    s: usize,
    policy: BoostPolicy,
    backend: &mut Backend,
    kind: VertexFn,
) -> Result<PathResult, PathError> {
    check_input(dag)?;
    let n = dag.n();
    if s == 0 || s > n {
        return Err(PathError::BadSource(s));
    }
    let unreachable = if kind == VertexFn::Max { f64::NEG_INFINITY } else { f64::INFINITY };
    let k = path_boost(policy, dag, s);
    let mut t = vec![unreachable; n];
    let mut pred = vec![None; n];
    t[s - 1] = 0.0;
    let mut args = Vec::new();
    for i in s + 1..=n {
        let preds = dag.in_list(i).expect("checked above");
        if preds.is_empty() {
            continue;
        }
        let weights = dag.in_weights(i).expect("checked above");
        args.clear();
        args.extend(preds.iter().zip(weights).map(|(&j, &w)| t[j - 1] + w));
        let out = boosted(backend, kind, &args, k)?;
        t[i - 1] = out.value;
        if out.value.is_finite() {
            pred[i - 1] = out.arg.map(|p| preds[p - 1]);
        }
    }
    Ok(PathResult { source: s, t, pred, k })
}

/// Longest path lengths from `s`. Requires an ordered DAG with in-lists.
pub fn longest_paths(dag: &Dag, s: usize, policy: BoostPolicy, backend: &mut Backend) -> Result<PathResult, PathError> {
    sweep_paths(dag, s, policy, backend, VertexFn::Max)
}

/// Shortest path lengths from `s`. Requires an ordered DAG with in-lists.
pub fn shortest_paths(dag: &Dag, s: usize, policy: BoostPolicy, backend: &mut Backend) -> Result<PathResult, PathError> {
    sweep_paths(dag, s, policy, backend, VertexFn::Min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiameterResult {
    pub diam: usize,
    /// Largest finite distance out of each non-sink, indexed by vertex id minus one.
    pub eccentricity: Vec<usize>,
    pub k: u32,
}

/// Diameter of an unweighted DAG: one shortest-path row per non-sink
/// `z = n_hat..1`, keeping only the running maximum of the finite entries.
pub fn diameter(dag: &Dag, policy: BoostPolicy, backend: &mut Backend) -> Result<DiameterResult, PathError> {
    check_input(dag)?;
    let n = dag.n();
    let n_hat = dag.n_hat();
    let k = match policy {
        BoostPolicy::LogQ => log_reps(longest_hops(dag).max(2)),
        other => path_boost(other, dag, 1),
    };
    let mut row = vec![f64::INFINITY; n];
    let mut eccentricity = vec![0; n_hat];
    let mut args = Vec::new();
    for z in (1..=n_hat).rev() {
        row[z - 1..].fill(f64::INFINITY);
        row[z - 1] = 0.0;
        let mut far = 0.0f64;
        for i in z + 1..=n {
            let preds = dag.in_list(i).expect("checked above");
            if preds.is_empty() {
                continue;
            }
            args.clear();
            args.extend(preds.iter().map(|&j| row[j - 1] + 1.0));
            let v = boosted(backend, VertexFn::Min, &args, k)?.value;
            row[i - 1] = v;
            if v.is_finite() {
                far = far.max(v);
            }
        }
        eccentricity[z - 1] = far as usize;
    }
    let diam = eccentricity.iter().copied().max().unwrap_or(0);
    Ok(DiameterResult { diam, eccentricity, k })
}

fn longest_hops(dag: &Dag) -> usize {
    let topo = classical_topsort(dag);
    let mut hops = vec![0usize; dag.n()];
    for &v in topo.order.iter().rev() {
        hops[v - 1] = 1 + dag.out(v).iter().map(|&u| hops[u - 1]).max().unwrap_or(0);
    }
    hops.into_iter().max().unwrap_or(0)
}

fn classical_paths(dag: &Dag, s: usize, longest: bool) -> Vec<f64> {
    let unreachable = if longest { f64::NEG_INFINITY } else { f64::INFINITY };
    let mut t = vec![unreachable; dag.n()];
    t[s - 1] = 0.0;
    let topo = classical_topsort(dag);
    let sinks = (1..=dag.n()).filter(|&v| dag.out_degree(v) == 0);
    for u in topo.order.iter().copied().chain(sinks) {
        if !t[u - 1].is_finite() {
            continue;
        }
        for (pos, &v) in dag.out(u).iter().enumerate() {
            let cand = t[u - 1] + dag.weight(u, pos);
            if (longest && cand > t[v - 1]) || (!longest && cand < t[v - 1]) {
                t[v - 1] = cand;
            }
        }
    }
    t
}

/// Exact longest path lengths by relaxation in topological order.
pub fn classical_longest_paths(dag: &Dag, s: usize) -> Vec<f64> {
    classical_paths(dag, s, true)
}

/// Exact shortest path lengths by relaxation in topological order.
pub fn classical_shortest_paths(dag: &Dag, s: usize) -> Vec<f64> {
    classical_paths(dag, s, false)
}

/// Exact diameter by a breadth-first search from every vertex.
pub fn classical_diameter(dag: &Dag) -> usize {
    let n = dag.n();
    let mut best = 0;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 1..=n {
        dist.fill(usize::MAX);
        dist[s - 1] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            best = best.max(dist[u - 1]);
            for &v in dag.out(u) {
                if dist[v - 1] == usize::MAX {
                    dist[v - 1] = dist[u - 1] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    best
}
