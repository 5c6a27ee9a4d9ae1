//! Adjacency-list DAGs with 1-indexed vertices.
//!
//! A [`Dag`] is validated on construction, so every value of the type is
//! acyclic, free of duplicate and bidirectional edges, and has all ids in
//! `1..=n`. Out-lists are always present; in-lists are optional and can be
//! materialized on demand.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DagError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex id {id} is outside 1..={n}")]
    IdOutOfRange { id: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edges ({0}, {1}) and ({1}, {0}) are both present")]
    BidirectionalEdge(usize, usize),
    #[error("directed cycle through vertex {0}")]
    CycleDetected(usize),
    #[error("in-adjacency lists disagree with out-adjacency lists")]
    InconsistentInAdjacency,
    #[error("edge ({0}, {1}) has non-finite weight")]
    NonFiniteWeight(usize, usize),
    #[error("weight lists do not match adjacency lists")]
    WeightShape,
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
}

/// In-neighbor lists `D'_i` together with the weight of each incoming edge.
#[derive(Debug, Clone, PartialEq)]
struct InAdjacency {
    lists: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    n: usize,
    m: usize,
    out_adj: Vec<Vec<usize>>,
    weights: Option<Vec<Vec<f64>>>,
    in_adj: Option<InAdjacency>,
}

/// Structure derived from a [`Dag`]: sinks, sources and the ordered flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagView {
    /// Vertices with out-degree zero, increasing.
    pub sinks: Vec<usize>,
    /// Number of non-sink vertices.
    pub n_hat: usize,
    /// Vertices with in-degree zero, increasing.
    pub sources: Vec<usize>,
    /// Every edge `(i, j)` has `i < j` and every sink has id `> n_hat`.
    pub ordered: bool,
}

impl Dag {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, DagError> {
        let mut out = vec![Vec::new(); n];
        for &(u, v) in edges {
            check_id(u, n)?;
            check_id(v, n)?;
            out[u - 1].push(v);
        }
        Self::from_out_lists(n, out, None)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, DagError> {
        let mut out = vec![Vec::new(); n];
        let mut w = vec![Vec::new(); n];
        for &(u, v, weight) in edges {
            check_id(u, n)?;
            check_id(v, n)?;
            out[u - 1].push(v);
            w[u - 1].push(weight);
        }
        Self::from_out_lists(n, out, Some(w))
    }

    /// Builds a DAG from out-neighbor lists `D_1..D_n` (entry `i - 1` holds `D_i`).
    pub fn from_out_lists(
        n: usize,
        out_adj: Vec<Vec<usize>>,
        weights: Option<Vec<Vec<f64>>>,
    ) -> Result<Self, DagError> {
        if n == 0 {
            return Err(DagError::Empty);
        }
        if out_adj.len() != n {
            return Err(DagError::IdOutOfRange { id: out_adj.len(), n });
        }
        if let Some(w) = &weights {
            if w.len() != n || w.iter().zip(&out_adj).any(|(a, b)| a.len() != b.len()) {
                return Err(DagError::WeightShape);
            }
        }
        let mut seen = HashSet::new();
        for (i, list) in out_adj.iter().enumerate() {
            let u = i + 1;
            for (pos, &v) in list.iter().enumerate() {
                check_id(v, n)?;
                if u == v {
                    return Err(DagError::CycleDetected(u));
                }
                if !seen.insert((u, v)) {
                    return Err(DagError::DuplicateEdge(u, v));
                }
                if let Some(w) = &weights {
                    if !w[i][pos].is_finite() {
                        return Err(DagError::NonFiniteWeight(u, v));
                    }
                }
            }
        }
        for &(u, v) in &seen {
            if u < v && seen.contains(&(v, u)) {
                return Err(DagError::BidirectionalEdge(u, v));
            }
        }
        let m = seen.len();
        kahn(n, &out_adj)?;
        Ok(Self {
            n,
            m,
            out_adj,
            weights,
            in_adj: None,
        })
    }

    /// Attaches caller-supplied in-neighbor lists (dual-adjacency input).
    pub fn with_in_lists(mut self, in_lists: Vec<Vec<usize>>) -> Result<Self, DagError> {
        if in_lists.len() != self.n {
            return Err(DagError::InconsistentInAdjacency);
        }
        let mut expected: HashSet<(usize, usize)> = HashSet::with_capacity(self.m);
        for u in 1..=self.n {
            for &v in self.out(u) {
                expected.insert((u, v));
            }
        }
        let mut weights = Vec::with_capacity(self.n);
        let mut count = 0;
        for (i, list) in in_lists.iter().enumerate() {
            let v = i + 1;
            let mut row = Vec::with_capacity(list.len());
            for &u in list {
                check_id(u, self.n)?;
                if !expected.contains(&(u, v)) {
                    return Err(DagError::InconsistentInAdjacency);
                }
                row.push(self.edge_weight(u, v).unwrap_or(1.0));
                count += 1;
            }
            weights.push(row);
        }
        if count != self.m {
            return Err(DagError::InconsistentInAdjacency);
        }
        self.in_adj = Some(InAdjacency {
            lists: in_lists,
            weights,
        });
        Ok(self)
    }

    /// Builds `D'_i` from the out-lists if absent. Returns the number of
    /// out-list entries read, which is zero when in-lists were already present.
    pub fn ensure_in_adjacency(&mut self) -> u64 {
        if self.in_adj.is_some() {
            return 0;
        }
        let mut lists = vec![Vec::new(); self.n];
        let mut weights = vec![Vec::new(); self.n];
        for u in 1..=self.n {
            for (pos, &v) in self.out_adj[u - 1].iter().enumerate() {
                lists[v - 1].push(u);
                weights[v - 1].push(self.weight(u, pos));
            }
        }
        self.in_adj = Some(InAdjacency { lists, weights });
        self.m as u64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `D_v`, the out-neighbors of `v`.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out_adj[v - 1]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v - 1].len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of the `pos`-th (0-based) out-edge of `v`; 1 for unweighted graphs.
    pub fn weight(&self, v: usize, pos: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[v - 1][pos])
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let pos = self.out(u).iter().position(|&x| x == v)?;
        Some(self.weight(u, pos))
    }

    pub fn has_in_adjacency(&self) -> bool {
        self.in_adj.is_some()
    }

    /// `D'_v`, if in-lists are available.
    pub fn in_list(&self, v: usize) -> Option<&[usize]> {
        self.in_adj.as_ref().map(|a| a.lists[v - 1].as_slice())
    }

    /// Weights of the edges into `v`, parallel to [`Dag::in_list`].
    pub fn in_weights(&self, v: usize) -> Option<&[f64]> {
        self.in_adj.as_ref().map(|a| a.weights[v - 1].as_slice())
    }

    /// All edges `(u, v, w)` in out-list order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.n).flat_map(move |u| {
            self.out(u)
                .iter()
                .enumerate()
                .map(move |(pos, &v)| (u, v, self.weight(u, pos)))
        })
    }

    pub fn view(&self) -> DagView {
        let mut indeg = vec![0usize; self.n];
        for list in &self.out_adj {
            for &v in list {
                indeg[v - 1] += 1;
            }
        }
        let sinks: Vec<usize> = (1..=self.n).filter(|&v| self.out_degree(v) == 0).collect();
        let n_hat = self.n - sinks.len();
        let sources = (1..=self.n).filter(|&v| indeg[v - 1] == 0).collect();
        let ordered = (1..=self.n).all(|u| {
            self.out(u).iter().all(|&v| u < v) && (u <= n_hat || self.out_degree(u) == 0)
        });
        DagView {
            sinks,
            n_hat,
            sources,
            ordered,
        }
    }

    /// Number of non-sink vertices.
    pub fn n_hat(&self) -> usize {
        self.out_adj.iter().filter(|l| !l.is_empty()).count()
    }

    pub fn is_ordered(&self) -> bool {
        self.view().ordered
    }

    /// Returns a copy with every vertex id mapped through `perm`.
    fn permuted(&self, perm: &Permutation) -> Dag {
        let mut out_adj = Vec::with_capacity(self.n);
        let mut weights = self.weights.as_ref().map(|_| Vec::with_capacity(self.n));
        for new in 1..=self.n {
            let old = perm.to_old(new);
            out_adj.push(self.out(old).iter().map(|&v| perm.to_new(v)).collect());
            if let (Some(w), Some(src)) = (weights.as_mut(), self.weights.as_ref()) {
                w.push(src[old - 1].clone());
            }
        }
        let in_adj = self.in_adj.as_ref().map(|a| {
            let mut lists = Vec::with_capacity(self.n);
            let mut ws = Vec::with_capacity(self.n);
            for new in 1..=self.n {
                let old = perm.to_old(new);
                lists.push(a.lists[old - 1].iter().map(|&u| perm.to_new(u)).collect());
                ws.push(a.weights[old - 1].clone());
            }
            InAdjacency { lists, weights: ws }
        });
        Dag {
            n: self.n,
            m: self.m,
            out_adj,
            weights,
            in_adj,
        }
    }
}

fn check_id(id: usize, n: usize) -> Result<(), DagError> {
    if id == 0 || id > n {
        Err(DagError::IdOutOfRange { id, n })
    } else {
        Ok(())
    }
}

/// Kahn's algorithm with smallest-id tie breaking. Returns all vertices.
fn kahn(n: usize, out_adj: &[Vec<usize>]) -> Result<Vec<usize>, DagError> {
    let mut indeg = vec![0usize; n];
    for list in out_adj {
        for &v in list {
            indeg[v - 1] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (1..=n)
        .filter(|&v| indeg[v - 1] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for &v in &out_adj[u - 1] {
            indeg[v - 1] -= 1;
            if indeg[v - 1] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() < n {
        let stuck = (1..=n).find(|&v| indeg[v - 1] > 0).unwrap_or(1);
        return Err(DagError::CycleDetected(stuck));
    }
    Ok(order)
}

/// A topological order split into non-sinks (in order) and sinks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopoOrder {
    pub order: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// Classical O(n + m) topological sort; ties go to the smallest id.
pub fn classical_topsort(dag: &Dag) -> TopoOrder {
    let all = kahn(dag.n, &dag.out_adj).expect("Dag values are acyclic");
    let (order, mut sinks): (Vec<usize>, Vec<usize>) =
        all.into_iter().partition(|&v| dag.out_degree(v) > 0);
    sinks.sort_unstable();
    TopoOrder { order, sinks }
}

/// Checks that `order` lists every non-sink exactly once, no sinks, and
/// respects every edge between non-sinks.
pub fn check_order(dag: &Dag, order: &[usize]) -> Result<(), DagError> {
    let mut pos = vec![usize::MAX; dag.n];
    for (p, &v) in order.iter().enumerate() {
        if v == 0 || v > dag.n {
            return Err(DagError::InvalidOrdering(format!("vertex {v} out of range")));
        }
        if dag.out_degree(v) == 0 {
            return Err(DagError::InvalidOrdering(format!("sink {v} in order")));
        }
        if pos[v - 1] != usize::MAX {
            return Err(DagError::InvalidOrdering(format!("vertex {v} repeated")));
        }
        pos[v - 1] = p;
    }
    if order.len() != dag.n_hat() {
        return Err(DagError::InvalidOrdering(format!(
            "{} of {} non-sinks placed",
            order.len(),
            dag.n_hat()
        )));
    }
    for (u, v, _) in dag.edges() {
        if dag.out_degree(v) > 0 && pos[u - 1] > pos[v - 1] {
            return Err(DagError::InvalidOrdering(format!("edge ({u}, {v}) reversed")));
        }
    }
    Ok(())
}

/// Vertex renumbering: new id `r` is old vertex `new_to_old[r - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    new_to_old: Vec<usize>,
    old_to_new: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<usize> = (1..=n).collect();
        Self {
            new_to_old: ids.clone(),
            old_to_new: ids,
        }
    }

    /// Builds from the list of old ids in new order. Must be a permutation of `1..=n`.
    pub fn from_new_to_old(new_to_old: Vec<usize>) -> Option<Self> {
        let n = new_to_old.len();
        let mut old_to_new = vec![0; n];
        for (i, &old) in new_to_old.iter().enumerate() {
            if old == 0 || old > n || old_to_new[old - 1] != 0 {
                return None;
            }
            old_to_new[old - 1] = i + 1;
        }
        Some(Self {
            new_to_old,
            old_to_new,
        })
    }

    pub fn to_old(&self, new: usize) -> usize {
        self.new_to_old[new - 1]
    }

    pub fn to_new(&self, old: usize) -> usize {
        self.old_to_new[old - 1]
    }

    pub fn len(&self) -> usize {
        self.new_to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_to_old.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.new_to_old.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn inverse(&self) -> Self {
        Self {
            new_to_old: self.old_to_new.clone(),
            old_to_new: self.new_to_old.clone(),
        }
    }
}

/// Renumbers `dag` so that `order` becomes `1..=n_hat` and the sinks (in
/// increasing original id) follow. The result is an ordered DAG.
pub fn relabel(dag: &Dag, order: &[usize]) -> Result<(Dag, Permutation), DagError> {
    check_order(dag, order)?;
    let mut new_to_old = order.to_vec();
    new_to_old.extend((1..=dag.n).filter(|&v| dag.out_degree(v) == 0));
    let perm = Permutation::from_new_to_old(new_to_old)
        .ok_or_else(|| DagError::InvalidOrdering("not a permutation".into()))?;
    Ok((dag.permuted(&perm), perm))
}

/// Applies an arbitrary vertex permutation. The result need not be ordered.
pub fn permute(dag: &Dag, perm: &Permutation) -> Dag {
    dag.permuted(perm)
}
