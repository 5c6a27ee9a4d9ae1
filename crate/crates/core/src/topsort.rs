//! Depth-first search and topological sort driven by minimal-index search.
//!
//! Recursion is replaced by an explicit stack of `(vertex, resume position)`
//! frames: after a child returns, the parent resumes its search strictly
//! after the child's position in its out-list.

use std::collections::VecDeque;

use thiserror::Error;

use crate::backend::{Backend, Bucket};
use crate::dag::Dag;
use crate::search::{first_one_search, first_one_search_prime, SearchError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopsortError {
    #[error("vertex {0} is not in the graph")]
    BadRoot(usize),
    #[error("traversal depth exceeded the cap of {0}")]
    RecursionDepthExceeded(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Visited flags, the output order and per-vertex hit counts of one traversal.
#[derive(Debug, Clone)]
pub struct TraversalState {
    visited: Vec<bool>,
    order: VecDeque<usize>,
    hits: Vec<u32>,
    depth_cap: usize,
}

impl TraversalState {
    pub fn new(n: usize) -> Self {
        Self {
            visited: vec![false; n],
            order: VecDeque::new(),
            hits: vec![0; n],
            depth_cap: n + 1,
        }
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn visited(&self) -> &[bool] {
        &self.visited
    }

    pub fn is_visited(&self, v: usize) -> bool {
        self.visited[v - 1]
    }

    /// How many times each vertex was returned by a search.
    pub fn hits(&self) -> &[u32] {
        &self.hits
    }

    pub fn order(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied()
    }

    fn add_to_top(&mut self, v: usize) {
        self.order.push_front(v);
    }
}

struct Frame {
    vertex: usize,
    resume: usize,
}

/// Marks every vertex reachable from `root` (exactly, under a zero-error backend).
pub fn quantum_dfs(
    dag: &Dag,
    root: usize,
    state: &mut TraversalState,
    backend: &mut Backend,
) -> Result<(), TopsortError> {
    if root == 0 || root > dag.n() {
        return Err(TopsortError::BadRoot(root));
    }
    let n_hat = dag.n_hat();
    state.visited[root - 1] = true;
    if dag.out_degree(root) == 0 {
        return Ok(());
    }
    let mut stack = vec![Frame { vertex: root, resume: 0 }];
    while let Some(frame) = stack.last_mut() {
        let list = dag.out(frame.vertex);
        let visited = &state.visited;
        let found = first_one_search(backend, list.len(), frame.resume, n_hat, |p| !visited[list[p - 1] - 1])?;
        match found {
            Some(z) => {
                frame.resume = z;
                let u = list[z - 1];
                state.visited[u - 1] = true;
                state.hits[u - 1] += 1;
                if dag.out_degree(u) > 0 {
                    if stack.len() >= state.depth_cap {
                        return Err(TopsortError::RecursionDepthExceeded(state.depth_cap));
                    }
                    stack.push(Frame { vertex: u, resume: 0 });
                }
            }
            None => {
                stack.pop();
            }
        }
    }
    Ok(())
}

/// The DFS variant that never descends into sinks and prepends each
/// finished vertex to the order.
pub fn topsort_dfs(
    dag: &Dag,
    root: usize,
    state: &mut TraversalState,
    backend: &mut Backend,
) -> Result<(), TopsortError> {
    if root == 0 || root > dag.n() {
        return Err(TopsortError::BadRoot(root));
    }
    let n_hat = dag.n_hat();
    state.visited[root - 1] = true;
    if dag.out_degree(root) == 0 {
        return Ok(());
    }
    let mut stack = vec![Frame { vertex: root, resume: 0 }];
    while let Some(frame) = stack.last_mut() {
        let v = frame.vertex;
        let found = first_one_search_prime(
            backend,
            dag.out(v),
            &state.visited,
            |u| dag.out_degree(u),
            frame.resume,
            n_hat,
        )?;
        match found {
            Some(z) => {
                frame.resume = z;
                let u = dag.out(v)[z - 1];
                state.visited[u - 1] = true;
                state.hits[u - 1] += 1;
                if stack.len() >= state.depth_cap {
                    return Err(TopsortError::RecursionDepthExceeded(state.depth_cap));
                }
                stack.push(Frame { vertex: u, resume: 0 });
            }
            None => {
                stack.pop();
                state.add_to_top(v);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopsortOutput {
    /// Non-sinks in the computed order. Under a failing backend this may be
    /// incomplete or violate an edge; check it with [`crate::dag::check_order`].
    pub order: Vec<usize>,
    /// Number of times each vertex was returned by a search.
    pub hits: Vec<u32>,
}

/// Topological sort of the non-sinks: a [`topsort_dfs`] from every
/// unvisited source, in increasing id order.
///
/// Sources are read off the in-lists. If the graph has none they are built
/// first and the `m` reads go to the preprocessing bucket.
pub fn quantum_topsort(dag: &Dag, backend: &mut Backend) -> Result<TopsortOutput, TopsortError> {
    let sources: Vec<usize> = match dag.has_in_adjacency() {
        true => (1..=dag.n()).filter(|&v| dag.in_list(v).is_some_and(|l| l.is_empty())).collect(),
        false => {
            let mut with_in = dag.clone();
            let reads = with_in.ensure_in_adjacency();
            backend.charge(Bucket::Preprocessing, reads);
            (1..=dag.n()).filter(|&v| with_in.in_list(v).is_some_and(|l| l.is_empty())).collect()
        }
    };
    let mut state = TraversalState::new(dag.n());
    for s in sources {
        if !state.is_visited(s) {
            topsort_dfs(dag, s, &mut state, backend)?;
        }
    }
    Ok(TopsortOutput {
        order: state.order.into_iter().collect(),
        hits: state.hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;
    use crate::dag::{check_order, relabel};

    fn zero() -> Backend {
        Backend::new(BackendConfig::zero_error()).unwrap()
    }

    #[test]
    fn dfs_chain_and_sink_root() {
        let dag = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let mut b = zero();
        let mut s = TraversalState::new(3);
        quantum_dfs(&dag, 1, &mut s, &mut b).unwrap();
        assert_eq!(s.visited(), &[true, true, true]);

        let mut b = zero();
        let mut s = TraversalState::new(3);
        quantum_dfs(&dag, 3, &mut s, &mut b).unwrap();
        assert_eq!(s.visited(), &[false, false, true]);
        assert_eq!(b.ledger().total(), 0);
        assert!(quantum_dfs(&dag, 4, &mut s, &mut b).is_err());
    }

    #[test]
    fn dfs_diamond_enters_bottom_once() {
        let dag = Dag::from_edges(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let mut b = zero();
        let mut s = TraversalState::new(4);
        quantum_dfs(&dag, 1, &mut s, &mut b).unwrap();
        assert_eq!(s.visited(), &[true; 4]);
        assert_eq!(s.hits(), &[0, 1, 1, 1]);
    }

    #[test]
    fn depth_cap_is_enforced() {
        let dag = Dag::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let mut b = zero();
        let mut s = TraversalState::new(4).with_depth_cap(1);
        assert_eq!(
            topsort_dfs(&dag, 1, &mut s, &mut b),
            Err(TopsortError::RecursionDepthExceeded(1))
        );
    }

    #[test]
    fn two_sources_into_one_sink() {
        let dag = Dag::from_edges(3, &[(1, 3), (2, 3)]).unwrap();
        let out = quantum_topsort(&dag, &mut zero()).unwrap();
        let mut sorted = out.order.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2]);
        let (relabeled, _) = relabel(&dag, &out.order).unwrap();
        assert!(relabeled.is_ordered());
    }

    #[test]
    fn edgeless_costs_nothing() {
        let mut dag = Dag::from_edges(5, &[]).unwrap();
        dag.ensure_in_adjacency();
        let mut b = zero();
        let out = quantum_topsort(&dag, &mut b).unwrap();
        assert!(out.order.is_empty());
        assert_eq!(b.ledger().total(), 0);
    }

    #[test]
    fn missing_in_lists_are_charged_as_preprocessing() {
        let dag = Dag::from_edges(4, &[(2, 1), (2, 3), (3, 1), (4, 2)]).unwrap();
        let mut b = zero();
        let out = quantum_topsort(&dag, &mut b).unwrap();
        assert_eq!(out.order, vec![4, 2, 3]);
        check_order(&dag, &out.order).unwrap();
        assert_eq!(b.ledger().preprocessing, 4);
    }
}
