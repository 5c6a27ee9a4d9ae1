//! Seeded random instance generators.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dag::{classical_topsort, relabel, Dag, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("{m} edges requested but only {max} fit")]
    TooManyEdges { m: usize, max: usize },
    #[error("need at least one vertex")]
    Empty,
}

/// How edges are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    /// `m` distinct pairs `i < j`, uniformly.
    UniformOrderedPairs,
    /// Vertices split into `depth` consecutive layers; edges only go to later layers.
    Layered { depth: usize },
    /// The path `1 -> 2 -> ... -> n` (as far as `m` allows) plus uniform extra pairs.
    ChainPlusNoise,
}

impl std::str::FromStr for GeneratorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" | "uniform-ordered-pairs" => Ok(Self::UniformOrderedPairs),
            "chain" | "chain-plus-noise" => Ok(Self::ChainPlusNoise),
            _ => match s.strip_prefix("layered") {
                Some(rest) => {
                    let depth = rest.trim_start_matches([':', '(']).trim_end_matches(')');
                    let depth = if depth.is_empty() { 4 } else {
                        depth.parse().map_err(|_| format!("bad layer depth in {s:?}"))?
                    };
                    Ok(Self::Layered { depth })
                }
                None => Err(format!("unknown generator mode {s:?}")),
            },
        }
    }
}

/// Samples an ordered DAG with exactly `m` edges. In-lists are attached.
pub fn random_dag(n: usize, m: usize, mode: GeneratorMode, seed: u64) -> Result<Dag, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<(u32, u32)> = match mode {
        GeneratorMode::UniformOrderedPairs | GeneratorMode::ChainPlusNoise => all_pairs(n, |_, _| true),
        GeneratorMode::Layered { depth } => {
            let depth = depth.max(1);
            let layer = |v: usize| (v - 1) * depth / n;
            all_pairs(n, |i, j| layer(i) < layer(j))
        }
    };
    if m > candidates.len() {
        return Err(GenerateError::TooManyEdges { m, max: candidates.len() });
    }
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    match mode {
        GeneratorMode::ChainPlusNoise => {
            let chain = m.min(n - 1);
            edges.extend((1..=chain).map(|i| (i, i + 1)));
            let rest: Vec<(u32, u32)> = candidates.into_iter().filter(|&(i, j)| j != i + 1 || i as usize > chain).collect();
            for idx in sample(&mut rng, rest.len(), m - chain).into_iter() {
                let (i, j) = rest[idx];
                edges.push((i as usize, j as usize));
            }
        }
        _ => {
            for idx in sample(&mut rng, candidates.len(), m).into_iter() {
                let (i, j) = candidates[idx];
                edges.push((i as usize, j as usize));
            }
        }
    }
    edges.sort_unstable();
    let raw = Dag::from_edges(n, &edges).expect("i < j pairs form a DAG");
    Ok(ordered_with_in_lists(raw))
}

/// Like [`random_dag`] with integer weights drawn uniformly from `1..=max_weight`.
pub fn random_weighted_dag(
    n: usize,
    m: usize,
    mode: GeneratorMode,
    max_weight: u32,
    seed: u64,
) -> Result<Dag, GenerateError> {
    let base = random_dag(n, m, mode, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5745_4947_4854);
    let edges: Vec<(usize, usize, f64)> = base
        .edges()
        .map(|(u, v, _)| (u, v, rng.gen_range(1..=max_weight.max(1)) as f64))
        .collect();
    let mut dag = Dag::from_weighted_edges(n, &edges).expect("same edges as a valid DAG");
    dag.ensure_in_adjacency();
    Ok(dag)
}

/// Random relabeling of `dag`, used to produce unordered inputs.
pub fn shuffle_ids(dag: &Dag, seed: u64) -> Dag {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (1..=dag.n()).collect();
    ids.shuffle(&mut rng);
    let perm = Permutation::from_new_to_old(ids).expect("shuffle is a permutation");
    crate::dag::permute(dag, &perm)
}

fn all_pairs(n: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if keep(i, j) {
                out.push((i as u32, j as u32));
            }
        }
    }
    out
}

fn ordered_with_in_lists(dag: Dag) -> Dag {
    let topo = classical_topsort(&dag);
    let (mut ordered, _) = relabel(&dag, &topo.order).expect("classical order is valid");
    ordered.ensure_in_adjacency();
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_when_forced() {
        let dag = random_dag(5, 10, GeneratorMode::UniformOrderedPairs, 1).unwrap();
        assert_eq!(dag.m(), 10);
        for i in 1..=5 {
            for j in i + 1..=5 {
                assert!(dag.out(i).contains(&j));
            }
        }
    }

    #[test]
    fn edgeless_and_overfull() {
        let dag = random_dag(5, 0, GeneratorMode::UniformOrderedPairs, 1).unwrap();
        assert_eq!(dag.m(), 0);
        assert_eq!(
            random_dag(5, 11, GeneratorMode::UniformOrderedPairs, 1),
            Err(GenerateError::TooManyEdges { m: 11, max: 10 })
        );
        assert!(matches!(
            random_dag(6, 15, GeneratorMode::Layered { depth: 2 }, 1),
            Err(GenerateError::TooManyEdges { .. })
        ));
    }

    #[test]
    fn deterministic_for_seed() {
        for mode in [
            GeneratorMode::UniformOrderedPairs,
            GeneratorMode::Layered { depth: 3 },
            GeneratorMode::ChainPlusNoise,
        ] {
            let a = random_dag(30, 60, mode, 42).unwrap();
            let b = random_dag(30, 60, mode, 42).unwrap();
            assert_eq!(a, b);
            assert!(a.is_ordered());
            assert!(a.has_in_adjacency());
        }
    }

    #[test]
    fn chain_plus_noise_has_one_sink() {
        let dag = random_dag(17, 60, GeneratorMode::ChainPlusNoise, 3).unwrap();
        assert_eq!(dag.n_hat(), 16);
    }

    #[test]
    fn parses_modes() {
        assert_eq!("uniform".parse(), Ok(GeneratorMode::UniformOrderedPairs));
        assert_eq!("layered:5".parse(), Ok(GeneratorMode::Layered { depth: 5 }));
        assert_eq!("chain".parse(), Ok(GeneratorMode::ChainPlusNoise));
        assert!("zigzag".parse::<GeneratorMode>().is_err());
    }
}
