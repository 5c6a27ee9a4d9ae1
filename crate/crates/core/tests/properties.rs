//! Randomized invariants across modules.

use proptest::prelude::*;

use qdag::circuits::{parse_zhegalkin, random_poly};
use qdag::dag::{check_order, relabel};
use qdag::dp::{classical_dp, random_problem, resolve_boost, run_dp, Domain};
use qdag::format::{parse_edge_list, write_edge_list};
use qdag::generate::{random_dag, random_weighted_dag, shuffle_ids, GeneratorMode};
use qdag::harness::degree_bound_holds;
use qdag::paths::{classical_longest_paths, classical_shortest_paths, longest_paths, shortest_paths};
use qdag::search::{BoostPolicy, VertexFn};
use qdag::topsort::quantum_topsort;
use qdag::{Backend, BackendConfig};

fn sizes() -> impl Strategy<Value = (usize, usize, u64)> {
    (4usize..48, any::<u64>()).prop_flat_map(|(n, seed)| {
        let max = n * (n - 1) / 2;
        (Just(n), 0..=max.min(5 * n), Just(seed))
    })
}

fn zero() -> Backend {
    Backend::new(BackendConfig::zero_error()).unwrap()
}

fn noisy(seed: u64) -> Backend {
    Backend::new(BackendConfig::default().with_seed(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_error_dp_matches_classical((n, m, seed) in sizes(), kind in 0usize..5) {
        let dag = random_dag(n, m, GeneratorMode::UniformOrderedPairs, seed).unwrap();
        let k = VertexFn::ALL[kind];
        let domain = if k.is_boolean() { Domain::Boolean } else { Domain::Real };
        let problem = random_problem(dag, &[k], domain, seed ^ 1).unwrap();
        let got = run_dp(&problem, BoostPolicy::LogNHat, &mut zero()).unwrap();
        prop_assert_eq!(got.values, classical_dp(&problem).values);
    }

    #[test]
    fn failures_are_one_sided((n, m, seed) in sizes(), k in 1u32..3) {
        let dag = random_dag(n, m, GeneratorMode::UniformOrderedPairs, seed).unwrap();
        for (kind, domain) in [
            (VertexFn::Max, Domain::Real),
            (VertexFn::Min, Domain::Real),
            (VertexFn::Or, Domain::Boolean),
            (VertexFn::And, Domain::Boolean),
        ] {
            let problem = random_problem(dag.clone(), &[kind], domain, seed ^ 2).unwrap();
            let truth = classical_dp(&problem).values;
            let got = run_dp(&problem, BoostPolicy::Explicit(k), &mut noisy(seed)).unwrap().values;
            for (g, t) in got.iter().zip(&truth) {
                match kind {
                    VertexFn::Max => prop_assert!(g <= t),
                    VertexFn::Min => prop_assert!(g >= t),
                    VertexFn::Or => prop_assert!(!(*t == 0.0 && *g == 1.0)),
                    _ => prop_assert!(!(*t == 1.0 && *g == 0.0)),
                }
            }
        }
    }

    #[test]
    fn dp_charge_is_bounded((n, m, seed) in sizes()) {
        let dag = random_dag(n, m, GeneratorMode::UniformOrderedPairs, seed).unwrap();
        prop_assert!(degree_bound_holds(&dag));
        let problem = random_problem(dag, &VertexFn::ALL, Domain::Boolean, seed).unwrap();
        let cfg = BackendConfig::default().with_seed(seed);
        let k = resolve_boost(BoostPolicy::LogNHat, problem.dag(), 1) as u64;
        let bound: u64 = (1..=problem.dag().n_hat())
            .map(|v| {
                let c = if problem.gate(v).unwrap().is_boolean() { cfg.c_grover } else { cfg.c_dh };
                k * (c * (problem.dag().out_degree(v) as f64).sqrt()).ceil() as u64
            })
            .sum();
        let mut b = Backend::new(cfg).unwrap();
        run_dp(&problem, BoostPolicy::LogNHat, &mut b).unwrap();
        prop_assert!(b.ledger().total() <= bound);
    }

    #[test]
    fn topsort_is_valid_and_visits_once((n, m, seed) in sizes()) {
        let dag = shuffle_ids(&random_dag(n, m, GeneratorMode::UniformOrderedPairs, seed).unwrap(), seed);
        let out = quantum_topsort(&dag, &mut zero()).unwrap();
        prop_assert!(check_order(&dag, &out.order).is_ok());
        prop_assert_eq!(out.order.len(), dag.n_hat());
        prop_assert!(out.hits.iter().all(|&h| h <= 1));
        let (relabeled, _) = relabel(&dag, &out.order).unwrap();
        prop_assert!(relabeled.is_ordered());
    }

    #[test]
    fn path_failures_are_one_sided((n, m, seed) in sizes()) {
        let dag = random_weighted_dag(n, m, GeneratorMode::ChainPlusNoise, 9, seed).unwrap();
        let long = longest_paths(&dag, 1, BoostPolicy::Explicit(1), &mut noisy(seed)).unwrap();
        for (g, t) in long.t.iter().zip(classical_longest_paths(&dag, 1)) {
            prop_assert!(*g <= t);
        }
        let short = shortest_paths(&dag, 1, BoostPolicy::Explicit(1), &mut noisy(seed)).unwrap();
        for (g, t) in short.t.iter().zip(classical_shortest_paths(&dag, 1)) {
            prop_assert!(*g >= t);
        }
    }

    #[test]
    fn runs_are_deterministic((n, m, seed) in sizes()) {
        let dag = random_dag(n, m, GeneratorMode::UniformOrderedPairs, seed).unwrap();
        let problem = random_problem(dag, &[VertexFn::Max, VertexFn::Min], Domain::Real, seed).unwrap();
        let mut a = noisy(seed);
        let mut b = noisy(seed);
        let ra = run_dp(&problem, BoostPolicy::LogNHat, &mut a).unwrap();
        let rb = run_dp(&problem, BoostPolicy::LogNHat, &mut b).unwrap();
        prop_assert_eq!(ra.values, rb.values);
        prop_assert_eq!(a.ledger(), b.ledger());
    }

    #[test]
    fn edge_lists_round_trip((n, m, seed) in sizes()) {
        let dag = random_weighted_dag(n, m, GeneratorMode::UniformOrderedPairs, 50, seed).unwrap();
        let back = parse_edge_list(&write_edge_list(&dag)).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), dag.edges().collect::<Vec<_>>());
    }

    #[test]
    fn polynomials_round_trip(vars in 1u32..12, k in 1usize..10, seed in any::<u64>()) {
        let p = random_poly(vars, k, 4, seed);
        prop_assert_eq!(parse_zhegalkin(&p.to_string()).unwrap(), p);
    }
}
