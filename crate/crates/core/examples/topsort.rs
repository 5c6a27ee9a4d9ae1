//! Quantum topological sort of a shuffled random DAG, then relabeling it
//! into an ordered DAG (non-sinks in topological order, sinks last).

use qdag::dag::{check_order, relabel};
use qdag::generate::{random_dag, shuffle_ids, GeneratorMode};
use qdag::topsort::quantum_topsort;
use qdag::{Backend, BackendConfig};

fn main() {
    let ordered = random_dag(12, 24, GeneratorMode::UniformOrderedPairs, 5).unwrap();
    let mut dag = shuffle_ids(&ordered, 11);
    println!("input is ordered: {}", dag.is_ordered());

    // without in-lists the sort first builds them, charged as preprocessing
    let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
    let out = quantum_topsort(&dag, &mut backend).unwrap();
    println!("order: {:?}", out.order);
    println!("valid: {}", check_order(&dag, &out.order).is_ok());
    println!("{}", backend.ledger());

    let (relabeled, perm) = relabel(&dag, &out.order).unwrap();
    println!("relabeled is ordered: {}", relabeled.is_ordered());
    println!("new id of old vertex 1: {}", perm.to_new(1));

    // with in-lists supplied up front, nothing is charged to preprocessing
    dag.ensure_in_adjacency();
    let mut noisy = Backend::new(BackendConfig::default().with_seed(3)).unwrap();
    let out = quantum_topsort(&dag, &mut noisy).unwrap();
    println!("base_error 0.5: valid={} {}", check_order(&dag, &out.order).is_ok(), noisy.ledger());
}
