//! Diameter of unweighted DAGs against a breadth-first-search oracle.

use qdag::dag::Dag;
use qdag::generate::{random_dag, GeneratorMode};
use qdag::paths::{classical_diameter, diameter};
use qdag::search::BoostPolicy;
use qdag::{Backend, BackendConfig};

fn main() {
    let mut chain = Dag::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
    chain.ensure_in_adjacency();
    let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
    println!("chain of 4: {}", diameter(&chain, BoostPolicy::LogNHat, &mut backend).unwrap().diam);

    for (n, m) in [(20, 40), (30, 120), (40, 300)] {
        let dag = random_dag(n, m, GeneratorMode::UniformOrderedPairs, n as u64).unwrap();
        let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
        let d = diameter(&dag, BoostPolicy::LogNHat, &mut backend).unwrap();
        println!(
            "n={n} m={m}: diameter {} (oracle {}), {}",
            d.diam,
            classical_diameter(&dag),
            backend.ledger()
        );
    }
}
