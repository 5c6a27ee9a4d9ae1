//! Longest and shortest path lengths from a source, with witness paths.

use qdag::generate::{random_weighted_dag, GeneratorMode};
use qdag::paths::{classical_longest_paths, longest_paths, shortest_paths};
use qdag::search::BoostPolicy;
use qdag::{Backend, BackendConfig};

fn main() {
    let dag = random_weighted_dag(16, 40, GeneratorMode::ChainPlusNoise, 9, 4).unwrap();
    let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
    let long = longest_paths(&dag, 1, BoostPolicy::LogNHat, &mut backend).unwrap();
    let short = shortest_paths(&dag, 1, BoostPolicy::LogNHat, &mut backend).unwrap();
    for v in 1..=dag.n() {
        println!(
            "v{v:2}: longest {:>5} via {:?}; shortest {:>5} via {:?}",
            long.dist(v),
            long.witness(v).unwrap_or_default(),
            short.dist(v),
            short.witness(v).unwrap_or_default()
        );
    }
    println!("matches classical: {}", long.t == classical_longest_paths(&dag, 1));
    println!("{}", backend.ledger());

    // with failing searches longest paths can only come out short
    let mut noisy = Backend::new(BackendConfig::default().with_seed(1)).unwrap();
    let rough = longest_paths(&dag, 1, BoostPolicy::Explicit(1), &mut noisy).unwrap();
    let under = (1..=dag.n()).filter(|&v| rough.dist(v) < long.dist(v)).count();
    println!("k=1 at base error 0.5: {under} of {} vertices underestimated", dag.n());
}
