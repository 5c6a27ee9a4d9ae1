//! Grover search on the statevector simulator, compared with the closed form
//! `sin^2((2j + 1) theta)` where `sin(theta) = sqrt(t / N)`.

use qdag::backend::statevector::{optimal_iterations, statevector_grover};
use qdag::backend::{Backend, BackendConfig, BackendKind};

fn main() {
    let n = 256;
    for t in [1, 4, 16] {
        let theta = (t as f64 / n as f64).sqrt().asin();
        println!("N={n} t={t}");
        for j in [0, 1, 2, optimal_iterations(n, t)] {
            let run = statevector_grover(n, |i| i <= t, j, 7, 4096).unwrap();
            let closed = ((2 * j + 1) as f64 * theta).sin().powi(2);
            println!("  j={j:2}  simulated={:.12}  closed form={closed:.12}", run.success_probability);
        }
    }

    let run = statevector_grover(4, |i| i == 3, 1, 0, 4096).unwrap();
    println!("N=4 t=1 j=1: p={} measured {}", run.success_probability, run.outcome);

    let mut backend = Backend::new(BackendConfig { kind: BackendKind::Statevector, ..BackendConfig::default() }).unwrap();
    let values = [3.0, 9.0, 1.0, 7.0, 9.5, 2.0, 4.0, 8.0];
    let (idx, best) = backend
        .extremum_search(&values, qdag::backend::Extremum::Max)
        .unwrap();
    println!("extremum search over {values:?}: index {idx}, value {best}; {}", backend.ledger());
}
