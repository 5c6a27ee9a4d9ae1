//! The DP sweep over an ordered DAG with mixed vertex functions, checked
//! against the exact classical pass, plus the repetition policies.

use qdag::dp::{classical_dp, random_problem, resolve_boost, run_dp, Domain};
use qdag::generate::{random_dag, GeneratorMode};
use qdag::search::{BoostPolicy, VertexFn};
use qdag::{Backend, BackendConfig};

fn main() {
    let dag = random_dag(40, 200, GeneratorMode::Layered { depth: 6 }, 1).unwrap();
    let problem = random_problem(dag, &[VertexFn::Max, VertexFn::Min], Domain::Real, 2).unwrap();
    let exact = classical_dp(&problem);

    for policy in [BoostPolicy::LogNHat, BoostPolicy::LogQ, BoostPolicy::Explicit(2)] {
        let k = resolve_boost(policy, problem.dag(), 1);
        let mut backend = Backend::new(BackendConfig::default().with_seed(9)).unwrap();
        let out = run_dp(&problem, policy, &mut backend).unwrap();
        println!(
            "{policy:>6} k={k:2} root={} exact={} {}",
            out.root(),
            exact.values[0],
            backend.ledger()
        );
    }
    println!("classical edge inspections: {}", exact.edge_inspections);

    let text = "5 4\nGATE 1 MAX\nGATE 2 MIN\nLEAF 3 4\nLEAF 4 9\nLEAF 5 6\n1 2\n1 5\n2 3\n2 4\n";
    let small = qdag::dp::parse_problem(text).unwrap();
    let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
    println!("from text: {:?}", run_dp(&small, BoostPolicy::LogNHat, &mut backend).unwrap().values);
}
