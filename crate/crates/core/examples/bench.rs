//! A query-count sweep for the topological sort, with the fit of
//! `queries / log2(n_hat)` against `sqrt(n_hat * m)`.

use qdag::harness::{fit_rows, fit_scaling, run_experiment, summarize, write_csv, Application, ExperimentSpec};
use qdag::BackendConfig;

fn main() {
    let points = [32usize, 64, 128, 256].iter().map(|&n| (n, n * n / 8)).collect();
    let mut spec = ExperimentSpec::new(Application::Topsort, points);
    spec.trials = 4;
    spec.seed = 2;
    spec.backend = BackendConfig::default();
    let rows = run_experiment(&spec).unwrap();

    for s in summarize(&rows) {
        println!(
            "n={:4} m={:6} quantum={:9.1} classical={:7.0} error_rate={:.3}",
            s.n, s.m, s.mean_quantum, s.mean_classical, s.error_rate
        );
    }
    let fit = fit_scaling(&fit_rows(&rows)).unwrap();
    println!("exponent {:.3}, constant {:.3}, residual {:.4}", fit.exponent, fit.constant, fit.residual);

    let mut csv = Vec::new();
    write_csv(&rows[..3], &mut csv, false).unwrap();
    print!("{}", String::from_utf8(csv).unwrap());
}
