//! Parsing ANF polynomials, compiling them to AND/OR circuits and
//! evaluating the result.

use qdag::circuits::{all_assignments, compile_zhegalkin, eval_circuit, parse_zhegalkin};
use qdag::search::BoostPolicy;
use qdag::{Backend, BackendConfig};

fn main() {
    for text in ["1 ^ x1 ^ x1&x2", "x1&x2&x3", "x2 ^ x1&x3 ^ x2&x3&x4 ^ x4", "x1 ^ x1"] {
        let poly = parse_zhegalkin(text).unwrap();
        print!("{text:28} -> {poly:24}");
        let Ok(compiled) = compile_zhegalkin(&poly) else {
            println!(" constant, nothing to compile");
            continue;
        };
        let k = poly.terms().len();
        let sum_t: usize = poly.terms().iter().map(Vec::len).sum();
        print!(
            " k={k} n_hat={} (4k-3={}) m={} (6(k-1)+sum t={})",
            compiled.n_hat(),
            4 * k - 3,
            compiled.edge_count(),
            6 * (k - 1) + sum_t
        );
        let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
        let ok = all_assignments(&compiled.circuit.var_names()).all(|a| {
            let want = poly.eval(|i| a[&format!("x{i}")]);
            eval_circuit(&compiled.circuit, &a, BoostPolicy::LogNHat, &mut backend).unwrap() == want
        });
        println!(" matches={ok}");
    }
    if let Err(e) = parse_zhegalkin("x1 ^ & x2") {
        println!("error: {e}");
    }
}
