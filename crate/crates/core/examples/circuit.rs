//! Circuits with negating edge labels: building, parsing, rewriting XOR
//! gates and evaluating against the classical evaluator.

use qdag::circuits::{
    all_assignments, eval_circuit, eval_classical, parse_circuit, rewrite_xor, CircuitBuilder, Gate,
};
use qdag::search::BoostPolicy;
use qdag::{Backend, BackendConfig};

fn main() {
    // (x1 NAND !x2) OR (x2 AND x3), sharing x2
    let mut b = CircuitBuilder::new();
    let x1 = b.var("x1");
    let x2 = b.var("x2");
    let x3 = b.var("x3");
    let nand = b.gate(Gate::Nand, &[(x1, true), (x2, false)]);
    let and = b.gate(Gate::And, &[(x2, true), (x3, true)]);
    let root = b.gate(Gate::Or, &[(nand, true), (and, true)]);
    let circuit = b.build(root, false).unwrap();

    let mut backend = Backend::new(BackendConfig::zero_error()).unwrap();
    for a in all_assignments(&circuit.var_names()) {
        let q = eval_circuit(&circuit, &a, BoostPolicy::LogNHat, &mut backend).unwrap();
        println!("{a:?} -> {} (classical {})", u8::from(q), u8::from(eval_classical(&circuit, &a).unwrap()));
    }
    println!("{}", backend.ledger());

    let text = "4 3\nGATE 1 XOR\nVAR 2 x1\nVAR 3 x2\nVAR 4 x3\nROOT 1\n1 2 1\n1 3 1\n1 4 0\n";
    let xor = parse_circuit(text).unwrap();
    let rewritten = rewrite_xor(&xor);
    println!(
        "XOR(x1, x2, !x3): {} gates / {} edges before, {} / {} after",
        xor.n_hat(),
        xor.edge_count(),
        rewritten.n_hat(),
        rewritten.edge_count()
    );
    let same = all_assignments(&xor.var_names())
        .all(|a| eval_classical(&xor, &a).unwrap() == eval_classical(&rewritten, &a).unwrap());
    println!("truth tables agree: {same}");
}
