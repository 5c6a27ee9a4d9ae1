//! Empirical error of boosted vertex functions at base error 1/2, against
//! the `2^-k` bound.

use qdag::search::{boosted, VertexFn};
use qdag::{Backend, BackendConfig};

fn main() {
    let trials = 20_000;
    let cases: [(VertexFn, Vec<f64>); 5] = [
        (VertexFn::Max, vec![3.0, 8.0, 5.0, 1.0, 7.0, 2.0]),
        (VertexFn::Min, vec![3.0, 8.0, 5.0, 1.0, 7.0, 2.0]),
        (VertexFn::Or, vec![0.0, 0.0, 1.0, 0.0]),
        (VertexFn::And, vec![1.0, 1.0, 0.0, 1.0]),
        (VertexFn::Nand, vec![1.0, 0.0, 1.0, 1.0]),
    ];
    for (c, (kind, args)) in cases.iter().enumerate() {
        let truth = kind.apply(args);
        let mut line = format!("{kind:>4}:");
        for k in [1u32, 2, 4, 8] {
            let mut backend = Backend::new(BackendConfig::default().with_seed(100 * c as u64 + k as u64)).unwrap();
            let wrong = (0..trials)
                .filter(|_| boosted(&mut backend, *kind, args, k).unwrap().value != truth)
                .count();
            line += &format!("  k={k} error={:.4} (bound {:.4})", wrong as f64 / trials as f64, 0.5f64.powi(k as i32));
        }
        println!("{line}");
    }
}
