use super::{rewrite_xor, CircuitBuilder, CircuitDag, CircuitError, Gate, ZhegalkinPoly};

/// A compiled polynomial. Single-variable terms are wired straight to their
/// variable instead of passing through a one-input AND; [`n_hat`] and
/// [`edge_count`] count each such wire as one vertex and one edge, so the
/// totals are `4k - 3` and `6(k - 1) + sum(t_i)` for `k` terms.
///
/// [`n_hat`]: CompiledPoly::n_hat
/// [`edge_count`]: CompiledPoly::edge_count
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPoly {
    pub circuit: CircuitDag,
    /// Number of single-variable terms.
    pub wires: usize,
    /// Number of terms.
    pub k: usize,
}

impl CompiledPoly {
    pub fn n_hat(&self) -> usize {
        self.circuit.n_hat() + self.wires
    }

    pub fn edge_count(&self) -> usize {
        self.circuit.edge_count() + self.wires
    }
}

/// Builds the XOR chain over the terms and rewrites it to AND/OR form.
/// The constant becomes a negation of the root output.
pub fn compile_zhegalkin(poly: &ZhegalkinPoly) -> Result<CompiledPoly, CircuitError> {
    if poly.is_degenerate() {
        return Err(CircuitError::DegeneratePoly);
    }
    let mut b = CircuitBuilder::new();
    let vars = poly.variables();
    let id_of: std::collections::BTreeMap<u32, usize> = vars.iter().map(|&i| (i, b.var(format!("x{i}")))).collect();
    let mut wires = 0;
    let operands: Vec<usize> = poly
        .terms()
        .iter()
        .map(|t| {
            if t.len() == 1 {
                wires += 1;
                id_of[&t[0]]
            } else {
                let inputs: Vec<(usize, bool)> = t.iter().map(|i| (id_of[i], true)).collect();
                b.gate(Gate::And, &inputs)
            }
        })
        .collect();
    let k = operands.len();
    let mut root = operands[k - 1];
    for &op in operands[..k - 1].iter().rev() {
        root = b.gate(Gate::Xor, &[(op, true), (root, true)]);
    }
    let circuit = rewrite_xor(&b.build(root, poly.constant())?).into_ordered();
    Ok(CompiledPoly { circuit, wires, k })
}

#[cfg(test)]
mod tests {
    use super::super::{all_assignments, eval_classical, parse_zhegalkin, random_poly};
    use super::*;

    #[test]
    fn worked_example_counts() {
        let c = compile_zhegalkin(&parse_zhegalkin("1 ^ x1 ^ x1&x2").unwrap()).unwrap();
        assert_eq!((c.n_hat(), c.edge_count()), (5, 9));
    }

    #[test]
    fn single_term() {
        let c = compile_zhegalkin(&parse_zhegalkin("x1&x2&x3").unwrap()).unwrap();
        assert_eq!((c.n_hat(), c.edge_count()), (1, 3));
        assert_eq!(c.circuit.n_hat(), 1);
        let c = compile_zhegalkin(&parse_zhegalkin("x3").unwrap()).unwrap();
        assert_eq!((c.n_hat(), c.edge_count()), (1, 1));
        assert_eq!(c.circuit.n_hat(), 0);
    }

    #[test]
    fn degenerate_is_rejected() {
        let p = parse_zhegalkin("1 ^ x2 ^ x2").unwrap();
        assert_eq!(compile_zhegalkin(&p), Err(CircuitError::DegeneratePoly));
    }

    #[test]
    fn random_polys_have_exact_counts_and_truth_tables() {
        for seed in 0..40 {
            let p = random_poly(6, 1 + seed as usize % 6, 4, seed);
            let c = compile_zhegalkin(&p).unwrap();
            let k = p.terms().len();
            let sum_t: usize = p.terms().iter().map(Vec::len).sum();
            assert_eq!(c.n_hat(), 3 * (k - 1) + k);
            assert_eq!(c.edge_count(), 6 * (k - 1) + sum_t);
            for a in all_assignments(&c.circuit.var_names()) {
                let want = p.eval(|i| a[&format!("x{i}")]);
                assert_eq!(eval_classical(&c.circuit, &a).unwrap(), want);
            }
        }
    }
}
