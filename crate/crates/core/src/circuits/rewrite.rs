use super::{CircuitDag, Gate};
use crate::dag::Dag;

struct Parts {
    gates: Vec<Option<Gate>>,
    vars: Vec<Option<String>>,
    out: Vec<Vec<usize>>,
    labels: Vec<Vec<bool>>,
}

impl Parts {
    fn push(&mut self, gate: Gate, inputs: &[(usize, bool)]) -> usize {
        self.gates.push(Some(gate));
        self.vars.push(None);
        self.out.push(inputs.iter().map(|c| c.0).collect());
        self.labels.push(inputs.iter().map(|c| c.1).collect());
        self.gates.len()
    }
}

/// Replaces every XOR gate by AND/OR gates with labeled edges.
///
/// A k-input XOR is first folded to the right into k-1 binary XORs. Each
/// binary `a ^ b` becomes `OR(p, q)` with `p = AND(a, !b)` and
/// `q = AND(!a, b)`, labels on `a` and `b` composed with the originals.
/// The result is renumbered into an ordered DAG. XOR-free circuits are
/// returned unchanged.
pub fn rewrite_xor(circuit: &CircuitDag) -> CircuitDag {
    if !circuit.has_xor() {
        return circuit.clone();
    }
    let n = circuit.dag.n();
    let mut g = Parts {
        gates: circuit.gates.clone(),
        vars: circuit.vars.clone(),
        out: (1..=n).map(|v| circuit.dag.out(v).to_vec()).collect(),
        labels: circuit.labels.clone(),
    };
    for v in 1..=n {
        if circuit.gates[v - 1] != Some(Gate::Xor) {
            continue;
        }
        let inputs: Vec<(usize, bool)> = circuit
            .dag
            .out(v)
            .iter()
            .copied()
            .zip(circuit.labels[v - 1].iter().copied())
            .collect();
        // build the right-folded chain bottom-up; the outermost node reuses v
        let d = inputs.len();
        let mut right = inputs[d - 1];
        for i in (0..d - 1).rev() {
            let (a, sa) = inputs[i];
            let (b, sb) = right;
            let p = g.push(Gate::And, &[(a, sa), (b, !sb)]);
            let q = g.push(Gate::And, &[(a, !sa), (b, sb)]);
            let id = if i == 0 {
                g.gates[v - 1] = Some(Gate::Or);
                g.out[v - 1] = vec![p, q];
                g.labels[v - 1] = vec![true, true];
                v
            } else {
                g.push(Gate::Or, &[(p, true), (q, true)])
            };
            right = (id, true);
        }
    }

    let dag = Dag::from_out_lists(g.gates.len(), g.out, None).expect("rewrite keeps the graph acyclic");
    CircuitDag::new(dag, g.gates, g.labels, g.vars, circuit.root, circuit.negate_output)
        .expect("rewrite keeps gates binary or wider")
        .into_ordered()
}
