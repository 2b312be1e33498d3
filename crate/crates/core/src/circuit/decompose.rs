use super::{Circuit, Gate, GateKind};

/// The standard 7-T network for `TOFFOLI(a, b, target)`:
/// 2 H, 6 CNOT, 4 T and 3 TDG on the same three qubits.
pub fn toffoli_network(a: u32, b: u32, t: u32) -> [Gate; 15] {
    [
        Gate::h(t),
        Gate::cnot(b, t),
        Gate::tdg(t),
        Gate::cnot(a, t),
        Gate::t(t),
        Gate::cnot(b, t),
        Gate::tdg(t),
        Gate::cnot(a, t),
        Gate::t(b),
        Gate::t(t),
        Gate::h(t),
        Gate::cnot(a, b),
        Gate::t(a),
        Gate::tdg(b),
        Gate::cnot(a, b),
    ]
}

/// Streams the basis-gate form of `c` into `sink` without materializing it.
/// Tags are carried over. Returns the readout relabeling of the result.
pub(crate) fn for_each_decomposed(c: &Circuit, mut sink: impl FnMut(Gate)) -> Vec<u32> {
    // location[q]: qubit of the output circuit that carries what qubit q of
    // the input circuit would hold at this point
    let mut location: Vec<u32> = (0..c.width as u32).collect();
    for g in &c.gates {
        match g.kind {
            GateKind::Swap => {
                let [a, b, _] = g.qubits;
                location.swap(a as usize, b as usize);
            }
            GateKind::Toffoli => {
                let [a, b, t] = g.qubits.map(|q| location[q as usize]);
                for d in toffoli_network(a, b, t) {
                    sink(d.with_tag(g.tag));
                }
            }
            _ => sink(g.map_qubits(|q| location[q as usize])),
        }
    }
    c.relabel.iter().map(|&q| location[q as usize]).collect()
}

/// Rewrites `c` into {X, CNOT, H, T, TDG, S, SDG}: each TOFFOLI becomes
/// [`toffoli_network`] and each SWAP is absorbed into the relabeling.
pub fn decompose(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.gates.len());
    let relabel = for_each_decomposed(c, |g| gates.push(g));
    Circuit {
        width: c.width,
        gates,
        registers: c.registers.clone(),
        relabel,
        tags: c.tags.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_toffoli_counts() {
        let mut c = Circuit::new(3);
        c.push(Gate::toffoli(0, 1, 2)).unwrap();
        let d = decompose(&c);
        let counts = d.gate_counts();
        assert_eq!(counts[&GateKind::T] + counts[&GateKind::Tdg], 7);
        assert_eq!(counts[&GateKind::Cnot], 6);
        assert_eq!(counts[&GateKind::H], 2);
        assert_eq!(counts.len(), 4);
    }

    #[test]
    fn swap_becomes_relabel() {
        let mut c = Circuit::new(3);
        c.push(Gate::swap(0, 2)).unwrap();
        let d = decompose(&c);
        assert!(d.is_empty());
        assert_eq!(d.relabel(), &[2, 1, 0]);
    }

    #[test]
    fn gates_after_swap_are_rerouted() {
        let mut c = Circuit::new(3);
        c.push(Gate::swap(0, 1)).unwrap();
        c.push(Gate::cnot(0, 2)).unwrap();
        let d = decompose(&c);
        assert_eq!(d.gates(), &[Gate::cnot(1, 2)]);
        assert_eq!(d.relabel(), &[1, 0, 2]);
    }

    #[test]
    fn cnot_only_circuit_unchanged() {
        let mut c = Circuit::new(4);
        for (a, b) in [(0, 1), (2, 3), (1, 2), (3, 0)] {
            c.push(Gate::cnot(a, b)).unwrap();
        }
        assert_eq!(decompose(&c), c);
    }
}
