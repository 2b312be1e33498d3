use std::collections::BTreeMap;

use super::decompose::for_each_decomposed;
use super::{Circuit, Gate, GateKind};

/// Width, gate counts, depth and T-depth of one circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceReport {
    pub width: usize,
    pub counts: BTreeMap<GateKind, u64>,
    pub cnot_count: u64,
    pub toffoli_count: u64,
    /// T plus TDG.
    pub t_count: u64,
    pub overall_depth: u64,
    pub t_depth: u64,
}

impl ResourceReport {
    pub fn count(&self, kind: GateKind) -> u64 {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total_gates(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(k, _)| **k != GateKind::Swap)
            .map(|(_, v)| v)
            .sum()
    }
}

/// ASAP scheduler. Every non-SWAP gate takes one time step on all of its
/// qubits; SWAPs are relabelings and only exchange the qubits' histories.
struct Scheduler {
    level: Vec<u64>,
    t_level: Vec<u64>,
    counts: [u64; GateKind::ALL.len()],
    depth: u64,
    t_depth: u64,
}

impl Scheduler {
    fn new(width: usize) -> Self {
        Self {
            level: vec![0; width],
            t_level: vec![0; width],
            counts: [0; GateKind::ALL.len()],
            depth: 0,
            t_depth: 0,
        }
    }

    fn apply(&mut self, g: &Gate) {
        self.counts[g.kind as usize] += 1;
        let qs = g.qubits();
        if g.kind == GateKind::Swap {
            let (a, b) = (qs[0] as usize, qs[1] as usize);
            self.level.swap(a, b);
            self.t_level.swap(a, b);
            return;
        }
        let start = qs
            .iter()
            .map(|&q| self.level[q as usize])
            .max()
            .unwrap_or(0)
            + 1;
        let mut t = qs
            .iter()
            .map(|&q| self.t_level[q as usize])
            .max()
            .unwrap_or(0);
        if g.kind.is_t() {
            t += 1;
        }
        for &q in qs {
            self.level[q as usize] = start;
            self.t_level[q as usize] = t;
        }
        self.depth = self.depth.max(start);
        self.t_depth = self.t_depth.max(t);
    }

    fn finish(self, width: usize) -> ResourceReport {
        let counts: BTreeMap<GateKind, u64> = GateKind::ALL
            .into_iter()
            .zip(self.counts)
            .filter(|(_, n)| *n > 0)
            .collect();
        let get = |k: GateKind| counts.get(&k).copied().unwrap_or(0);
        ResourceReport {
            width,
            cnot_count: get(GateKind::Cnot),
            toffoli_count: get(GateKind::Toffoli),
            t_count: get(GateKind::T) + get(GateKind::Tdg),
            overall_depth: self.depth,
            t_depth: self.t_depth,
            counts,
        }
    }
}

/// Resource report of `c` as written: TOFFOLI counts as one unit-cost gate.
pub fn analyze(c: &Circuit) -> ResourceReport {
    let mut s = Scheduler::new(c.width);
    for g in &c.gates {
        s.apply(g);
    }
    s.finish(c.width)
}

/// Equivalent to `analyze(&decompose(c))` but streams the decomposition, so
/// very large circuits never exist in expanded form.
pub fn analyze_decomposed(c: &Circuit) -> ResourceReport {
    let mut s = Scheduler::new(c.width);
    for_each_decomposed(c, |g| s.apply(&g));
    s.finish(c.width)
}

#[cfg(test)]
mod tests {
    use super::super::decompose;
    use super::*;

    fn circuit(width: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(*g).unwrap();
        }
        c
    }

    #[test]
    fn disjoint_and_shared_qubits() {
        let r = analyze(&circuit(4, &[Gate::cnot(0, 1), Gate::cnot(2, 3)]));
        assert_eq!(r.overall_depth, 1);
        let r = analyze(&circuit(3, &[Gate::cnot(0, 1), Gate::cnot(1, 2)]));
        assert_eq!(r.overall_depth, 2);
        assert_eq!(r.cnot_count, 2);
    }

    #[test]
    fn empty_circuit() {
        let r = analyze(&Circuit::new(5));
        assert_eq!(r.width, 5);
        assert_eq!(r.overall_depth, 0);
        assert_eq!(r.t_depth, 0);
        assert!(r.counts.is_empty());
    }

    #[test]
    fn decomposed_toffoli_report() {
        let c = circuit(3, &[Gate::toffoli(0, 1, 2)]);
        let r = analyze_decomposed(&c);
        assert_eq!(r.t_count, 7);
        assert_eq!(r.cnot_count, 6);
        assert_eq!(r.toffoli_count, 0);
        assert_eq!(r, analyze(&decompose(&c)));
        // the network needs at least 4 T layers when scheduled ASAP
        assert_eq!(r.t_depth, 4);
        assert!(r.overall_depth >= r.t_depth);
    }

    #[test]
    fn swaps_cost_nothing_but_carry_history() {
        // the CNOT on qubit 1 after the swap follows qubit 0's history
        let c = circuit(
            3,
            &[Gate::x(0), Gate::x(0), Gate::swap(0, 1), Gate::cnot(1, 2)],
        );
        let r = analyze(&c);
        assert_eq!(r.overall_depth, 3);
        assert_eq!(r.count(GateKind::Swap), 1);
        assert_eq!(r.total_gates(), 3);
        assert_eq!(r, {
            let mut d = analyze(&decompose(&c));
            d.counts.insert(GateKind::Swap, 1);
            d
        });
    }

    #[test]
    fn t_depth_counts_only_t_layers() {
        let c = circuit(
            2,
            &[
                Gate::t(0),
                Gate::h(0),
                Gate::cnot(0, 1),
                Gate::tdg(1),
                Gate::t(0),
            ],
        );
        let r = analyze(&c);
        assert_eq!(r.t_count, 3);
        assert_eq!(r.t_depth, 2);
        assert_eq!(r.overall_depth, 4);
    }
}
