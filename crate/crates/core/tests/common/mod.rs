#![allow(dead_code)]

use qflt::circuit::{Circuit, Gate, GateKind};
use rand::Rng;

/// Longest-path depth and T-depth by explicit pairwise predecessor search.
/// SWAPs are resolved first by tracking which wire holds each logical qubit,
/// then every remaining gate depends on every earlier gate sharing a wire.
pub fn reference_depths(c: &Circuit) -> (u64, u64) {
    let mut wire: Vec<usize> = (0..c.width()).collect();
    let mut placed: Vec<(GateKind, Vec<usize>)> = Vec::new();
    for g in c.gates() {
        let qs = g.qubits();
        if g.kind() == GateKind::Swap {
            wire.swap(qs[0] as usize, qs[1] as usize);
        } else {
            placed.push((g.kind(), qs.iter().map(|&q| wire[q as usize]).collect()));
        }
    }
    let mut depth = vec![0u64; placed.len()];
    let mut t_depth = vec![0u64; placed.len()];
    for j in 0..placed.len() {
        let mut d = 0;
        let mut td = 0;
        for i in 0..j {
            if placed[i].1.iter().any(|w| placed[j].1.contains(w)) {
                d = d.max(depth[i]);
                td = td.max(t_depth[i]);
            }
        }
        depth[j] = d + 1;
        t_depth[j] = td + u64::from(matches!(placed[j].0, GateKind::T | GateKind::Tdg));
    }
    (
        depth.iter().copied().max().unwrap_or(0),
        t_depth.iter().copied().max().unwrap_or(0),
    )
}

fn distinct<R: Rng>(rng: &mut R, width: usize, k: usize) -> Vec<u32> {
    let mut qs = Vec::with_capacity(k);
    while qs.len() < k {
        let q = rng.gen_range(0..width as u32);
        if !qs.contains(&q) {
            qs.push(q);
        }
    }
    qs
}

/// Random circuit over `kinds`; `width` must cover the largest arity used.
pub fn random_circuit<R: Rng>(
    rng: &mut R,
    width: usize,
    len: usize,
    kinds: &[GateKind],
) -> Circuit {
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let qs = distinct(rng, width, kind.arity());
        c.push(Gate::new(kind, &qs).unwrap()).unwrap();
    }
    c
}

pub const CLASSICAL: [GateKind; 4] = [
    GateKind::X,
    GateKind::Cnot,
    GateKind::Toffoli,
    GateKind::Swap,
];
