//! Oracle checks of inversion circuits by bit-sliced simulation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::flt::InversionCircuit;
use crate::gf2x::{BinaryPoly, FieldSpec};
use crate::revsim::{run_lanes, LaneState, SimError, LANES};

pub const EXHAUSTIVE_MAX_N: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exhaustive verification is limited to n <= {EXHAUSTIVE_MAX_N}, got n = {0}")]
    ExhaustiveTooLarge(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputSet {
    /// Every nonzero element.
    Exhaustive,
    /// `count` uniformly random nonzero elements from a seeded ChaCha8 stream.
    Sampled { count: usize, seed: u64 },
}

pub fn inputs(field: &FieldSpec, set: InputSet) -> Result<Vec<BinaryPoly>, VerifyError> {
    let n = field.n();
    match set {
        InputSet::Exhaustive if n > EXHAUSTIVE_MAX_N => Err(VerifyError::ExhaustiveTooLarge(n)),
        InputSet::Exhaustive => Ok((1..1u64 << n).map(BinaryPoly::from_u64).collect()),
        InputSet::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| BinaryPoly::random_nonzero(n, &mut rng))
                .collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub input: BinaryPoly,
    pub expected: BinaryPoly,
    pub got: BinaryPoly,
    /// With uncomputation: the input register or an ancilla was left altered.
    pub dirty: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checked - self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `ic` on each input (all other qubits zero) and compares the output
/// register with the extended-Euclid inverse. Circuits built with
/// uncomputation must also restore the input and clear every ancilla.
pub fn verify(ic: &InversionCircuit, inputs: &[BinaryPoly]) -> Result<VerifyReport, VerifyError> {
    let field = &ic.field;
    let out_reg = ic.output_register();
    let width = ic.circuit.width();
    let chunk_results: Vec<Result<Vec<Mismatch>, SimError>> = inputs
        .par_chunks(LANES)
        .map(|chunk| {
            let mut state = LaneState::zeros(width);
            for (lane, x) in chunk.iter().enumerate() {
                state.write_register(&ic.input, lane, x);
            }
            run_lanes(&ic.circuit, &mut state)?;
            let dirty_lanes = match &ic.output {
                Some(out) => (0..width)
                    .filter(|q| {
                        !(ic.input.start..ic.input.start + ic.input.len).contains(q)
                            && !(out.start..out.start + out.len).contains(q)
                    })
                    .fold(0u64, |acc, q| acc | state.words[q]),
                None => 0,
            };
            let mut bad = Vec::new();
            for (lane, x) in chunk.iter().enumerate() {
                let expected = field.inv_eea(x).expect("inputs are nonzero and reduced");
                let got = state.read_register(out_reg, lane);
                let dirty = ic.output.is_some()
                    && ((dirty_lanes >> lane) & 1 == 1
                        || state.read_register(&ic.input, lane) != *x);
                if got != expected || dirty {
                    bad.push(Mismatch {
                        input: x.clone(),
                        expected,
                        got,
                        dirty,
                    });
                }
            }
            Ok(bad)
        })
        .collect();
    let mut report = VerifyReport {
        checked: inputs.len(),
        failures: Vec::new(),
    };
    for r in chunk_results {
        report.failures.extend(r?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::flt::{build_waterfall, with_uncompute};

    #[test]
    fn exhaustive_limit() {
        let f = FieldSpec::default_for_degree(17).unwrap();
        assert_eq!(
            inputs(&f, InputSet::Exhaustive),
            Err(VerifyError::ExhaustiveTooLarge(17))
        );
        let f = FieldSpec::default_for_degree(4).unwrap();
        assert_eq!(inputs(&f, InputSet::Exhaustive).unwrap().len(), 15);
    }

    #[test]
    fn sampling_is_seeded() {
        let f = FieldSpec::default_for_degree(40).unwrap();
        let a = inputs(&f, InputSet::Sampled { count: 10, seed: 7 }).unwrap();
        let b = inputs(&f, InputSet::Sampled { count: 10, seed: 7 }).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| !x.is_zero() && x.degree().unwrap() < 40));
    }

    #[test]
    fn detects_a_broken_circuit() {
        let f = FieldSpec::default_for_degree(5).unwrap();
        let mut ic = build_waterfall(&f).unwrap();
        let q = ic.result.qubit(0);
        ic.circuit.push(Gate::x(q)).unwrap();
        let all = inputs(&f, InputSet::Exhaustive).unwrap();
        let r = verify(&ic, &all).unwrap();
        assert_eq!(r.failures.len(), 31);
    }

    #[test]
    fn detects_dirty_ancilla() {
        let f = FieldSpec::default_for_degree(5).unwrap();
        let mut ic = with_uncompute(&build_waterfall(&f).unwrap()).unwrap();
        let q = ic.circuit.register("f1").unwrap().qubit(2);
        ic.circuit.push(Gate::x(q)).unwrap();
        let r = verify(&ic, &inputs(&f, InputSet::Exhaustive).unwrap()).unwrap();
        assert_eq!(r.failures.len(), 31);
        assert!(r.failures.iter().all(|m| m.dirty && m.got == m.expected));
    }
}
