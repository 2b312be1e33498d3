//! Reversible GF(2^n) building blocks on n-qubit registers.
//!
//! Every builder returns an untagged gate sequence; callers label blocks when
//! they splice them into a circuit.

use thiserror::Error;

use crate::circuit::{Gate, RegisterRef};
use crate::gf2x::FieldSpec;
use crate::linsynth::{squaring_matrix, synth_cnot_network};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("registers {0:?} and {1:?} overlap")]
    Overlap(String, String),
    #[error("register {name:?} has {len} qubits, expected {n}")]
    Length { name: String, len: usize, n: usize },
}

/// Gate templates for one field, computed once and stamped onto registers.
#[derive(Clone, Debug)]
pub struct FieldArith {
    field: FieldSpec,
    /// SQUARE as (control, target) over register-relative bit positions,
    /// followed by the relabeling SWAPs.
    square_cnots: Vec<(u32, u32)>,
    square_swaps: Vec<(u32, u32)>,
    taps: Vec<usize>,
}

impl FieldArith {
    pub fn new(field: &FieldSpec) -> Self {
        let net =
            synth_cnot_network(&squaring_matrix(field)).expect("the Frobenius map is invertible");
        Self {
            field: field.clone(),
            square_swaps: net.relabel_swaps(),
            square_cnots: net.cnots,
            taps: field.reduction_taps(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    /// CNOTs in one SQUARE block.
    pub fn square_cnot_count(&self) -> usize {
        self.square_cnots.len()
    }

    fn check_len(&self, reg: &RegisterRef) -> Result<(), ArithError> {
        if reg.len != self.n() {
            return Err(ArithError::Length {
                name: reg.name.clone(),
                len: reg.len,
                n: self.n(),
            });
        }
        Ok(())
    }

    fn check_disjoint(&self, regs: &[&RegisterRef]) -> Result<(), ArithError> {
        for r in regs {
            self.check_len(r)?;
        }
        for (i, a) in regs.iter().enumerate() {
            for b in &regs[i + 1..] {
                if a.overlaps(b) {
                    return Err(ArithError::Overlap(a.name.clone(), b.name.clone()));
                }
            }
        }
        Ok(())
    }

    /// `dst ^= src`, one CNOT per bit.
    pub fn xor_add(&self, src: &RegisterRef, dst: &RegisterRef) -> Result<Vec<Gate>, ArithError> {
        self.check_disjoint(&[src, dst])?;
        Ok((0..self.n())
            .map(|i| Gate::cnot(src.qubit(i), dst.qubit(i)))
            .collect())
    }

    /// `reg ← reg^2 mod m(x)`: the synthesized squaring network followed by
    /// the SWAPs that undo its output permutation.
    pub fn square_inplace(&self, reg: &RegisterRef) -> Result<Vec<Gate>, ArithError> {
        self.check_len(reg)?;
        let q = |i: u32| reg.qubit(i as usize);
        Ok(self
            .square_cnots
            .iter()
            .map(|&(c, t)| Gate::cnot(q(c), q(t)))
            .chain(
                self.square_swaps
                    .iter()
                    .map(|&(a, b)| Gate::swap(q(a), q(b))),
            )
            .collect())
    }

    /// Gate-wise inverse of [`Self::square_inplace`]: `reg ← sqrt(reg)`.
    pub fn square_inverse_inplace(&self, reg: &RegisterRef) -> Result<Vec<Gate>, ArithError> {
        Ok(inverse_sequence(self.square_inplace(reg)?))
    }

    /// `reg ← reg·x mod m(x)`: rotate up by one, then feed the wrapped top
    /// coefficient into every reduction tap.
    pub fn mulx_inplace(&self, reg: &RegisterRef) -> Result<Vec<Gate>, ArithError> {
        self.check_len(reg)?;
        let n = self.n();
        let mut gates: Vec<Gate> = (1..n)
            .rev()
            .map(|k| Gate::swap(reg.qubit(k), reg.qubit(k - 1)))
            .collect();
        gates.extend(
            self.taps
                .iter()
                .map(|&k| Gate::cnot(reg.qubit(0), reg.qubit(k))),
        );
        Ok(gates)
    }

    pub fn mulx_inverse_inplace(&self, reg: &RegisterRef) -> Result<Vec<Gate>, ArithError> {
        Ok(inverse_sequence(self.mulx_inplace(reg)?))
    }

    /// `dst ^= a·b mod m(x)` with `a` and `b` restored. Round `i` adds
    /// `a_i · (b·x^i)` with n Toffolis, rotating `b` by `x` between rounds;
    /// `b` is rotated back at the end. n² Toffolis, no ancilla.
    pub fn modmult(
        &self,
        a: &RegisterRef,
        b: &RegisterRef,
        dst: &RegisterRef,
    ) -> Result<Vec<Gate>, ArithError> {
        self.check_disjoint(&[a, b, dst])?;
        let n = self.n();
        let mulx = self.mulx_inplace(b)?;
        let unmulx = self.mulx_inverse_inplace(b)?;
        let mut gates = Vec::with_capacity(n * n + 2 * (n - 1) * mulx.len());
        for i in 0..n {
            gates.extend((0..n).map(|j| Gate::toffoli(a.qubit(i), b.qubit(j), dst.qubit(j))));
            if i + 1 < n {
                gates.extend_from_slice(&mulx);
            }
        }
        for _ in 1..n {
            gates.extend_from_slice(&unmulx);
        }
        Ok(gates)
    }
}

/// Reverses a gate sequence and inverts each gate.
pub fn inverse_sequence(mut gates: Vec<Gate>) -> Vec<Gate> {
    gates.reverse();
    for g in &mut gates {
        *g = g.inverse();
    }
    gates
}
