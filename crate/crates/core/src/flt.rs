//! Itoh-Tsujii planning and the inversion circuit builders.
//!
//! Writing `n - 1 = Σ 2^(k_s)` with `k_1 > … > k_t` and `a_j = f^(2^j - 1)`,
//! inversion runs in three stages:
//!
//! 1. `a_(2^s) = a_(2^(s-1))^(2^(2^(s-1))) · a_(2^(s-1))` for `s = 1..=k_1`;
//! 2. fold in the remaining `a_(2^(k_s))`, squaring the accumulator
//!    `2^(k_s)` times before each product;
//! 3. one last squaring turns `a_(n-1)` into `f^(2^n - 2) = f^-1`.
//!
//! The waterfall builder gives every stage-1 squared copy its own register
//! and never uncomputes mid-circuit. The baseline builder reuses a single
//! work register, which costs an inverse-squaring block and a cleanup copy
//! per stage-1 iteration.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{block_tag, Circuit, CircuitError, Gate, RegisterRef};
use crate::gf2x::FieldSpec;
use crate::qarith::{ArithError, FieldArith};

pub const NAIVE_MAX_N: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FltError {
    #[error("inversion needs n >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("naive variant restricted to demonstration sizes (n <= {NAIVE_MAX_N}), got n = {0}")]
    NaiveTooLarge(usize),
    #[error("result register {0:?} is not part of the circuit")]
    UnknownResult(String),
    #[error("unknown variant {0:?} (expected waterfall, baseline or naive)")]
    UnknownVariant(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Block kinds used as tag prefixes.
pub mod blocks {
    pub const SQUARE: &str = "SQUARE";
    pub const SQUARE_INV: &str = "SQUARE_INV";
    pub const MULT: &str = "MULT";
    pub const COPY: &str = "COPY";
    pub const UNCOPY: &str = "UNCOPY";
    pub const SWAP: &str = "SWAP";
    pub const COPY_OUT: &str = "COPY_OUT";
    pub const UNCOMPUTE_PREFIX: &str = "UNCOMPUTE:";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionPlan {
    pub n: usize,
    /// Set bit positions of `n - 1`, descending.
    pub ks: Vec<usize>,
    pub t: usize,
    pub k1: usize,
    pub k_max: usize,
    pub mult_count: usize,
    pub squaring_count: usize,
}

pub fn plan(n: usize) -> Result<InversionPlan, FltError> {
    if n < 2 {
        return Err(FltError::DegreeTooSmall(n));
    }
    let e = n - 1;
    let ks: Vec<usize> = (0..usize::BITS as usize)
        .rev()
        .filter(|&k| (e >> k) & 1 == 1)
        .collect();
    let t = ks.len();
    let k1 = ks[0];
    Ok(InversionPlan {
        n,
        t,
        k1,
        k_max: 2 * k1 + t,
        mult_count: k1 + t - 1,
        squaring_count: n - 1,
        ks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Waterfall,
    Baseline,
    Naive,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Waterfall, Variant::Baseline, Variant::Naive];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Waterfall => "waterfall",
            Variant::Baseline => "baseline",
            Variant::Naive => "naive",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = FltError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| FltError::UnknownVariant(s.to_string()))
    }
}

/// A built inversion circuit and the registers needed to drive it.
#[derive(Clone, Debug)]
pub struct InversionCircuit {
    pub variant: Variant,
    pub field: FieldSpec,
    pub circuit: Circuit,
    /// Holds `f` on entry.
    pub input: RegisterRef,
    /// Holds `f^-1` on exit.
    pub result: RegisterRef,
    /// Set by [`with_uncompute`]: the clean copy of the result.
    pub output: Option<RegisterRef>,
}

impl InversionCircuit {
    /// Register that carries the inverse at readout.
    pub fn output_register(&self) -> &RegisterRef {
        self.output.as_ref().unwrap_or(&self.result)
    }
}

/// Appends tagged blocks, numbering each kind from 1.
struct Assembler<'a> {
    arith: &'a FieldArith,
    circuit: Circuit,
    counters: Vec<(&'static str, usize)>,
}

impl<'a> Assembler<'a> {
    fn new(arith: &'a FieldArith) -> Self {
        Self {
            arith,
            circuit: Circuit::new(0),
            counters: Vec::new(),
        }
    }

    fn register(&mut self, name: impl Into<String>) -> RegisterRef {
        self.circuit.alloc_register(name, self.arith.n())
    }

    fn next_tag(&mut self, kind: &'static str) -> String {
        let idx = match self.counters.iter_mut().find(|(k, _)| *k == kind) {
            Some((_, c)) => {
                *c += 1;
                *c
            }
            None => {
                self.counters.push((kind, 1));
                1
            }
        };
        block_tag(kind, idx)
    }

    fn block(&mut self, kind: &'static str, gates: Vec<Gate>) -> Result<(), FltError> {
        let tag = self.next_tag(kind);
        self.circuit.append_block(Some(&tag), gates)?;
        Ok(())
    }

    fn copy(
        &mut self,
        kind: &'static str,
        src: &RegisterRef,
        dst: &RegisterRef,
    ) -> Result<(), FltError> {
        let g = self.arith.xor_add(src, dst)?;
        self.block(kind, g)
    }

    /// `times` SQUARE blocks on `reg`.
    fn square(&mut self, reg: &RegisterRef, times: usize) -> Result<(), FltError> {
        let g = self.arith.square_inplace(reg)?;
        for _ in 0..times {
            self.block(blocks::SQUARE, g.clone())?;
        }
        Ok(())
    }

    /// One SQUARE_INV block undoing `times` squarings of `reg`.
    fn square_inverse(&mut self, reg: &RegisterRef, times: usize) -> Result<(), FltError> {
        let once = self.arith.square_inverse_inplace(reg)?;
        let g: Vec<Gate> = (0..times).flat_map(|_| once.iter().copied()).collect();
        self.block(blocks::SQUARE_INV, g)
    }

    fn mult(
        &mut self,
        a: &RegisterRef,
        b: &RegisterRef,
        dst: &RegisterRef,
    ) -> Result<(), FltError> {
        let g = self.arith.modmult(a, b, dst)?;
        self.block(blocks::MULT, g)
    }

    fn swap(&mut self, a: &RegisterRef, b: &RegisterRef) -> Result<(), FltError> {
        let g = (0..a.len)
            .map(|i| Gate::swap(a.qubit(i), b.qubit(i)))
            .collect();
        self.block(blocks::SWAP, g)
    }
}

/// Reduced-depth schedule over `k_max + 1` registers `f0 … f(k_max)`.
///
/// Stage 1 iteration `s` copies `g(s-1) = f(2s-2)` into `f(2s-1)`, squares the
/// copy `2^(s-1)` times and multiplies into `f(2s)`. Stage 2 squares the
/// accumulator in place and writes each product to the next of the top `t-1`
/// registers, so the last lands in `f(k_max)`; when `t = 1` the stage-1 result
/// is relabel-swapped there instead. Stage 3 squares `f(k_max)`.
pub fn build_waterfall(field: &FieldSpec) -> Result<InversionCircuit, FltError> {
    let plan = plan(field.n())?;
    let arith = FieldArith::new(field);
    build_waterfall_with(&arith, &plan)
}

fn build_waterfall_with(
    arith: &FieldArith,
    plan: &InversionPlan,
) -> Result<InversionCircuit, FltError> {
    let mut asm = Assembler::new(arith);
    let f: Vec<RegisterRef> = (0..=plan.k_max)
        .map(|i| asm.register(format!("f{i}")))
        .collect();
    let (k1, t) = (plan.k1, plan.t);

    // g[j] = f^(2^(2^j) - 1)
    let mut g = vec![f[0].clone()];
    for s in 1..=k1 {
        let (copy, dst) = (&f[2 * s - 1], &f[2 * s]);
        asm.copy(blocks::COPY, &g[s - 1], copy)?;
        asm.square(copy, 1 << (s - 1))?;
        asm.mult(&g[s - 1], copy, dst)?;
        g.push(dst.clone());
    }

    let mut acc = g[k1].clone();
    let first_dst = plan.k_max + 2 - t;
    for (i, &k) in plan.ks.iter().enumerate().skip(1) {
        let dst = &f[first_dst + i - 1];
        asm.square(&acc, 1 << k)?;
        asm.mult(&acc, &g[k], dst)?;
        acc = dst.clone();
    }
    let result = f[plan.k_max].clone();
    if t == 1 {
        asm.swap(&acc, &result)?;
    }
    debug_assert!(t == 1 || acc == result);
    asm.square(&result, 1)?;

    Ok(InversionCircuit {
        variant: Variant::Waterfall,
        field: arith.field().clone(),
        circuit: asm.circuit,
        input: f[0].clone(),
        result,
        output: None,
    })
}

/// Register-reuse schedule: one work register `w` takes every stage-1 squared
/// copy and is returned to zero after each product by a SQUARE_INV block and
/// a cleanup copy. Registers: `f0`, `w`, `g1 … g(k1)`, `r2 … r(t)`.
pub fn build_baseline(field: &FieldSpec) -> Result<InversionCircuit, FltError> {
    let plan = plan(field.n())?;
    let arith = FieldArith::new(field);
    build_baseline_with(&arith, &plan)
}

fn build_baseline_with(
    arith: &FieldArith,
    plan: &InversionPlan,
) -> Result<InversionCircuit, FltError> {
    let mut asm = Assembler::new(arith);
    let input = asm.register("f0");
    let work = (plan.k1 >= 1).then(|| asm.register("w"));
    let mut g = vec![input.clone()];
    for s in 1..=plan.k1 {
        g.push(asm.register(format!("g{s}")));
    }
    let r: Vec<RegisterRef> = (2..=plan.t)
        .map(|s| asm.register(format!("r{s}")))
        .collect();

    if let Some(w) = &work {
        for s in 1..=plan.k1 {
            let times = 1 << (s - 1);
            asm.copy(blocks::COPY, &g[s - 1], w)?;
            asm.square(w, times)?;
            asm.mult(&g[s - 1], w, &g[s])?;
            asm.square_inverse(w, times)?;
            asm.copy(blocks::UNCOPY, &g[s - 1], w)?;
        }
    }

    let mut acc = g[plan.k1].clone();
    for (i, &k) in plan.ks.iter().enumerate().skip(1) {
        asm.square(&acc, 1 << k)?;
        asm.mult(&acc, &g[k], &r[i - 1])?;
        acc = r[i - 1].clone();
    }
    asm.square(&acc, 1)?;

    Ok(InversionCircuit {
        variant: Variant::Baseline,
        field: arith.field().clone(),
        circuit: asm.circuit,
        input,
        result: acc,
        output: None,
    })
}

/// Direct `f^(2^n - 2) = Π_{i=1}^{n-1} f^(2^i)`: `n - 1` squarings of one
/// running power and `n - 2` products, each into a fresh accumulator.
pub fn build_naive(field: &FieldSpec) -> Result<InversionCircuit, FltError> {
    let n = field.n();
    if n > NAIVE_MAX_N {
        return Err(FltError::NaiveTooLarge(n));
    }
    plan(n)?;
    let arith = FieldArith::new(field);
    let mut asm = Assembler::new(&arith);
    let input = asm.register("f0");
    let acc: Vec<RegisterRef> = (1..n).map(|i| asm.register(format!("acc{i}"))).collect();
    let power = (n >= 3).then(|| asm.register("sq"));

    asm.copy(blocks::COPY, &input, &acc[0])?;
    asm.square(&acc[0], 1)?;
    if let Some(p) = &power {
        asm.copy(blocks::COPY, &acc[0], p)?;
        for i in 1..n - 1 {
            asm.square(p, 1)?;
            asm.mult(&acc[i - 1], p, &acc[i])?;
        }
    }

    Ok(InversionCircuit {
        variant: Variant::Naive,
        field: field.clone(),
        circuit: asm.circuit,
        input,
        result: acc[n - 2].clone(),
        output: None,
    })
}

pub fn build(variant: Variant, field: &FieldSpec) -> Result<InversionCircuit, FltError> {
    match variant {
        Variant::Waterfall => build_waterfall(field),
        Variant::Baseline => build_baseline(field),
        Variant::Naive => build_naive(field),
    }
}

/// Builds waterfall and baseline sharing one synthesized SQUARE network.
pub fn build_pair(field: &FieldSpec) -> Result<(InversionCircuit, InversionCircuit), FltError> {
    let plan = plan(field.n())?;
    let arith = FieldArith::new(field);
    Ok((
        build_waterfall_with(&arith, &plan)?,
        build_baseline_with(&arith, &plan)?,
    ))
}

/// Compute, copy the result into a fresh `out` register, then run the
/// inverse of the compute part so every other register returns to its
/// initial value.
pub fn with_uncompute(ic: &InversionCircuit) -> Result<InversionCircuit, FltError> {
    if ic.circuit.register(&ic.result.name) != Some(&ic.result) {
        return Err(FltError::UnknownResult(ic.result.name.clone()));
    }
    let n = ic.result.len;
    let mut compute = ic.circuit.clone();
    let out = compute.alloc_register("out", n);
    let mut copy = Circuit::new(compute.width());
    let gates = (0..n).map(|i| Gate::cnot(ic.result.qubit(i), out.qubit(i)));
    copy.append_block(Some(&block_tag(blocks::COPY_OUT, 1)), gates)?;
    let undo = compute.inverse().prefix_tags(blocks::UNCOMPUTE_PREFIX);
    let circuit = compute.compose(&copy)?.compose(&undo)?;
    Ok(InversionCircuit {
        circuit,
        output: Some(out),
        ..ic.clone()
    })
}

/// Block-level accounting of a built circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockSummary {
    pub square: usize,
    pub square_inv: usize,
    pub mult: usize,
}

impl BlockSummary {
    pub fn of(c: &Circuit) -> Self {
        let counts = c.block_counts();
        let get = |k: &str| counts.get(k).copied().unwrap_or(0);
        Self {
            square: get(blocks::SQUARE),
            square_inv: get(blocks::SQUARE_INV),
            mult: get(blocks::MULT),
        }
    }
}

impl fmt::Display for BlockSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SQUARE={} MULT={} SQUARE_INV={}",
            self.square, self.mult, self.square_inv
        )
    }
}
