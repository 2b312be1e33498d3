//! Quantum circuits for Itoh-Tsujii (Fermat) inversion in GF(2^n).
//!
//! - [`gf2x`]: classical binary-field arithmetic, the oracle for everything else
//! - [`circuit`]: gate IR, inversion, Toffoli decomposition, depth analysis
//! - [`linsynth`]: CNOT synthesis for GF(2) linear maps (the squaring block)
//! - [`qarith`]: copy, squaring, multiply-by-x and schoolbook multiplier blocks
//! - [`flt`]: exponent planning and the waterfall / baseline / naive builders
//! - [`revsim`]: bit-sliced basis-state simulation and small dense unitaries
//! - [`verify`], [`compare`]: oracle checks and side-by-side resource tables

pub mod circuit;
pub mod compare;
pub mod flt;
pub mod gf2x;
pub mod linsynth;
pub mod qarith;
pub mod revsim;
pub mod verify;

pub use circuit::{
    analyze, analyze_decomposed, decompose, Circuit, Gate, GateKind, ResourceReport,
};
pub use flt::{build, plan, with_uncompute, InversionCircuit, InversionPlan, Variant};
pub use gf2x::{BinaryPoly, FieldSpec, Registry};
