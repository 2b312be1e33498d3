//! Gate-level circuit IR over indexed qubits.
//!
//! A [`Circuit`] is a flat gate list plus a readout relabeling: after the
//! last gate, readout wire `i` carries whatever physical qubit `relabel[i]`
//! holds. Named registers refer to readout wires. SWAP gates are kept in the
//! IR but cost nothing once [`decompose`] folds them into the relabeling.

mod analyze;
mod decompose;
pub mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;

use thiserror::Error;

pub use analyze::{analyze, analyze_decomposed, ResourceReport};
pub use decompose::{decompose, toffoli_network};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("{kind} expects {expected} qubits, got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind} repeats qubit {qubit}")]
    RepeatedQubit { kind: GateKind, qubit: u32 },
    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: u32, width: usize },
    #[error("register {name:?} overlaps an existing register")]
    RegisterOverlap { name: String },
    #[error("register {name:?} is defined twice with different ranges")]
    RegisterConflict { name: String },
    #[error("register {name:?} exceeds width {width}")]
    RegisterOutOfRange { name: String, width: usize },
    #[error("relabel is not a permutation of 0..{0}")]
    BadRelabel(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    Swap,
    H,
    T,
    Tdg,
    S,
    Sdg,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::Swap,
        GateKind::H,
        GateKind::T,
        GateKind::Tdg,
        GateKind::S,
        GateKind::Sdg,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::Toffoli => 3,
            _ => 1,
        }
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            k => k,
        }
    }

    /// X, CNOT, TOFFOLI and SWAP permute computational basis states.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cnot | GateKind::Toffoli | GateKind::Swap
        )
    }

    pub fn is_t(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    /// Mnemonic used by the text format.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
            GateKind::Swap => "swap",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.mnemonic() == s)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Swap => "SWAP",
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
        })
    }
}

/// Index into a circuit's tag table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TagId(NonZeroU32);

impl TagId {
    fn index(self) -> usize {
        self.0.get() as usize - 1
    }

    fn from_index(i: usize) -> Self {
        TagId(NonZeroU32::new(i as u32 + 1).expect("tag table overflow"))
    }
}

/// One gate. Controls come first: `CNOT(c, t)`, `TOFFOLI(c1, c2, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: [u32; 3],
    tag: Option<TagId>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[u32]) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(CircuitError::RepeatedQubit { kind, qubit: q });
            }
        }
        let mut qs = [0u32; 3];
        qs[..qubits.len()].copy_from_slice(qubits);
        Ok(Self {
            kind,
            qubits: qs,
            tag: None,
        })
    }

    pub fn x(q: u32) -> Self {
        Self::one(GateKind::X, q)
    }

    pub fn h(q: u32) -> Self {
        Self::one(GateKind::H, q)
    }

    pub fn t(q: u32) -> Self {
        Self::one(GateKind::T, q)
    }

    pub fn tdg(q: u32) -> Self {
        Self::one(GateKind::Tdg, q)
    }

    pub fn one(kind: GateKind, q: u32) -> Self {
        assert_eq!(kind.arity(), 1, "{kind} is not a single-qubit gate");
        Self {
            kind,
            qubits: [q, 0, 0],
            tag: None,
        }
    }

    pub fn cnot(control: u32, target: u32) -> Self {
        assert_ne!(control, target, "CNOT control equals target");
        Self {
            kind: GateKind::Cnot,
            qubits: [control, target, 0],
            tag: None,
        }
    }

    pub fn swap(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "SWAP of a qubit with itself");
        Self {
            kind: GateKind::Swap,
            qubits: [a, b, 0],
            tag: None,
        }
    }

    pub fn toffoli(c1: u32, c2: u32, target: u32) -> Self {
        assert!(
            c1 != c2 && c1 != target && c2 != target,
            "TOFFOLI qubits must be distinct"
        );
        Self {
            kind: GateKind::Toffoli,
            qubits: [c1, c2, target],
            tag: None,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[u32] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn tag(&self) -> Option<TagId> {
        self.tag
    }

    pub fn inverse(&self) -> Self {
        Self {
            kind: self.kind.inverse(),
            ..*self
        }
    }

    /// The same gate with every qubit passed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(u32) -> u32) -> Self {
        let mut g = *self;
        for i in 0..self.kind.arity() {
            g.qubits[i] = f(self.qubits[i]);
        }
        g
    }

    fn with_tag(mut self, tag: Option<TagId>) -> Self {
        self.tag = tag;
        self
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for q in self.qubits() {
            write!(f, " q{q}")?;
        }
        Ok(())
    }
}

/// A contiguous run of readout wires.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterRef {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl RegisterRef {
    pub fn new(name: impl Into<String>, start: usize, len: usize) -> Self {
        Self {
            name: name.into(),
            start,
            len,
        }
    }

    /// Qubit index of bit `i`.
    pub fn qubit(&self, i: usize) -> u32 {
        debug_assert!(i < self.len);
        (self.start + i) as u32
    }

    pub fn qubits(&self) -> impl Iterator<Item = u32> + '_ {
        (self.start..self.start + self.len).map(|q| q as u32)
    }

    pub fn overlaps(&self, other: &RegisterRef) -> bool {
        self.start < other.start + other.len && other.start < self.start + self.len
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    registers: Vec<RegisterRef>,
    relabel: Vec<u32>,
    tags: Vec<String>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            registers: Vec::new(),
            relabel: (0..width as u32).collect(),
            tags: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn registers(&self) -> &[RegisterRef] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&RegisterRef> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Readout wire `i` reads physical qubit `relabel()[i]`.
    pub fn relabel(&self) -> &[u32] {
        &self.relabel
    }

    pub fn has_trivial_relabel(&self) -> bool {
        self.relabel.iter().enumerate().all(|(i, &q)| i as u32 == q)
    }

    pub fn set_relabel(&mut self, relabel: Vec<u32>) -> Result<(), CircuitError> {
        if !is_permutation(&relabel, self.width) {
            return Err(CircuitError::BadRelabel(self.width));
        }
        self.relabel = relabel;
        Ok(())
    }

    /// Appends `len` fresh qubits as a named register.
    pub fn alloc_register(&mut self, name: impl Into<String>, len: usize) -> RegisterRef {
        let reg = RegisterRef::new(name, self.width, len);
        self.relabel
            .extend(self.width as u32..(self.width + len) as u32);
        self.width += len;
        self.registers.push(reg.clone());
        reg
    }

    /// Names an existing range of wires.
    pub fn add_register(&mut self, reg: RegisterRef) -> Result<(), CircuitError> {
        if reg.start + reg.len > self.width {
            return Err(CircuitError::RegisterOutOfRange {
                name: reg.name,
                width: self.width,
            });
        }
        if let Some(existing) = self.register(&reg.name) {
            if *existing == reg {
                return Ok(());
            }
            return Err(CircuitError::RegisterConflict { name: reg.name });
        }
        if self.registers.iter().any(|r| r.overlaps(&reg)) {
            return Err(CircuitError::RegisterOverlap { name: reg.name });
        }
        self.registers.push(reg);
        Ok(())
    }

    pub fn intern_tag(&mut self, tag: &str) -> TagId {
        match self.tags.iter().position(|t| t == tag) {
            Some(i) => TagId::from_index(i),
            None => {
                self.tags.push(tag.to_string());
                TagId::from_index(self.tags.len() - 1)
            }
        }
    }

    pub fn tag_name(&self, id: TagId) -> &str {
        &self.tags[id.index()]
    }

    pub fn gate_tag(&self, gate: &Gate) -> Option<&str> {
        gate.tag.map(|t| self.tag_name(t))
    }

    fn check_gate(&self, gate: &Gate) -> Result<(), CircuitError> {
        for &q in gate.qubits() {
            if q as usize >= self.width {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    width: self.width,
                });
            }
        }
        Ok(())
    }

    /// Appends an untagged gate.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        self.push_with(gate, None)
    }

    fn push_with(&mut self, gate: Gate, tag: Option<TagId>) -> Result<(), CircuitError> {
        self.check_gate(&gate)?;
        self.gates.push(gate.with_tag(tag));
        Ok(())
    }

    /// Appends a gate sequence, labelling every gate with `tag`.
    pub fn append_block(
        &mut self,
        tag: Option<&str>,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<(), CircuitError> {
        let id = tag.map(|t| self.intern_tag(t));
        for g in gates {
            self.push_with(g, id)?;
        }
        Ok(())
    }

    /// Number of gates per kind.
    pub fn gate_counts(&self) -> BTreeMap<GateKind, u64> {
        let mut m = BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.kind).or_insert(0) += 1;
        }
        m
    }

    /// Distinct tag instances per block kind, where a tag `KIND#i` belongs to
    /// block kind `KIND`. Tags without `#` count as their own kind.
    pub fn block_counts(&self) -> BTreeMap<String, usize> {
        let mut seen = vec![false; self.tags.len()];
        for g in &self.gates {
            if let Some(t) = g.tag {
                seen[t.index()] = true;
            }
        }
        let mut m = BTreeMap::new();
        for (tag, used) in self.tags.iter().zip(seen) {
            if used {
                let kind = tag.split('#').next().unwrap_or(tag);
                *m.entry(kind.to_string()).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn block_count(&self, kind: &str) -> usize {
        self.block_counts().get(kind).copied().unwrap_or(0)
    }

    /// Gates of `self` followed by gates of `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.width != other.width {
            return Err(CircuitError::WidthMismatch(self.width, other.width));
        }
        let mut out = self.clone();
        for r in &other.registers {
            out.add_register(r.clone())?;
        }
        let remap: Vec<Option<TagId>> =
            other.tags.iter().map(|t| Some(out.intern_tag(t))).collect();
        out.gates.reserve(other.gates.len());
        let pa = &self.relabel;
        for g in &other.gates {
            let tag = g.tag.and_then(|t| remap[t.index()]);
            out.gates
                .push(g.map_qubits(|q| pa[q as usize]).with_tag(tag));
        }
        out.relabel = other.relabel.iter().map(|&q| pa[q as usize]).collect();
        Ok(out)
    }

    /// The circuit that undoes `self`: gates reversed and individually
    /// inverted, relabeling inverted.
    pub fn inverse(&self) -> Circuit {
        let inv = invert_permutation(&self.relabel);
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| g.inverse().map_qubits(|q| inv[q as usize]))
            .collect();
        Circuit {
            width: self.width,
            gates,
            registers: self.registers.clone(),
            relabel: inv,
            tags: self.tags.clone(),
        }
    }

    /// Same gates with every tag replaced by `prefix` + tag.
    pub fn prefix_tags(&self, prefix: &str) -> Circuit {
        let mut out = self.clone();
        for t in &mut out.tags {
            *t = format!("{prefix}{t}");
        }
        out
    }

    /// Grows the circuit to `width` qubits; new wires are untouched.
    pub fn widen(&self, width: usize) -> Result<Circuit, CircuitError> {
        if width < self.width {
            return Err(CircuitError::WidthMismatch(self.width, width));
        }
        let mut out = self.clone();
        out.relabel.extend(self.width as u32..width as u32);
        out.width = width;
        Ok(out)
    }
}

pub(crate) fn is_permutation(p: &[u32], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &q in p {
        match seen.get_mut(q as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

pub(crate) fn invert_permutation(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &q) in p.iter().enumerate() {
        inv[q as usize] = i as u32;
    }
    inv
}

/// Formats a block tag `KIND#index`.
pub fn block_tag(kind: &str, index: usize) -> String {
    format!("{kind}#{index}")
}
