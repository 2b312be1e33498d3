//! Classical simulation of reversible circuits and dense unitaries for
//! small ones.
//!
//! Basis simulation is bit-sliced: every qubit is one `u64` and each of the
//! 64 bit lanes carries an independent input, so one pass over the gate list
//! evaluates 64 basis states.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, GateKind, RegisterRef};
use crate::gf2x::BinaryPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("gate {0} is not classically simulable")]
    NotClassical(GateKind),
    #[error("state has {got} bits but the circuit is {width} qubits wide")]
    WidthMismatch { got: usize, width: usize },
    #[error("dense simulation is limited to {max} qubits, circuit has {width}")]
    TooWide { width: usize, max: usize },
}

pub const MAX_UNITARY_WIDTH: usize = 12;
pub const LANES: usize = 64;

/// A computational basis state, one bit per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    len: usize,
    words: Vec<u64>,
}

impl BasisState {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Writes the coefficients of `value` into `reg` (bit i to qubit start+i).
    pub fn write_register(&mut self, reg: &RegisterRef, value: &BinaryPoly) {
        for i in 0..reg.len {
            self.set(reg.start + i, value.bit(i));
        }
    }

    pub fn read_register(&self, reg: &RegisterRef) -> BinaryPoly {
        BinaryPoly::from_bits(
            &(0..reg.len)
                .map(|i| self.get(reg.start + i))
                .collect::<Vec<_>>(),
        )
    }
}

/// Up to 64 basis states evaluated together: `words[q]` bit `l` is qubit `q`
/// of lane `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaneState {
    pub words: Vec<u64>,
}

impl LaneState {
    pub fn zeros(width: usize) -> Self {
        Self {
            words: vec![0; width],
        }
    }

    pub fn width(&self) -> usize {
        self.words.len()
    }

    pub fn write_register(&mut self, reg: &RegisterRef, lane: usize, value: &BinaryPoly) {
        let bit = 1u64 << lane;
        for i in 0..reg.len {
            let w = &mut self.words[reg.start + i];
            if value.bit(i) {
                *w |= bit;
            } else {
                *w &= !bit;
            }
        }
    }

    pub fn read_register(&self, reg: &RegisterRef, lane: usize) -> BinaryPoly {
        let bits: Vec<bool> = (0..reg.len)
            .map(|i| (self.words[reg.start + i] >> lane) & 1 == 1)
            .collect();
        BinaryPoly::from_bits(&bits)
    }

    /// Lanes in which any qubit of `reg` is set.
    pub fn nonzero_lanes(&self, reg: &RegisterRef) -> u64 {
        self.words[reg.start..reg.start + reg.len]
            .iter()
            .fold(0, |acc, w| acc | w)
    }
}

fn check_classical(c: &Circuit) -> Result<(), SimError> {
    match c.gates().iter().find(|g| !g.kind().is_classical()) {
        Some(g) => Err(SimError::NotClassical(g.kind())),
        None => Ok(()),
    }
}

/// Runs `c` on all lanes of `state` in place, relabeling included.
pub fn run_lanes(c: &Circuit, state: &mut LaneState) -> Result<(), SimError> {
    if state.width() != c.width() {
        return Err(SimError::WidthMismatch {
            got: state.width(),
            width: c.width(),
        });
    }
    check_classical(c)?;
    let w = &mut state.words;
    for g in c.gates() {
        let q = g.qubits();
        match g.kind() {
            GateKind::X => w[q[0] as usize] = !w[q[0] as usize],
            GateKind::Cnot => w[q[1] as usize] ^= w[q[0] as usize],
            GateKind::Toffoli => w[q[2] as usize] ^= w[q[0] as usize] & w[q[1] as usize],
            GateKind::Swap => w.swap(q[0] as usize, q[1] as usize),
            k => unreachable!("{k} rejected by check_classical"),
        }
    }
    if !c.has_trivial_relabel() {
        let old = std::mem::take(w);
        *w = c.relabel().iter().map(|&p| old[p as usize]).collect();
    }
    Ok(())
}

/// Classical execution of an X/CNOT/TOFFOLI/SWAP circuit on one basis state.
pub fn run_basis(c: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    if input.len() != c.width() {
        return Err(SimError::WidthMismatch {
            got: input.len(),
            width: c.width(),
        });
    }
    let mut lanes = LaneState {
        words: (0..input.len()).map(|i| input.get(i) as u64).collect(),
    };
    run_lanes(c, &mut lanes)?;
    let mut out = BasisState::zeros(input.len());
    for (i, w) in lanes.words.iter().enumerate() {
        out.set(i, w & 1 == 1);
    }
    Ok(out)
}

/// Dense unitary, column-major: `column(k)` is the image of basis state `k`,
/// where bit `q` of `k` is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    pub fn identity(width: usize) -> Self {
        let dim = 1usize << width;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    /// Unitary of the basis permutation `k ↦ f(k)`.
    pub fn from_permutation(width: usize, f: impl Fn(usize) -> usize) -> Self {
        let dim = 1usize << width;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + f(k)] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn from_column_major(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn apply_single(col: &mut [Complex64], q: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1 << q;
    for i in 0..col.len() {
        if i & bit == 0 {
            let (a, b) = (col[i], col[i | bit]);
            col[i] = m[0][0] * a + m[0][1] * b;
            col[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn phase_matrix(phase: Complex64) -> [[Complex64; 2]; 2] {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, phase]]
}

/// Product of the gate unitaries in order, with the readout relabeling
/// applied as a final permutation.
pub fn unitary_of(c: &Circuit) -> Result<Unitary, SimError> {
    let width = c.width();
    if width > MAX_UNITARY_WIDTH {
        return Err(SimError::TooWide {
            width,
            max: MAX_UNITARY_WIDTH,
        });
    }
    let mut u = Unitary::identity(width);
    let dim = u.dim;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = [
        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
    ];
    let t = phase_matrix(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4));
    let tdg = phase_matrix(Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4));
    let sg = phase_matrix(Complex64::new(0.0, 1.0));
    let sdg = phase_matrix(Complex64::new(0.0, -1.0));

    for col in u.data.chunks_mut(dim) {
        for g in c.gates() {
            let q: Vec<usize> = g.qubits().iter().map(|&q| q as usize).collect();
            match g.kind() {
                GateKind::H => apply_single(col, q[0], h),
                GateKind::T => apply_single(col, q[0], t),
                GateKind::Tdg => apply_single(col, q[0], tdg),
                GateKind::S => apply_single(col, q[0], sg),
                GateKind::Sdg => apply_single(col, q[0], sdg),
                GateKind::X => {
                    let bit = 1 << q[0];
                    for i in 0..dim {
                        if i & bit == 0 {
                            col.swap(i, i | bit);
                        }
                    }
                }
                GateKind::Cnot | GateKind::Toffoli => {
                    let target = 1usize << q[q.len() - 1];
                    let controls: usize = q[..q.len() - 1].iter().map(|&b| 1usize << b).sum();
                    for i in 0..dim {
                        if i & controls == controls && i & target == 0 {
                            col.swap(i, i | target);
                        }
                    }
                }
                GateKind::Swap => {
                    let (a, b) = (1usize << q[0], 1usize << q[1]);
                    for i in 0..dim {
                        if i & a != 0 && i & b == 0 {
                            col.swap(i, (i & !a) | b);
                        }
                    }
                }
            }
        }
        if !c.has_trivial_relabel() {
            let old = col.to_vec();
            for (k, amp) in old.into_iter().enumerate() {
                col[relabel_index(c.relabel(), k)] = amp;
            }
        }
    }
    Ok(u)
}

/// Basis index after readout: bit `i` of the result is bit `relabel[i]` of `k`.
fn relabel_index(relabel: &[u32], k: usize) -> usize {
    relabel
        .iter()
        .enumerate()
        .map(|(i, &p)| ((k >> p) & 1) << i)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{decompose, Gate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_classical(width: usize, len: usize, rng: &mut impl Rng) -> Circuit {
        let mut c = Circuit::new(width);
        for _ in 0..len {
            let mut qs: Vec<u32> = (0..width as u32).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..width);
                qs.swap(i, j);
            }
            let g = match rng.gen_range(0..4) {
                0 => Gate::x(qs[0]),
                1 => Gate::cnot(qs[0], qs[1]),
                2 => Gate::toffoli(qs[0], qs[1], qs[2]),
                _ => Gate::swap(qs[0], qs[1]),
            };
            c.push(g).unwrap();
        }
        let mut perm: Vec<u32> = (0..width as u32).collect();
        for i in (1..width).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        c.set_relabel(perm).unwrap();
        c
    }

    fn index_of(s: &BasisState) -> usize {
        (0..s.len()).map(|i| (s.get(i) as usize) << i).sum()
    }

    fn state_of(width: usize, k: usize) -> BasisState {
        BasisState::from_bits(&(0..width).map(|i| (k >> i) & 1 == 1).collect::<Vec<_>>())
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = BasisState::from_bits(&[true, false, true]);
        assert_eq!(run_basis(&Circuit::new(3), &s).unwrap(), s);
    }

    #[test]
    fn cnot_truth_table() {
        let mut c = Circuit::new(2);
        c.push(Gate::cnot(0, 1)).unwrap();
        let out = run_basis(&c, &BasisState::from_bits(&[true, false])).unwrap();
        assert_eq!(out.bits(), vec![true, true]);
        let out = run_basis(&c, &BasisState::from_bits(&[false, true])).unwrap();
        assert_eq!(out.bits(), vec![false, true]);
    }

    #[test]
    fn rejects_quantum_gates_and_bad_widths() {
        let mut c = Circuit::new(1);
        c.push(Gate::h(0)).unwrap();
        assert_eq!(
            run_basis(&c, &BasisState::zeros(1)),
            Err(SimError::NotClassical(GateKind::H))
        );
        assert_eq!(
            run_basis(&Circuit::new(2), &BasisState::zeros(3)),
            Err(SimError::WidthMismatch { got: 3, width: 2 })
        );
    }

    #[test]
    fn inverse_undoes_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let width = rng.gen_range(3..20);
            let c = random_classical(width, 60, &mut rng);
            let inv = c.inverse();
            let s = BasisState::from_bits(&(0..width).map(|_| rng.gen()).collect::<Vec<_>>());
            let back = run_basis(&inv, &run_basis(&c, &s).unwrap()).unwrap();
            assert_eq!(back, s);
            let both = c.compose(&inv).unwrap();
            assert_eq!(run_basis(&both, &s).unwrap(), s);
        }
    }

    #[test]
    fn lanes_match_single_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_classical(9, 80, &mut rng);
        let mut lanes = LaneState::zeros(9);
        let inputs: Vec<BasisState> = (0..LANES)
            .map(|_| BasisState::from_bits(&(0..9).map(|_| rng.gen()).collect::<Vec<_>>()))
            .collect();
        for (l, s) in inputs.iter().enumerate() {
            for q in 0..9 {
                lanes.words[q] |= (s.get(q) as u64) << l;
            }
        }
        run_lanes(&c, &mut lanes).unwrap();
        for (l, s) in inputs.iter().enumerate() {
            let single = run_basis(&c, s).unwrap();
            for q in 0..9 {
                assert_eq!((lanes.words[q] >> l) & 1 == 1, single.get(q));
            }
        }
    }

    #[test]
    fn small_unitaries() {
        let u = unitary_of(&Circuit::new(1)).unwrap();
        assert!(u.max_abs_diff(&Unitary::identity(1)) < 1e-15);
        let mut c = Circuit::new(1);
        c.push(Gate::h(0)).unwrap();
        let u = unitary_of(&c).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = Unitary::from_column_major(
            2,
            vec![
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
            ],
        );
        assert!(u.max_abs_diff(&expect) < 1e-15);
        assert!(matches!(
            unitary_of(&Circuit::new(13)),
            Err(SimError::TooWide { width: 13, .. })
        ));
    }

    #[test]
    fn decomposed_toffoli_unitary() {
        let mut c = Circuit::new(3);
        c.push(Gate::toffoli(0, 1, 2)).unwrap();
        let u = unitary_of(&decompose(&c)).unwrap();
        let toffoli = Unitary::from_permutation(3, |k| if k & 3 == 3 { k ^ 4 } else { k });
        assert!(u.max_abs_diff(&toffoli) < 1e-12);
        assert!(unitary_of(&c).unwrap().max_abs_diff(&toffoli) < 1e-15);
    }

    #[test]
    fn unitary_agrees_with_basis_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for width in 3..=10 {
            let c = random_classical(width, 40, &mut rng);
            let u = unitary_of(&c).unwrap();
            for k in 0..(1usize << width) {
                let out = index_of(&run_basis(&c, &state_of(width, k)).unwrap());
                let col = u.column(k);
                assert!((col[out].re - 1.0).abs() < 1e-12, "width {width} input {k}");
            }
        }
    }

    #[test]
    fn decompose_preserves_unitary_of_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for width in 3..=6 {
            let c = random_classical(width, 25, &mut rng);
            let d = decompose(&c);
            assert!(d
                .gates()
                .iter()
                .all(|g| g.kind() != GateKind::Toffoli && g.kind() != GateKind::Swap));
            let diff = unitary_of(&d)
                .unwrap()
                .max_abs_diff(&unitary_of(&c).unwrap());
            assert!(diff < 1e-12, "width {width}: {diff}");
        }
    }

    #[test]
    fn register_round_trip() {
        let reg = RegisterRef::new("r", 2, 8);
        let mut s = BasisState::zeros(12);
        s.write_register(&reg, &BinaryPoly::from_u64(0xA5));
        assert_eq!(s.read_register(&reg), BinaryPoly::from_u64(0xA5));
        let mut l = LaneState::zeros(12);
        l.write_register(&reg, 17, &BinaryPoly::from_u64(0x3C));
        assert_eq!(l.read_register(&reg, 17), BinaryPoly::from_u64(0x3C));
        assert_eq!(l.read_register(&reg, 16), BinaryPoly::zero());
        assert_eq!(l.nonzero_lanes(&reg), 1 << 17);
    }
}
