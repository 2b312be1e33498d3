//! CNOT synthesis for invertible linear maps over GF(2).
//!
//! A CNOT with control `c` and target `t` maps a basis state `v` to `E·v`
//! where `E` adds row `c` into row `t`. Gaussian elimination finds row
//! additions `E_1 … E_m` with `E_m ⋯ E_1 · M = P` for a permutation `P`, so
//! `M = E_1 ⋯ E_m · P`: the permutation becomes a free relabeling and each
//! row addition becomes one CNOT.

use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::gf2x::{BinaryPoly, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Square bit matrix, row-major, each row packed into 64-bit words.
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GF2Matrix({}x{})", self.n, self.n)?;
        for r in 0..self.n {
            let row: String = (0..self.n)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl GF2Matrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, SynthError> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SynthError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let mut m = Self::zeros(n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, rng.gen());
                }
            }
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    /// row[target] ^= row[source]
    fn add_row(&mut self, source: usize, target: usize) {
        for w in 0..self.words {
            let s = self.bits[source * self.words + w];
            self.bits[target * self.words + w] ^= s;
        }
    }

    /// `M · v` over GF(2), with `v` and the result as bit vectors of length n.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| (0..self.n).filter(|&c| self.get(r, c) && v[c]).count() % 2 == 1)
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| m.get(r, col)) else {
                continue;
            };
            if p != rank {
                for w in 0..self.words {
                    m.bits.swap(p * self.words + w, rank * self.words + w);
                }
            }
            for r in 0..self.n {
                if r != rank && m.get(r, col) {
                    m.add_row(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|r| self.row(r).iter().map(|w| w.count_ones()).sum::<u32>() == 1)
            && (0..self.n).all(|c| (0..self.n).filter(|&r| self.get(r, c)).count() == 1)
    }
}

/// Matrix of the Frobenius map `a ↦ a^2` in the polynomial basis: column `j`
/// holds the coefficients of `x^(2j) mod m(x)`.
pub fn squaring_matrix(field: &FieldSpec) -> GF2Matrix {
    let n = field.n();
    let mut m = GF2Matrix::zeros(n);
    for j in 0..n {
        let col = field.reduce(&BinaryPoly::monomial(2 * j));
        for r in col.exponents() {
            m.set(r, j, true);
        }
    }
    m
}

/// Result of [`synth_cnot_network`]: CNOTs `(control, target)` in circuit
/// order, then the readout relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnotNetwork {
    pub cnots: Vec<(u32, u32)>,
    pub relabel: Vec<u32>,
}

impl CnotNetwork {
    /// SWAPs that realize the relabeling as gates, so the network can be
    /// spliced into a larger gate sequence on a register.
    pub fn relabel_swaps(&self) -> Vec<(u32, u32)> {
        // holder[p] = logical wire currently stored at position p
        let n = self.relabel.len();
        let mut holder: Vec<u32> = vec![0; n];
        for (wire, &phys) in self.relabel.iter().enumerate() {
            holder[phys as usize] = wire as u32;
        }
        let mut at: Vec<u32> = self.relabel.clone();
        let mut swaps = Vec::new();
        for wire in 0..n {
            let p = at[wire] as usize;
            if p != wire {
                swaps.push((wire as u32, p as u32));
                let other = holder[wire];
                holder.swap(wire, p);
                at[other as usize] = p as u32;
                at[wire] = wire as u32;
            }
        }
        swaps
    }
}

/// Elimination: forward pass to (permuted) upper-triangular form, then back
/// substitution. Pivots are the first unused row with a one in the column;
/// rows are never physically swapped.
#[allow(clippy::needless_range_loop)]
pub fn synth_cnot_network(mat: &GF2Matrix) -> Result<CnotNetwork, SynthError> {
    let n = mat.n();
    let mut a = mat.clone();
    let mut pivot_row = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut ops: Vec<(usize, usize)> = Vec::new();

    for col in 0..n {
        let p = (0..n)
            .find(|&r| !used[r] && a.get(r, col))
            .ok_or(SynthError::Singular)?;
        used[p] = true;
        pivot_row[col] = p;
        for r in 0..n {
            if !used[r] && a.get(r, col) {
                a.add_row(p, r);
                ops.push((p, r));
            }
        }
    }
    for col in (0..n).rev() {
        let p = pivot_row[col];
        for &r in &pivot_row[..col] {
            if a.get(r, col) {
                a.add_row(p, r);
                ops.push((p, r));
            }
        }
    }
    debug_assert!(a.is_permutation());

    // a = P with P[pivot_row[c]][c] = 1, so (P·v)[pivot_row[c]] = v[c]: wire
    // i of P·v sits on physical qubit sigma[i]
    let mut sigma = vec![0u32; n];
    for (c, &r) in pivot_row.iter().enumerate() {
        sigma[r] = c as u32;
    }
    let cnots = ops
        .iter()
        .rev()
        .map(|&(source, target)| (sigma[source], sigma[target]))
        .collect();
    Ok(CnotNetwork {
        cnots,
        relabel: sigma,
    })
}

/// An n-qubit CNOT circuit (plus relabeling) mapping basis state `v` to `mat·v`.
pub fn synth_cnot(mat: &GF2Matrix) -> Result<Circuit, SynthError> {
    let net = synth_cnot_network(mat)?;
    let mut c = Circuit::new(mat.n());
    for &(ctl, tgt) in &net.cnots {
        c.push(Gate::cnot(ctl, tgt)).expect("indices below n");
    }
    c.set_relabel(net.relabel).expect("sigma is a permutation");
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revsim::{run_basis, BasisState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn apply(c: &Circuit, v: &[bool]) -> Vec<bool> {
        run_basis(c, &BasisState::from_bits(v)).unwrap().bits()
    }

    fn field(hex: &str) -> FieldSpec {
        FieldSpec::new(BinaryPoly::from_hex(hex).unwrap(), None).unwrap()
    }

    #[test]
    fn squaring_matrix_gf4() {
        let m = squaring_matrix(&field("0x7"));
        let expect = GF2Matrix::from_rows(&[vec![true, true], vec![false, true]]).unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn squaring_matrix_gf8() {
        // columns: 1, x^2, x^4 = x^2 + x
        let m = squaring_matrix(&field("0xB"));
        let expect = GF2Matrix::from_rows(&[
            vec![true, false, false],
            vec![false, false, true],
            vec![false, true, true],
        ])
        .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn squaring_matrix_column_zero_is_unit() {
        for f in crate::gf2x::Registry::bundled().fields() {
            let m = squaring_matrix(f);
            assert!(m.get(0, 0));
            assert!((1..f.n()).all(|r| !m.get(r, 0)));
            assert_eq!(m.rank(), f.n());
        }
    }

    #[test]
    fn identity_gives_empty_circuit() {
        let c = synth_cnot(&GF2Matrix::identity(5)).unwrap();
        assert!(c.is_empty());
        assert!(c.has_trivial_relabel());
    }

    #[test]
    fn upper_two_by_two_is_one_cnot() {
        let m = GF2Matrix::from_rows(&[vec![true, true], vec![false, true]]).unwrap();
        let c = synth_cnot(&m).unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(1, 0)]);
        for v in 0..4u32 {
            let bits = [v & 1 == 1, v & 2 == 2];
            assert_eq!(apply(&c, &bits), m.mul_vec(&bits));
        }
    }

    #[test]
    fn permutation_matrix_costs_no_gates() {
        let m = GF2Matrix::from_rows(&[
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ])
        .unwrap();
        let net = synth_cnot_network(&m).unwrap();
        assert!(net.cnots.is_empty());
        let c = synth_cnot(&m).unwrap();
        for v in 0..8u32 {
            let bits: Vec<bool> = (0..3).map(|i| (v >> i) & 1 == 1).collect();
            assert_eq!(apply(&c, &bits), m.mul_vec(&bits));
        }
    }

    #[test]
    fn singular_is_rejected() {
        let m = GF2Matrix::from_rows(&[vec![true, true], vec![true, true]]).unwrap();
        assert_eq!(synth_cnot(&m), Err(SynthError::Singular));
        assert_eq!(
            GF2Matrix::from_rows(&[vec![true], vec![true, false]]),
            Err(SynthError::NotSquare { rows: 2, cols: 1 })
        );
    }

    #[test]
    fn random_8x8_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = GF2Matrix::random_invertible(8, &mut rng);
        let c = synth_cnot(&m).unwrap();
        for _ in 0..20 {
            let v: Vec<bool> = (0..8).map(|_| rng.gen()).collect();
            assert_eq!(apply(&c, &v), m.mul_vec(&v));
        }
    }

    #[test]
    fn relabel_swaps_realize_the_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..12 {
            let m = GF2Matrix::random_invertible(n, &mut rng);
            let net = synth_cnot_network(&m).unwrap();
            let mut c = Circuit::new(n);
            for &(a, b) in &net.cnots {
                c.push(Gate::cnot(a, b)).unwrap();
            }
            for (a, b) in net.relabel_swaps() {
                c.push(Gate::swap(a, b)).unwrap();
            }
            assert!(net.relabel_swaps().len() < n);
            for _ in 0..10 {
                let v: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
                assert_eq!(apply(&c, &v), m.mul_vec(&v));
            }
        }
    }
}
