//! Binary polynomials over GF(2) and arithmetic in GF(2^n) = GF(2)[x]/(m(x)).
//!
//! Bit `i` of a [`BinaryPoly`] is the coefficient of `x^i`. Hex literals use
//! the same convention, so the AES modulus `x^8 + x^4 + x^3 + x + 1` is `0x11B`.
//! Everything here is the classical ground truth the circuit builders are
//! checked against.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("operand of degree {degree} is not reduced modulo a degree-{n} field polynomial")]
    OperandDegree { degree: usize, n: usize },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("constant polynomial has no irreducibility status")]
    ConstantPolynomial,
    #[error("field degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("modulus {0} is reducible over GF(2)")]
    Reducible(String),
    #[error("invalid hex literal {0:?}")]
    ParseHex(String),
    #[error("registry line {line}: {msg}")]
    Registry { line: usize, msg: String },
    #[error("unknown field {0:?}")]
    UnknownField(String),
}

/// An element of GF(2)[x], stored as little-endian 64-bit limbs with no
/// trailing zero limb. The zero polynomial has no limbs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPoly {
    limbs: Vec<u64>,
}

impl BinaryPoly {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn x() -> Self {
        Self::from_u64(2)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_bit(k, true);
        p
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_limbs(vec![v])
    }

    pub fn from_limbs(limbs: Vec<u64>) -> Self {
        let mut p = Self { limbs };
        p.normalize();
        p
    }

    /// Builds `Σ x^e` over the given exponents (repeated exponents cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip_bit(e);
        }
        p
    }

    /// Builds a polynomial from coefficient bits, `bits[i]` being the
    /// coefficient of `x^i`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut limbs = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                limbs[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_limbs(limbs)
    }

    /// Uniformly random polynomial of degree `< n` (possibly zero).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut limbs: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
        if !n.is_multiple_of(64) {
            if let Some(top) = limbs.last_mut() {
                *top &= (1u64 << (n % 64)) - 1;
            }
        }
        Self::from_limbs(limbs)
    }

    /// Uniformly random nonzero polynomial of degree `< n`.
    pub fn random_nonzero<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let p = Self::random(n, rng);
            if !p.is_zero() {
                return p;
            }
        }
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|l| (l >> (i % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        if value {
            if self.limbs.len() <= i / 64 {
                self.limbs.resize(i / 64 + 1, 0);
            }
            self.limbs[i / 64] |= 1 << (i % 64);
        } else if i / 64 < self.limbs.len() {
            self.limbs[i / 64] &= !(1 << (i % 64));
            self.normalize();
        }
    }

    pub fn flip_bit(&mut self, i: usize) {
        let v = self.bit(i);
        self.set_bit(i, !v);
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (w, &limb) in self.limbs.iter().enumerate() {
            let mut l = limb;
            while l != 0 {
                out.push(w * 64 + l.trailing_zeros() as usize);
                l &= l - 1;
            }
        }
        out
    }

    /// Coefficient bits `0..len`.
    pub fn to_bits(&self, len: usize) -> Vec<bool> {
        (0..len).map(|i| self.bit(i)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut limbs = long.limbs.clone();
        for (l, s) in limbs.iter_mut().zip(&short.limbs) {
            *l ^= s;
        }
        Self::from_limbs(limbs)
    }

    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if other.is_zero() {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        let need = other.limbs.len() + ws + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        for (i, &l) in other.limbs.iter().enumerate() {
            self.limbs[i + ws] ^= l << bs;
            if bs != 0 {
                self.limbs[i + ws + 1] ^= l >> (64 - bs);
            }
        }
        self.normalize();
    }

    pub fn shl(&self, k: usize) -> Self {
        let mut out = Self::zero();
        out.xor_shifted(self, k);
        out
    }

    /// Carry-less product in GF(2)[x].
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self {
            limbs: vec![0; self.limbs.len() + other.limbs.len() + 1],
        };
        for e in self.exponents() {
            let (ws, bs) = (e / 64, e % 64);
            for (i, &l) in other.limbs.iter().enumerate() {
                acc.limbs[i + ws] ^= l << bs;
                if bs != 0 {
                    acc.limbs[i + ws + 1] ^= l >> (64 - bs);
                }
            }
        }
        acc.normalize();
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut q = Self::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            q.set_bit(rd - dd, true);
            r.xor_shifted(divisor, rd - dd);
        }
        (q, r)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".to_string();
        }
        let mut s = String::from("0x");
        let mut iter = self.limbs.iter().rev();
        if let Some(top) = iter.next() {
            s.push_str(&format!("{top:X}"));
        }
        for l in iter {
            s.push_str(&format!("{l:016X}"));
        }
        s
    }

    pub fn from_hex(text: &str) -> Result<Self, Gf2Error> {
        let t = text.trim();
        let digits = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        if digits.is_empty() {
            return Err(Gf2Error::ParseHex(text.to_string()));
        }
        let mut limbs = vec![0u64; digits.len().div_ceil(16)];
        for (i, c) in digits.chars().rev().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Gf2Error::ParseHex(text.to_string()))? as u64;
            limbs[i / 16] |= d << (4 * (i % 16));
        }
        Ok(Self::from_limbs(limbs))
    }
}

impl fmt::Display for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl FromStr for BinaryPoly {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_hex(s)
    }
}

impl PartialOrd for BinaryPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

/// Decides irreducibility with Ben-Or's test: `m` of degree `n` is
/// irreducible iff `gcd(x^(2^i) - x mod m, m) = 1` for every `1 <= i <= n/2`.
pub fn is_irreducible(m: &BinaryPoly) -> Result<bool, Gf2Error> {
    let n = match m.degree() {
        None | Some(0) => return Err(Gf2Error::ConstantPolynomial),
        Some(d) => d,
    };
    if n == 1 {
        return Ok(true);
    }
    let x = BinaryPoly::x();
    let mut power = x.clone();
    for _ in 0..n / 2 {
        power = power.mul(&power).rem(m);
        let g = power.add(&x).gcd(m);
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The extension degree, modulus and optional curve label of one GF(2^n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    n: usize,
    modulus: BinaryPoly,
    name: Option<String>,
}

impl FieldSpec {
    /// Validates `modulus` (degree at least 2, irreducible) and builds the field.
    pub fn new(modulus: BinaryPoly, name: Option<String>) -> Result<Self, Gf2Error> {
        let n = modulus.degree().ok_or(Gf2Error::ConstantPolynomial)?;
        if n < 2 {
            return Err(Gf2Error::DegreeTooSmall(n));
        }
        if !is_irreducible(&modulus)? {
            return Err(Gf2Error::Reducible(modulus.to_hex()));
        }
        Ok(Self { n, modulus, name })
    }

    /// Field with the lowest-weight irreducible modulus of degree `n`: the
    /// trinomial `x^n + x^k + 1` with smallest `k` if one exists, else the
    /// first irreducible pentanomial in lexicographic order.
    pub fn default_for_degree(n: usize) -> Result<Self, Gf2Error> {
        if n < 2 {
            return Err(Gf2Error::DegreeTooSmall(n));
        }
        for k in 1..n {
            let m = BinaryPoly::from_exponents(&[n, k, 0]);
            if is_irreducible(&m)? {
                return Self::new(m, None);
            }
        }
        for a in 3..n {
            for b in 2..a {
                for c in 1..b {
                    let m = BinaryPoly::from_exponents(&[n, a, b, c, 0]);
                    if is_irreducible(&m)? {
                        return Self::new(m, None);
                    }
                }
            }
        }
        unreachable!("every degree >= 2 has an irreducible trinomial or pentanomial below 10000")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &BinaryPoly {
        &self.modulus
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Human-readable label: the registry name if present, otherwise `GF(2^n)`.
    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("GF(2^{})", self.n))
    }

    /// Exponents `k` with `0 < k < n` where `m(x)` has a nonzero coefficient.
    /// These are the positions the top coefficient feeds when reducing `x^n`.
    pub fn reduction_taps(&self) -> Vec<usize> {
        self.modulus
            .exponents()
            .into_iter()
            .filter(|&k| k > 0 && k < self.n)
            .collect()
    }

    fn check_reduced(&self, a: &BinaryPoly) -> Result<(), Gf2Error> {
        match a.degree() {
            Some(d) if d >= self.n => Err(Gf2Error::OperandDegree {
                degree: d,
                n: self.n,
            }),
            _ => Ok(()),
        }
    }

    pub fn reduce(&self, a: &BinaryPoly) -> BinaryPoly {
        a.rem(&self.modulus)
    }

    /// `a · b mod m(x)`.
    pub fn mul(&self, a: &BinaryPoly, b: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.check_reduced(a)?;
        self.check_reduced(b)?;
        Ok(self.reduce(&a.mul(b)))
    }

    /// `a^2 mod m(x)`.
    pub fn square(&self, a: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.mul(a, a)
    }

    /// `a · x mod m(x)` (the classical "xtime").
    pub fn mul_x(&self, a: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.check_reduced(a)?;
        Ok(self.reduce(&a.shl(1)))
    }

    /// Inverse via the extended Euclidean algorithm over GF(2)[x].
    pub fn inv_eea(&self, a: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.check_reduced(a)?;
        if a.is_zero() {
            return Err(Gf2Error::ZeroInverse);
        }
        // invariant: s_i · a ≡ r_i (mod m)
        let (mut r0, mut r1) = (self.modulus.clone(), a.clone());
        let (mut s0, mut s1) = (BinaryPoly::zero(), BinaryPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.add(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        debug_assert!(r0.is_one(), "gcd with an irreducible modulus must be 1");
        Ok(self.reduce(&s0))
    }

    /// Inverse as `a^(2^n - 2) = a^2 · a^4 · … · a^(2^(n-1))`, accumulated by
    /// repeated squaring and multiplication.
    pub fn inv_flt_classical(&self, a: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.check_reduced(a)?;
        if a.is_zero() {
            return Err(Gf2Error::ZeroInverse);
        }
        let mut power = a.clone();
        let mut acc = BinaryPoly::one();
        for _ in 1..self.n {
            power = self.square(&power)?;
            acc = self.mul(&acc, &power)?;
        }
        Ok(acc)
    }

    /// Itoh-Tsujii exponentiation: `a^(2^n - 2)` with `floor(log2(n-1)) +
    /// popcount(n-1) - 1` multiplications. Mirrors the quantum schedule and is
    /// used to cross-check it at the value level.
    pub fn inv_itoh_tsujii(&self, a: &BinaryPoly) -> Result<BinaryPoly, Gf2Error> {
        self.check_reduced(a)?;
        if a.is_zero() {
            return Err(Gf2Error::ZeroInverse);
        }
        let e = self.n - 1;
        let k1 = usize::BITS as usize - 1 - e.leading_zeros() as usize;
        let square_times = |v: &BinaryPoly, times: usize| -> Result<BinaryPoly, Gf2Error> {
            let mut v = v.clone();
            for _ in 0..times {
                v = self.square(&v)?;
            }
            Ok(v)
        };
        // powers[j] = a^(2^(2^j) - 1)
        let mut powers = vec![a.clone()];
        for j in 1..=k1 {
            let prev = &powers[j - 1];
            let next = self.mul(prev, &square_times(prev, 1 << (j - 1))?)?;
            powers.push(next);
        }
        let mut acc = powers[k1].clone();
        for j in (0..k1).rev().filter(|j| (e >> j) & 1 == 1) {
            acc = self.mul(&square_times(&acc, 1 << j)?, &powers[j])?;
        }
        self.square(&acc)
    }
}

/// A set of named fields, loaded from `name,n,hex-modulus` lines.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    fields: Vec<FieldSpec>,
}

const BUNDLED_CURVES: &str = include_str!("../data/curves.txt");

impl Registry {
    /// The bundled registry: degrees 8, 16, 127 and the NIST B-163 … B-571 moduli.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CURVES).expect("bundled curve registry is valid")
    }

    /// Parses registry text. Blank lines and `#` comments are skipped; every
    /// modulus must have the declared degree and be irreducible.
    pub fn parse(text: &str) -> Result<Self, Gf2Error> {
        let mut fields = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Gf2Error::Registry { line: idx + 1, msg };
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            let [name, n, hex] = parts[..] else {
                return Err(err(format!("expected name,n,hex-modulus, got {line:?}")));
            };
            let n: usize = n.parse().map_err(|_| err(format!("bad degree {n:?}")))?;
            let modulus = BinaryPoly::from_hex(hex).map_err(|e| err(e.to_string()))?;
            if modulus.degree() != Some(n) {
                return Err(err(format!(
                    "modulus {hex} has degree {:?}, expected {n}",
                    modulus.degree()
                )));
            }
            let field =
                FieldSpec::new(modulus, Some(name.to_string())).map_err(|e| err(e.to_string()))?;
            fields.push(field);
        }
        Ok(Self { fields })
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }

    /// Resolves a field by registry name (case-insensitive) or by degree.
    /// Degrees not in the registry fall back to [`FieldSpec::default_for_degree`].
    pub fn resolve(&self, key: &str) -> Result<FieldSpec, Gf2Error> {
        let key = key.trim();
        if let Some(f) = self
            .fields
            .iter()
            .find(|f| f.name().is_some_and(|n| n.eq_ignore_ascii_case(key)))
        {
            return Ok(f.clone());
        }
        let n: usize = key
            .parse()
            .map_err(|_| Gf2Error::UnknownField(key.to_string()))?;
        match self.fields.iter().find(|f| f.n() == n) {
            Some(f) => Ok(f.clone()),
            None => FieldSpec::default_for_degree(n),
        }
    }
}
