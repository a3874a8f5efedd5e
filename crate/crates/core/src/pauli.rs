//! Phase-free Pauli operators as pairs of GF(2) vectors.
//!
//! An N-qubit Pauli up to phase is the 2N-bit string (x, z): site j
//! carries σ^x when only `x[j]` is set, σ^z when only `z[j]` is set and
//! σ^y when both are. Composition is XOR and commutation is the
//! symplectic form `x_p·z_q + z_p·x_q mod 2`.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Single-site Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const ALL: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];
    pub const NONTRIVIAL: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliKind::I),
            'X' => Some(PauliKind::X),
            'Y' => Some(PauliKind::Y),
            'Z' => Some(PauliKind::Z),
            _ => None,
        }
    }

    /// Product of two Hermitian single-site Paulis as `i^phase · result`.
    pub fn mul(self, rhs: PauliKind) -> (u8, PauliKind) {
        use PauliKind::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// An N-qubit Pauli operator modulo phase.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    x: Bits,
    z: Bits,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: Bits::zeros(n),
            z: Bits::zeros(n),
        }
    }

    pub fn from_bits(x: Bits, z: Bits) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts must have equal length");
        PauliOperator { x, z }
    }

    pub fn single(n: usize, site: usize, kind: PauliKind) -> Self {
        let mut p = PauliOperator::identity(n);
        p.set(site, kind);
        p
    }

    /// Decodes an index in `[0, 4^n)`: low n bits are the x part, the
    /// next n bits the z part. Requires `n <= 32`.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 32);
        let m = if n == 0 { 0 } else { (1u64 << n) - 1 };
        PauliOperator {
            x: Bits::from_u64(index & m, n),
            z: Bits::from_u64((index >> n) & m, n),
        }
    }

    pub fn index(&self) -> u64 {
        assert!(self.n_qubits() <= 32);
        self.x.to_u64() | (self.z.to_u64() << self.n_qubits())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    pub fn kind(&self, site: usize) -> PauliKind {
        PauliKind::from_bits(self.x.get(site), self.z.get(site))
    }

    pub fn set(&mut self, site: usize, kind: PauliKind) {
        let (x, z) = kind.bits();
        self.x.set(site, x);
        self.z.set(site, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        (0..self.n_qubits())
            .filter(|&j| self.x.get(j) || self.z.get(j))
            .count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|&j| self.x.get(j) || self.z.get(j))
            .collect()
    }

    /// Product modulo phase.
    pub fn compose(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    pub fn compose_assign(&mut self, other: &PauliOperator) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Symplectic bit; panics on mismatched qubit counts (use
    /// [`commutes`] for a checked version).
    #[inline]
    pub fn anticommutes_with(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Sign θ with `self·other = θ·other·self`.
    pub fn commutation_sign(&self, other: &PauliOperator) -> f64 {
        if self.anticommutes_with(other) {
            -1.0
        } else {
            1.0
        }
    }
}

/// Returns the symplectic bit: `false` when `p` and `q` commute.
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    if p.n_qubits() != q.n_qubits() {
        return Err(Error::Dimension {
            expected: p.n_qubits(),
            found: q.n_qubits(),
        });
    }
    Ok(p.anticommutes_with(q))
}

/// Phase of the ordered product of Hermitian Pauli strings, as a power
/// of `i`, together with the resulting string.
pub fn product_with_phase<'a>(
    n: usize,
    factors: impl IntoIterator<Item = &'a PauliOperator>,
) -> (u8, PauliOperator) {
    let mut phase = 0u8;
    let mut acc = PauliOperator::identity(n);
    for f in factors {
        for site in 0..n {
            let (ph, k) = acc.kind(site).mul(f.kind(site));
            phase = (phase + ph) % 4;
            acc.set(site, k);
        }
    }
    (phase, acc)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n_qubits() {
            write!(f, "{}", self.kind(j).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut p = PauliOperator::identity(n);
        for (j, c) in s.chars().enumerate() {
            let kind = PauliKind::from_char(c).ok_or_else(|| {
                Error::parse(1, j + 1, format!("invalid Pauli character '{c}'"))
            })?;
            p.set(j, kind);
        }
        Ok(p)
    }
}

/// Commutation fingerprint of a Pauli against a generator list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    bits: Bits,
}

impl Syndrome {
    pub fn zero(m: usize) -> Self {
        Syndrome {
            bits: Bits::zeros(m),
        }
    }

    pub fn from_bits(bits: Bits) -> Self {
        Syndrome { bits }
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits.get(k)
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            bits: self.bits.xor(&other.bits),
        }
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({})", self.bits)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_and_z_anticommute() {
        assert!(commutes(&p("X"), &p("Z")).unwrap());
        assert!(!commutes(&p("XX"), &p("ZZ")).unwrap());
        assert!(commutes(&p("XI"), &p("ZZ")).unwrap());
        assert!(!commutes(&p("XY"), &p("ZZ")).unwrap());
    }

    #[test]
    fn identity_commutes_with_everything() {
        let id = PauliOperator::identity(3);
        for i in 0..64 {
            assert!(!commutes(&id, &PauliOperator::from_index(3, i)).unwrap());
        }
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        assert_eq!(
            commutes(&p("X"), &p("XX")),
            Err(Error::Dimension {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn self_composition_is_identity() {
        for i in 0..256 {
            let q = PauliOperator::from_index(4, i);
            assert!(q.compose(&q).is_identity());
        }
    }

    #[test]
    fn index_round_trip() {
        for i in 0..(1 << 10) {
            assert_eq!(PauliOperator::from_index(5, i).index(), i);
        }
    }

    #[test]
    fn phase_tracking_finds_minus_identity() {
        // XX·YY·ZZ = -I
        let (phase, prod) = product_with_phase(2, [&p("XX"), &p("YY"), &p("ZZ")]);
        assert!(prod.is_identity());
        assert_eq!(phase, 2);
        let (phase, prod) = product_with_phase(2, [&p("ZZ"), &p("ZZ")]);
        assert!(prod.is_identity());
        assert_eq!(phase, 0);
    }

    #[test]
    fn bad_character_reports_column() {
        let err = "XQZ".parse::<PauliOperator>().unwrap_err();
        assert!(matches!(err, Error::Parse { column: 2, .. }));
    }
}
