//! Fixed-length bit vectors over GF(2).

use std::fmt;

const WORD: usize = 64;

/// A fixed-length GF(2) vector packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-wise
/// equality, hashing and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    /// Low `len` bits of `value`; `len` must not exceed 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut b = Bits::zeros(len);
        if len > 0 {
            b.words[0] = value & mask(len);
        }
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::zeros(len);
        for i in indices {
            b.set(i, true);
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let w = &mut self.words[i / WORD];
        if value {
            *w |= 1 << (i % WORD);
        } else {
            *w &= !(1 << (i % WORD));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// Parity of the bitwise AND.
    pub fn dot(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn not(&self) -> Bits {
        let mut out = Bits {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.clear_tail();
        out
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    /// Low word as an integer; only meaningful when `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= mask(rem);
            }
        }
    }
}

#[inline]
fn mask(len: usize) -> u64 {
    if len >= WORD {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Row-reduced basis of a GF(2) subspace.
///
/// Rows are kept in reduced echelon form: each row has a pivot column
/// that is zero in every other row, so the coordinates of a vector in the
/// span are just its bits at the pivot columns.
#[derive(Debug, Clone)]
pub struct Gf2Basis {
    rows: Vec<Bits>,
    pivots: Vec<usize>,
    width: usize,
}

impl Gf2Basis {
    pub fn new(width: usize) -> Self {
        Gf2Basis {
            rows: Vec::new(),
            pivots: Vec::new(),
            width,
        }
    }

    pub fn from_vectors<'a>(width: usize, vectors: impl IntoIterator<Item = &'a Bits>) -> Self {
        let mut basis = Gf2Basis::new(width);
        for v in vectors {
            basis.insert(v.clone());
        }
        basis
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, mut v: Bits) -> bool {
        debug_assert_eq!(v.len(), self.width);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        let Some(pivot) = v.ones().next() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        // Keep rows sorted by pivot so coordinates are stable.
        let at = self.pivots.partition_point(|&q| q < pivot);
        self.rows.insert(at, v);
        self.pivots.insert(at, pivot);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` with respect to the rows, or `None` when `v` is
    /// outside the span.
    pub fn coordinates(&self, v: &Bits) -> Option<u64> {
        assert!(self.rank() <= 64, "coordinates need rank <= 64");
        let mut c = 0u64;
        let mut rebuilt = Bits::zeros(self.width);
        for (i, (&p, row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            if v.get(p) {
                c |= 1 << i;
                rebuilt.xor_assign(row);
            }
        }
        (&rebuilt == v).then_some(c)
    }

    /// The span element with the given coordinates.
    pub fn combine(&self, coords: u64) -> Bits {
        let mut out = Bits::zeros(self.width);
        for (i, row) in self.rows.iter().enumerate() {
            if (coords >> i) & 1 == 1 {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &Bits) -> bool {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let b = Bits::zeros(70).not();
        assert_eq!(b.count_ones(), 70);
        assert_eq!(b.words()[1], (1 << 6) - 1);
    }

    #[test]
    fn ones_iterates_in_order() {
        let b = Bits::from_indices(130, [0, 5, 64, 129]);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
    }

    #[test]
    fn basis_coordinates_round_trip() {
        let vs = [
            Bits::from_indices(6, [0, 1]),
            Bits::from_indices(6, [1, 2]),
            Bits::from_indices(6, [0, 2]),
            Bits::from_indices(6, [4]),
        ];
        let basis = Gf2Basis::from_vectors(6, vs.iter());
        assert_eq!(basis.rank(), 3);
        for c in 0..8 {
            let v = basis.combine(c);
            assert_eq!(basis.coordinates(&v), Some(c));
        }
        assert_eq!(basis.coordinates(&Bits::from_indices(6, [5])), None);
    }
}
