//! Bit-packed vectors and matrices over GF(2).
//!
//! Bits are stored little-endian within `u64` words: bit `i` of a vector
//! lives in word `i / 64` at bit position `i % 64`. Storage indices are
//! 0-based; code position `i` (1-based, as used by the decoders) is stored at
//! index `i - 1`.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A packed vector over GF(2).
///
/// Bits beyond `len` are always zero in storage, so equality, hashing and
/// weight can work word-wise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector of length `len` with only storage index `index` set.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Builds a vector from packed words; bits past `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        if len % WORD_BITS != 0 {
            *words.last_mut().unwrap() &= low_mask(len % WORD_BITS);
        }
        BitVector { len, words }
    }

    /// Builds a vector from the low `len` bits of `word` (`len <= 64`).
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_word supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word & low_mask(len);
        }
        v
    }

    /// Parses a string of `'0'`/`'1'` characters, first character at index 0.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Self::from_bools)
    }

    /// Parses a hex string holding `len` bits, most-significant nibble first.
    ///
    /// Position 0 of the vector is the most significant of the `len` value
    /// bits; the string may be left-padded to whole nibbles.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        let nibbles = s
            .chars()
            .map(|ch| {
                ch.to_digit(16)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        let total = nibbles.len() * 4;
        if total < len || total >= len + 4 {
            return Err(Error::Parse(format!(
                "hex string of {} digits cannot hold exactly {len} bits",
                nibbles.len()
            )));
        }
        let pad = total - len;
        let mut v = Self::zeros(len);
        for (pos, nib) in nibbles.iter().enumerate() {
            for b in 0..4 {
                let bit = (nib >> (3 - b)) & 1 == 1;
                let flat = pos * 4 + b;
                if flat < pad {
                    if bit {
                        return Err(Error::Parse(format!(
                            "hex value exceeds {len} bits"
                        )));
                    }
                } else {
                    v.set(flat - pad, bit);
                }
            }
        }
        Ok(v)
    }

    /// Hex rendering matching [`BitVector::from_hex`].
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let pad = digits * 4 - self.len;
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u32;
            for b in 0..4 {
                let flat = d * 4 + b;
                let bit = flat >= pad && self.get(flat - pad);
                nib = (nib << 1) | bit as u32;
            }
            out.push(char::from_digit(nib, 16).unwrap());
        }
        out
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
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND of `self` and `other`.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn xor_assign_checked(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        *self ^= other;
        Ok(())
    }

    /// Storage indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> BitVector {
        assert!(len <= self.len, "prefix longer than vector");
        BitVector::from_words(self.words[..words_for(len)].to_vec(), len)
    }

    /// The low word, for vectors of at most 64 bits.
    #[inline]
    pub fn as_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Parses rows of `'0'`/`'1'` strings of equal length.
    pub fn from_bit_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| BitVector::from_bit_str(s))
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools(self.rows.iter().map(|row| row.get(c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · vᵀ`: bit `j` of the result is the parity of row `j` AND `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_bools(self.rows.iter().map(|row| row.dot(v))))
    }

    /// `v · M`: XOR of the rows selected by the set bits of `v`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in v.ones() {
            out ^= &self.rows[r];
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| other.vec_mul(row))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(other.cols, rows)
    }

    /// Rank over GF(2). The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        self.clone().reduce().pivots.len()
    }

    /// A right inverse `R` (`cols × rows`) with `self · R = I`.
    ///
    /// Requires full row rank. The rows of `R` are the inverse of the
    /// submatrix on the pivot columns of the reduced row-echelon form; all
    /// other rows of `R` are zero. For a systematic `[I | P]` this yields
    /// `[I ; 0]`.
    pub fn right_inverse(&self) -> Result<BitMatrix> {
        let k = self.rows.len();
        let reduced = self.clone().reduce();
        if reduced.pivots.len() != k {
            return Err(Error::RankDeficient {
                expected: k,
                rank: reduced.pivots.len(),
            });
        }
        // Square k×k submatrix on the pivot columns, augmented with I_k.
        let mut aug: Vec<BitVector> = (0..k)
            .map(|r| {
                BitVector::from_bools(
                    reduced
                        .pivots
                        .iter()
                        .map(|&c| self.get(r, c))
                        .chain((0..k).map(|j| j == r)),
                )
            })
            .collect();
        for col in 0..k {
            let pivot = (col..k)
                .find(|&r| aug[r].get(col))
                .expect("pivot submatrix is invertible");
            aug.swap(col, pivot);
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
        }
        // aug = [I | S⁻¹]; R[pivot_c] = row c of S⁻¹ transposed.
        let mut inv = BitMatrix::zeros(self.cols, k);
        for (i, &pc) in reduced.pivots.iter().enumerate() {
            for j in 0..k {
                // (S⁻¹)[i][j] sits in row i of the augmented half.
                if aug[i].get(k + j) {
                    inv.set(pc, j, true);
                }
            }
        }
        Ok(inv)
    }

    /// Reduced row-echelon form with its pivot columns.
    pub(crate) fn reduce(mut self) -> Reduced {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == self.rows.len() {
                break;
            }
            let Some(p) = (next..self.rows.len()).find(|&r| self.rows[r].get(col)) else {
                continue;
            };
            self.rows.swap(next, p);
            let pivot_row = self.rows[next].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            next += 1;
        }
        Reduced {
            matrix: self,
            pivots,
        }
    }
}

pub(crate) struct Reduced {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn random_vec(rng: &mut impl Rng, len: usize) -> BitVector {
        BitVector::from_bools((0..len).map(|_| rng.gen::<bool>()))
    }

    fn random_mat(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        BitMatrix::from_rows(cols, (0..rows).map(|_| random_vec(rng, cols)).collect()).unwrap()
    }

    fn naive_mul_vec(m: &BitMatrix, v: &BitVector) -> BitVector {
        let mut out = vec![false; m.rows()];
        for (r, bit) in out.iter_mut().enumerate() {
            for c in 0..m.cols() {
                *bit ^= m.get(r, c) & v.get(c);
            }
        }
        BitVector::from_bools(out)
    }

    fn hamming74_h() -> BitMatrix {
        // Column i (1-based) is the binary expansion of i.
        let mut h = BitMatrix::zeros(3, 7);
        for i in 1..=7usize {
            for j in 0..3 {
                h.set(j, i - 1, (i >> j) & 1 == 1);
            }
        }
        h
    }

    #[test]
    fn identity_times_vector() {
        let v = BitVector::from_bit_str("1011").unwrap();
        assert_eq!(BitMatrix::identity(4).mul_vec(&v).unwrap(), v);
    }

    #[test]
    fn matrix_times_zero_is_zero() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        let m = random_mat(&mut rng, 13, 77);
        assert!(m.mul_vec(&BitVector::zeros(77)).unwrap().is_zero());
    }

    #[test]
    fn hamming_parity_check_kills_all_codewords() {
        let h = hamming74_h();
        // Every vector c with H·cᵀ = 0, found by enumerating all 2^7 words,
        // must number exactly 2^4, and the space must be closed under xor.
        let codewords: Vec<BitVector> = (0u64..128)
            .map(|w| BitVector::from_word(w, 7))
            .filter(|c| h.mul_vec(c).unwrap().is_zero())
            .collect();
        assert_eq!(codewords.len(), 16);
        for a in &codewords {
            for b in &codewords {
                assert!(h.mul_vec(&(a ^ b)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let m = BitMatrix::identity(4);
        assert!(matches!(
            m.mul_vec(&BitVector::zeros(5)),
            Err(Error::DimensionMismatch { expected: 4, found: 5 })
        ));
        assert!(BitMatrix::from_rows(3, vec![BitVector::zeros(4)]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(5, 9).rank(), 0);
        assert_eq!(BitMatrix::identity(8).rank(), 8);
        assert_eq!(hamming74_h().rank(), 3);
        let dup = BitMatrix::from_bit_strs(&["1100", "0110", "1010"]).unwrap();
        assert_eq!(dup.rank(), 2);
    }

    #[test]
    fn rank_does_not_mutate() {
        let h = hamming74_h();
        let before = h.clone();
        let _ = h.rank();
        assert_eq!(h, before);
    }

    #[test]
    fn right_inverse_of_identity() {
        let r = BitMatrix::identity(6).right_inverse().unwrap();
        assert_eq!(r, BitMatrix::identity(6));
    }

    #[test]
    fn right_inverse_of_systematic_extracts_message() {
        let g = BitMatrix::from_bit_strs(&["1000110", "0100011", "0010111", "0001101"]).unwrap();
        let r = g.right_inverse().unwrap();
        let mut expected = BitMatrix::zeros(7, 4);
        for i in 0..4 {
            expected.set(i, i, true);
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn right_inverse_of_random_full_rank() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        let mut found = 0;
        while found < 50 {
            let g = random_mat(&mut rng, 4, 7);
            if g.rank() < 4 {
                assert!(matches!(g.right_inverse(), Err(Error::RankDeficient { expected: 4, .. })));
                continue;
            }
            let r = g.right_inverse().unwrap();
            assert_eq!((r.rows(), r.cols()), (7, 4));
            assert_eq!(g.mul(&r).unwrap(), BitMatrix::identity(4));
            found += 1;
        }
    }

    #[test]
    fn right_inverse_rejects_rank_deficient() {
        let g = BitMatrix::from_bit_strs(&["1100", "1100"]).unwrap();
        assert!(matches!(
            g.right_inverse(),
            Err(Error::RankDeficient { expected: 2, rank: 1 })
        ));
    }

    #[test]
    fn mul_vec_matches_naive_up_to_1024() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        for &(rows, cols) in &[(1, 1), (3, 7), (32, 128), (64, 65), (40, 1024), (70, 513)] {
            let m = random_mat(&mut rng, rows, cols);
            for _ in 0..8 {
                let v = random_vec(&mut rng, cols);
                assert_eq!(m.mul_vec(&v).unwrap(), naive_mul_vec(&m, &v));
            }
        }
    }

    #[test]
    fn transpose_twice_is_identity_map() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        let m = random_mat(&mut rng, 17, 130);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().get(129, 3), m.get(3, 129));
    }

    #[test]
    fn hex_round_trip_and_padding() {
        let v = BitVector::from_hex("5", 3).unwrap();
        assert_eq!(v.to_string(), "101");
        assert_eq!(v.to_hex(), "5");
        assert!(BitVector::from_hex("8", 3).is_err());
        assert!(BitVector::from_hex("05", 3).is_err());
        let w = BitVector::from_hex("0x1f", 7).unwrap();
        assert_eq!(w.to_string(), "0011111");
    }

    #[test]
    fn ones_lists_set_positions() {
        let mut v = BitVector::zeros(200);
        for i in [0, 63, 64, 130, 199] {
            v.set(i, true);
        }
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.weight(), 5);
    }
}
