//! Syndrome representations shared by the decoders.
//!
//! Codes with at most 64 parity bits use a single `u64` per syndrome so
//! a membership query is one XOR and one compare. Wider codes fall back to
//! [`BitVector`].

use crate::code::LinearCode;
use crate::gf2::BitVector;

pub trait Syndrome: Clone + Send + Sync {
    /// Column syndromes of `code` in this representation, if supported.
    fn columns(code: &LinearCode) -> Option<&[Self]>;

    /// `H·rᵀ`; `r` must already have length `n`.
    fn of(code: &LinearCode, r: &BitVector) -> Self;

    fn xor(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool;

    fn to_bitvector(&self, width: usize) -> BitVector;
}

impl Syndrome for u64 {
    fn columns(code: &LinearCode) -> Option<&[Self]> {
        code.col_words()
    }

    fn of(code: &LinearCode, r: &BitVector) -> Self {
        code.syndrome_word(r).expect("single-word syndromes")
    }

    #[inline(always)]
    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }

    #[inline(always)]
    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn to_bitvector(&self, width: usize) -> BitVector {
        BitVector::from_word(*self, width)
    }
}

impl Syndrome for BitVector {
    fn columns(code: &LinearCode) -> Option<&[Self]> {
        Some(code.col_syndromes())
    }

    fn of(code: &LinearCode, r: &BitVector) -> Self {
        code.syndrome(r).expect("length checked by caller")
    }

    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }

    fn is_zero(&self) -> bool {
        BitVector::is_zero(self)
    }

    fn to_bitvector(&self, _width: usize) -> BitVector {
        self.clone()
    }
}
