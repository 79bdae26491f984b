//! Serial GRANDAB: test error patterns in increasing Hamming weight until
//! `H·(r ⊕ e)ᵀ = 0` or every pattern of weight at most AB has been tried.
//!
//! This is the reference decoder. It counts every membership query,
//! including the initial check of `r` itself.

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::syndrome::Syndrome;

/// Abandonment setting: error patterns heavier than `ab` are never tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrandConfig {
    pub ab: usize,
}

impl GrandConfig {
    pub fn new(ab: usize) -> Self {
        GrandConfig { ab }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Decoded,
    Abandoned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub codeword: Option<BitVector>,
    pub message: Option<BitVector>,
    /// 1-based flipped positions, ascending.
    pub flipped: Vec<usize>,
    pub weight: usize,
    pub queries: u64,
    /// Time steps used by the dial architecture; zero for the serial decoder.
    pub latency_cycles: u64,
}

impl DecodeResult {
    pub(crate) fn decoded(
        code: &LinearCode,
        r: &BitVector,
        mut flipped: Vec<usize>,
        queries: u64,
        latency_cycles: u64,
    ) -> Self {
        flipped.sort_unstable();
        let mut codeword = r.clone();
        for &i in &flipped {
            codeword.flip(i - 1);
        }
        let message = code
            .extract_message(&codeword)
            .expect("codeword has length n");
        DecodeResult {
            status: DecodeStatus::Decoded,
            codeword: Some(codeword),
            message: Some(message),
            weight: flipped.len(),
            flipped,
            queries,
            latency_cycles,
        }
    }

    pub(crate) fn abandoned(queries: u64, latency_cycles: u64) -> Self {
        DecodeResult {
            status: DecodeStatus::Abandoned,
            codeword: None,
            message: None,
            flipped: Vec::new(),
            weight: 0,
            queries,
            latency_cycles,
        }
    }

    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of non-trivial queries with abandonment at weight `t`:
/// the sum of `C(n, i)` for `i` in `1..=t`.
pub fn count_max_queries(n: usize, t: usize) -> u128 {
    (1..=t).map(|i| binomial(n, i)).sum()
}

/// Strictly increasing `w`-tuples over `1..=n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, w: usize) -> Self {
        Combinations {
            n,
            current: (w <= n).then(|| (1..=w).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let w = out.len();
        let cur = self.current.as_mut().unwrap();
        match (0..w).rev().find(|&d| cur[d] < self.n - w + d + 1) {
            Some(d) => {
                cur[d] += 1;
                for e in d + 1..w {
                    cur[e] = cur[e - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// All `C(n, w)` error-pattern index tuples of weight `w`, lexicographic.
pub fn enumerate_patterns(n: usize, w: usize) -> Combinations {
    Combinations::new(n, w)
}

/// Serial GRANDAB decoding of the hard-decision vector `r`.
pub fn grandab_decode(code: &LinearCode, r: &BitVector, cfg: GrandConfig) -> Result<DecodeResult> {
    if r.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: r.len(),
        });
    }
    Ok(match <u64 as Syndrome>::columns(code) {
        Some(cols) => search(code, cols, r, cfg.ab),
        None => search(code, code.col_syndromes(), r, cfg.ab),
    })
}

fn search<S: Syndrome>(code: &LinearCode, cols: &[S], r: &BitVector, ab: usize) -> DecodeResult {
    let base = S::of(code, r);
    let mut queries = 0u64;
    for w in 0..=ab.min(code.n()) {
        if let Some(flipped) = search_weight(cols, &base, w, &mut queries) {
            return DecodeResult::decoded(code, r, flipped, queries, 0);
        }
    }
    DecodeResult::abandoned(queries, 0)
}

/// Tries every weight-`w` pattern in lexicographic order, keeping the
/// running XOR of the selected columns per depth so that advancing the
/// last index costs one XOR.
fn search_weight<S: Syndrome>(cols: &[S], base: &S, w: usize, queries: &mut u64) -> Option<Vec<usize>> {
    let n = cols.len();
    if w == 0 {
        *queries += 1;
        return base.is_zero().then(Vec::new);
    }
    if w > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    let mut partial: Vec<S> = Vec::with_capacity(w);
    let mut acc = base.clone();
    for &i in &idx {
        acc = acc.xor(&cols[i]);
        partial.push(acc.clone());
    }
    loop {
        *queries += 1;
        if partial[w - 1].is_zero() {
            return Some(idx.iter().map(|i| i + 1).collect());
        }
        let d = (0..w).rev().find(|&d| idx[d] < n - w + d)?;
        idx[d] += 1;
        for e in d + 1..w {
            idx[e] = idx[e - 1] + 1;
        }
        for e in d..w {
            let prev = if e == 0 { base } else { &partial[e - 1] };
            partial[e] = prev.xor(&cols[idx[e]]);
        }
    }
}
