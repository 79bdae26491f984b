//! Linear block codes: construction, encoding and syndromes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A binary linear `(n, k)` block code.
///
/// Holds the generator `G` (k×n), parity-check `H` ((n−k)×n), a right
/// inverse of `G` (n×k) and the column syndromes `sᵢ = H·𝟙ᵢᵀ`. When the
/// syndrome width `n − k` is at most 64 the column syndromes are also kept
/// packed into single words for the decoders' fast path.
#[derive(Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    right_inverse: BitMatrix,
    col_syndromes: Vec<BitVector>,
    col_words: Option<Vec<u64>>,
    systematic: bool,
}

impl LinearCode {
    fn assemble(generator: BitMatrix, parity_check: BitMatrix) -> Result<Self> {
        let n = parity_check.cols();
        let k = generator.rows();
        let right_inverse = generator.right_inverse()?;
        let col_syndromes: Vec<BitVector> = (0..n).map(|c| parity_check.column(c)).collect();
        let col_words = (n - k <= 64).then(|| {
            col_syndromes
                .iter()
                .map(|s| s.as_word().expect("width checked"))
                .collect()
        });
        let systematic = (0..k).all(|r| (0..k).all(|c| generator.get(r, c) == (r == c)));
        Ok(LinearCode {
            n,
            k,
            generator,
            parity_check,
            right_inverse,
            col_syndromes,
            col_words,
            systematic,
        })
    }

    fn check_dimensions(n: usize, k: usize) -> Result<()> {
        if k < 1 {
            return Err(Error::InvalidCode(format!(
                "message length must be at least 1 (n = {n}, k = {k})"
            )));
        }
        if k >= n {
            return Err(Error::InvalidCode(format!(
                "at least one parity bit is required (n = {n}, k = {k})"
            )));
        }
        Ok(())
    }

    /// Systematic code `G = [I_k | P]`, `H = [Pᵀ | I_{n−k}]` from its
    /// k×(n−k) parity part `P`.
    pub fn from_parity_part(parity: &BitMatrix) -> Result<Self> {
        let k = parity.rows();
        let r = parity.cols();
        let n = k + r;
        Self::check_dimensions(n, k)?;
        let mut g = BitMatrix::zeros(k, n);
        let mut h = BitMatrix::zeros(r, n);
        for i in 0..k {
            g.set(i, i, true);
            for t in parity.row(i).ones() {
                g.set(i, k + t, true);
                h.set(t, i, true);
            }
        }
        for t in 0..r {
            h.set(t, k + t, true);
        }
        Self::assemble(g, h)
    }

    /// Derives a code from a full-rank parity-check matrix.
    ///
    /// The generator is the nullspace basis read off the reduced row-echelon
    /// form of `H`: one row per non-pivot column, in increasing column order.
    /// The result is deterministic for a given `H`.
    pub fn from_parity_check(h: &BitMatrix) -> Result<Self> {
        let m = h.rows();
        let n = h.cols();
        let reduced = h.clone().reduce();
        if reduced.pivots.len() != m {
            return Err(Error::RankDeficient {
                expected: m,
                rank: reduced.pivots.len(),
            });
        }
        Self::check_dimensions(n, n.saturating_sub(m))?;
        let free: Vec<usize> = (0..n).filter(|c| !reduced.pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = BitVector::unit(n, f);
                for (i, &p) in reduced.pivots.iter().enumerate() {
                    if reduced.matrix.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        let g = BitMatrix::from_rows(n, rows)?;
        Self::assemble(g, h.clone())
    }

    /// Systematic CRC code: message bits first, then the remainder of
    /// `x^{n−k}·m(x)` modulo the generator polynomial.
    ///
    /// Plain polynomial division: zero initial register, no reflection, no
    /// final XOR. Message bit 1 is the highest-degree coefficient.
    pub fn crc(spec: &CrcSpec) -> Result<Self> {
        let CrcSpec { n, k, .. } = *spec;
        Self::check_dimensions(n, k)?;
        let r = n - k;
        if r > 64 {
            return Err(Error::InvalidCode(format!(
                "CRC degree {r} exceeds 64 bits"
            )));
        }
        let full = spec.full_polynomial()?;
        let top = 1u128 << r;
        // rem_e = x^e mod g, walked upwards from e = 0.
        let mut rems = Vec::with_capacity(n);
        let mut rem: u128 = 1;
        for _ in 0..n {
            rems.push(rem as u64);
            rem <<= 1;
            if rem & top != 0 {
                rem ^= full;
            }
        }
        let mut parity = BitMatrix::zeros(k, r);
        for i in 0..k {
            // Message position i+1 carries x^{n−1−i}.
            let rem = rems[n - 1 - i];
            for t in 0..r {
                parity.set(i, t, (rem >> (r - 1 - t)) & 1 == 1);
            }
        }
        Self::from_parity_part(&parity)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Syndrome width `n − k`.
    #[inline]
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn right_inverse(&self) -> &BitMatrix {
        &self.right_inverse
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    /// All column syndromes, position 1 first.
    pub fn col_syndromes(&self) -> &[BitVector] {
        &self.col_syndromes
    }

    /// Column syndrome `sᵢ` for 1-based position `i`.
    pub fn col_syndrome(&self, i: usize) -> &BitVector {
        &self.col_syndromes[i - 1]
    }

    /// Packed column syndromes, present when `n − k <= 64`.
    pub fn col_words(&self) -> Option<&[u64]> {
        self.col_words.as_deref()
    }

    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        self.generator.vec_mul(message)
    }

    /// `H·rᵀ`.
    pub fn syndrome(&self, r: &BitVector) -> Result<BitVector> {
        self.parity_check.mul_vec(r)
    }

    /// Packed syndrome for the single-word path.
    pub fn syndrome_word(&self, r: &BitVector) -> Option<u64> {
        let words = self.col_words.as_deref()?;
        debug_assert_eq!(r.len(), self.n);
        Some(r.ones().fold(0, |acc, i| acc ^ words[i]))
    }

    pub fn is_codeword(&self, c: &BitVector) -> Result<bool> {
        Ok(self.syndrome(c)?.is_zero())
    }

    /// `ĉ·G⁻¹`. Systematic codes read the message bits directly.
    pub fn extract_message(&self, codeword: &BitVector) -> Result<BitVector> {
        if self.systematic && codeword.len() == self.n {
            return Ok(codeword.prefix(self.k));
        }
        self.right_inverse.vec_mul(codeword)
    }

    /// Checks every structural invariant of the code.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidCode(what.to_string()));
        if self.generator.rank() != self.k {
            return fail("generator is not full rank");
        }
        if self.parity_check.rank() != self.n - self.k {
            return fail("parity-check matrix is not full rank");
        }
        for row in self.generator.row_vectors() {
            if !self.syndrome(row)?.is_zero() {
                return fail("a generator row violates the parity checks");
            }
        }
        if self.generator.mul(&self.right_inverse)? != BitMatrix::identity(self.k) {
            return fail("right inverse does not invert the generator");
        }
        for (c, s) in self.col_syndromes.iter().enumerate() {
            if *s != self.parity_check.column(c) {
                return fail("column syndrome table is stale");
            }
            if let Some(words) = &self.col_words {
                if words[c] != s.as_word().unwrap_or(u64::MAX) {
                    return fail("packed column syndrome table is stale");
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("systematic", &self.systematic)
            .finish()
    }
}

/// A CRC code description.
///
/// `poly` lists the generator coefficients below the leading term, so
/// `0xD5` with `n − k = 8` is `x⁸ + x⁷ + x⁶ + x⁴ + x² + 1`. The leading
/// coefficient may also be given explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcSpec {
    pub n: usize,
    pub k: usize,
    pub poly: u64,
}

impl CrcSpec {
    pub fn new(n: usize, k: usize, poly: u64) -> Self {
        CrcSpec { n, k, poly }
    }

    /// Generator polynomial with its leading `x^{n−k}` term.
    pub fn full_polynomial(&self) -> Result<u128> {
        let r = self.n.saturating_sub(self.k);
        if r == 0 || r > 64 {
            return Err(Error::InvalidCode(format!("unsupported CRC degree {r}")));
        }
        let poly = self.poly as u128;
        if poly >> r > 1 {
            return Err(Error::InvalidCode(format!(
                "polynomial {:#x} has degree above n - k = {r}",
                self.poly
            )));
        }
        if poly & 1 == 0 {
            return Err(Error::InvalidCode(format!(
                "polynomial {:#x} has a zero constant term",
                self.poly
            )));
        }
        Ok(poly | (1u128 << r))
    }
}

impl FromStr for CrcSpec {
    type Err = Error;

    /// Parses `n,k,poly` with the polynomial in hex (`0x` optional) or decimal.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, k, poly] = parts.as_slice() else {
            return Err(Error::Parse(format!("expected n,k,poly but got {s:?}")));
        };
        let int = |t: &str| {
            t.parse::<usize>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        };
        let poly = match poly.strip_prefix("0x").or_else(|| poly.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => poly.parse::<u64>(),
        }
        .map_err(|e| Error::Parse(format!("{poly:?}: {e}")))?;
        Ok(CrcSpec::new(int(n)?, int(k)?, poly))
    }
}

/// The CRC codes evaluated with GRANDAB at `n = 128`.
pub const BENCHMARK_CRC_CODES: [CrcSpec; 4] = [
    CrcSpec { n: 128, k: 96, poly: 0x04C1_1DB7 },
    CrcSpec { n: 128, k: 104, poly: 0xB2_B117 },
    CrcSpec { n: 128, k: 112, poly: 0x1021 },
    CrcSpec { n: 128, k: 120, poly: 0xD5 },
];

/// Parses a parity-check matrix file.
///
/// The first line holds `n-k n`; each following line is one row, either `n`
/// characters from `{0,1}` or `⌈n/4⌉` hex digits, most-significant nibble
/// first. Blank lines and lines starting with `#` are ignored.
pub fn parse_parity_check(text: &str) -> Result<BitMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty parity-check file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|e| Error::Parse(format!("header {header:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let [m, n] = dims.as_slice() else {
        return Err(Error::Parse(format!(
            "header must be `n-k n`, got {header:?}"
        )));
    };
    let (m, n) = (*m, *n);
    let hex_digits = n.div_ceil(4);
    let mut rows = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        let row = if compact.len() == n && compact.chars().all(|c| c == '0' || c == '1') {
            BitVector::from_bit_str(&compact)
        } else if compact.len() == hex_digits {
            BitVector::from_hex(&compact, n)
        } else {
            Err(Error::Parse(format!(
                "expected {n} bits or {hex_digits} hex digits"
            )))
        }
        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::Parse(format!(
            "header announces {m} rows but {} were given",
            rows.len()
        )));
    }
    BitMatrix::from_rows(n, rows)
}

pub fn load_parity_check(path: impl AsRef<Path>) -> Result<BitMatrix> {
    parse_parity_check(&std::fs::read_to_string(path)?)
}

/// Renders `H` in the binary parity-check file format.
pub fn format_parity_check(h: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", h.rows(), h.cols());
    for row in h.row_vectors() {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}
