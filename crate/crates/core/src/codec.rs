//! A CRC code as a shortened cyclic code.
//!
//! Bit `j` of a word is the coefficient of `x^j`. On the wire the highest
//! position goes first, so index 0 (the constant term) is the last bit
//! transmitted. None of the computed metrics depend on that choice.

use std::fmt;

use crate::error::{domain, unsupported, Error, Result};
use crate::poly::{Generator, Poly};

/// Largest burst span enumerated by [`burst_coverage`] unless overridden.
pub const DEFAULT_BURST_CAP: usize = 26;

/// An `[n, n - p]` CRC code: generator plus code length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    g: Generator,
    n: usize,
    order: u64,
}

impl CodeSpec {
    /// Requires `p < n <= order(g)`.
    pub fn new(g: Generator, n: usize) -> Result<Self> {
        let order = g.order()?;
        Self::with_order(g, n, order)
    }

    /// As [`CodeSpec::new`] with a precomputed order.
    pub fn with_order(g: Generator, n: usize, order: u64) -> Result<Self> {
        let p = g.degree() as usize;
        if n <= p {
            return Err(domain!(
                "code length {n} must exceed the {p} check bits of {g}"
            ));
        }
        if n as u64 > order {
            return Err(domain!(
                "code length {n} exceeds the order n_c={order} of {g}"
            ));
        }
        Ok(CodeSpec { g, n, order })
    }

    pub fn generator(&self) -> Generator {
        self.g
    }

    /// Check bits.
    pub fn p(&self) -> usize {
        self.g.degree() as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Information bits.
    pub fn k(&self) -> usize {
        self.n - self.p()
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

/// An `n`-bit word, bit `j` being the coefficient of `x^j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    bits: Poly,
}

impl Word {
    pub fn zero(len: usize) -> Self {
        Word {
            len,
            bits: Poly::zero(),
        }
    }

    pub fn from_poly(len: usize, bits: Poly) -> Result<Self> {
        if bits.degree() >= len as i64 {
            return Err(domain!(
                "polynomial of degree {} does not fit a {len}-bit word",
                bits.degree()
            ));
        }
        Ok(Word { len, bits })
    }

    /// Parses a binary string written highest position first.
    pub fn parse_binary(text: &str) -> Result<Self> {
        let len = text.len();
        let mut bits = Poly::zero();
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits.set_bit(len - 1 - i, true),
                _ => return Err(Error::Parse(format!("invalid bit {c:?} in {text:?}"))),
            }
        }
        Ok(Word { len, bits })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits.bit(j)
    }

    pub fn set_bit(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "bit {j} outside a {}-bit word", self.len);
        self.bits.set_bit(j, value);
    }

    pub fn weight(&self) -> u32 {
        self.bits.weight()
    }

    pub fn as_poly(&self) -> &Poly {
        &self.bits
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        if self.len != other.len {
            return Err(domain!("word lengths differ: {} vs {}", self.len, other.len));
        }
        Ok(Word {
            len: self.len,
            bits: self.bits.add(&other.bits),
        })
    }

    /// Binary rendering, highest position first.
    pub fn to_binary(&self) -> String {
        (0..self.len)
            .rev()
            .map(|j| if self.bit(j) { '1' } else { '0' })
            .collect()
    }

    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_binary())
    }
}

/// `p(x) mod g`, evaluated by Horner's rule over the set bits.
pub fn residue(poly: &Poly, g: Generator) -> u64 {
    let mut r = 0u64;
    let top = poly.degree();
    if top < 0 {
        return 0;
    }
    for j in (0..=top as usize).rev() {
        r = g.mulx(r);
        if poly.bit(j) {
            r ^= 1;
        }
    }
    r
}

/// Systematic encoding `c(x) = x^p i(x) + (x^p i(x) mod g(x))`.
pub fn encode(spec: &CodeSpec, info: &Poly) -> Result<Word> {
    if info.degree() >= spec.k() as i64 {
        return Err(domain!(
            "information polynomial of degree {} does not fit k={}",
            info.degree(),
            spec.k()
        ));
    }
    let shifted = info.shl(spec.p());
    let r = residue(&shifted, spec.generator());
    let bits = shifted.add(&Poly::from_u64(r));
    Ok(Word {
        len: spec.n(),
        bits,
    })
}

/// The information bits of a systematic codeword (its high `k` positions).
pub fn extract_info(spec: &CodeSpec, word: &Word) -> Result<Poly> {
    if word.len() != spec.n() {
        return Err(domain!(
            "word has {} bits, code length is {}",
            word.len(),
            spec.n()
        ));
    }
    let mut info = Poly::zero();
    for j in 0..spec.k() {
        if word.bit(j + spec.p()) {
            info.set_bit(j, true);
        }
    }
    Ok(info)
}

/// Divisibility test: `true` iff the word is a codeword.
pub fn check(spec: &CodeSpec, word: &Word) -> Result<bool> {
    if word.len() != spec.n() {
        return Err(domain!(
            "word has {} bits, code length is {}",
            word.len(),
            spec.n()
        ));
    }
    Ok(residue(word.as_poly(), spec.generator()) == 0)
}

/// Parity-check columns `h_j = x^j mod g` for `j < n`.
pub fn check_columns(g: Generator, n: usize) -> Result<Vec<u64>> {
    let order = g.order()?;
    if n as u64 > order {
        return Err(domain!(
            "length {n} exceeds the order n_c={order} of {g}"
        ));
    }
    Ok(columns_unchecked(g, n))
}

/// Columns without the order check, for callers that already hold it.
pub(crate) fn columns_unchecked(g: Generator, n: usize) -> Vec<u64> {
    let mut cols = Vec::with_capacity(n);
    let mut h = 1u64;
    for _ in 0..n {
        cols.push(h);
        h = g.mulx(h);
    }
    cols
}

/// Syndrome of a word as the XOR of the columns at its set positions.
pub fn syndrome(columns: &[u64], word: &Word) -> Result<u64> {
    if word.len() != columns.len() {
        return Err(domain!(
            "word has {} bits, {} columns given",
            word.len(),
            columns.len()
        ));
    }
    Ok(columns
        .iter()
        .enumerate()
        .filter(|(j, _)| word.bit(*j))
        .fold(0, |s, (_, h)| s ^ h))
}

/// Exact burst detection tally for one span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BurstCoverage {
    pub span: usize,
    /// Burst patterns of exactly this span over all start positions.
    pub patterns: u128,
    pub undetected: u128,
}

impl BurstCoverage {
    pub fn fraction(&self) -> f64 {
        1.0 - self.undetected as f64 / self.patterns as f64
    }
}

/// Fraction of bursts of span exactly `b` (first and last position in error)
/// that the code detects. Wrap-around bursts are not counted.
///
/// Interior patterns are enumerated in Gray-code order. A burst starting at
/// position `s` is `x^s e(x)` and `x` is invertible modulo `g`, so each
/// interior pattern is detected at every start position or at none; the tally
/// multiplies by the `n - b + 1` positions.
pub fn burst_coverage(spec: &CodeSpec, b: usize, cap: usize) -> Result<BurstCoverage> {
    if b == 0 || b > spec.n() {
        return Err(domain!("burst span {b} outside 1..={}", spec.n()));
    }
    if b > cap {
        return Err(unsupported!("burst span {b} above the enumeration cap {cap}"));
    }
    let positions = (spec.n() - b + 1) as u128;
    let cols = columns_unchecked(spec.generator(), b);
    if b == 1 {
        let undetected = u128::from(cols[0] == 0);
        return Ok(BurstCoverage {
            span: 1,
            patterns: positions,
            undetected: undetected * positions,
        });
    }
    let interior = &cols[1..b - 1];
    let mut syn = cols[0] ^ cols[b - 1];
    let mut zeros = u128::from(syn == 0);
    let count = 1u64 << interior.len();
    for i in 1..count {
        syn ^= interior[i.trailing_zeros() as usize];
        if syn == 0 {
            zeros += 1;
        }
    }
    Ok(BurstCoverage {
        span: b,
        patterns: u128::from(count) * positions,
        undetected: zeros * positions,
    })
}
