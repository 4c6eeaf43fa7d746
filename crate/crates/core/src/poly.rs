//! Binary polynomials over GF(2).
//!
//! [`Poly`] is an arbitrary-degree polynomial stored as packed 64-bit words,
//! bit `j` holding the coefficient of `x^j`. [`Generator`] is the validated
//! form used everywhere a CRC generator is expected: degree `1..=32` and a
//! nonzero constant term, kept in a single machine word.
//!
//! The external hex notation includes every coefficient, the `x^p` term
//! included, so `73` is `x^6 + x^5 + x^4 + x + 1`. Koopman's implicit `+1`
//! notation is not accepted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, internal, unsupported, Error, Result};

/// Largest generator degree handled by the word-sized fast paths.
pub const MAX_GENERATOR_DEGREE: u32 = 32;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    // Canonical: no trailing zero words.
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        let mut p = Poly { words: vec![v] };
        p.normalize();
        p
    }

    /// `x^j`.
    pub fn monomial(j: usize) -> Self {
        let mut p = Poly::zero();
        p.set_bit(j, true);
        p
    }

    /// Builds a polynomial from coefficient words, least significant first.
    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Poly { words };
        p.normalize();
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        match self.words.last() {
            None => -1,
            Some(&top) => {
                (self.words.len() as i64 - 1) * 64 + (63 - top.leading_zeros() as i64)
            }
        }
    }

    pub fn bit(&self, j: usize) -> bool {
        self.words
            .get(j / 64)
            .is_some_and(|w| (w >> (j % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, j: usize, value: bool) {
        let (w, b) = (j / 64, j % 64);
        if value {
            if self.words.len() <= w {
                self.words.resize(w + 1, 0);
            }
            self.words[w] |= 1 << b;
        } else if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.normalize();
        }
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The value as a machine word, if the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Lowercase hex of the full coefficient vector, `"0"` for zero.
    pub fn to_hex(&self) -> String {
        let Some((top, rest)) = self.words.split_last() else {
            return "0".to_string();
        };
        let mut s = format!("{top:x}");
        for w in rest.iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    /// Parses the full-coefficient hex notation. Case-insensitive; an
    /// optional `0x` prefix is accepted.
    pub fn parse_hex(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        if t.is_empty() {
            return Err(Error::Parse(format!("empty polynomial literal {text:?}")));
        }
        if let Some(c) = t.chars().find(|c| !c.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!(
                "invalid hex digit {c:?} in polynomial {text:?}"
            )));
        }
        let digits = t.as_bytes();
        let mut words = Vec::with_capacity(digits.len() / 16 + 1);
        for chunk in digits.rchunks(16) {
            let s = std::str::from_utf8(chunk).expect("ascii hex");
            words.push(u64::from_str_radix(s, 16).expect("validated hex"));
        }
        Ok(Poly::from_words(words))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Poly::from_words(words)
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs != 0 {
                words[i + ws + 1] |= w >> (64 - bs);
            }
        }
        Poly::from_words(words)
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut words = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in other.words.iter().enumerate() {
                let (lo, hi) = clmul64(a, b);
                words[i + j] ^= lo;
                words[i + j + 1] ^= hi;
            }
        }
        Poly::from_words(words)
    }

    /// Long division: returns `(q, r)` with `self = q*g + r`, `deg r < deg g`.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        if g.is_zero() {
            return Err(domain!("division by the zero polynomial"));
        }
        let dg = g.degree() as usize;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while r.degree() >= dg as i64 {
            let shift = r.degree() as usize - dg;
            q.set_bit(shift, true);
            r = r.add(&g.shl(shift));
        }
        Ok((q, r))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divmod(g)?.1)
    }

    /// Coefficient sequence reversed over the degree.
    pub fn reciprocal(&self) -> Result<Poly> {
        if !self.bit(0) {
            return Err(domain!(
                "reciprocal of {} is undefined: zero constant term",
                self.to_hex()
            ));
        }
        let d = self.degree() as usize;
        let mut out = Poly::zero();
        for j in 0..=d {
            if self.bit(j) {
                out.set_bit(d - j, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly(0x{})", self.to_hex())
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Poly::parse_hex(s)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        bb &= bb - 1;
    }
    (lo, hi)
}

/// A validated CRC generator: degree `p` in `1..=32` and constant term 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u64);

impl Generator {
    pub fn new(bits: u64) -> Result<Self> {
        if bits & 1 == 0 {
            return Err(domain!(
                "generator {bits:x} has a zero constant term"
            ));
        }
        let deg = 63 - bits.leading_zeros();
        if deg == 0 {
            return Err(domain!("generator {bits:x} has degree 0"));
        }
        if deg > MAX_GENERATOR_DEGREE {
            return Err(unsupported!(
                "generator {bits:x} has degree {deg}, above {MAX_GENERATOR_DEGREE}"
            ));
        }
        Ok(Generator(bits))
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        match p.to_u64() {
            Some(v) => Generator::new(v),
            None => Err(unsupported!(
                "generator {} has degree {}, above {MAX_GENERATOR_DEGREE}",
                p.to_hex(),
                p.degree()
            )),
        }
    }

    pub fn parse_hex(text: &str) -> Result<Self> {
        Generator::from_poly(&Poly::parse_hex(text)?)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Number of check bits.
    pub fn degree(self) -> u32 {
        63 - self.0.leading_zeros()
    }

    pub fn to_poly(self) -> Poly {
        Poly::from_u64(self.0)
    }

    pub fn reciprocal(self) -> Generator {
        let p = self.degree();
        let r = self.0.reverse_bits() >> (63 - p);
        Generator(r)
    }

    /// Multiplies a residue of degree `< p` by `x` and reduces.
    #[inline]
    pub fn mulx(self, r: u64) -> u64 {
        let r = r << 1;
        if r >> self.degree() & 1 == 1 {
            r ^ self.0
        } else {
            r
        }
    }

    /// `x^j mod g` for a single exponent.
    pub fn x_pow_mod(self, mut j: u64) -> u64 {
        // square-and-multiply over residues
        let p = self.degree();
        let mut result = 1u64;
        let mut base = self.mulx(1) & mask(p);
        while j > 0 {
            if j & 1 == 1 {
                result = self.mulmod(result, base);
            }
            base = self.mulmod(base, base);
            j >>= 1;
        }
        result
    }

    /// Product of two residues modulo the generator.
    pub fn mulmod(self, a: u64, b: u64) -> u64 {
        let mut acc = 0u64;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a = self.mulx(a);
            b >>= 1;
        }
        acc
    }

    /// Multiplicative order of `x` modulo the generator: the smallest
    /// `m >= 1` with `x^m = 1 (mod g)`.
    pub fn order(self) -> Result<u64> {
        let p = self.degree();
        let cap = (1u64 << p) - 1;
        let mut r = 1u64;
        for m in 1..=cap {
            r = self.mulx(r);
            if r == 1 {
                return Ok(m);
            }
        }
        Err(internal!(
            "x has no order modulo {:x} within 2^{p}-1 steps",
            self.0
        ))
    }
}

#[inline]
pub(crate) fn mask(p: u32) -> u64 {
    if p >= 64 {
        u64::MAX
    } else {
        (1u64 << p) - 1
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator(0x{:x})", self.0)
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::parse_hex(s)
    }
}

impl serde::Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:x}", self.0))
    }
}

impl<'de> serde::Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Generator::parse_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Multiplicative order of an arbitrary polynomial, routed through
/// [`Generator::order`].
pub fn order(g: &Poly) -> Result<u64> {
    if !g.bit(0) {
        return Err(domain!(
            "order of {} is undefined: zero constant term",
            g.to_hex()
        ));
    }
    Generator::from_poly(g)?.order()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(any::<u64>(), 0..4).prop_map(Poly::from_words)
    }

    proptest! {
        #[test]
        fn divmod_recombines(a in arb_poly(), g in arb_poly()) {
            prop_assume!(!g.is_zero());
            let (q, r) = a.divmod(&g).unwrap();
            prop_assert!(r.degree() < g.degree());
            prop_assert_eq!(q.mul(&g).add(&r), a);
        }

        #[test]
        fn hex_round_trip(a in arb_poly()) {
            prop_assert_eq!(Poly::parse_hex(&a.to_hex()).unwrap(), a.clone());
            prop_assert_eq!(Poly::parse_hex(&a.to_hex().to_uppercase()).unwrap(), a);
        }

        #[test]
        fn reciprocal_is_an_involution(v in any::<u32>()) {
            let g = Generator::new(u64::from(v) << 1 | 1 | 2).unwrap();
            prop_assert_eq!(g.reciprocal().reciprocal(), g);
            prop_assert_eq!(g.reciprocal().to_poly(), g.to_poly().reciprocal().unwrap());
        }
    }
}
