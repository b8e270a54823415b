//! Bit-level primitives: binary strings, the (length, lex) identification of
//! strings with naturals, Elias-gamma codes, permutation ranks and the
//! lexicographic enumeration of fixed-length strings.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite binary string.
///
/// The derived `Ord` is plain lexicographic order (a proper prefix sorts
/// first). Use [`BitString::cmp_length_lex`] for the order identifying
/// strings with naturals.
#[derive(Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitString {
    bits: Vec<bool>,
}

impl Clone for BitString {
    fn clone(&self) -> Self {
        Self { bits: self.bits.clone() }
    }

    fn clone_from(&mut self, source: &Self) {
        self.bits.clone_from(&source.bits);
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self { bits: Vec::with_capacity(cap) }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// `len` copies of `bit`.
    pub fn repeat(bit: bool, len: usize) -> Self {
        Self { bits: vec![bit; len] }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let bits = (0..width).rev().map(|k| k < 64 && (value >> k) & 1 == 1).collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Zero-based access.
    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// Appends the bits of a literal such as `"0110"`.
    ///
    /// # Panics
    ///
    /// Panics on characters other than `0` and `1`; intended for code tables.
    pub fn push_str(&mut self, lit: &str) {
        for c in lit.chars() {
            match c {
                '0' => self.bits.push(false),
                '1' => self.bits.push(true),
                _ => panic!("non-binary literal {lit:?}"),
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Value of the string read as a big-endian binary number.
    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// Length of the longest common prefix of `self` and `other`.
    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        self.bits.iter().zip(&other.bits).take_while(|(a, b)| a == b).count()
    }

    /// Order by length first, then lexicographically.
    pub fn cmp_length_lex(&self, other: &BitString) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }

    /// The successor in (length, lex) order.
    pub fn next_length_lex(&self) -> BitString {
        let mut bits = self.bits.clone();
        for b in bits.iter_mut().rev() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return BitString { bits };
            }
        }
        BitString::repeat(false, self.len() + 1)
    }

    /// Packs the string MSB-first into bytes; returns the bytes and the number
    /// of padding bits in the last byte.
    pub fn to_bytes(&self) -> (Vec<u8>, u8) {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        let padding = ((8 - self.len() % 8) % 8) as u8;
        (out, padding)
    }

    /// Inverse of [`BitString::to_bytes`].
    pub fn from_bytes(bytes: &[u8], padding: u8) -> Result<Self> {
        if padding > 7 || (bytes.is_empty() && padding != 0) {
            return Err(Error::Malformed(format!("invalid padding count {padding}")));
        }
        let len = bytes.len() * 8 - padding as usize;
        let bits = (0..len).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0).collect();
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("`{c}` is not a binary digit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self { bits: iter.into_iter().collect() }
    }
}

/// Sequential reader over a bit slice, used by every decoder in the crate.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let b = self
            .bits
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::Malformed(format!("unexpected end of input at bit {}", self.pos)))?;
        self.pos += 1;
        Ok(b)
    }

    /// Reads an Elias-gamma codeword as an arbitrary precision integer.
    pub fn read_gamma_big(&mut self) -> Result<BigUint> {
        let mut zeros = 0usize;
        while !self.read_bit()? {
            zeros += 1;
        }
        let mut v = BigUint::one();
        for _ in 0..zeros {
            v <<= 1u32;
            if self.read_bit()? {
                v += 1u32;
            }
        }
        Ok(v)
    }

    pub fn read_gamma(&mut self) -> Result<u64> {
        let start = self.pos;
        let v = self.read_gamma_big()?;
        v.to_u64().ok_or_else(|| Error::Malformed(format!("gamma codeword at bit {start} does not fit in 64 bits")))
    }

    pub fn take(&mut self, n: usize) -> Result<BitString> {
        if self.remaining() < n {
            return Err(Error::Malformed(format!(
                "need {n} bits at position {}, only {} left",
                self.pos,
                self.remaining()
            )));
        }
        let out = BitString::from_bits(self.bits[self.pos..self.pos + n].to_vec());
        self.pos += n;
        Ok(out)
    }

    pub fn rest(&mut self) -> BitString {
        let out = BitString::from_bits(self.bits[self.pos..].to_vec());
        self.pos = self.bits.len();
        out
    }
}

/// Index of `x` in the (length, lex) ordering of all strings, `""` ↦ 0.
pub fn lex_index(x: &BitString) -> BigUint {
    (BigUint::one() << x.len()) - 1u32 + x.to_biguint()
}

/// Inverse of [`lex_index`].
pub fn index_to_string(n: &BigUint) -> BitString {
    let shifted = n + 1u32;
    let len = (shifted.bits() - 1) as usize;
    let value = shifted - (BigUint::one() << len);
    (0..len).rev().map(|k| value.bit(k as u64)).collect()
}

/// `|n|` for the string identified with `n`, i.e. `⌊log₂(n+1)⌋`.
pub fn index_bit_length(n: u128) -> u32 {
    127 - (n + 1).leading_zeros()
}

pub fn floor_log2(m: u64) -> u32 {
    debug_assert!(m > 0);
    63 - m.leading_zeros()
}

/// `⌈log₂ m⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(m: u64) -> u32 {
    debug_assert!(m > 0);
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// `⌈√m⌉` computed exactly.
pub fn ceil_sqrt(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r.saturating_mul(r) > m {
        r -= 1;
    }
    while r.saturating_mul(r) < m {
        r += 1;
    }
    r
}

/// Length of the Elias-gamma codeword of `m ≥ 1`.
pub fn gamma_len(m: u64) -> usize {
    2 * floor_log2(m) as usize + 1
}

/// Appends the Elias-gamma codeword of `m`: `⌊log₂ m⌋` zeros, then `m` in binary.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn gamma_write(out: &mut BitString, m: u64) {
    assert!(m >= 1, "gamma code is defined for m >= 1");
    let nbits = floor_log2(m) as usize;
    for _ in 0..nbits {
        out.push(false);
    }
    for k in (0..=nbits).rev() {
        out.push((m >> k) & 1 == 1);
    }
}

pub fn gamma_encode(m: u64) -> Result<BitString> {
    if m == 0 {
        return Err(Error::OutOfRange("gamma code is defined for m >= 1".into()));
    }
    let mut out = BitString::with_capacity(gamma_len(m));
    gamma_write(&mut out, m);
    Ok(out)
}

pub fn gamma_encode_big(m: &BigUint) -> Result<BitString> {
    if m.is_zero() {
        return Err(Error::OutOfRange("gamma code is defined for m >= 1".into()));
    }
    let nbits = m.bits() - 1;
    let mut out = BitString::with_capacity(2 * nbits as usize + 1);
    for _ in 0..nbits {
        out.push(false);
    }
    for k in (0..=nbits).rev() {
        out.push(m.bit(k));
    }
    Ok(out)
}

/// Decodes one gamma codeword from the front of `bits`, returning the value
/// and the number of bits consumed.
pub fn gamma_decode(bits: &[bool]) -> Result<(u64, usize)> {
    let mut r = BitReader::new(bits);
    let v = r.read_gamma()?;
    Ok((v, r.position()))
}

/// A bijection on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &v in &mapping {
            if v >= mapping.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::OutOfRange(format!("{mapping:?} is not a permutation")));
            }
        }
        Ok(Self(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Lexicographic rank of `p` among all permutations of its length (Lehmer code).
pub fn perm_rank(p: &Permutation) -> BigUint {
    let n = p.len();
    let mut rank = BigUint::zero();
    let mut used = vec![false; n];
    for (i, &v) in p.0.iter().enumerate() {
        let smaller_unused = used[..v].iter().filter(|&&u| !u).count();
        used[v] = true;
        rank = rank * (n - i) + smaller_unused;
    }
    rank
}

/// Inverse of [`perm_rank`].
pub fn perm_unrank(rank: &BigUint, n: usize) -> Result<Permutation> {
    if *rank >= factorial(n) {
        return Err(Error::OutOfRange(format!("permutation rank {rank} >= {n}!")));
    }
    let mut digits = vec![0usize; n];
    let mut r = rank.clone();
    for i in (0..n).rev() {
        let radix = n - i;
        digits[i] = (&r % radix).to_usize().expect("digit below radix");
        r /= radix;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mapping = digits.into_iter().map(|d| pool.remove(d)).collect();
    Ok(Permutation(mapping))
}

/// The lexicographically first `m` strings of length `t`.
pub fn first_m_strings(t: usize, m: usize) -> Result<Vec<BitString>> {
    if t < usize::BITS as usize - 1 && m > (1usize << t) {
        return Err(Error::DomainExhausted { t, requested: m });
    }
    Ok((0..m as u64).map(|i| BitString::from_uint(i, t)).collect())
}

/// All of `X_t` in lexicographic order.
pub fn all_strings(t: usize) -> Vec<BitString> {
    first_m_strings(t, 1usize << t).expect("2^t strings of length t exist")
}
