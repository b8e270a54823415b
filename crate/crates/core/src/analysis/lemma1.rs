use std::collections::HashSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bitcore::{ceil_log2, lex_index, BitString};
use crate::machine::complexity::ser_display;
use crate::machine::{ComplexityResult, ToyComplexity};
use crate::reduction::Compressor;
use crate::{Error, Result};

/// Named monotone functions `ℕ → ℕ` standing in for `γ` and `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaSpec {
    /// `c·⌈log₂ k⌉ + b`.
    Log { c: u64, b: u64 },
    /// `c·⌈log₂ ⌈log₂ k⌉⌉ + b`.
    LogLog { c: u64, b: u64 },
    /// `⌊num·k / den⌋ + b`.
    Affine { num: u64, den: u64, b: u64 },
    /// Values for `k = 0, 1, …`; undefined past the end.
    Table(Vec<u64>),
}

impl GammaSpec {
    pub fn eval(&self, k: u64) -> Option<u64> {
        let clog = |k: u64| if k == 0 { 0 } else { ceil_log2(k) as u64 };
        match self {
            GammaSpec::Log { c, b } => Some(c * clog(k) + b),
            GammaSpec::LogLog { c, b } => Some(c * clog(clog(k)) + b),
            GammaSpec::Affine { num, den, b } => Some(num * k / den + b),
            GammaSpec::Table(v) => v.get(k as usize).copied(),
        }
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plus = |b: &u64| if *b == 0 { String::new() } else { format!("+{b}") };
        match self {
            GammaSpec::Log { c, b } => write!(f, "{c}log{}", plus(b)),
            GammaSpec::LogLog { c, b } => write!(f, "{c}loglog{}", plus(b)),
            GammaSpec::Affine { num, den: 1, b } => write!(f, "{num}k{}", plus(b)),
            GammaSpec::Affine { num, den, b } => write!(f, "{num}k/{den}{}", plus(b)),
            GammaSpec::Table(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for GammaSpec {
    type Err = Error;

    /// `2log+8`, `loglog`, `3loglog+1`, `k`, `k/2+3`, `3k/4`, `table:1,2,2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("bad function `{s}`: {why}"));
        let s_trim: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = s_trim.strip_prefix("table:") {
            let v = rest
                .split(',')
                .map(|p| p.parse::<u64>().map_err(|_| bad("table entries must be naturals")))
                .collect::<Result<Vec<_>>>()?;
            if v.windows(2).any(|w| w[0] > w[1]) {
                return Err(bad("table must be nondecreasing"));
            }
            return Ok(GammaSpec::Table(v));
        }
        let (head, b) = match s_trim.split_once('+') {
            Some((h, b)) => (h, b.parse::<u64>().map_err(|_| bad("offset must be a natural"))?),
            None => (s_trim.as_str(), 0),
        };
        let coeff = |p: &str| -> Result<u64> {
            if p.is_empty() {
                Ok(1)
            } else {
                p.parse().map_err(|_| bad("coefficient must be a natural"))
            }
        };
        if let Some(c) = head.strip_suffix("loglog") {
            return Ok(GammaSpec::LogLog { c: coeff(c)?, b });
        }
        if let Some(c) = head.strip_suffix("log") {
            return Ok(GammaSpec::Log { c: coeff(c)?, b });
        }
        let (lin, den) = match head.split_once('/') {
            Some((l, d)) => (l, d.parse::<u64>().map_err(|_| bad("denominator must be a natural"))?),
            None => (head, 1),
        };
        if den == 0 {
            return Err(bad("zero denominator"));
        }
        if let Some(num) = lin.strip_suffix('k') {
            return Ok(GammaSpec::Affine { num: coeff(num)?, den, b });
        }
        if head.chars().all(|c| c.is_ascii_digit()) && !head.is_empty() {
            return Ok(GammaSpec::Affine { num: 0, den: 1, b: b + coeff(head)? });
        }
        Err(bad("unknown shape"))
    }
}

/// A string with `C_toy(x) ≤ γ(|x|)` that `ψ` does not shorten.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_display")]
    pub x: BitString,
    pub c_toy: u64,
    pub psi_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub compressor: String,
    pub gamma: String,
    pub len_min: usize,
    pub len_max: usize,
    pub witnesses: Vec<Witness>,
    /// Strings examined.
    pub examined: u64,
    /// Lengths skipped because `γ` is undefined there or the length is out of range.
    pub skipped_lengths: Vec<usize>,
    /// Strings whose outputs were checked for collisions and round-trip.
    pub injectivity_checked: u64,
    pub partial: bool,
}

/// Largest string length searched exhaustively.
pub const LEMMA1_MAX_LEN: usize = 24;

/// Every `x` with `|x|` in `lengths`, `C_toy(x) ≤ γ(|x|)` and `|ψ(x)| ≥ |x|`.
/// `cap` bounds the toy-complexity search; since only values up to `γ(|x|)`
/// matter, the effective cap per length is `min(cap, γ(|x|))`.
pub fn lemma1_search(
    psi: &dyn Compressor,
    gamma: &GammaSpec,
    lengths: RangeInclusive<usize>,
    cap: u64,
) -> Result<Lemma1Report> {
    let mut oracle = ToyComplexity::new();
    let mut report = Lemma1Report {
        compressor: psi.name().to_owned(),
        gamma: gamma.to_string(),
        len_min: *lengths.start(),
        len_max: *lengths.end(),
        witnesses: Vec::new(),
        examined: 0,
        skipped_lengths: Vec::new(),
        injectivity_checked: 0,
        partial: false,
    };
    for len in lengths {
        let Some(bound) = gamma.eval(len as u64) else {
            report.skipped_lengths.push(len);
            report.partial = true;
            continue;
        };
        if len == 0 || len > LEMMA1_MAX_LEN || len > 1 << crate::machine::formula::MAX_MASK_VARS {
            report.skipped_lengths.push(len);
            report.partial = true;
            continue;
        }
        let effective = bound.min(cap);
        if effective < bound {
            report.partial = true;
        }
        let mut outputs = HashSet::new();
        for v in 0..1u64 << len {
            let x = BitString::from_uint(v, len);
            report.examined += 1;
            let z = psi.compress(&x)?;
            if !outputs.insert(z.clone()) {
                return Err(Error::Domain(format!("{} is not injective at {x}", psi.name())));
            }
            if v % 61 == 0 {
                if psi.decompress(&z)? != x {
                    return Err(Error::Domain(format!("{} does not round-trip at {x}", psi.name())));
                }
                report.injectivity_checked += 1;
            }
            if z.len() < len {
                continue;
            }
            if let ComplexityResult::Exact { value, .. } = oracle.complexity(&x, effective)? {
                if value <= bound {
                    report.witnesses.push(Witness { x, c_toy: value, psi_len: z.len() });
                }
            }
        }
    }
    Ok(report)
}

/// Most strings [`tau`] and [`tau_inverse`] will walk through.
pub const TAU_SCAN_CAP: u64 = 1 << 22;

fn in_t(psi: &dyn Compressor, x: &BitString) -> Result<bool> {
    Ok(psi.compress(x)?.len() >= x.len())
}

/// 1-based rank of `x` in `T = {x : |ψ(x)| ≥ |x|}` under (length, lex) order.
pub fn tau(psi: &dyn Compressor, x: &BitString) -> Result<BigUint> {
    if !in_t(psi, x)? {
        return Err(Error::Domain(format!("{x} is compressed by {}", psi.name())));
    }
    let position = lex_index(x);
    if position >= BigUint::from(TAU_SCAN_CAP) {
        return Err(Error::CapExceeded { cap: TAU_SCAN_CAP });
    }
    let mut rank = 0u64;
    let mut y = BitString::new();
    loop {
        rank += in_t(psi, &y)? as u64;
        if &y == x {
            return Ok(BigUint::from(rank));
        }
        y = y.next_length_lex();
    }
}

/// The `j`-th element (1-based) of `T`.
pub fn tau_inverse(psi: &dyn Compressor, j: &BigUint) -> Result<BitString> {
    if *j == BigUint::from(0u32) {
        return Err(Error::Domain("τ ranks start at 1".into()));
    }
    let mut remaining = j.clone();
    let mut y = BitString::new();
    for _ in 0..TAU_SCAN_CAP {
        if in_t(psi, &y)? {
            remaining -= 1u32;
            if remaining == BigUint::from(0u32) {
                return Ok(y);
            }
        }
        y = y.next_length_lex();
    }
    Err(Error::CapExceeded { cap: TAU_SCAN_CAP })
}
