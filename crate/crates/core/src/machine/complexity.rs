//! Length notions for labelling functions and the toy complexity oracle.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bitcore::{ceil_log2, gamma_len, index_bit_length, BitString};
use crate::machine::encoding::{formula_len, header_len};
use crate::machine::enumerate::{ProgramIndexer, MAX_INDEXED_BITS};
use crate::machine::formula::{full_mask, Formula, FunctionTable, LabellingProgram, MAX_MASK_VARS};
use crate::machine::synth::Synthesizer;
use crate::{Error, Result};

/// Outcome of a capped exhaustive minimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexityResult {
    Exact { value: u64, witness: LabellingProgram },
    CapExceeded { cap: u64, upper_bound: Option<u64> },
}

impl ComplexityResult {
    pub fn value(&self) -> Option<u64> {
        match self {
            ComplexityResult::Exact { value, .. } => Some(*value),
            ComplexityResult::CapExceeded { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&LabellingProgram> {
        match self {
            ComplexityResult::Exact { witness, .. } => Some(witness),
            ComplexityResult::CapExceeded { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexityResult::Exact { .. })
    }
}

/// The first program of the canonical enumeration computing a function, with
/// its index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstProgram {
    pub index: u128,
    /// `l(η) = |index|` under the string/number identification.
    pub length: u32,
    pub encoded_bits: usize,
    #[serde(serialize_with = "crate::machine::complexity::ser_display")]
    pub program: LabellingProgram,
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn table_mask(f: &FunctionTable) -> Result<u64> {
    f.to_mask().ok_or_else(|| {
        Error::OutOfRange(format!("tables on X_t with t > {MAX_MASK_VARS} cannot be searched exhaustively"))
    })
}

/// First program (canonical order) with input length `t` and at most `cap`
/// bits whose table satisfies `accept`.
pub(crate) fn first_program_where(
    synth: &mut Synthesizer,
    cap: u64,
    accept: impl FnMut(u64) -> bool,
) -> Option<LabellingProgram> {
    let h = header_len(synth.t()) as u64;
    let budget = cap.checked_sub(h)?;
    let (_, f) = synth.first_matching(budget as usize, accept)?;
    Some(LabellingProgram::new(synth.t(), f).expect("synthesized within bound"))
}

/// Index and length `l` of the first enumerated program computing `f`,
/// searching programs of at most `cap` bits.
pub fn first_program(f: &FunctionTable, cap: u64) -> Result<Option<FirstProgram>> {
    let target = table_mask(f)?;
    let mut synth = Synthesizer::new(f.t())?;
    first_program_with(&mut synth, target, cap)
}

pub(crate) fn first_program_with(synth: &mut Synthesizer, target: u64, cap: u64) -> Result<Option<FirstProgram>> {
    let Some(program) = first_program_where(synth, cap, |m| m == target) else {
        return Ok(None);
    };
    let encoded_bits = header_len(program.t()) + formula_len(program.formula());
    let mut indexer = ProgramIndexer::new(encoded_bits)?;
    let index = indexer.index_of(&program)?;
    Ok(Some(FirstProgram { index, length: index_bit_length(index), encoded_bits, program }))
}

/// `l(η)`: bit-length of the index of the first enumerated program computing `f`.
pub fn length_of_function(f: &FunctionTable, cap: u64) -> Result<ComplexityResult> {
    Ok(match first_program(f, cap)? {
        Some(fp) => ComplexityResult::Exact { value: fp.length as u64, witness: fp.program },
        None => ComplexityResult::CapExceeded { cap, upper_bound: None },
    })
}

/// Minimal encoding length of a program computing `f`.
pub fn min_encoding_length(f: &FunctionTable, cap: u64) -> Result<ComplexityResult> {
    let target = table_mask(f)?;
    let mut synth = Synthesizer::new(f.t())?;
    Ok(match first_program_where(&mut synth, cap, |m| m == target) {
        Some(p) => ComplexityResult::Exact { value: (header_len(p.t()) + formula_len(p.formula())) as u64, witness: p },
        None => ComplexityResult::CapExceeded {
            cap,
            upper_bound: Some((header_len(f.t()) + formula_len(&dnf_for_table(f))) as u64),
        },
    })
}

/// An explicit disjunctive normal form for `f` (`CONST0` if `f` is all zero).
pub fn dnf_for_table(f: &FunctionTable) -> Formula {
    let ones: Vec<usize> = (0..1usize << f.t()).filter(|&i| f.value_at(i)).collect();
    dnf_for_points(f.t(), &ones)
}

fn dnf_for_points(t: usize, points: &[usize]) -> Formula {
    let minterm = |x: usize| {
        (0..t)
            .map(|j| {
                let lit = Formula::var(j);
                if (x >> (t - 1 - j)) & 1 == 1 {
                    lit
                } else {
                    Formula::not(lit)
                }
            })
            .reduce(Formula::and)
            .unwrap_or(Formula::Const(true))
    };
    points.iter().map(|&x| minterm(x)).reduce(Formula::or).unwrap_or(Formula::Const(false))
}

/// Input length used to generate a string of length `m`.
pub fn generator_t(m: usize) -> usize {
    ceil_log2(m as u64) as usize
}

/// Reusable oracle for the toy complexity of strings.
///
/// `C_toy(y)` is the minimum over formulas `p` on `X_t`, `t = ⌈log₂|y|⌉`,
/// whose values on the first `|y|` strings spell `y`, of
/// `|gamma(|y|)| + |encode(p)|`.
#[derive(Debug, Default)]
pub struct ToyComplexity {
    synths: HashMap<usize, Synthesizer>,
}

impl ToyComplexity {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn complexity(&mut self, y: &BitString, cap: u64) -> Result<ComplexityResult> {
        let m = y.len();
        if m == 0 {
            return Err(Error::Domain("toy complexity is defined for nonempty strings".into()));
        }
        let t = generator_t(m);
        if t > MAX_MASK_VARS {
            return Err(Error::OutOfRange(format!("strings longer than {} bits are out of range", 1 << MAX_MASK_VARS)));
        }
        let relevant = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let target = y.bits().iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        let header = gamma_len(m as u64) as u64;
        let synth = match self.synths.entry(t) {
            std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => v.insert(Synthesizer::new(t)?),
        };
        let found = cap
            .checked_sub(header)
            .and_then(|budget| synth.first_matching(budget as usize, |tab| tab & relevant == target));
        Ok(match found {
            Some((len, f)) => ComplexityResult::Exact {
                value: header + len as u64,
                witness: LabellingProgram::new(t, f).expect("synthesized within bound"),
            },
            None => {
                let ones: Vec<usize> = (0..m).filter(|&i| y.bits()[i]).collect();
                ComplexityResult::CapExceeded {
                    cap,
                    upper_bound: Some(header + formula_len(&dnf_for_points(t, &ones)) as u64),
                }
            }
        })
    }
}

/// `C_toy(y)` searched up to `cap` total bits.
pub fn toy_complexity(y: &BitString, cap: u64) -> Result<ComplexityResult> {
    ToyComplexity::new().complexity(y, cap)
}

/// Does `p` regenerate `y` on the first `|y|` strings of `X_t`?
pub fn regenerates(p: &LabellingProgram, y: &BitString) -> bool {
    let Ok(xs) = crate::bitcore::first_m_strings(p.t(), y.len()) else {
        return false;
    };
    xs.iter().zip(y.bits()).all(|(x, &b)| p.eval(x).ok() == Some(b))
}

/// The labelling function `η_y`: `t = ⌈log₂|y|⌉`, `η_y(x_i) = y^i` on the first
/// `|y|` strings of `X_t` and `0` on the rest.
pub fn eta_from_string(y: &BitString) -> Result<FunctionTable> {
    if y.len() < 2 {
        return Err(Error::Domain(format!("η_y needs |y| >= 2, got {}", y.len())));
    }
    let t = generator_t(y.len());
    let mut values = y.clone();
    for _ in y.len()..1usize << t {
        values.push(false);
    }
    FunctionTable::new(t, values)
}

/// Tables on `X_t` realized by programs with `l(η) <= k`.
///
/// `cap` bounds the program length searched; if the programs with
/// `l <= k` are not all within it, the call fails instead of returning a
/// partial class.
pub fn enumerate_class(k: u32, t: usize, cap: u64) -> Result<Vec<FunctionTable>> {
    let max_index: u128 = if k >= 127 {
        return Err(Error::OutOfRange(format!("k = {k} is too large")));
    } else {
        (1u128 << (k + 1)) - 2
    };
    // Longest program whose index can be at most `max_index`.
    let mut indexer = ProgramIndexer::new(MAX_INDEXED_BITS)?;
    let mut max_len = 0usize;
    let mut before = 0u128;
    loop {
        before += indexer.count_programs(max_len);
        if before > max_index {
            break;
        }
        max_len += 1;
        if max_len > MAX_INDEXED_BITS {
            return Err(Error::OutOfRange(format!("k = {k} is beyond the indexable range")));
        }
    }
    if max_len as u64 > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut synth = Synthesizer::new(t)?;
    let h = header_len(t);
    let mut class = BTreeSet::new();
    if max_len >= h {
        let budget = max_len - h;
        synth.extend_to(budget);
        let mut firsts: Vec<(u64, usize, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for len in 0..=budget {
            for (pos, e) in synth.computed_level(len).unwrap().iter().enumerate() {
                if seen.insert(e.table) {
                    firsts.push((e.table, len, pos));
                }
            }
        }
        let mut ix = ProgramIndexer::new(max_len)?;
        for (table, len, pos) in firsts {
            let f = synth.formula_at(len, pos);
            let p = LabellingProgram::new(t, f).expect("synthesized within bound");
            if ix.index_of(&p)? <= max_index {
                class.insert(FunctionTable::from_mask(t, table));
            }
        }
    }
    debug_assert!(class.iter().all(|f| f.to_mask().is_some_and(|m| m <= full_mask(t))));
    Ok(class.into_iter().collect())
}
