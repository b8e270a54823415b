//! The canonical enumeration of programs.
//!
//! Programs are ordered by encoding length, then lexicographically by
//! encoding. [`ProgramStream`] materializes that order; [`ProgramIndexer`]
//! computes the position of a program in it by counting, without listing
//! anything.

use std::collections::{HashMap, VecDeque};

use crate::machine::encoding::{encode_program, formula_len, header_len, var_code_len};
use crate::machine::formula::{BinaryOp, Formula, LabellingProgram};
use crate::{Error, Result};

/// Programs longer than this cannot be indexed with `u128` arithmetic.
pub const MAX_INDEXED_BITS: usize = 120;

/// Number of variable indices whose code fits in `len` bits.
fn var_reach(len: usize) -> usize {
    if len < 3 {
        0
    } else {
        (1usize << ((len - 3) / 2 + 1)) - 1
    }
}

/// Number of `VAR(i)` with `i < bound` whose code is exactly `len` bits.
fn vars_of_len(len: usize, bound: usize) -> u128 {
    if len < 3 || len.is_multiple_of(2) {
        return 0;
    }
    let k = (len - 3) / 2;
    let lo = 1usize << k; // smallest i+1 in the band
    let hi = (1usize << (k + 1)) - 1;
    (bound.min(hi) + 1).saturating_sub(lo) as u128
}

/// Rank of the formula's head in code order.
fn op_rank(f: &Formula) -> usize {
    match f {
        Formula::Var(_) => 0,
        Formula::Not(_) => 1,
        Formula::Binary(BinaryOp::And, ..) => 2,
        Formula::Binary(BinaryOp::Or, ..) => 3,
        Formula::Binary(BinaryOp::Xor, ..) => 4,
        Formula::Const(false) => 5,
        Formula::Const(true) => 6,
    }
}

/// Counting oracle for the canonical program order.
#[derive(Debug)]
pub struct ProgramIndexer {
    max_len: usize,
    counts: HashMap<usize, Vec<u128>>,
}

impl ProgramIndexer {
    pub fn new(max_len: usize) -> Result<Self> {
        if max_len > MAX_INDEXED_BITS {
            return Err(Error::OutOfRange(format!(
                "programs of {max_len} bits exceed the indexable limit of {MAX_INDEXED_BITS}"
            )));
        }
        Ok(Self { max_len, counts: HashMap::new() })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn counts_for(&mut self, bound: usize) -> &[u128] {
        let max_len = self.max_len;
        self.counts.entry(bound).or_insert_with(|| {
            let mut c = vec![0u128; max_len + 1];
            for len in 0..=max_len {
                let mut total = vars_of_len(len, bound);
                if len >= 2 {
                    total += c[len - 2];
                }
                if len == 4 {
                    total += 2;
                }
                if len >= 9 {
                    let pairs: u128 = (3..=len - 6).map(|a| c[a] * c[len - 3 - a]).sum();
                    total += 3 * pairs;
                }
                c[len] = total;
            }
            c
        })
    }

    /// Number of formulas with variables below `bound` and an encoding of exactly `len` bits.
    pub fn count_formulas(&mut self, len: usize, bound: usize) -> u128 {
        assert!(len <= self.max_len);
        let bound = bound.min(var_reach(len));
        self.counts_for(bound)[len]
    }

    fn count_op(&mut self, rank: usize, len: usize, bound: usize) -> u128 {
        match rank {
            0 => vars_of_len(len, bound),
            1 => {
                if len >= 2 {
                    self.count_formulas(len - 2, bound)
                } else {
                    0
                }
            }
            2..=4 => {
                if len < 9 {
                    return 0;
                }
                (3..=len - 6).map(|a| self.count_formulas(a, bound) * self.count_formulas(len - 3 - a, bound)).sum()
            }
            _ => (len == 4) as u128,
        }
    }

    /// Number of formulas of exactly `len` bits (variables below `bound`)
    /// whose encoding is lexicographically smaller than that of `f`.
    fn count_less(&mut self, f: &Formula, len: usize, bound: usize) -> u128 {
        let rank = op_rank(f);
        let mut total: u128 = (0..rank).map(|r| self.count_op(r, len, bound)).sum();
        total += match f {
            Formula::Var(i) => {
                if len < 3 || len.is_multiple_of(2) {
                    0
                } else {
                    let band = (len - 3) / 2;
                    let own = (var_code_len(*i) - 3) / 2;
                    if band > own {
                        // more leading zeros in the gamma code sorts first
                        vars_of_len(len, bound)
                    } else if band == own {
                        ((*i).min(bound) + 1).saturating_sub(1 << band) as u128
                    } else {
                        0
                    }
                }
            }
            Formula::Not(g) => {
                if len >= 2 {
                    self.count_less(g, len - 2, bound)
                } else {
                    0
                }
            }
            Formula::Binary(_, a, b) => {
                let mut s = 0;
                if len >= 9 {
                    for a_len in 3..=len - 6 {
                        let rest = self.count_formulas(len - 3 - a_len, bound);
                        if rest > 0 {
                            s += self.count_less(a, a_len, bound) * rest;
                        }
                    }
                }
                let a_len = formula_len(a);
                if len >= 3 + a_len {
                    s += self.count_less(b, len - 3 - a_len, bound);
                }
                s
            }
            Formula::Const(_) => 0,
        };
        total
    }

    /// Sum of `count_formulas(rest, t)` over `t` in `[lo, hi)`.
    fn count_over_bounds(&mut self, rest: usize, lo: usize, hi: usize) -> u128 {
        if lo >= hi {
            return 0;
        }
        let reach = var_reach(rest);
        let mut total = 0;
        for t in lo..hi.min(reach) {
            total += self.count_formulas(rest, t);
        }
        if hi > reach {
            let saturated = (hi - lo.max(reach)) as u128;
            total += saturated * self.count_formulas(rest, reach);
        }
        total
    }

    /// Header bands: `t + 1 ∈ [2^k, 2^(k+1))` share the header length `2k+1`.
    fn band(k: usize) -> (usize, usize) {
        ((1 << k) - 1, (1 << (k + 1)) - 1)
    }

    /// Number of programs whose encoding is exactly `len` bits.
    pub fn count_programs(&mut self, len: usize) -> u128 {
        let mut total = 0;
        let mut k = 0;
        while 2 * k + 1 + 3 <= len {
            let (lo, hi) = Self::band(k);
            total += self.count_over_bounds(len - 2 * k - 1, lo, hi);
            k += 1;
        }
        total
    }

    /// Number of programs with encodings of at most `len` bits.
    pub fn programs_up_to(&mut self, len: usize) -> u128 {
        (0..=len).map(|l| self.count_programs(l)).sum()
    }

    /// Zero-based position of `p` in the canonical enumeration.
    pub fn index_of(&mut self, p: &LabellingProgram) -> Result<u128> {
        let h = header_len(p.t());
        let f_len = formula_len(p.formula());
        let len = h + f_len;
        if len > self.max_len {
            return Err(Error::OutOfRange(format!("program of {len} bits exceeds indexer limit {}", self.max_len)));
        }
        let mut idx = if len == 0 { 0 } else { self.programs_up_to(len - 1) };
        let own_band = (h - 1) / 2;
        // Longer headers (more leading zeros) sort first.
        let mut k = own_band + 1;
        while 2 * k + 1 + 3 <= len {
            let (lo, hi) = Self::band(k);
            idx += self.count_over_bounds(len - 2 * k - 1, lo, hi);
            k += 1;
        }
        let (lo, _) = Self::band(own_band);
        idx += self.count_over_bounds(f_len, lo, p.t());
        idx += self.count_less(p.formula(), f_len, p.t());
        Ok(idx)
    }
}

/// All formulas of exactly `len` bits with variables below `bound`, unordered.
pub(crate) fn formulas_of_len(
    len: usize,
    bound: usize,
    memo: &mut HashMap<(usize, usize), Vec<Formula>>,
) -> Vec<Formula> {
    let bound = bound.min(var_reach(len));
    if let Some(v) = memo.get(&(len, bound)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if len >= 3 && len % 2 == 1 {
        let k = (len - 3) / 2;
        for i in (1usize << k) - 1..((1usize << (k + 1)) - 1).min(bound) {
            out.push(Formula::Var(i));
        }
    }
    if len >= 2 {
        for g in formulas_of_len(len - 2, bound, memo) {
            out.push(Formula::not(g));
        }
    }
    if len >= 9 {
        for op in BinaryOp::ALL {
            for a_len in 3..=len - 6 {
                let lefts = formulas_of_len(a_len, bound, memo);
                let rights = formulas_of_len(len - 3 - a_len, bound, memo);
                for a in &lefts {
                    for b in &rights {
                        out.push(Formula::Binary(op, Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
    }
    if len == 4 {
        out.push(Formula::Const(false));
        out.push(Formula::Const(true));
    }
    memo.insert((len, bound), out.clone());
    out
}

/// Streams every program of at most `max_bits` bits in canonical order.
pub struct ProgramStream {
    max_bits: usize,
    next_len: usize,
    buffer: VecDeque<LabellingProgram>,
    memo: HashMap<(usize, usize), Vec<Formula>>,
}

impl ProgramStream {
    fn fill(&mut self) {
        while self.buffer.is_empty() && self.next_len <= self.max_bits {
            let len = self.next_len;
            self.next_len += 1;
            let mut batch = Vec::new();
            let mut k = 0;
            while 2 * k + 1 + 3 <= len {
                let rest = len - 2 * k - 1;
                for t in (1usize << k) - 1..(1usize << (k + 1)) - 1 {
                    for f in formulas_of_len(rest, t, &mut self.memo) {
                        let p = LabellingProgram::new(t, f).expect("generated within bound");
                        batch.push((encode_program(&p), p));
                    }
                }
                k += 1;
            }
            batch.sort_by(|a, b| a.0.cmp(&b.0));
            self.buffer.extend(batch.into_iter().map(|(_, p)| p));
        }
    }
}

impl Iterator for ProgramStream {
    type Item = LabellingProgram;

    fn next(&mut self) -> Option<LabellingProgram> {
        self.fill();
        self.buffer.pop_front()
    }
}

/// Every valid program with an encoding of at most `max_bits` bits, ordered
/// by (encoding length, encoding).
pub fn enumerate_programs(max_bits: usize) -> ProgramStream {
    ProgramStream { max_bits, next_len: 0, buffer: VecDeque::new(), memo: HashMap::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::encoding::{decode_program, program_len};

    #[test]
    fn shortest_programs_are_the_nullary_constants() {
        let progs: Vec<_> = enumerate_programs(5).collect();
        assert_eq!(progs.len(), 2);
        assert_eq!(progs[0], LabellingProgram::new(0, Formula::Const(false)).unwrap());
        assert_eq!(progs[1], LabellingProgram::new(0, Formula::Const(true)).unwrap());
    }

    #[test]
    fn stream_is_strictly_ordered_and_sound() {
        let progs: Vec<_> = enumerate_programs(16).collect();
        let encs: Vec<_> = progs.iter().map(encode_program).collect();
        for w in encs.windows(2) {
            assert!((w[0].len(), &w[0]) < (w[1].len(), &w[1]));
        }
        for (p, e) in progs.iter().zip(&encs) {
            assert_eq!(&decode_program(e).unwrap(), p);
            if p.t() <= 8 {
                assert_eq!(p.table().unwrap().values().len(), 1 << p.t());
            }
        }
    }

    #[test]
    fn counts_are_monotone_in_max_bits() {
        let mut prev = 0;
        for k in 0..=14 {
            let c = enumerate_programs(k).count();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn indexer_matches_materialized_enumeration() {
        let mut ix = ProgramIndexer::new(18).unwrap();
        let mut per_len = vec![0u128; 19];
        for (i, p) in enumerate_programs(18).enumerate() {
            assert_eq!(ix.index_of(&p).unwrap(), i as u128, "program {p}");
            per_len[program_len(&p)] += 1;
        }
        for (len, &n) in per_len.iter().enumerate() {
            assert_eq!(ix.count_programs(len), n, "length {len}");
        }
    }

    #[test]
    fn indexer_rejects_oversized_limits() {
        assert!(ProgramIndexer::new(MAX_INDEXED_BITS + 1).is_err());
    }
}
