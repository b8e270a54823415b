//! Exhaustive search for the canonically first formula computing a truth table.
//!
//! For a fixed input length `t`, level `len` holds, for every truth table
//! computable by some formula of exactly `len` bits, the lexicographically
//! smallest such formula. Candidates are generated in lexicographic order of
//! their encodings, so the first candidate to reach a table is its minimum and
//! each level comes out already sorted by encoding.

use std::collections::HashMap;

use crate::bitcore::{gamma_write, BitString};
use crate::machine::encoding::{op_code, var_code_len, CONST0_CODE, CONST1_CODE, NOT_CODE};
use crate::machine::formula::{full_mask, var_mask, BinaryOp, Formula, MAX_MASK_VARS};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(usize),
    Not(usize),
    Binary(BinaryOp, (usize, usize), (usize, usize)),
    Const(bool),
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub table: u64,
    pub code: BitString,
    node: Node,
}

#[derive(Debug)]
struct Level {
    entries: Vec<Entry>,
    by_table: HashMap<u64, usize>,
}

impl Level {
    fn new() -> Self {
        Self { entries: Vec::new(), by_table: HashMap::new() }
    }

    fn offer(&mut self, table: u64, code: impl FnOnce() -> BitString, node: Node) {
        if let std::collections::hash_map::Entry::Vacant(slot) = self.by_table.entry(table) {
            slot.insert(self.entries.len());
            self.entries.push(Entry { table, code: code(), node });
        }
    }
}

/// Lazily grown table of canonical minimal formulas for one input length.
#[derive(Debug)]
pub struct Synthesizer {
    t: usize,
    full: u64,
    levels: Vec<Level>,
    /// Every entry of the completed levels, as (len, position), sorted by code.
    merged: Vec<(usize, usize)>,
    /// Smallest length at which each table was first seen.
    first_seen: HashMap<u64, usize>,
}

impl Synthesizer {
    pub fn new(t: usize) -> Result<Self> {
        if t > MAX_MASK_VARS {
            return Err(Error::OutOfRange(format!("exhaustive synthesis supports t <= {MAX_MASK_VARS}, got {t}")));
        }
        Ok(Self { t, full: full_mask(t), levels: Vec::new(), merged: Vec::new(), first_seen: HashMap::new() })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of levels computed so far (formula lengths `0..computed_len()`).
    pub fn computed_len(&self) -> usize {
        self.levels.len()
    }

    /// Makes levels `0..=len` available.
    pub fn extend_to(&mut self, len: usize) {
        while self.levels.len() <= len {
            self.build_next();
        }
    }

    fn build_next(&mut self) {
        let len = self.levels.len();
        let mut level = Level::new();

        // VAR: codes of equal length order by index.
        for i in 0..self.t {
            if var_code_len(i) == len {
                let code = || {
                    let mut c = BitString::new();
                    c.push_str("00");
                    gamma_write(&mut c, i as u64 + 1);
                    c
                };
                level.offer(var_mask(self.t, i), code, Node::Var(i));
            }
        }
        if len >= 2 {
            for (pos, e) in self.levels[len - 2].entries.iter().enumerate() {
                let code = || {
                    let mut c = BitString::new();
                    c.push_str(NOT_CODE);
                    c.extend_from(&e.code);
                    c
                };
                level.offer(!e.table & self.full, code, Node::Not(pos));
            }
        }
        if len >= 9 {
            for op in BinaryOp::ALL {
                for &(a_len, a_pos) in &self.merged {
                    if a_len + 3 + 3 > len {
                        continue;
                    }
                    let b_len = len - 3 - a_len;
                    let a = &self.levels[a_len].entries[a_pos];
                    for (b_pos, b) in self.levels[b_len].entries.iter().enumerate() {
                        let code = || {
                            let mut c = BitString::with_capacity(len);
                            c.push_str(op_code(op));
                            c.extend_from(&a.code);
                            c.extend_from(&b.code);
                            c
                        };
                        level.offer(
                            op.apply_mask(a.table, b.table),
                            code,
                            Node::Binary(op, (a_len, a_pos), (b_len, b_pos)),
                        );
                    }
                }
            }
        }
        if len == 4 {
            level.offer(0, || CONST0_CODE.parse().unwrap(), Node::Const(false));
            level.offer(self.full, || CONST1_CODE.parse().unwrap(), Node::Const(true));
        }

        for e in &level.entries {
            self.first_seen.entry(e.table).or_insert(len);
        }
        self.levels.push(level);
        self.merge_level(len);
    }

    fn merge_level(&mut self, len: usize) {
        let fresh: Vec<(usize, usize)> = (0..self.levels[len].entries.len()).map(|p| (len, p)).collect();
        if fresh.is_empty() {
            return;
        }
        let levels = &self.levels;
        let code = |&(l, p): &(usize, usize)| &levels[l].entries[p].code;
        let mut out = Vec::with_capacity(self.merged.len() + fresh.len());
        let (mut i, mut j) = (0, 0);
        while i < self.merged.len() && j < fresh.len() {
            if code(&self.merged[i]) <= code(&fresh[j]) {
                out.push(self.merged[i]);
                i += 1;
            } else {
                out.push(fresh[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.merged[i..]);
        out.extend_from_slice(&fresh[j..]);
        self.merged = out;
    }

    /// Canonical minimal formulas of exactly `len` bits, sorted by encoding.
    pub fn level(&mut self, len: usize) -> &[Entry] {
        self.extend_to(len);
        &self.levels[len].entries
    }

    /// Entries of an already computed level.
    pub fn computed_level(&self, len: usize) -> Option<&[Entry]> {
        self.levels.get(len).map(|l| l.entries.as_slice())
    }

    /// Lookup of a table at a computed length.
    pub fn lookup(&self, len: usize, table: u64) -> Option<&Entry> {
        let level = self.levels.get(len)?;
        level.by_table.get(&table).map(|&p| &level.entries[p])
    }

    /// Shortest length (among computed levels) at which `table` is realized.
    pub fn first_len(&self, table: u64) -> Option<usize> {
        self.first_seen.get(&table).copied()
    }

    /// First formula in (length, encoding) order with `len <= max_len` whose
    /// table satisfies `accept`.
    pub fn first_matching(&mut self, max_len: usize, mut accept: impl FnMut(u64) -> bool) -> Option<(usize, Formula)> {
        for len in 0..=max_len {
            self.extend_to(len);
            if let Some(pos) = self.levels[len].entries.iter().position(|e| accept(e.table)) {
                return Some((len, self.formula_at(len, pos)));
            }
        }
        None
    }

    /// Like [`Synthesizer::first_matching`] but only over computed levels and
    /// without mutation, for concurrent readers.
    pub fn first_matching_computed(
        &self,
        max_len: usize,
        mut accept: impl FnMut(u64) -> bool,
    ) -> Option<(usize, Formula)> {
        for (len, level) in self.levels.iter().enumerate().take(max_len + 1) {
            if let Some(pos) = level.entries.iter().position(|e| accept(e.table)) {
                return Some((len, self.formula_at(len, pos)));
            }
        }
        None
    }

    pub fn formula_at(&self, len: usize, pos: usize) -> Formula {
        match self.levels[len].entries[pos].node {
            Node::Var(i) => Formula::Var(i),
            Node::Not(p) => Formula::not(self.formula_at(len - 2, p)),
            Node::Binary(op, (al, ap), (bl, bp)) => {
                Formula::Binary(op, Box::new(self.formula_at(al, ap)), Box::new(self.formula_at(bl, bp)))
            }
            Node::Const(c) => Formula::Const(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::encoding::encode_formula;
    use crate::machine::enumerate::formulas_of_len;

    /// Brute force: materialize every formula of the given length, keep the
    /// lexicographically smallest per table.
    fn brute_force_level(len: usize, t: usize) -> Vec<(u64, BitString)> {
        let mut memo = HashMap::new();
        let mut all: Vec<(BitString, u64)> =
            formulas_of_len(len, t, &mut memo).iter().map(|f| (encode_formula(f), f.truth_mask(t))).collect();
        all.sort();
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for (code, table) in all {
            if seen.insert(table, ()).is_none() {
                out.push((table, code));
            }
        }
        out
    }

    #[test]
    fn levels_match_brute_force() {
        for t in 0..=3 {
            let mut s = Synthesizer::new(t).unwrap();
            for len in 0..=17 {
                let got: Vec<(u64, BitString)> = s.level(len).iter().map(|e| (e.table, e.code.clone())).collect();
                assert_eq!(got, brute_force_level(len, t), "t={t} len={len}");
                for (pos, (_, code)) in got.iter().enumerate() {
                    let f = s.formula_at(len, pos);
                    assert_eq!(&encode_formula(&f), code);
                    assert_eq!(f.truth_mask(t), got[pos].0);
                }
            }
        }
    }

    #[test]
    fn functionally_complete_for_small_t() {
        for t in 0..=3 {
            let mut s = Synthesizer::new(t).unwrap();
            let n_tables = 1u64 << (1u32 << t);
            let mut len = 0;
            while (s.first_seen.len() as u64) < n_tables {
                s.extend_to(len);
                len += 1;
                assert!(len < 60, "t={t} did not reach all tables");
            }
        }
    }

    #[test]
    fn rejects_large_t() {
        assert!(Synthesizer::new(MAX_MASK_VARS + 1).is_err());
    }
}
