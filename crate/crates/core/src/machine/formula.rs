use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::{Error, Result};

/// Largest input length for which truth tables fit in a `u64` mask.
pub const MAX_MASK_VARS: usize = 6;

/// Largest input length for which explicit tables are built at all.
pub const MAX_TABLE_VARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Xor,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 3] = [BinaryOp::And, BinaryOp::Or, BinaryOp::Xor];

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BinaryOp::And => a & b,
            BinaryOp::Or => a | b,
            BinaryOp::Xor => a ^ b,
        }
    }

    pub fn apply_mask(self, a: u64, b: u64) -> u64 {
        match self {
            BinaryOp::And => a & b,
            BinaryOp::Or => a | b,
            BinaryOp::Xor => a ^ b,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            BinaryOp::And => "and",
            BinaryOp::Or => "or",
            BinaryOp::Xor => "xor",
        }
    }
}

/// A boolean formula over input bits `VAR(0), VAR(1), ...`.
///
/// `VAR(i)` reads the `i`-th bit of the input (zero-based, leftmost first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(usize),
    Not(Box<Formula>),
    Binary(BinaryOp, Box<Formula>, Box<Formula>),
    Const(bool),
}

impl Formula {
    pub fn var(i: usize) -> Self {
        Formula::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::Binary(BinaryOp::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Binary(BinaryOp::Or, Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Binary(BinaryOp::Xor, Box::new(a), Box::new(b))
    }

    /// Largest variable index, if any variable occurs.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Formula::Var(i) => Some(*i),
            Formula::Not(f) => f.max_var(),
            Formula::Binary(_, a, b) => a.max_var().max(b.max_var()),
            Formula::Const(_) => None,
        }
    }

    /// Evaluates on `x`; fails if a variable points past the end of `x`.
    ///
    /// This is also the semantics on an arbitrarily long (conceptually
    /// infinite) input: only the first [`prefix_bound`] bits are read.
    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        Ok(match self {
            Formula::Var(i) => *x.get(*i).ok_or(Error::WrongLength { expected: i + 1, got: x.len() })?,
            Formula::Not(f) => !f.eval(x)?,
            Formula::Binary(op, a, b) => op.apply(a.eval(x)?, b.eval(x)?),
            Formula::Const(c) => *c,
        })
    }

    /// Truth table on `X_t` as a bit mask: bit `i` is the value on the
    /// `i`-th string of `X_t` in lexicographic order.
    ///
    /// Requires `t <= MAX_MASK_VARS` and every variable below `t`.
    pub fn truth_mask(&self, t: usize) -> u64 {
        debug_assert!(t <= MAX_MASK_VARS);
        let full = full_mask(t);
        match self {
            Formula::Var(i) => var_mask(t, *i),
            Formula::Not(f) => !f.truth_mask(t) & full,
            Formula::Binary(op, a, b) => op.apply_mask(a.truth_mask(t), b.truth_mask(t)),
            Formula::Const(c) => {
                if *c {
                    full
                } else {
                    0
                }
            }
        }
    }

    fn write_sexpr(&self, out: &mut String) {
        match self {
            Formula::Var(i) => out.push_str(&format!("(var {i})")),
            Formula::Not(f) => {
                out.push_str("(not ");
                f.write_sexpr(out);
                out.push(')');
            }
            Formula::Binary(op, a, b) => {
                out.push('(');
                out.push_str(op.keyword());
                out.push(' ');
                a.write_sexpr(out);
                out.push(' ');
                b.write_sexpr(out);
                out.push(')');
            }
            Formula::Const(c) => out.push(if *c { '1' } else { '0' }),
        }
    }
}

/// All-ones mask over the `2^t` points of `X_t`.
pub fn full_mask(t: usize) -> u64 {
    let n = 1u32 << t;
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Truth mask of `VAR(i)` on `X_t`.
pub fn var_mask(t: usize, i: usize) -> u64 {
    debug_assert!(i < t);
    let shift = t - 1 - i;
    (0..1u64 << t).filter(|x| (x >> shift) & 1 == 1).fold(0, |m, x| m | (1 << x))
}

/// Syntactic prefix bound: the formula reads at most the first
/// `prefix_bound(f)` bits of its input.
pub fn prefix_bound(f: &Formula) -> usize {
    f.max_var().map_or(0, |i| i + 1)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for Formula {
    type Err = Error;

    /// Parses prefix notation: `0`, `1`, `(var i)`, `(not f)`,
    /// `(and f g)`, `(or f g)`, `(xor f g)`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let f = parse_formula(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input after formula: `{}`", tokens[pos..].join(" "))));
        }
        Ok(f)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_owned).collect()
}

fn parse_formula(tokens: &[String], pos: &mut usize) -> Result<Formula> {
    let next = |pos: &mut usize| -> Result<&str> {
        let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of formula".into()))?;
        *pos += 1;
        Ok(tok.as_str())
    };
    match next(pos)? {
        "0" => Ok(Formula::Const(false)),
        "1" => Ok(Formula::Const(true)),
        "(" => {
            let head = next(pos)?.to_ascii_lowercase();
            let f = match head.as_str() {
                "var" => {
                    let idx = next(pos)?;
                    Formula::Var(idx.parse().map_err(|_| Error::Parse(format!("bad variable index `{idx}`")))?)
                }
                "not" => Formula::not(parse_formula(tokens, pos)?),
                "and" | "or" | "xor" => {
                    let a = parse_formula(tokens, pos)?;
                    let b = parse_formula(tokens, pos)?;
                    match head.as_str() {
                        "and" => Formula::and(a, b),
                        "or" => Formula::or(a, b),
                        _ => Formula::xor(a, b),
                    }
                }
                other => return Err(Error::Parse(format!("unknown operator `{other}`"))),
            };
            match next(pos)? {
                ")" => Ok(f),
                tok => Err(Error::Parse(format!("expected `)`, found `{tok}`"))),
            }
        }
        tok => Err(Error::Parse(format!("unexpected token `{tok}`"))),
    }
}

/// A labelling function: a formula together with its input length `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabellingProgram {
    t: usize,
    formula: Formula,
}

impl LabellingProgram {
    pub fn new(t: usize, formula: Formula) -> Result<Self> {
        if let Some(i) = formula.max_var() {
            if i >= t {
                return Err(Error::InvalidProgram(format!("variable {i} used with input length t = {t}")));
            }
        }
        Ok(Self { t, formula })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Evaluates the program; only inputs of length exactly `t` are accepted.
    pub fn eval(&self, x: &BitString) -> Result<bool> {
        if x.len() != self.t {
            return Err(Error::WrongLength { expected: self.t, got: x.len() });
        }
        self.formula.eval(x.bits())
    }

    /// The extensional semantics on `X_t`.
    pub fn table(&self) -> Result<FunctionTable> {
        if self.t <= MAX_MASK_VARS {
            return Ok(FunctionTable::from_mask(self.t, self.formula.truth_mask(self.t)));
        }
        if self.t > MAX_TABLE_VARS {
            return Err(Error::OutOfRange(format!("X_t with t = {} is too large to tabulate", self.t)));
        }
        let values = crate::bitcore::all_strings(self.t)
            .iter()
            .map(|x| self.formula.eval(x.bits()).expect("validated program is total on X_t"))
            .collect();
        Ok(FunctionTable { t: self.t, values })
    }
}

impl fmt::Display for LabellingProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} {}", self.t, self.formula)
    }
}

impl FromStr for LabellingProgram {
    type Err = Error;

    /// Parses `t=<n> <formula>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s.strip_prefix("t=").ok_or_else(|| Error::Parse("program text must start with `t=<n>`".into()))?;
        let (t, formula) =
            rest.split_once(char::is_whitespace).ok_or_else(|| Error::Parse("missing formula after `t=<n>`".into()))?;
        let t = t.parse().map_err(|_| Error::Parse(format!("bad input length `{t}`")))?;
        LabellingProgram::new(t, formula.parse()?)
    }
}

/// Extensional view of a labelling function on `X_t`: `values[i]` is the
/// label of the `i`-th string of `X_t` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FunctionTable {
    t: usize,
    values: BitString,
}

impl FunctionTable {
    pub fn new(t: usize, values: BitString) -> Result<Self> {
        let expected = 1usize
            .checked_shl(t as u32)
            .ok_or_else(|| Error::OutOfRange(format!("t = {t} is too large for a table")))?;
        if values.len() != expected {
            return Err(Error::WrongLength { expected, got: values.len() });
        }
        Ok(Self { t, values })
    }

    /// Parses a table from its value string; the length must be a power of two.
    pub fn from_values(values: BitString) -> Result<Self> {
        let n = values.len();
        if !n.is_power_of_two() {
            return Err(Error::Domain(format!("table length {n} is not a power of two")));
        }
        Self::new(n.trailing_zeros() as usize, values)
    }

    pub fn from_mask(t: usize, mask: u64) -> Self {
        assert!(t <= MAX_MASK_VARS);
        let values = (0..1usize << t).map(|i| (mask >> i) & 1 == 1).collect();
        Self { t, values }
    }

    /// Every table on `X_t`, ordered by mask value.
    pub fn all(t: usize) -> Vec<FunctionTable> {
        assert!(t <= 4, "2^(2^t) tables only enumerable for t <= 4");
        (0..=full_mask(t)).map(|m| Self::from_mask(t, m)).collect()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn values(&self) -> &BitString {
        &self.values
    }

    pub fn value_at(&self, index: usize) -> bool {
        self.values.bits()[index]
    }

    /// Label of `x ∈ X_t`.
    pub fn eval(&self, x: &BitString) -> Result<bool> {
        if x.len() != self.t {
            return Err(Error::WrongLength { expected: self.t, got: x.len() });
        }
        let idx = x.bits().iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Ok(self.value_at(idx))
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.t <= MAX_MASK_VARS)
            .then(|| self.values.bits().iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64) << i)))
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor01() -> Formula {
        Formula::xor(Formula::var(0), Formula::var(1))
    }

    #[test]
    fn eval_examples() {
        let p = LabellingProgram::new(2, xor01()).unwrap();
        assert!(p.eval(&"01".parse().unwrap()).unwrap());
        assert_eq!(p.eval(&"011".parse().unwrap()), Err(Error::WrongLength { expected: 2, got: 3 }));
        let c = LabellingProgram::new(2, Formula::Const(false)).unwrap();
        assert!(!c.eval(&"11".parse().unwrap()).unwrap());
        assert!(LabellingProgram::new(1, xor01()).is_err());
    }

    #[test]
    fn masks_match_pointwise_evaluation() {
        let f = Formula::or(Formula::and(Formula::var(0), Formula::not(Formula::var(2))), Formula::var(1));
        let p = LabellingProgram::new(3, f.clone()).unwrap();
        let table = p.table().unwrap();
        for (i, x) in crate::bitcore::all_strings(3).iter().enumerate() {
            assert_eq!(table.value_at(i), f.eval(x.bits()).unwrap());
            assert_eq!(table.eval(x).unwrap(), p.eval(x).unwrap());
        }
        assert_eq!(LabellingProgram::new(2, xor01()).unwrap().table().unwrap().to_string(), "0110");
        assert_eq!(full_mask(6), u64::MAX);
    }

    #[test]
    fn prefix_bound_examples() {
        assert_eq!(prefix_bound(&Formula::xor(Formula::var(0), Formula::var(2))), 3);
        assert_eq!(prefix_bound(&Formula::Const(true)), 0);
    }

    #[test]
    fn prefix_bound_is_semantic_bound() {
        let formulas = [
            Formula::xor(Formula::var(0), Formula::var(2)),
            Formula::Const(true),
            Formula::and(Formula::not(Formula::var(1)), Formula::var(4)),
            Formula::or(Formula::var(7), Formula::var(3)),
        ];
        for f in &formulas {
            let nb = prefix_bound(f);
            for t in nb..=8 {
                for x in crate::bitcore::all_strings(t) {
                    let base = f.eval(x.bits()).unwrap();
                    for pos in nb..t {
                        let mut y = x.bits().to_vec();
                        y[pos] = !y[pos];
                        assert_eq!(f.eval(&y).unwrap(), base);
                    }
                }
            }
        }
    }

    #[test]
    fn text_format_round_trips() {
        let p: LabellingProgram = "t=2 (xor (var 0) (var 1))".parse().unwrap();
        assert_eq!(p.formula(), &xor01());
        assert_eq!(p.to_string(), "t=2 (xor (var 0) (var 1))");
        let f: Formula = "(and (not 1) (or 0 (var 3)))".parse().unwrap();
        assert_eq!(f.to_string().parse::<Formula>().unwrap(), f);
        assert!("(xor (var 0))".parse::<Formula>().is_err());
        assert!("(nand 0 1)".parse::<Formula>().is_err());
        assert!("0 1".parse::<Formula>().is_err());
    }
}
