//! Canonical prefix-free binary encoding of programs.
//!
//! A program is `gamma(t+1)` followed by its formula in prefix order:
//!
//! | node     | code               |
//! |----------|--------------------|
//! | `VAR(i)` | `00` + `gamma(i+1)`|
//! | `NOT`    | `01`               |
//! | `AND`    | `100`              |
//! | `OR`     | `101`              |
//! | `XOR`    | `110`              |
//! | `CONST0` | `1110`             |
//! | `CONST1` | `1111`             |

use crate::bitcore::{gamma_len, gamma_write, BitReader, BitString};
use crate::machine::formula::{BinaryOp, Formula, LabellingProgram};
use crate::{Error, Result};

pub(crate) const NOT_CODE: &str = "01";
pub(crate) const CONST0_CODE: &str = "1110";
pub(crate) const CONST1_CODE: &str = "1111";

pub(crate) fn op_code(op: BinaryOp) -> &'static str {
    match op {
        BinaryOp::And => "100",
        BinaryOp::Or => "101",
        BinaryOp::Xor => "110",
    }
}

/// Length of the code for `VAR(i)`.
pub fn var_code_len(i: usize) -> usize {
    2 + gamma_len(i as u64 + 1)
}

pub fn write_formula(out: &mut BitString, f: &Formula) {
    match f {
        Formula::Var(i) => {
            out.push_str("00");
            gamma_write(out, *i as u64 + 1);
        }
        Formula::Not(g) => {
            out.push_str(NOT_CODE);
            write_formula(out, g);
        }
        Formula::Binary(op, a, b) => {
            out.push_str(op_code(*op));
            write_formula(out, a);
            write_formula(out, b);
        }
        Formula::Const(false) => out.push_str(CONST0_CODE),
        Formula::Const(true) => out.push_str(CONST1_CODE),
    }
}

pub fn encode_formula(f: &Formula) -> BitString {
    let mut out = BitString::new();
    write_formula(&mut out, f);
    out
}

pub fn formula_len(f: &Formula) -> usize {
    match f {
        Formula::Var(i) => var_code_len(*i),
        Formula::Not(g) => 2 + formula_len(g),
        Formula::Binary(_, a, b) => 3 + formula_len(a) + formula_len(b),
        Formula::Const(_) => 4,
    }
}

/// Header length `|gamma(t+1)|`.
pub fn header_len(t: usize) -> usize {
    gamma_len(t as u64 + 1)
}

pub fn encode_program(p: &LabellingProgram) -> BitString {
    let mut out = BitString::new();
    gamma_write(&mut out, p.t() as u64 + 1);
    write_formula(&mut out, p.formula());
    out
}

pub fn program_len(p: &LabellingProgram) -> usize {
    header_len(p.t()) + formula_len(p.formula())
}

pub fn read_formula(r: &mut BitReader<'_>) -> Result<Formula> {
    Ok(match (r.read_bit()?, r.read_bit()?) {
        (false, false) => {
            let v = r.read_gamma()?;
            Formula::Var(usize::try_from(v - 1).map_err(|_| Error::Malformed("variable index too large".into()))?)
        }
        (false, true) => Formula::not(read_formula(r)?),
        (true, a) => match (a, r.read_bit()?) {
            (false, false) => binary(r, BinaryOp::And)?,
            (false, true) => binary(r, BinaryOp::Or)?,
            (true, false) => binary(r, BinaryOp::Xor)?,
            (true, true) => Formula::Const(r.read_bit()?),
        },
    })
}

fn binary(r: &mut BitReader<'_>, op: BinaryOp) -> Result<Formula> {
    let a = read_formula(r)?;
    let b = read_formula(r)?;
    Ok(Formula::Binary(op, Box::new(a), Box::new(b)))
}

/// Reads one program from the front of the reader.
pub fn read_program(r: &mut BitReader<'_>) -> Result<LabellingProgram> {
    let t = r.read_gamma()? - 1;
    let t = usize::try_from(t).map_err(|_| Error::Malformed("input length too large".into()))?;
    let formula = read_formula(r)?;
    LabellingProgram::new(t, formula)
}

/// Decodes a complete program; trailing bits are an error.
pub fn decode_program(bits: &BitString) -> Result<LabellingProgram> {
    let mut r = BitReader::new(bits.bits());
    let p = read_program(&mut r)?;
    if !r.is_exhausted() {
        return Err(Error::Malformed(format!("{} trailing bits after program", r.remaining())));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        let c0 = LabellingProgram::new(0, Formula::Const(false)).unwrap();
        assert_eq!(encode_program(&c0).to_string(), "1".to_owned() + "1110");
        // Header for t = 2 is gamma(3) = 011.
        let xor = LabellingProgram::new(2, Formula::xor(Formula::var(0), Formula::var(1))).unwrap();
        let expected = ["011", "110", "001", "00010"].concat();
        assert_eq!(encode_program(&xor).to_string(), expected);
        assert_eq!(decode_program(&expected.parse().unwrap()).unwrap(), xor);
        assert_eq!(program_len(&xor), expected.len());
    }

    #[test]
    fn decode_errors() {
        // VAR(2) with t = 1
        let bad: BitString = "010".to_owned().parse::<BitString>().unwrap();
        let mut bits = bad;
        bits.push_str("00011");
        assert!(matches!(decode_program(&bits), Err(Error::InvalidProgram(_))));
        assert!(matches!(decode_program(&"1111".parse().unwrap()), Err(Error::Malformed(_))));
        assert!(matches!(decode_program(&"111101".parse().unwrap()), Err(Error::Malformed(_))));
    }
}
