//! The program model: boolean formulas over fixed-length inputs, their
//! canonical prefix-free encoding and enumeration, and the exhaustive
//! complexity oracles built on top.
//!
//! Formulas are total by construction, which keeps every length notion here
//! exactly computable. A formula with free variable indices also serves as a
//! function on arbitrarily long inputs; [`prefix_bound`] tells how many
//! leading bits it can read.

pub mod complexity;
pub mod encoding;
pub mod enumerate;
pub mod formula;
pub mod synth;

pub use complexity::{
    dnf_for_table, enumerate_class, eta_from_string, first_program, length_of_function, min_encoding_length,
    regenerates, toy_complexity, ComplexityResult, FirstProgram, ToyComplexity,
};
pub use encoding::{decode_program, encode_formula, encode_program, program_len};
pub use enumerate::{enumerate_programs, ProgramIndexer, ProgramStream};
pub use formula::{prefix_bound, BinaryOp, Formula, FunctionTable, LabellingProgram};
pub use synth::Synthesizer;
