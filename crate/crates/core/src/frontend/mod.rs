//! Parsing, normalization and theory classification of string constraints.

mod ast;
mod classify;
mod nnf;
mod parse;
mod printer;
mod regex_syntax;
pub mod sexpr;

pub use ast::*;
pub use classify::{classify_theory, decidability_of, Base, Decidability, TheoryFlags, TheoryTag};
pub use nnf::{nnf_expr, to_nnf};
pub use parse::parse_script;
pub use regex_syntax::parse_regex;
pub use printer::{
    atom_to_smtlib, expr_to_smtlib, lin_to_smtlib, pattern_to_smtlib, quote, regex_to_smtlib,
    to_smtlib,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: sort error: {msg}")]
    Sort { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
}

/// Complement depth of a regex.
pub fn cdepth(r: &Regex) -> usize {
    r.cdepth()
}
