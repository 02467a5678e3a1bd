//! The binary string-number predicate: value conversion, rewriting of numstr
//! atoms into regular and linear constraints, and the synchronized column
//! automaton that couples bit-level arithmetic with per-tape automata.

mod binary;
mod column;
mod rewrite;

pub use binary::{bin_value, is_binary, min_bin};
pub use column::{
    multitape_emptiness, multitape_emptiness_traced, ColumnAutomaton, ColumnConfig, ColumnConstraint,
    ColumnWitness, FrontierSnapshot, StateDump, Tape, TapeKind, TapeValue,
};
pub use rewrite::{binary_regex, rewrite_numstr, value_regex, NumstrLink, Rewritten, FRESH_PREFIX};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumstrError {
    #[error("symbol `{0}` is not a binary digit")]
    ForeignSymbol(char),
    #[error("numstr over a concatenation of {0} items is not supported")]
    UnsupportedPattern(usize),
    #[error("column search exceeded {0} states")]
    BudgetExceeded(usize),
}
