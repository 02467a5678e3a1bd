//! Finite automata over a declared alphabet: compilation of ground regexes,
//! subset construction, and lazily expanded products.

mod compile;
mod determinize;
mod nfa;
mod product;

pub use compile::{compile_regex, compile_regex_with_budget, concat, glushkov, star, union};
pub use determinize::{determinize, determinize_complement, subset_construction};
pub use nfa::Nfa;
pub use product::{is_empty, lazy_product, LazyProduct, Member, Mode};

use thiserror::Error;

/// Default cap on subset-construction states and product tuples.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("automaton construction exceeded the budget of {0} states")]
    BlowupLimitExceeded(usize),
    #[error("symbol `{0}` is not in the alphabet")]
    ForeignSymbol(char),
}

/// Membership of `w` in `L(m)`.
pub fn nfa_membership(m: &Nfa, w: &str) -> Result<bool, AutomataError> {
    m.accepts(w)
}
