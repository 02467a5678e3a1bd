//! The decision pipeline: negation normal form, numstr rewriting, Boolean
//! skeletons, atom lists, occurrence plans, per-variable products, length
//! and arithmetic reasoning, and model reconstruction.
//!
//! Every `Sat` verdict carries a model that has been re-checked against the
//! input formula with [`verify_model`].

mod core;
mod lists;
mod plan;
mod reconstruct;
mod skeleton;

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arith::ArithConfig;
use crate::automata::{Nfa, DEFAULT_STATE_BUDGET};
use crate::frontend::{classify_theory, to_nnf, Atom, Decidability, Expr, Formula, TheoryTag};
use crate::numstr::{rewrite_numstr, ColumnConfig, FrontierSnapshot, NumstrError};
use crate::oracle::{brute_force_with, BoundedVerdict, OracleConfig};
use crate::semantics::{Model, RegexMatcher};

pub use self::core::{solve_atom_lists, ListOutcome};
pub use lists::{AtomLists, LinearAtom, RegularAtom};
pub use plan::{
    atom_chains, atom_machines, build_var_automaton, plan_occurrences, AtomMachine, OccurrencePlan, PlanError,
    Segment,
};
pub use reconstruct::word_of_length;
pub use skeleton::{distinct_atoms, enumerate_boolean_skeletons, Skeleton, Skeletons};

pub use crate::semantics::verify_model;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum UnknownReason {
    /// Length, numstr and concatenation together: no complete procedure
    /// exists, and the bounded search found nothing.
    UndecidableFragment,
    WordEquationsUnsupported,
    BudgetExceeded,
    /// A fragment whose decidability is open, where the pipeline could not
    /// settle the instance.
    OpenFragment,
    /// A reconstructed model failed re-verification.
    InternalInconsistency,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::UndecidableFragment => "undecidable-fragment",
            UnknownReason::WordEquationsUnsupported => "word-equations-unsupported",
            UnknownReason::BudgetExceeded => "budget-exceeded",
            UnknownReason::OpenFragment => "open-fragment",
            UnknownReason::InternalInconsistency => "internal-inconsistency",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Model),
    Unsat,
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Verdict::Sat(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat(_) => f.write_str("sat"),
            Verdict::Unsat => f.write_str("unsat"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Cap on product tuples and subset-construction states.
    pub state_budget: usize,
    pub arith: ArithConfig,
    pub column: ColumnConfig,
    /// Occurrence plans per atom list, and chains per atom.
    pub max_plans: usize,
    pub max_skeletons: usize,
    /// Longest word reconstructed for a length assignment.
    pub max_word_len: u64,
    /// Bounded search used on fragments without a complete procedure.
    pub fallback: OracleConfig,
    pub time_limit: Option<Duration>,
    /// Record the column-search frontier in the statistics.
    pub trace_frontier: bool,
    /// Keep the compiled automaton of every regex in the statistics.
    pub collect_automata: bool,
    deadline: Option<Instant>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            state_budget: DEFAULT_STATE_BUDGET,
            arith: ArithConfig::default(),
            column: ColumnConfig::default(),
            max_plans: 100_000,
            max_skeletons: 1 << 20,
            max_word_len: 1 << 24,
            fallback: OracleConfig {
                max_len: 6,
                max_int: 64,
                budget: 5_000_000,
            },
            time_limit: None,
            trace_frontier: false,
            collect_automata: false,
            deadline: None,
        }
    }
}

impl SolverConfig {
    pub(crate) fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub skeletons: usize,
    pub atom_lists: usize,
    pub plans: usize,
    /// Product automata built, including partial ones used for pruning.
    pub products: usize,
    /// Tuples expanded over all products.
    pub expansions: usize,
    pub frontier: Vec<FrontierSnapshot>,
    /// Compiled automata, when requested.
    pub automata: Vec<(String, Nfa)>,
    /// The bounded search was consulted.
    pub fallback: bool,
}

pub fn solve(f: &Formula, cfg: &SolverConfig) -> Verdict {
    solve_with_stats(f, cfg).0
}

/// As [`solve`], also returning search statistics.
pub fn solve_with_stats(f: &Formula, cfg: &SolverConfig) -> (Verdict, SolveStats) {
    let mut cfg = cfg.clone();
    cfg.deadline = cfg.time_limit.map(|d| Instant::now() + d);
    let mut stats = SolveStats::default();
    let tag = classify_theory(f);
    if tag.flags.word_equations {
        return (Verdict::Unknown(UnknownReason::WordEquationsUnsupported), stats);
    }
    let verdict = match pipeline(f, &tag, &cfg, &mut stats) {
        Verdict::Sat(m) if !verify_model(f, &m) => Verdict::Unknown(UnknownReason::InternalInconsistency),
        v => v,
    };
    let gated = match (tag.decidability, verdict) {
        (_, v @ Verdict::Sat(_)) => v,
        (_, v @ Verdict::Unknown(UnknownReason::InternalInconsistency)) => v,
        (Decidability::Undecidable, _) => fallback(f, &cfg, &mut stats, UnknownReason::UndecidableFragment),
        (Decidability::Open, Verdict::Unknown(_)) => fallback(f, &cfg, &mut stats, UnknownReason::OpenFragment),
        (_, v) => v,
    };
    (gated, stats)
}

fn fallback(f: &Formula, cfg: &SolverConfig, stats: &mut SolveStats, reason: UnknownReason) -> Verdict {
    stats.fallback = true;
    match brute_force_with(f, &cfg.fallback) {
        Ok(BoundedVerdict::Sat(m)) if verify_model(f, &m) => Verdict::Sat(m),
        _ => Verdict::Unknown(reason),
    }
}

// Replaces atoms without variables by their truth value.
fn fold_ground(e: &Expr, matcher: &mut RegexMatcher) -> Expr {
    match e {
        Expr::True | Expr::False => e.clone(),
        Expr::Atom(a) => {
            let v = match a {
                Atom::Member {
                    pattern,
                    regex,
                    positive,
                } => pattern.as_constant().map(|w| matcher.matches(regex, &w) == *positive),
                Atom::Lin { lhs, rel, rhs } if lhs.terms.is_empty() && rhs.terms.is_empty() => {
                    Some(rel.holds(lhs.constant, rhs.constant))
                }
                _ => None,
            };
            match v {
                Some(true) => Expr::True,
                Some(false) => Expr::False,
                None => e.clone(),
            }
        }
        Expr::Not(inner) => Expr::not(fold_ground(inner, matcher)),
        Expr::And(es) => Expr::and(es.iter().map(|x| fold_ground(x, matcher)).collect()),
        Expr::Or(es) => Expr::or(es.iter().map(|x| fold_ground(x, matcher)).collect()),
    }
}

fn pipeline(f: &Formula, tag: &TheoryTag, cfg: &SolverConfig, stats: &mut SolveStats) -> Verdict {
    let nnf = to_nnf(f);
    let rw = match rewrite_numstr(&nnf) {
        Ok(r) => r,
        Err(NumstrError::UnsupportedPattern(_)) => {
            return Verdict::Unknown(match tag.decidability {
                Decidability::Undecidable => UnknownReason::UndecidableFragment,
                _ => UnknownReason::OpenFragment,
            })
        }
        Err(_) => return Verdict::Unknown(UnknownReason::BudgetExceeded),
    };
    let g = rw.formula;
    let mut matcher = RegexMatcher::new(g.alphabet.clone());
    let root = fold_ground(&g.root, &mut matcher);
    let mut cache = lists::RegexCache::new(g.alphabet.clone(), cfg.state_budget);
    let mut unknown = None;
    for skel in Skeletons::new(&root, false) {
        stats.skeletons += 1;
        if stats.skeletons > cfg.max_skeletons || cfg.out_of_time() {
            unknown = Some(UnknownReason::BudgetExceeded);
            break;
        }
        let all = match lists::lists_for_skeleton(&skel, &mut cache, g.strict_numstr, &rw.links) {
            Ok(Some(all)) => all,
            Ok(None) | Err(_) => {
                unknown = Some(UnknownReason::BudgetExceeded);
                continue;
            }
        };
        for l in &all {
            match solve_atom_lists(&g.vars, &g.alphabet, l, cfg, stats) {
                ListOutcome::Sat(mut m) => {
                    m.strings.retain(|k, _| f.vars.lookup(k).is_some());
                    m.ints.retain(|k, _| f.vars.lookup(k).is_some());
                    collect(cfg, &cache, stats);
                    return Verdict::Sat(m);
                }
                ListOutcome::Unsat => {}
                ListOutcome::Unknown(r) => unknown = Some(r),
            }
        }
    }
    collect(cfg, &cache, stats);
    match unknown {
        Some(r) => Verdict::Unknown(r),
        None => Verdict::Unsat,
    }
}

fn collect(cfg: &SolverConfig, cache: &lists::RegexCache, stats: &mut SolveStats) {
    if cfg.collect_automata {
        stats.automata = cache
            .compiled
            .iter()
            .map(|(r, m)| (crate::frontend::regex_to_smtlib(r), (**m).clone()))
            .collect();
    }
}
