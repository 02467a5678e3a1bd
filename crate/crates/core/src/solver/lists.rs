//! Atom lists: the atoms of one Boolean skeleton, sorted by kind and with
//! their polarity applied.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::automata::{compile_regex_with_budget, AutomataError, Nfa};
use crate::frontend::{Alphabet, Atom, LinExpr, Pattern, Regex, Rel, StrVar, Term};
use crate::numstr::{binary_regex, NumstrLink};

use super::skeleton::Skeleton;

/// `pattern ∈ L(automaton)`, or `∉` when not positive.
#[derive(Clone, Debug)]
pub struct RegularAtom {
    pub pattern: Pattern,
    pub automaton: Arc<Nfa>,
    pub positive: bool,
}

/// `Σ coeff·term rel rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAtom {
    pub coeffs: BTreeMap<Term, i64>,
    pub rel: Rel,
    pub rhs: i64,
}

impl LinearAtom {
    /// `None` if moving everything to one side overflows.
    pub fn new(lhs: &LinExpr, rel: Rel, rhs: &LinExpr) -> Option<Self> {
        let mut coeffs = lhs.terms.clone();
        for (t, &c) in &rhs.terms {
            let e = coeffs.entry(*t).or_insert(0);
            *e = e.checked_sub(c)?;
        }
        coeffs.retain(|_, c| *c != 0);
        Some(LinearAtom {
            coeffs,
            rel,
            rhs: rhs.constant.checked_sub(lhs.constant)?,
        })
    }

    pub fn num_vars(&self) -> impl Iterator<Item = StrVar> + '_ {
        self.coeffs.keys().filter_map(|t| match t {
            Term::Num(y) => Some(*y),
            _ => None,
        })
    }
}

/// The lists `𝓛_r` (regular atoms), `𝓛_n` (linear atoms) and `𝓛_b` (numstr
/// links) for one truth assignment.
#[derive(Clone, Debug, Default)]
pub struct AtomLists {
    pub regular: Vec<RegularAtom>,
    pub linear: Vec<LinearAtom>,
    pub links: Vec<NumstrLink>,
}

/// Compiles regexes once per solve.
pub(crate) struct RegexCache {
    alphabet: Alphabet,
    budget: usize,
    map: HashMap<Regex, Arc<Nfa>>,
    pub compiled: Vec<(Regex, Arc<Nfa>)>,
}

impl RegexCache {
    pub fn new(alphabet: Alphabet, budget: usize) -> Self {
        RegexCache {
            alphabet,
            budget,
            map: HashMap::new(),
            compiled: Vec::new(),
        }
    }

    pub fn get(&mut self, r: &Regex) -> Result<Arc<Nfa>, AutomataError> {
        if let Some(m) = self.map.get(r) {
            return Ok(m.clone());
        }
        let m = Arc::new(compile_regex_with_budget(r, &self.alphabet, self.budget)?);
        self.map.insert(r.clone(), m.clone());
        self.compiled.push((r.clone(), m.clone()));
        Ok(m)
    }
}

/// Every atom list for `skel`. Atoms assigned false enter negated. A false
/// linear atom mentioning `Num(y)` holds either because `y` is not a binary
/// word or because the arithmetic fails, so it gives two alternatives.
///
/// Every variable under `Num` is additionally constrained to binary words.
/// `None` on arithmetic overflow of a coefficient.
pub(crate) fn lists_for_skeleton(
    skel: &Skeleton,
    cache: &mut RegexCache,
    strict: bool,
    links: &[NumstrLink],
) -> Result<Option<Vec<AtomLists>>, AutomataError> {
    let mut base = AtomLists::default();
    let mut alternatives: Vec<(StrVar, LinearAtom)> = Vec::new();
    for (atom, value) in skel {
        let a = if *value { atom.clone() } else { atom.negate() };
        match a {
            Atom::Member {
                pattern,
                regex,
                positive,
            } => base.regular.push(RegularAtom {
                pattern,
                automaton: cache.get(&regex)?,
                positive,
            }),
            Atom::Lin { lhs, rel, rhs } => {
                let Some(l) = LinearAtom::new(&lhs, rel, &rhs) else {
                    return Ok(None);
                };
                let y = l.num_vars().next();
                match y {
                    Some(y) if !*value => alternatives.push((y, l)),
                    _ => base.linear.push(l),
                }
            }
            Atom::NumStr { .. } | Atom::WordEq { .. } => {
                unreachable!("numstr atoms are rewritten and word equations rejected before this point")
            }
        }
    }
    let bin = cache.get(&binary_regex(strict))?;
    let mut out = Vec::new();
    for mask in 0u64..1 << alternatives.len() {
        let mut lists = base.clone();
        for (k, (y, l)) in alternatives.iter().enumerate() {
            if mask >> k & 1 == 0 {
                lists.linear.push(l.clone());
            } else {
                lists.regular.push(RegularAtom {
                    pattern: Pattern::var(*y),
                    automaton: bin.clone(),
                    positive: false,
                });
            }
        }
        let mut num: Vec<StrVar> = lists.linear.iter().flat_map(|l| l.num_vars()).collect();
        num.sort_unstable();
        num.dedup();
        for &y in &num {
            lists.regular.push(RegularAtom {
                pattern: Pattern::var(y),
                automaton: bin.clone(),
                positive: true,
            });
        }
        lists.links = links.iter().filter(|l| num.contains(&l.var)).cloned().collect();
        out.push(lists);
    }
    Ok(Some(out))
}
