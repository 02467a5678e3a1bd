//! Regex to NFA compilation.
//!
//! Complement-free subtrees go through the Glushkov position automaton
//! (one state per literal plus the initial state, no ε-moves). Around
//! complement nodes, sub-automata are glued with ε-free concatenation, union
//! and star, and complements are built by determinize-and-flip.

use std::collections::BTreeSet;

use crate::frontend::{Alphabet, Regex};

use super::determinize::determinize_complement;
use super::{AutomataError, Nfa, DEFAULT_STATE_BUDGET};

/// Compiles `r` with the default determinization budget.
pub fn compile_regex(r: &Regex, alphabet: &Alphabet) -> Result<Nfa, AutomataError> {
    compile_regex_with_budget(r, alphabet, DEFAULT_STATE_BUDGET)
}

pub fn compile_regex_with_budget(
    r: &Regex,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<Nfa, AutomataError> {
    Ok(build(r, alphabet, budget)?.trim().reduce())
}

fn build(r: &Regex, alphabet: &Alphabet, budget: usize) -> Result<Nfa, AutomataError> {
    if !r.has_complement() {
        return Ok(glushkov(r, alphabet));
    }
    Ok(match r {
        Regex::Concat(a, b) => concat(&build(a, alphabet, budget)?, &build(b, alphabet, budget)?),
        Regex::Union(a, b) => union(&build(a, alphabet, budget)?, &build(b, alphabet, budget)?),
        Regex::Star(a) => star(&build(a, alphabet, budget)?),
        Regex::Complement(a) => determinize_complement(&build(a, alphabet, budget)?.trim(), budget)?,
        Regex::Empty | Regex::Epsilon | Regex::Literal(_) => unreachable!("leaves have no complement"),
    })
}

struct Positions {
    syms: Vec<Option<usize>>,
    follow: Vec<BTreeSet<usize>>,
}

// Returns (nullable, first, last) and fills in positions and follow sets.
fn positions(
    r: &Regex,
    alphabet: &Alphabet,
    pos: &mut Positions,
) -> (bool, BTreeSet<usize>, BTreeSet<usize>) {
    match r {
        Regex::Empty => (false, BTreeSet::new(), BTreeSet::new()),
        Regex::Epsilon => (true, BTreeSet::new(), BTreeSet::new()),
        Regex::Literal(c) => {
            let p = pos.syms.len();
            pos.syms.push(alphabet.index_of(*c));
            pos.follow.push(BTreeSet::new());
            (false, BTreeSet::from([p]), BTreeSet::from([p]))
        }
        Regex::Concat(a, b) => {
            let (na, fa, la) = positions(a, alphabet, pos);
            let (nb, fb, lb) = positions(b, alphabet, pos);
            for &p in &la {
                pos.follow[p].extend(fb.iter().copied());
            }
            let first = if na { &fa | &fb } else { fa };
            let last = if nb { &la | &lb } else { lb };
            (na && nb, first, last)
        }
        Regex::Union(a, b) => {
            let (na, fa, la) = positions(a, alphabet, pos);
            let (nb, fb, lb) = positions(b, alphabet, pos);
            (na || nb, &fa | &fb, &la | &lb)
        }
        Regex::Star(a) => {
            let (_, fa, la) = positions(a, alphabet, pos);
            for &p in &la {
                pos.follow[p].extend(fa.iter().copied());
            }
            (true, fa, la)
        }
        Regex::Complement(_) => unreachable!("glushkov is only used on complement-free regexes"),
    }
}

/// Position automaton of a complement-free regex: state 0 is initial and
/// state `p + 1` corresponds to literal position `p`. Literals outside the
/// alphabet become positions without incoming transitions.
pub fn glushkov(r: &Regex, alphabet: &Alphabet) -> Nfa {
    let mut pos = Positions {
        syms: Vec::new(),
        follow: Vec::new(),
    };
    let (nullable, first, last) = positions(r, alphabet, &mut pos);
    let mut m = Nfa::new(alphabet.clone(), pos.syms.len() + 1, 0);
    m.set_final(0, nullable);
    for &p in &last {
        m.set_final(p as u32 + 1, true);
    }
    for &q in &first {
        if let Some(a) = pos.syms[q] {
            m.add_transition(0, a, q as u32 + 1);
        }
    }
    for (p, fs) in pos.follow.iter().enumerate() {
        for &q in fs {
            if let Some(a) = pos.syms[q] {
                m.add_transition(p as u32 + 1, a, q as u32 + 1);
            }
        }
    }
    m
}

// Copies `b` into `into`, returning the offset of its states.
fn append(into: &mut Nfa, b: &Nfa) -> u32 {
    let off = into.num_states() as u32;
    for _ in 0..b.num_states() {
        into.add_state();
    }
    for q in b.finals() {
        into.set_final(q + off, true);
    }
    for (p, a, q) in b.transitions() {
        into.add_transition(p + off, a, q + off);
    }
    off
}

// Gives state `q` copies of the outgoing transitions of `src` (already
// offset into `m`).
fn copy_outgoing(m: &mut Nfa, src: u32, q: u32) {
    for a in 0..m.alphabet().len() {
        let succ = m.successors(src, a).to_vec();
        for r in succ {
            m.add_transition(q, a, r);
        }
    }
}

/// ε-free concatenation: finals of `a` inherit the initial moves of `b`.
pub fn concat(a: &Nfa, b: &Nfa) -> Nfa {
    let mut m = a.clone();
    let a_finals: Vec<u32> = a.finals().collect();
    for &f in &a_finals {
        m.set_final(f, false);
    }
    let off = append(&mut m, b);
    let b_init = b.initial() + off;
    for &f in &a_finals {
        copy_outgoing(&mut m, b_init, f);
        if b.is_final(b.initial()) {
            m.set_final(f, true);
        }
    }
    m
}

/// ε-free union through a fresh initial state.
pub fn union(a: &Nfa, b: &Nfa) -> Nfa {
    let mut m = Nfa::new(a.alphabet().clone(), 1, 0);
    let oa = append(&mut m, a);
    let ob = append(&mut m, b);
    copy_outgoing(&mut m, a.initial() + oa, 0);
    copy_outgoing(&mut m, b.initial() + ob, 0);
    m.set_final(0, a.is_final(a.initial()) || b.is_final(b.initial()));
    m
}

/// ε-free star through a fresh final initial state.
pub fn star(a: &Nfa) -> Nfa {
    let mut m = Nfa::new(a.alphabet().clone(), 1, 0);
    let off = append(&mut m, a);
    let init = a.initial() + off;
    copy_outgoing(&mut m, init, 0);
    m.set_final(0, true);
    for f in a.finals() {
        copy_outgoing(&mut m, init, f + off);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::RegexMatcher;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b'])
    }

    fn words(alphabet: &Alphabet, max: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &layer {
                for &c in alphabet.symbols() {
                    next.push(format!("{w}{c}"));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn one_star_is_single_state() {
        let m = compile_regex(&Regex::star(Regex::lit('1')), &Alphabet::new(['1'])).unwrap();
        assert_eq!(m.num_states(), 1);
        assert!(m.accepts("").unwrap() && m.accepts("111").unwrap());
    }

    #[test]
    fn empty_regex_has_empty_language() {
        let m = compile_regex(&Regex::Empty, &ab()).unwrap();
        assert!(words(&ab(), 4).iter().all(|w| !m.accepts(w).unwrap()));
    }

    #[test]
    fn complement_of_ab_star_flips_membership() {
        let r = Regex::star(Regex::word("ab"));
        let m = compile_regex(&r, &ab()).unwrap();
        let c = compile_regex(&Regex::complement(r), &ab()).unwrap();
        for w in words(&ab(), 6) {
            assert_ne!(m.accepts(&w).unwrap(), c.accepts(&w).unwrap(), "{w}");
        }
    }

    #[test]
    fn glushkov_state_count_is_literals_plus_one() {
        let r = Regex::concat(
            Regex::union(Regex::lit('a'), Regex::word("ba")),
            Regex::star(Regex::lit('b')),
        );
        assert_eq!(glushkov(&r, &ab()).num_states(), 5);
    }

    #[test]
    fn composed_operations_agree_with_matcher() {
        let inner = Regex::complement(Regex::lit('a'));
        let cases = [
            Regex::concat(inner.clone(), Regex::lit('b')),
            Regex::union(inner.clone(), Regex::Epsilon),
            Regex::star(Regex::concat(Regex::lit('a'), inner.clone())),
            Regex::complement(Regex::concat(Regex::lit('a'), Regex::complement(Regex::lit('b')))),
        ];
        let mut matcher = RegexMatcher::new(ab());
        for r in cases {
            let m = compile_regex(&r, &ab()).unwrap();
            for w in words(&ab(), 5) {
                assert_eq!(m.accepts(&w).unwrap(), matcher.matches(&r, &w), "{r} on {w:?}");
            }
        }
    }
}
