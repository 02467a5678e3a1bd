//! Bounded brute-force satisfiability and automata facts, used as ground
//! truth in tests. Everything here is evaluated with [`crate::semantics`]
//! only; no decision machinery is involved.

pub mod gen;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::automata::{AutomataError, LazyProduct, Nfa};
use crate::frontend::{Atom, Expr, Formula, IntVar, Pattern, Regex, Rel, StrVar, Term, VarRef};
use crate::numstr::{bin_value, is_binary};
use crate::semantics::{Evaluator, Model, RegexMatcher};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bounded search exceeded {0} nodes")]
    BudgetExceeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedVerdict {
    Sat(Model),
    /// No model with strings up to `max_len` and integers in
    /// `[-max_int, max_int]`.
    BoundedUnsat { max_len: usize, max_int: i64 },
}

impl BoundedVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, BoundedVerdict::Sat(_))
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub max_len: usize,
    pub max_int: i64,
    /// Search nodes before giving up.
    pub budget: u64,
}

impl OracleConfig {
    pub fn new(max_len: usize, max_int: i64) -> Self {
        OracleConfig {
            max_len,
            max_int,
            budget: 50_000_000,
        }
    }
}

/// Bounded search with the default node budget.
pub fn brute_force_solve(f: &Formula, max_len: usize, max_int: i64) -> Result<BoundedVerdict, OracleError> {
    brute_force_with(f, &OracleConfig::new(max_len, max_int))
}

/// Enumerates assignments variable by variable in declaration order: words
/// in shortlex order, integers as `0, 1, -1, 2, …`. The first model found is
/// the lexicographically smallest one within the bounds.
///
/// Two kinds of pruning keep this usable, neither of which changes the
/// order: three-valued evaluation after every assignment, and for variables
/// constrained at top level by `x ∈ R` or `v = …`, skipping values those
/// conjuncts already rule out.
pub fn brute_force_with(f: &Formula, cfg: &OracleConfig) -> Result<BoundedVerdict, OracleError> {
    let mut search = Search::new(f, cfg);
    let order: Vec<VarRef> = f.vars.declaration_order().to_vec();
    let mut domains: Vec<Option<Vec<String>>> = vec![None; f.vars.num_strings()];
    for v in f.vars.str_vars() {
        domains[v.0 as usize] = Some(search.string_domain(v)?);
    }
    let found = search.dfs(&order, 0, &domains)?;
    Ok(if found {
        let mut m = Model::default();
        for v in f.vars.str_vars() {
            m.strings.insert(f.vars.str_name(v).to_string(), search.strs[v.0 as usize].clone().unwrap_or_default());
        }
        for v in f.vars.int_vars() {
            m.ints.insert(f.vars.int_name(v).to_string(), search.ints[v.0 as usize].unwrap_or(0));
        }
        BoundedVerdict::Sat(m)
    } else {
        BoundedVerdict::BoundedUnsat {
            max_len: cfg.max_len,
            max_int: cfg.max_int,
        }
    })
}

fn conjuncts<'a>(e: &'a Expr, out: &mut Vec<&'a Atom>) {
    match e {
        Expr::And(es) => es.iter().for_each(|e| conjuncts(e, out)),
        Expr::Atom(a) => out.push(a),
        _ => {}
    }
}

struct Search<'f> {
    f: &'f Formula,
    cfg: &'f OracleConfig,
    eval: Evaluator<'f>,
    top: Vec<&'f Atom>,
    strs: Vec<Option<String>>,
    ints: Vec<Option<i64>>,
    nodes: u64,
}

impl<'f> Search<'f> {
    fn new(f: &'f Formula, cfg: &'f OracleConfig) -> Self {
        let mut top = Vec::new();
        conjuncts(&f.root, &mut top);
        Search {
            f,
            cfg,
            eval: Evaluator::new(f),
            top,
            strs: vec![None; f.vars.num_strings()],
            ints: vec![None; f.vars.num_ints()],
            nodes: 0,
        }
    }

    fn charge(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.cfg.budget {
            return Err(OracleError::BudgetExceeded(self.cfg.budget));
        }
        Ok(())
    }

    // Words up to max_len in shortlex order, restricted by top-level
    // memberships of `v` alone.
    fn string_domain(&mut self, v: StrVar) -> Result<Vec<String>, OracleError> {
        let regexes: Vec<&Regex> = self
            .top
            .iter()
            .filter_map(|a| match a {
                Atom::Member {
                    pattern,
                    regex,
                    positive: true,
                } if *pattern == Pattern::var(v) => Some(regex),
                _ => None,
            })
            .collect();
        let mut m = RegexMatcher::new(self.f.alphabet.clone());
        let starts: Vec<u32> = regexes.iter().map(|r| m.start(r)).collect();
        let symbols = self.f.alphabet.symbols().to_vec();
        let mut out = Vec::new();
        for len in 0..=self.cfg.max_len {
            let mut word = String::new();
            self.words(&mut m, &symbols, len, &mut word, &starts, &mut out)?;
        }
        Ok(out)
    }

    fn words(
        &mut self,
        m: &mut RegexMatcher,
        symbols: &[char],
        left: usize,
        word: &mut String,
        states: &[u32],
        out: &mut Vec<String>,
    ) -> Result<(), OracleError> {
        self.charge()?;
        if left == 0 {
            if states.iter().all(|&s| m.is_nullable(s)) {
                out.push(word.clone());
            }
            return Ok(());
        }
        for &c in symbols {
            let next: Vec<u32> = states.iter().map(|&s| m.step(s, c)).collect();
            if next.iter().any(|&s| m.is_dead(s)) {
                continue;
            }
            word.push(c);
            self.words(m, symbols, left - 1, word, &next, out)?;
            word.pop();
        }
        Ok(())
    }

    fn term_value(&self, t: &Term) -> Option<Option<BigInt>> {
        Some(match t {
            Term::Int(v) => Some(BigInt::from(self.ints[v.0 as usize]?)),
            Term::Len(v) => Some(BigInt::from(self.strs[v.0 as usize].as_ref()?.chars().count())),
            Term::Num(v) => {
                let w = self.strs[v.0 as usize].as_ref()?;
                bin_value(w).ok().map(BigInt::from)
            }
        })
    }

    fn pattern_value(&self, p: &Pattern) -> Option<String> {
        let mut out = String::new();
        for item in p.items() {
            match item {
                crate::frontend::PatItem::Const(c) => out.push_str(c),
                crate::frontend::PatItem::Var(v) => out.push_str(self.strs[v.0 as usize].as_ref()?),
            }
        }
        Some(out)
    }

    // `Some(None)`: no value can satisfy the conjuncts. `None`: unforced.
    fn forced(&self, v: IntVar) -> Option<Option<i64>> {
        for a in &self.top {
            match a {
                Atom::NumStr {
                    num,
                    pattern,
                    positive: true,
                } if num.as_single_int_var() == Some(v) => {
                    let Some(w) = self.pattern_value(pattern) else { continue };
                    if !is_binary(&w) || (self.f.strict_numstr && w.is_empty()) {
                        return Some(None);
                    }
                    return Some(bin_value(&w).ok().and_then(|n| n.to_i64()));
                }
                Atom::Lin {
                    lhs,
                    rel: Rel::Eq,
                    rhs,
                } => {
                    let e = lhs.sub(rhs);
                    let Some(&a) = e.terms.get(&Term::Int(v)) else { continue };
                    let mut rest = BigInt::from(e.constant);
                    let mut known = true;
                    for (t, &c) in &e.terms {
                        if *t == Term::Int(v) {
                            continue;
                        }
                        match self.term_value(t) {
                            Some(Some(x)) => rest += x * c,
                            Some(None) => return Some(None),
                            None => {
                                known = false;
                                break;
                            }
                        }
                    }
                    if !known {
                        continue;
                    }
                    let a = BigInt::from(a);
                    let neg = -rest;
                    if (&neg % &a) != BigInt::from(0) {
                        return Some(None);
                    }
                    return Some((neg / a).to_i64());
                }
                _ => {}
            }
        }
        None
    }

    fn int_candidates(&self, v: IntVar) -> Vec<i64> {
        let b = self.cfg.max_int;
        match self.forced(v) {
            Some(Some(x)) if x.abs() <= b => vec![x],
            Some(_) => Vec::new(),
            None => {
                let mut out = vec![0];
                for k in 1..=b {
                    out.push(k);
                    out.push(-k);
                }
                out
            }
        }
    }

    fn dfs(&mut self, order: &[VarRef], d: usize, domains: &[Option<Vec<String>>]) -> Result<bool, OracleError> {
        match self.eval.eval_partial(&self.strs, &self.ints) {
            Some(false) => return Ok(false),
            Some(true) => {
                // any completion works; take the smallest one
                for r in &order[d..] {
                    match r {
                        VarRef::Str(v) => {
                            let first = domains[v.0 as usize].as_ref().and_then(|d| d.first()).cloned();
                            self.strs[v.0 as usize] = Some(first.unwrap_or_default());
                        }
                        VarRef::Int(v) => self.ints[v.0 as usize] = Some(0),
                    }
                }
                return Ok(true);
            }
            None => {}
        }
        let Some(&var) = order.get(d) else {
            return Ok(false);
        };
        match var {
            VarRef::Str(v) => {
                let dom = domains[v.0 as usize].as_ref().expect("string domain");
                for w in dom {
                    self.charge()?;
                    self.strs[v.0 as usize] = Some(w.clone());
                    if self.dfs(order, d + 1, domains)? {
                        return Ok(true);
                    }
                }
                self.strs[v.0 as usize] = None;
            }
            VarRef::Int(v) => {
                for x in self.int_candidates(v) {
                    self.charge()?;
                    self.ints[v.0 as usize] = Some(x);
                    if self.dfs(order, d + 1, domains)? {
                        return Ok(true);
                    }
                }
                self.ints[v.0 as usize] = None;
            }
        }
        Ok(false)
    }
}

/// `{ |w| ≤ max_len : w ∈ L(m) }` by a layered walk over state sets.
pub fn nfa_length_set(m: &Nfa, max_len: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut cur = vec![false; m.num_states()];
    if m.num_states() == 0 {
        return out;
    }
    cur[m.initial() as usize] = true;
    for n in 0..=max_len {
        if (0..m.num_states()).any(|q| cur[q] && m.is_final(q as u32)) {
            out.insert(n);
        }
        let mut next = vec![false; m.num_states()];
        for q in 0..m.num_states() {
            if cur[q] {
                for a in 0..m.alphabet().len() {
                    for &t in m.successors(q as u32, a) {
                        next[t as usize] = true;
                    }
                }
            }
        }
        cur = next;
    }
    out
}

/// As [`nfa_length_set`], walking a lazy product.
pub fn product_length_set(p: &mut LazyProduct, max_len: usize) -> Result<BTreeSet<usize>, AutomataError> {
    let mut out = BTreeSet::new();
    let mut cur: BTreeSet<u32> = BTreeSet::from([p.start()]);
    for n in 0..=max_len {
        if cur.iter().any(|&s| p.is_final(s)) {
            out.insert(n);
        }
        let mut next = BTreeSet::new();
        for &s in &cur {
            for a in 0..p.alphabet().len() {
                next.extend(p.successors(s, a)?.iter().copied());
            }
        }
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile_regex;
    use crate::frontend::{parse_script, Alphabet};

    #[test]
    fn worked_example_model() {
        let f = parse_script(
            "(declare-fun x () String)
             (assert (str.in_re x (re.* (str.to_re \"1\"))))
             (assert (numstr 15 x))
             (assert (>= (str.len x) 3))",
        )
        .unwrap();
        match brute_force_solve(&f, 4, 16).unwrap() {
            BoundedVerdict::Sat(m) => assert_eq!(m.strings["x"], "1111"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_intersection() {
        let f = parse_script(
            "(set-info :alphabet \"ab\")
             (declare-fun x () String)
             (assert (str.in_re x (re.* (str.to_re \"a\"))))
             (assert (str.in_re x (re.* (str.to_re \"b\"))))
             (assert (>= (str.len x) 1))",
        )
        .unwrap();
        assert!(!brute_force_solve(&f, 5, 0).unwrap().is_sat());
    }

    #[test]
    fn length_sets() {
        let ab = Alphabet::new(['a', 'b']);
        let odd = compile_regex(
            &Regex::concat(Regex::lit('a'), Regex::star(Regex::word("aa"))),
            &ab,
        )
        .unwrap();
        assert_eq!(nfa_length_set(&odd, 10), BTreeSet::from([1, 3, 5, 7, 9]));
        assert!(nfa_length_set(&compile_regex(&Regex::Empty, &ab).unwrap(), 10).is_empty());
        let all = compile_regex(&Regex::star(Regex::any_char(&ab)), &ab).unwrap();
        assert_eq!(nfa_length_set(&all, 3), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn forced_integers_are_found_beyond_enumeration_order() {
        let f = parse_script(
            "(declare-fun x () String)(declare-fun i () Int)
             (assert (str.in_re x (str.to_re \"1101\")))
             (assert (numstr i x))",
        )
        .unwrap();
        let BoundedVerdict::Sat(m) = brute_force_solve(&f, 4, 20).unwrap() else { panic!() };
        assert_eq!(m.ints["i"], 13);
    }
}
