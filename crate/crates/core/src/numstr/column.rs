//! Synchronized multi-tape search coupling binary arithmetic with per-tape
//! automata.
//!
//! Every tape is read one column at a time, most significant symbol first.
//! Shorter tapes are padded on the left with blanks, which count as `0`, so
//! all tapes end in the same column. For each constraint
//! `Σ a·value(t) + Σ b·len(t) rel c` the search keeps the partial sum
//! `S ← 2S + Σ a·bit` of the binary part. Once `|S|` exceeds
//! `K = Σ|a| + |c|` it can never come back (`2S − Σ|a| > S`), so it is
//! replaced by a sentinel and the state space is finite.
//!
//! Length terms grow by one per column and do not fit that argument. When a
//! constraint has them, the search is run for a fixed number `N` of columns
//! at a time, with `K = Σ|a| + |c| + N·Σ|b|` and the length part kept
//! exactly, for `N = 0, 1, …` up to a horizon.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::automata::{determinize, Nfa, DEFAULT_STATE_BUDGET};
use crate::frontend::{Alphabet, Rel};

use super::NumstrError;

#[derive(Clone, Debug)]
pub enum TapeKind {
    /// A binary word accepted by the automaton (only its `0`/`1`
    /// transitions are used). Its value is the binary value of the word.
    Binary(Nfa),
    /// A signed integer written in binary, with free leading zeros.
    Int,
    /// A word of the automaton's language; only its length is observed.
    Length(Nfa),
}

#[derive(Clone, Debug)]
pub struct Tape {
    pub name: String,
    pub kind: TapeKind,
}

/// `Σ num·value(tape) + Σ len·len(tape) rel rhs`, by tape index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnConstraint {
    pub num: Vec<(usize, i64)>,
    pub len: Vec<(usize, i64)>,
    pub rel: Rel,
    pub rhs: i64,
}

#[derive(Clone, Debug)]
pub struct ColumnAutomaton {
    pub tapes: Vec<Tape>,
    pub constraints: Vec<ColumnConstraint>,
}

#[derive(Clone, Debug)]
pub struct ColumnConfig {
    /// Search states over the whole call.
    pub state_budget: usize,
    /// Largest column count tried when length terms are present.
    pub horizon: usize,
    /// Subset budget for determinizing tape automata.
    pub dfa_budget: usize,
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig {
            state_budget: 1 << 20,
            horizon: 64,
            dfa_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TapeValue {
    Word(String),
    Int(BigInt),
    Length(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnWitness {
    pub columns: usize,
    pub values: Vec<TapeValue>,
}

/// One BFS layer of the search, for debug dumps.
#[derive(Clone, Debug, Serialize)]
pub struct FrontierSnapshot {
    /// Fixed column count, or `None` for the unbounded search.
    pub target_columns: Option<usize>,
    pub depth: usize,
    pub size: usize,
    pub visited: usize,
    pub sample: Vec<StateDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateDump {
    pub started: Vec<bool>,
    pub automata: Vec<u32>,
    pub sums: Vec<String>,
    pub lens: Vec<i64>,
}

const SAMPLE: usize = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Sum {
    Lo,
    Val(i128),
    Hi,
}

impl Sum {
    fn show(self) -> String {
        match self {
            Sum::Lo => "-inf".into(),
            Sum::Hi => "+inf".into(),
            Sum::Val(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    // per tape; int tapes are always started
    started: Vec<bool>,
    // per tape DFA state (0 for int tapes)
    dfa: Vec<u32>,
    // sign per tape (int tapes only)
    neg: Vec<bool>,
    sums: Vec<Sum>,
    lens: Vec<i64>,
}

// symbol written in one column on one tape
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Sym {
    Blank,
    Bit(u8),
    Mark,
}

struct Dfa {
    m: Nfa,
    live: Vec<bool>,
    // symbol index per written symbol: bits for binary tapes, mark for unary
    syms: Vec<Option<usize>>,
}

impl Dfa {
    fn step(&self, q: u32, sym: usize) -> Option<u32> {
        let a = self.syms[sym]?;
        let t = *self.m.successors(q, a).first()?;
        self.live[t as usize].then_some(t)
    }
}

fn restrict(m: &Nfa, alphabet: Alphabet, map: &[Option<usize>]) -> Nfa {
    let mut out = Nfa::new(alphabet, m.num_states(), m.initial());
    for q in m.finals() {
        out.set_final(q, true);
    }
    for (p, a, q) in m.transitions() {
        if let Some(b) = map[a] {
            out.add_transition(p, b, q);
        }
    }
    out
}

fn build_dfa(kind: &TapeKind, budget: usize) -> Result<Option<Dfa>, NumstrError> {
    let (m, syms) = match kind {
        TapeKind::Int => return Ok(None),
        TapeKind::Binary(m) => {
            let bits = Alphabet::new(['0', '1']);
            let map: Vec<Option<usize>> =
                m.alphabet().symbols().iter().map(|&c| bits.index_of(c)).collect();
            (restrict(m, bits, &map), vec![Some(0), Some(1)])
        }
        TapeKind::Length(m) => {
            let unary = Alphabet::new(['#']);
            let map = vec![Some(0); m.alphabet().len()];
            (restrict(m, unary, &map), vec![Some(0)])
        }
    };
    let d = determinize(&m, budget).map_err(|_| NumstrError::BudgetExceeded(budget))?;
    let live = d.coreachable();
    Ok(Some(Dfa { m: d, live, syms }))
}

struct Search<'a> {
    problem: &'a ColumnAutomaton,
    dfas: Vec<Option<Dfa>>,
    bound: Vec<i128>,
    cfg: &'a ColumnConfig,
    visited: usize,
    trace: Option<&'a mut Vec<FrontierSnapshot>>,
}

impl Search<'_> {
    fn initial_states(&self) -> Vec<State> {
        let n = self.problem.tapes.len();
        let ints: Vec<usize> = (0..n)
            .filter(|&t| matches!(self.problem.tapes[t].kind, TapeKind::Int))
            .collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << ints.len()) {
            let mut neg = vec![false; n];
            for (k, &t) in ints.iter().enumerate() {
                neg[t] = mask >> k & 1 == 1;
            }
            out.push(State {
                started: (0..n).map(|t| self.dfas[t].is_none()).collect(),
                dfa: (0..n)
                    .map(|t| self.dfas[t].as_ref().map_or(0, |d| d.m.initial()))
                    .collect(),
                neg,
                sums: vec![Sum::Val(0); self.problem.constraints.len()],
                lens: vec![0; self.problem.constraints.len()],
            });
        }
        out
    }

    fn accepting(&self, s: &State) -> bool {
        for (t, d) in self.dfas.iter().enumerate() {
            if let Some(d) = d {
                if !d.m.is_final(s.dfa[t]) {
                    return false;
                }
            }
        }
        self.problem.constraints.iter().enumerate().all(|(j, c)| {
            let rhs = c.rhs as i128;
            match s.sums[j] {
                Sum::Hi => matches!(c.rel, Rel::Ge | Rel::Ne),
                Sum::Lo => matches!(c.rel, Rel::Le | Rel::Ne),
                Sum::Val(v) => c.rel.holds(v + s.lens[j] as i128, rhs),
            }
        })
    }

    fn choices(&self, s: &State, t: usize) -> &'static [Sym] {
        match (&self.problem.tapes[t].kind, s.started[t]) {
            (TapeKind::Int, _) => &[Sym::Bit(0), Sym::Bit(1)],
            (TapeKind::Binary(_), false) => &[Sym::Blank, Sym::Bit(0), Sym::Bit(1)],
            (TapeKind::Binary(_), true) => &[Sym::Bit(0), Sym::Bit(1)],
            (TapeKind::Length(_), false) => &[Sym::Blank, Sym::Mark],
            (TapeKind::Length(_), true) => &[Sym::Mark],
        }
    }

    fn step(&self, s: &State, column: &[Sym]) -> Option<State> {
        let mut next = s.clone();
        for (t, &sym) in column.iter().enumerate() {
            let idx = match sym {
                Sym::Blank => continue,
                Sym::Bit(b) => b as usize,
                Sym::Mark => 0,
            };
            next.started[t] = true;
            if let Some(d) = &self.dfas[t] {
                next.dfa[t] = d.step(s.dfa[t], idx)?;
            }
        }
        for (j, c) in self.problem.constraints.iter().enumerate() {
            let mut bits: i128 = 0;
            for &(t, a) in &c.num {
                if let Sym::Bit(1) = column[t] {
                    bits += if next.neg[t] { -(a as i128) } else { a as i128 };
                }
            }
            next.sums[j] = match s.sums[j] {
                Sum::Val(v) => {
                    let v = 2 * v + bits;
                    if v > self.bound[j] {
                        Sum::Hi
                    } else if v < -self.bound[j] {
                        Sum::Lo
                    } else {
                        Sum::Val(v)
                    }
                }
                other => other,
            };
            for &(t, b) in &c.len {
                if next.started[t] {
                    next.lens[j] += b;
                }
            }
        }
        Some(next)
    }

    // all columns for state `s`, in canonical order
    fn columns(&self, s: &State) -> Vec<Vec<Sym>> {
        let mut out: Vec<Vec<Sym>> = vec![Vec::new()];
        for t in 0..self.problem.tapes.len() {
            let opts = self.choices(s, t);
            out = out
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&o| {
                        let mut c = c.clone();
                        c.push(o);
                        c
                    })
                })
                .collect();
        }
        out
    }

    fn snapshot(&mut self, target: Option<usize>, depth: usize, layer: &[usize], states: &[State]) {
        let visited = self.visited;
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.push(FrontierSnapshot {
                target_columns: target,
                depth,
                size: layer.len(),
                visited,
                sample: layer
                    .iter()
                    .take(SAMPLE)
                    .map(|&i| {
                        let s = &states[i];
                        StateDump {
                            started: s.started.clone(),
                            automata: s.dfa.clone(),
                            sums: s.sums.iter().map(|v| v.show()).collect(),
                            lens: s.lens.clone(),
                        }
                    })
                    .collect(),
            });
        }
    }

    fn witness(&self, parents: &[(usize, Vec<Sym>)], states: &[State], mut i: usize) -> ColumnWitness {
        let mut cols: Vec<Vec<Sym>> = Vec::new();
        while parents[i].0 != usize::MAX {
            cols.push(parents[i].1.clone());
            i = parents[i].0;
        }
        cols.reverse();
        let last = &states[i];
        let values = self
            .problem
            .tapes
            .iter()
            .enumerate()
            .map(|(t, tape)| {
                let syms = cols.iter().map(|c| c[t]);
                match tape.kind {
                    TapeKind::Binary(_) => TapeValue::Word(
                        syms.filter_map(|s| match s {
                            Sym::Bit(b) => Some(if b == 1 { '1' } else { '0' }),
                            _ => None,
                        })
                        .collect(),
                    ),
                    TapeKind::Int => {
                        let mut v = BigUint::zero();
                        for s in syms {
                            v <<= 1u32;
                            if s == Sym::Bit(1) {
                                v += 1u32;
                            }
                        }
                        let v = BigInt::from(v);
                        TapeValue::Int(if last.neg[t] { -v } else { v })
                    }
                    TapeKind::Length(_) => TapeValue::Length(syms.filter(|&s| s == Sym::Mark).count() as u64),
                }
            })
            .collect();
        ColumnWitness {
            columns: cols.len(),
            values,
        }
    }

    fn charge(&mut self) -> Result<(), NumstrError> {
        self.visited += 1;
        if self.visited > self.cfg.state_budget {
            return Err(NumstrError::BudgetExceeded(self.cfg.state_budget));
        }
        Ok(())
    }

    // BFS with memoization over all states; complete when no length terms.
    fn unbounded(&mut self) -> Result<Option<ColumnWitness>, NumstrError> {
        let mut states: Vec<State> = Vec::new();
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut parents: Vec<(usize, Vec<Sym>)> = Vec::new();
        let mut layer = Vec::new();
        for s in self.initial_states() {
            if !index.contains_key(&s) {
                self.charge()?;
                index.insert(s.clone(), states.len());
                layer.push(states.len());
                states.push(s);
                parents.push((usize::MAX, Vec::new()));
            }
        }
        let mut depth = 0;
        while !layer.is_empty() {
            self.snapshot(None, depth, &layer, &states);
            for &i in &layer {
                if self.accepting(&states[i]) {
                    return Ok(Some(self.witness(&parents, &states, i)));
                }
            }
            let mut next_layer = Vec::new();
            for &i in &layer {
                for col in self.columns(&states[i]) {
                    let Some(t) = self.step(&states[i], &col) else { continue };
                    if index.contains_key(&t) {
                        continue;
                    }
                    self.charge()?;
                    index.insert(t.clone(), states.len());
                    next_layer.push(states.len());
                    states.push(t);
                    parents.push((i, col));
                }
            }
            layer = next_layer;
            depth += 1;
        }
        Ok(None)
    }

    // exactly `n` columns
    fn fixed(&mut self, n: usize) -> Result<Option<ColumnWitness>, NumstrError> {
        let mut states: Vec<State> = Vec::new();
        let mut parents: Vec<(usize, Vec<Sym>)> = Vec::new();
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut layer = Vec::new();
        for s in self.initial_states() {
            if !index.contains_key(&s) {
                self.charge()?;
                index.insert(s.clone(), states.len());
                layer.push(states.len());
                states.push(s);
                parents.push((usize::MAX, Vec::new()));
            }
        }
        for depth in 0..n {
            self.snapshot(Some(n), depth, &layer, &states);
            let mut seen: HashMap<State, usize> = HashMap::new();
            let mut next_layer = Vec::new();
            for &i in &layer {
                for col in self.columns(&states[i]) {
                    let Some(t) = self.step(&states[i], &col) else { continue };
                    if seen.contains_key(&t) {
                        continue;
                    }
                    self.charge()?;
                    seen.insert(t.clone(), states.len());
                    next_layer.push(states.len());
                    states.push(t);
                    parents.push((i, col));
                }
            }
            layer = next_layer;
        }
        self.snapshot(Some(n), n, &layer, &states);
        for &i in &layer {
            if self.accepting(&states[i]) {
                return Ok(Some(self.witness(&parents, &states, i)));
            }
        }
        Ok(None)
    }
}

/// Searches for tape contents satisfying every constraint and every tape
/// automaton. `Ok(None)` means no such contents exist. With length terms the
/// search is bounded by the horizon, and running past it is reported as
/// `BudgetExceeded`.
pub fn multitape_emptiness(
    problem: &ColumnAutomaton,
    cfg: &ColumnConfig,
) -> Result<Option<ColumnWitness>, NumstrError> {
    run(problem, cfg, None)
}

/// As [`multitape_emptiness`], recording every BFS layer.
pub fn multitape_emptiness_traced(
    problem: &ColumnAutomaton,
    cfg: &ColumnConfig,
    trace: &mut Vec<FrontierSnapshot>,
) -> Result<Option<ColumnWitness>, NumstrError> {
    run(problem, cfg, Some(trace))
}

fn run(
    problem: &ColumnAutomaton,
    cfg: &ColumnConfig,
    trace: Option<&mut Vec<FrontierSnapshot>>,
) -> Result<Option<ColumnWitness>, NumstrError> {
    let dfas = problem
        .tapes
        .iter()
        .map(|t| build_dfa(&t.kind, cfg.dfa_budget))
        .collect::<Result<Vec<_>, _>>()?;
    // a tape whose automaton accepts nothing empties the search
    for d in dfas.iter().flatten() {
        if !d.live[d.m.initial() as usize] {
            return Ok(None);
        }
    }
    let abs_sum = |v: &[(usize, i64)]| v.iter().map(|&(_, a)| (a as i128).abs()).sum::<i128>();
    let with_len = problem.constraints.iter().any(|c| c.len.iter().any(|&(_, b)| b != 0));
    let mut search = Search {
        problem,
        dfas,
        bound: Vec::new(),
        cfg,
        visited: 0,
        trace,
    };
    if !with_len {
        search.bound = problem
            .constraints
            .iter()
            .map(|c| abs_sum(&c.num) + (c.rhs as i128).abs())
            .collect();
        return search.unbounded();
    }
    for n in 0..=cfg.horizon {
        search.bound = problem
            .constraints
            .iter()
            .map(|c| abs_sum(&c.num) + (c.rhs as i128).abs() + n as i128 * abs_sum(&c.len))
            .collect();
        if let Some(w) = search.fixed(n)? {
            return Ok(Some(w));
        }
    }
    Err(NumstrError::BudgetExceeded(search.visited))
}
