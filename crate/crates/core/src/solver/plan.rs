//! Occurrence plans: for every variable occurrence in a regular atom, the
//! automaton states its subword starts and ends in.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{determinize_complement, AutomataError, LazyProduct, Member, Mode, Nfa};
use crate::frontend::{Alphabet, PatItem, Pattern, StrVar};

use super::lists::AtomLists;

/// The subword of `var` at one occurrence in atom `atom` runs from `start` to
/// `end` (`None`: the initial state, resp. any final state).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub atom: usize,
    pub var: StrVar,
    pub start: Option<u32>,
    pub end: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrencePlan {
    pub segments: Vec<Segment>,
}

impl OccurrencePlan {
    pub fn segments_of(&self, x: StrVar) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(move |s| s.var == x)
    }
}

/// The automaton the segments of one atom run on.
#[derive(Clone, Debug)]
pub struct AtomMachine {
    pub nfa: Arc<Nfa>,
    pub mode: Mode,
}

impl AtomMachine {
    fn member(&self, s: &Segment) -> Member {
        Member {
            nfa: self.nfa.clone(),
            mode: self.mode,
            start: s.start,
            end: s.end,
        }
    }
}

/// A negative atom over a single variable complements its automaton inside
/// the product. Any other negative atom is run on the complete complement
/// automaton, whose determinism makes the chaining below exact.
pub fn atom_machines(lists: &AtomLists, budget: usize) -> Result<Vec<AtomMachine>, AutomataError> {
    let mut complements: HashMap<*const Nfa, Arc<Nfa>> = HashMap::new();
    lists
        .regular
        .iter()
        .map(|a| {
            Ok(match (a.positive, a.pattern.as_single_var()) {
                (true, _) => AtomMachine {
                    nfa: a.automaton.clone(),
                    mode: Mode::AsIs,
                },
                (false, Some(_)) => AtomMachine {
                    nfa: a.automaton.clone(),
                    mode: Mode::DeterminizedComplemented,
                },
                (false, None) => {
                    let key = Arc::as_ptr(&a.automaton);
                    let nfa = match complements.get(&key) {
                        Some(d) => d.clone(),
                        None => {
                            let d = Arc::new(determinize_complement(&a.automaton, budget)?);
                            complements.insert(key, d.clone());
                            d
                        }
                    };
                    AtomMachine { nfa, mode: Mode::AsIs }
                }
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TooManyChains;

struct Chainer<'a> {
    m: &'a Nfa,
    atom: usize,
    items: &'a [PatItem],
    reach: HashMap<u32, Vec<bool>>,
    co: Vec<bool>,
    limit: usize,
    out: Vec<Vec<Segment>>,
}

impl Chainer<'_> {
    fn go(&mut self, idx: usize, q: u32, acc: &mut Vec<Segment>) -> Result<(), TooManyChains> {
        if idx == self.items.len() {
            if self.m.is_final(q) {
                if self.out.len() >= self.limit {
                    return Err(TooManyChains);
                }
                self.out.push(acc.clone());
            }
            return Ok(());
        }
        match &self.items[idx] {
            PatItem::Const(w) => {
                let Some(syms) = self.m.alphabet().encode(w) else {
                    return Ok(());
                };
                for q2 in self.m.run_from(q, &syms) {
                    self.go(idx + 1, q2, acc)?;
                }
            }
            PatItem::Var(x) if idx + 1 == self.items.len() => {
                acc.push(Segment {
                    atom: self.atom,
                    var: *x,
                    start: Some(q),
                    end: None,
                });
                if self.out.len() >= self.limit {
                    return Err(TooManyChains);
                }
                self.out.push(acc.clone());
                acc.pop();
            }
            PatItem::Var(x) => {
                let m = self.m;
                let reach = self.reach.entry(q).or_insert_with(|| m.reachable_from(q)).clone();
                for q2 in 0..m.num_states() as u32 {
                    if !reach[q2 as usize] || !self.co[q2 as usize] {
                        continue;
                    }
                    acc.push(Segment {
                        atom: self.atom,
                        var: *x,
                        start: Some(q),
                        end: Some(q2),
                    });
                    self.go(idx + 1, q2, acc)?;
                    acc.pop();
                }
            }
        }
        Ok(())
    }
}

/// Every chain of state choices for one atom that is consistent with
/// reachability and with the constant parts of the pattern.
pub fn atom_chains(
    machine: &AtomMachine,
    pattern: &Pattern,
    atom: usize,
    limit: usize,
) -> Result<Vec<Vec<Segment>>, TooManyChains> {
    if let Some(x) = pattern.as_single_var() {
        return Ok(vec![vec![Segment {
            atom,
            var: x,
            start: None,
            end: None,
        }]]);
    }
    debug_assert_eq!(machine.mode, Mode::AsIs);
    let m = &*machine.nfa;
    let mut c = Chainer {
        m,
        atom,
        items: pattern.items(),
        reach: HashMap::new(),
        co: m.coreachable(),
        limit,
        out: Vec::new(),
    };
    c.go(0, m.initial(), &mut Vec::new())?;
    Ok(c.out)
}

/// The product `A_x` of one member per occurrence of `x`. A variable without
/// occurrences gets the product of no members, which accepts every word.
pub fn var_product<'a>(
    alphabet: &Alphabet,
    machines: &[AtomMachine],
    segments: impl IntoIterator<Item = &'a Segment>,
    budget: usize,
) -> LazyProduct {
    let members = segments
        .into_iter()
        .map(|s| machines[s.atom].member(s))
        .collect();
    LazyProduct::with_budget(alphabet.clone(), members, budget)
}

/// Counters shared with the caller.
#[derive(Clone, Debug, Default)]
pub struct PlanCounters {
    pub products: usize,
    pub expansions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanError {
    Automata(AutomataError),
    TooManyChains,
}

/// Depth-first enumeration of plans. After each choice involving a
/// variable split across states, the partial product for that variable is
/// checked for emptiness, and empty partial products cut the search.
pub struct PlanSearch<'a> {
    alphabet: Alphabet,
    machines: &'a [AtomMachine],
    budget: usize,
    // atom order and per-atom chains, fewest chains first
    chains: Vec<Vec<Vec<Segment>>>,
    next: Vec<usize>,
    chosen: Vec<Segment>,
    marks: Vec<usize>,
    cache: HashMap<Vec<Segment>, bool>,
    pub counters: PlanCounters,
    started: bool,
}

impl<'a> PlanSearch<'a> {
    pub fn new(
        lists: &AtomLists,
        alphabet: &Alphabet,
        machines: &'a [AtomMachine],
        budget: usize,
        chain_limit: usize,
    ) -> Result<Self, PlanError> {
        let mut chains = Vec::new();
        for (i, a) in lists.regular.iter().enumerate() {
            chains.push(atom_chains(&machines[i], &a.pattern, i, chain_limit).map_err(|_| PlanError::TooManyChains)?);
        }
        chains.sort_by_key(|c| c.len());
        Ok(PlanSearch {
            alphabet: alphabet.clone(),
            machines,
            budget,
            chains,
            next: Vec::new(),
            chosen: Vec::new(),
            marks: Vec::new(),
            cache: HashMap::new(),
            counters: PlanCounters::default(),
            started: false,
        })
    }

    fn consistent(&mut self, added: &[Segment]) -> Result<bool, AutomataError> {
        for s in added {
            if s.start.is_none() {
                continue;
            }
            let mut key: Vec<Segment> = self.chosen.iter().filter(|t| t.var == s.var).cloned().collect();
            key.sort();
            if let Some(&ok) = self.cache.get(&key) {
                if !ok {
                    return Ok(false);
                }
                continue;
            }
            let mut p = var_product(&self.alphabet, self.machines, &key, self.budget);
            let ok = p.shortest_witness().map(|w| w.is_some());
            self.counters.products += 1;
            self.counters.expansions += p.expanded();
            let ok = ok?;
            self.cache.insert(key, ok);
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // Pops the deepest level.
    fn pop(&mut self) {
        self.next.pop();
        let mark = self.marks.pop().expect("level mark");
        self.chosen.truncate(mark);
    }

    /// Next plan, or `None` when exhausted.
    pub fn next_plan(&mut self) -> Result<Option<OccurrencePlan>, PlanError> {
        if !self.started {
            self.started = true;
            if self.chains.iter().any(|c| c.is_empty()) {
                return Ok(None);
            }
            self.next.push(0);
            self.marks.push(0);
        } else if self.next.is_empty() {
            return Ok(None);
        } else if self.chains.is_empty() {
            // the single empty plan was already produced
            self.next.clear();
            return Ok(None);
        } else {
            // resume: undo the last full choice
            let mark = *self.marks.last().expect("level");
            self.chosen.truncate(mark);
        }
        if self.chains.is_empty() {
            return Ok(Some(OccurrencePlan::default()));
        }
        loop {
            let depth = self.next.len() - 1;
            let k = self.next[depth];
            if k >= self.chains[depth].len() {
                self.pop();
                if self.next.is_empty() {
                    return Ok(None);
                }
                let d = self.next.len() - 1;
                self.next[d] += 1;
                let mark = self.marks[d];
                self.chosen.truncate(mark);
                continue;
            }
            let chain = self.chains[depth][k].clone();
            self.chosen.extend(chain.iter().cloned());
            if !self.consistent(&chain).map_err(PlanError::Automata)? {
                self.chosen.truncate(self.marks[depth]);
                self.next[depth] += 1;
                continue;
            }
            if depth + 1 == self.chains.len() {
                let plan = OccurrencePlan {
                    segments: self.chosen.clone(),
                };
                self.next[depth] += 1;
                return Ok(Some(plan));
            }
            self.next.push(0);
            self.marks.push(self.chosen.len());
        }
    }
}

/// All plans for `lists`, pruned by reachability, by simulation of the
/// constant segments and by emptiness of the partial products.
pub fn plan_occurrences(
    lists: &AtomLists,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<Vec<OccurrencePlan>, PlanError> {
    let machines = atom_machines(lists, budget).map_err(PlanError::Automata)?;
    let mut search = PlanSearch::new(lists, alphabet, &machines, budget, usize::MAX)?;
    let mut out = Vec::new();
    while let Some(p) = search.next_plan()? {
        out.push(p);
    }
    Ok(out)
}

/// The product automaton `A_x` for `x` under `plan`.
pub fn build_var_automaton(
    x: StrVar,
    plan: &OccurrencePlan,
    lists: &AtomLists,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<LazyProduct, AutomataError> {
    let machines = atom_machines(lists, budget)?;
    Ok(var_product(alphabet, &machines, plan.segments_of(x), budget))
}
