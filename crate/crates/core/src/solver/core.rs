//! Solving one atom list: occurrence plans, per-variable products, the
//! arithmetic side and model reconstruction.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use crate::arith::{solve_linear_system, ArithError, LinConstraint, LinearSystem};
use crate::automata::{is_empty, AutomataError, LazyProduct};
use crate::frontend::{Alphabet, StrVar, Term, VarTable};
use crate::lengths::product_length_abstraction;
use crate::numstr::{
    multitape_emptiness, multitape_emptiness_traced, ColumnAutomaton, ColumnConstraint, NumstrError, Tape,
    TapeKind, TapeValue,
};
use crate::semantics::Model;

use super::lists::{AtomLists, LinearAtom};
use super::plan::{atom_machines, var_product, AtomMachine, OccurrencePlan, PlanError, PlanSearch};
use super::reconstruct::word_of_length;
use super::{SolveStats, SolverConfig, UnknownReason};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ListOutcome {
    Sat(Model),
    Unsat,
    Unknown(UnknownReason),
}

impl From<AutomataError> for UnknownReason {
    fn from(_: AutomataError) -> Self {
        UnknownReason::BudgetExceeded
    }
}

impl From<ArithError> for UnknownReason {
    fn from(_: ArithError) -> Self {
        UnknownReason::BudgetExceeded
    }
}

impl From<NumstrError> for UnknownReason {
    fn from(_: NumstrError) -> Self {
        UnknownReason::BudgetExceeded
    }
}

// A node of the constraint graph: a string variable (through len or Num)
// or an integer variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Node {
    Str(u32),
    Int(u32),
}

fn node(t: &Term) -> Node {
    match t {
        Term::Int(v) => Node::Int(v.0),
        Term::Len(x) | Term::Num(x) => Node::Str(x.0),
    }
}

// Groups linear atoms into connected components over shared variables.
fn components(linear: &[LinearAtom]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..linear.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut owner: BTreeMap<Node, usize> = BTreeMap::new();
    for (i, l) in linear.iter().enumerate() {
        for t in l.coeffs.keys() {
            match owner.get(&node(t)) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    owner.insert(node(t), i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..linear.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

struct PlanSolver<'a> {
    vars: &'a VarTable,
    alphabet: &'a Alphabet,
    lists: &'a AtomLists,
    machines: &'a [AtomMachine],
    cfg: &'a SolverConfig,
    stats: &'a mut SolveStats,
}

enum Assigned {
    Word(String),
    Length(u64),
}

impl PlanSolver<'_> {
    fn product(&mut self, plan: &OccurrencePlan, x: StrVar) -> LazyProduct {
        self.stats.products += 1;
        var_product(self.alphabet, self.machines, plan.segments_of(x), self.cfg.state_budget)
    }

    fn solve(&mut self, plan: &OccurrencePlan) -> Result<ListOutcome, UnknownReason> {
        let mut products: Vec<LazyProduct> = (0..self.vars.num_strings() as u32)
            .map(|x| self.product(plan, StrVar(x)))
            .collect();
        let r = self.solve_with(plan, &mut products);
        self.stats.expansions += products.iter().map(LazyProduct::expanded).sum::<usize>();
        r
    }

    fn solve_with(
        &mut self,
        plan: &OccurrencePlan,
        products: &mut [LazyProduct],
    ) -> Result<ListOutcome, UnknownReason> {
        let mut shortest: Vec<Option<String>> = vec![None; products.len()];
        let constrained: BTreeSet<u32> = plan.segments.iter().map(|s| s.var.0).collect();
        for &x in &constrained {
            match is_empty(&mut products[x as usize])? {
                (true, _) => return Ok(ListOutcome::Unsat),
                (false, w) => shortest[x as usize] = w,
            }
        }
        let mut strs: BTreeMap<u32, Assigned> = BTreeMap::new();
        let mut ints: BTreeMap<u32, i64> = BTreeMap::new();
        for comp in components(&self.lists.linear) {
            let atoms: Vec<&LinearAtom> = comp.iter().map(|&i| &self.lists.linear[i]).collect();
            let has_num = atoms.iter().any(|l| l.num_vars().next().is_some());
            let ok = if has_num {
                self.column(&atoms, products, &mut strs, &mut ints)?
            } else {
                self.arith(&atoms, products, &mut strs, &mut ints)?
            };
            if !ok {
                return Ok(ListOutcome::Unsat);
            }
        }
        let mut model = Model::default();
        for x in 0..products.len() as u32 {
            let w = match strs.remove(&x) {
                Some(Assigned::Word(w)) => w,
                Some(Assigned::Length(n)) => {
                    if n > self.cfg.max_word_len {
                        return Err(UnknownReason::BudgetExceeded);
                    }
                    word_of_length(&mut products[x as usize], n)?.ok_or(UnknownReason::InternalInconsistency)?
                }
                None => shortest[x as usize].take().unwrap_or_default(),
            };
            model.strings.insert(self.vars.str_name(StrVar(x)).to_string(), w);
        }
        for v in self.vars.int_vars() {
            let val = ints.get(&v.0).copied().unwrap_or(0);
            model.ints.insert(self.vars.int_name(v).to_string(), val);
        }
        Ok(ListOutcome::Sat(model))
    }

    fn arith(
        &mut self,
        atoms: &[&LinearAtom],
        products: &mut [LazyProduct],
        strs: &mut BTreeMap<u32, Assigned>,
        ints: &mut BTreeMap<u32, i64>,
    ) -> Result<bool, UnknownReason> {
        let mut sys = LinearSystem::new();
        let mut index: BTreeMap<Node, usize> = BTreeMap::new();
        let nodes: BTreeSet<Node> = atoms.iter().flat_map(|l| l.coeffs.keys().map(node)).collect();
        for &n in &nodes {
            let i = match n {
                Node::Str(x) => {
                    let set = product_length_abstraction(&mut products[x as usize])?;
                    sys.add_len_var(format!("len({})", self.vars.str_name(StrVar(x))), set)
                }
                Node::Int(v) => sys.add_var(self.vars.int_name(crate::frontend::IntVar(v)), false),
            };
            index.insert(n, i);
        }
        for l in atoms {
            sys.add_constraint(LinConstraint::new(
                l.coeffs.iter().map(|(t, &c)| (index[&node(t)], c)).collect(),
                l.rel,
                l.rhs,
            ));
        }
        let Some(values) = solve_linear_system(&sys, &self.cfg.arith)? else {
            return Ok(false);
        };
        for (&n, &i) in &index {
            match n {
                Node::Str(x) => {
                    strs.insert(x, Assigned::Length(values[i] as u64));
                }
                Node::Int(v) => {
                    ints.insert(v, values[i]);
                }
            }
        }
        Ok(true)
    }

    fn column(
        &mut self,
        atoms: &[&LinearAtom],
        products: &mut [LazyProduct],
        strs: &mut BTreeMap<u32, Assigned>,
        ints: &mut BTreeMap<u32, i64>,
    ) -> Result<bool, UnknownReason> {
        let num: BTreeSet<u32> = atoms.iter().flat_map(|l| l.num_vars()).map(|x| x.0).collect();
        let nodes: BTreeSet<Node> = atoms.iter().flat_map(|l| l.coeffs.keys().map(node)).collect();
        let mut tapes = Vec::new();
        let mut index: BTreeMap<Node, usize> = BTreeMap::new();
        for &n in &nodes {
            let tape = match n {
                Node::Str(x) => {
                    let m = products[x as usize].to_nfa()?;
                    let name = self.vars.str_name(StrVar(x)).to_string();
                    if num.contains(&x) {
                        Tape { name, kind: TapeKind::Binary(m) }
                    } else {
                        Tape { name, kind: TapeKind::Length(m) }
                    }
                }
                Node::Int(v) => Tape {
                    name: self.vars.int_name(crate::frontend::IntVar(v)).to_string(),
                    kind: TapeKind::Int,
                },
            };
            index.insert(n, tapes.len());
            tapes.push(tape);
        }
        let constraints = atoms
            .iter()
            .map(|l| {
                let mut c = ColumnConstraint {
                    num: Vec::new(),
                    len: Vec::new(),
                    rel: l.rel,
                    rhs: l.rhs,
                };
                for (t, &k) in &l.coeffs {
                    let i = index[&node(t)];
                    match t {
                        Term::Len(_) => c.len.push((i, k)),
                        Term::Num(_) | Term::Int(_) => c.num.push((i, k)),
                    }
                }
                c
            })
            .collect();
        let problem = ColumnAutomaton { tapes, constraints };
        let r = if self.cfg.trace_frontier {
            multitape_emptiness_traced(&problem, &self.cfg.column, &mut self.stats.frontier)
        } else {
            multitape_emptiness(&problem, &self.cfg.column)
        };
        let Some(w) = r? else {
            return Ok(false);
        };
        for (&n, &i) in &index {
            match (n, &w.values[i]) {
                (Node::Str(x), TapeValue::Word(s)) => {
                    strs.insert(x, Assigned::Word(s.clone()));
                }
                (Node::Str(x), TapeValue::Length(k)) => {
                    strs.insert(x, Assigned::Length(*k));
                }
                (Node::Int(v), TapeValue::Int(k)) => {
                    ints.insert(v, k.to_i64().ok_or(UnknownReason::BudgetExceeded)?);
                }
                _ => return Err(UnknownReason::InternalInconsistency),
            }
        }
        Ok(true)
    }
}

/// Decides one atom list. `Unsat` means no assignment satisfies every atom
/// of the list.
pub fn solve_atom_lists(
    vars: &VarTable,
    alphabet: &Alphabet,
    lists: &AtomLists,
    cfg: &SolverConfig,
    stats: &mut SolveStats,
) -> ListOutcome {
    match run(vars, alphabet, lists, cfg, stats) {
        Ok(o) => o,
        Err(r) => ListOutcome::Unknown(r),
    }
}

fn run(
    vars: &VarTable,
    alphabet: &Alphabet,
    lists: &AtomLists,
    cfg: &SolverConfig,
    stats: &mut SolveStats,
) -> Result<ListOutcome, UnknownReason> {
    stats.atom_lists += 1;
    let machines = atom_machines(lists, cfg.state_budget)?;
    let mut search = PlanSearch::new(lists, alphabet, &machines, cfg.state_budget, cfg.max_plans)
        .map_err(|_| UnknownReason::BudgetExceeded)?;
    let mut unknown = None;
    let mut plans = 0;
    loop {
        let next = search.next_plan();
        stats.products += std::mem::take(&mut search.counters.products);
        stats.expansions += std::mem::take(&mut search.counters.expansions);
        let plan = match next {
            Ok(Some(p)) => p,
            Ok(None) => break,
            Err(PlanError::Automata(e)) => return Err(e.into()),
            Err(PlanError::TooManyChains) => return Err(UnknownReason::BudgetExceeded),
        };
        plans += 1;
        stats.plans += 1;
        if plans > cfg.max_plans || cfg.out_of_time() {
            return Err(UnknownReason::BudgetExceeded);
        }
        let mut ps = PlanSolver {
            vars,
            alphabet,
            lists,
            machines: &machines,
            cfg,
            stats,
        };
        match ps.solve(&plan) {
            Ok(ListOutcome::Sat(m)) => return Ok(ListOutcome::Sat(m)),
            Ok(ListOutcome::Unsat) => {}
            Ok(ListOutcome::Unknown(r)) | Err(r) => unknown = Some(r),
        }
    }
    Ok(match unknown {
        Some(r) => ListOutcome::Unknown(r),
        None => ListOutcome::Unsat,
    })
}
