//! Boolean skeletons: truth assignments to the atoms of a formula under
//! which its propositional structure holds.

use std::collections::HashMap;

use crate::frontend::{Atom, Expr};

/// Distinct atoms of `e` in order of first occurrence.
pub fn distinct_atoms(e: &Expr) -> Vec<Atom> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for a in e.atoms() {
        if !seen.contains_key(a) {
            seen.insert(a.clone(), out.len());
            out.push(a.clone());
        }
    }
    out
}

/// One skeleton: each listed atom with the truth value it must take.
pub type Skeleton = Vec<(Atom, bool)>;

/// Depth-first search over atom valuations with three-valued pruning.
///
/// With `total` set every satisfying total assignment is produced. Without
/// it the search stops extending an assignment as soon as the formula is
/// already true, so each model of the formula satisfies at least one of the
/// (usually far fewer) partial assignments produced.
pub struct Skeletons {
    expr: Expr,
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    total: bool,
    // DFS stack: current partial assignment, next value to try per level
    values: Vec<Option<bool>>,
    stack: Vec<u8>,
    done: bool,
}

impl Skeletons {
    pub fn new(expr: &Expr, total: bool) -> Self {
        let atoms = distinct_atoms(expr);
        let index = atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Skeletons {
            expr: expr.clone(),
            values: vec![None; atoms.len()],
            atoms,
            index,
            total,
            stack: Vec::new(),
            done: false,
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    fn eval(&self) -> Option<bool> {
        self.expr.eval3(&mut |a| self.values[self.index[a]])
    }

    fn emit(&self) -> Skeleton {
        self.atoms
            .iter()
            .zip(&self.values)
            .filter_map(|(a, v)| v.map(|v| (a.clone(), v)))
            .collect()
    }

    // Backtracks to the next untried branch; false when exhausted.
    fn advance(&mut self) -> bool {
        while let Some(tried) = self.stack.pop() {
            let d = self.stack.len();
            if tried == 1 {
                // tried `true`, now `false`
                self.values[d] = Some(false);
                self.stack.push(2);
                return true;
            }
            self.values[d] = None;
        }
        false
    }
}

impl Iterator for Skeletons {
    type Item = Skeleton;

    fn next(&mut self) -> Option<Skeleton> {
        if self.done {
            return None;
        }
        // resume after the previous emission
        let mut fresh = self.stack.is_empty() && self.values.iter().all(Option::is_none);
        loop {
            if !fresh && !self.advance() {
                self.done = true;
                return None;
            }
            fresh = false;
            // descend
            loop {
                match self.eval() {
                    Some(false) => break,
                    Some(true) if !self.total || self.stack.len() == self.atoms.len() => {
                        return Some(self.emit());
                    }
                    _ => {}
                }
                let d = self.stack.len();
                if d == self.atoms.len() {
                    break;
                }
                self.values[d] = Some(true);
                self.stack.push(1);
            }
        }
    }
}

/// Every total truth assignment to the distinct atoms of `e` under which `e`
/// evaluates to true.
pub fn enumerate_boolean_skeletons(e: &Expr) -> Skeletons {
    Skeletons::new(e, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{LinExpr, Rel, Term, VarTable, Sort, VarRef};

    fn atoms(n: usize) -> Vec<Expr> {
        let mut t = VarTable::new();
        (0..n)
            .map(|i| {
                let VarRef::Int(v) = t.declare(&format!("i{i}"), Sort::Int).unwrap() else { unreachable!() };
                Expr::atom(Atom::Lin {
                    lhs: LinExpr::term(Term::Int(v)),
                    rel: Rel::Ge,
                    rhs: LinExpr::constant(0),
                })
            })
            .collect()
    }

    #[test]
    fn single_atom_and_disjunction() {
        let a = atoms(2);
        assert_eq!(enumerate_boolean_skeletons(&a[0]).count(), 1);
        let or = Expr::or(vec![a[0].clone(), a[1].clone()]);
        assert_eq!(enumerate_boolean_skeletons(&or).count(), 3);
        // partial: a, then ¬a ∧ b
        assert_eq!(Skeletons::new(&or, false).count(), 2);
    }

    #[test]
    fn unsatisfiable_skeleton() {
        let a = atoms(1);
        let e = Expr::and(vec![a[0].clone(), Expr::not(a[0].clone())]);
        assert_eq!(enumerate_boolean_skeletons(&e).count(), 0);
    }
}
