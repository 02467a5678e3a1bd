//! Direct evaluation of formulas under an assignment.
//!
//! Nothing here touches the automata, length or arithmetic machinery: regex
//! membership is decided with Brzozowski derivatives over hash-consed terms,
//! integer terms are evaluated with big integers. This is the ground truth
//! that models are checked against.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::frontend::{Alphabet, Atom, Expr, Formula, LinExpr, Pattern, Regex, Term};
use crate::numstr::{bin_value, is_binary};

/// Total assignment of the free variables of a formula, keyed by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub strings: BTreeMap<String, String>,
    pub ints: BTreeMap<String, i64>,
}

type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Empty,
    Eps,
    Lit(char),
    Cat(NodeId, NodeId),
    Alt(Vec<NodeId>),
    Star(NodeId),
    Not(NodeId),
}

/// Derivative-based regex matcher with memoized derivatives.
pub struct RegexMatcher {
    alphabet: Alphabet,
    nodes: Vec<Node>,
    nullable: Vec<bool>,
    index: HashMap<Node, NodeId>,
    derivs: HashMap<(NodeId, char), NodeId>,
    roots: HashMap<Regex, NodeId>,
}

const EMPTY: NodeId = 0;
const EPS: NodeId = 1;

impl RegexMatcher {
    pub fn new(alphabet: Alphabet) -> Self {
        let mut m = RegexMatcher {
            alphabet,
            nodes: Vec::new(),
            nullable: Vec::new(),
            index: HashMap::new(),
            derivs: HashMap::new(),
            roots: HashMap::new(),
        };
        m.intern(Node::Empty);
        m.intern(Node::Eps);
        m
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let nullable = match &n {
            Node::Empty | Node::Lit(_) => false,
            Node::Eps | Node::Star(_) => true,
            Node::Cat(a, b) => self.nullable[*a as usize] && self.nullable[*b as usize],
            Node::Alt(xs) => xs.iter().any(|x| self.nullable[*x as usize]),
            Node::Not(a) => !self.nullable[*a as usize],
        };
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n.clone());
        self.nullable.push(nullable);
        self.index.insert(n, id);
        id
    }

    fn cat(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == EMPTY || b == EMPTY {
            return EMPTY;
        }
        if a == EPS {
            return b;
        }
        if b == EPS {
            return a;
        }
        if let Node::Cat(x, y) = self.nodes[a as usize] {
            let tail = self.cat(y, b);
            return self.cat(x, tail);
        }
        self.intern(Node::Cat(a, b))
    }

    fn alt(&mut self, parts: Vec<NodeId>) -> NodeId {
        let mut flat = Vec::new();
        for p in parts {
            match &self.nodes[p as usize] {
                Node::Empty => {}
                Node::Alt(xs) => flat.extend(xs.iter().copied()),
                _ => flat.push(p),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => EMPTY,
            1 => flat[0],
            _ => self.intern(Node::Alt(flat)),
        }
    }

    fn star(&mut self, a: NodeId) -> NodeId {
        match self.nodes[a as usize] {
            Node::Empty | Node::Eps => EPS,
            Node::Star(_) => a,
            _ => self.intern(Node::Star(a)),
        }
    }

    fn not(&mut self, a: NodeId) -> NodeId {
        match self.nodes[a as usize] {
            Node::Not(inner) => inner,
            _ => self.intern(Node::Not(a)),
        }
    }

    fn build(&mut self, r: &Regex) -> NodeId {
        if let Some(&id) = self.roots.get(r) {
            return id;
        }
        let id = match r {
            Regex::Empty => EMPTY,
            Regex::Epsilon => EPS,
            Regex::Literal(c) => self.intern(Node::Lit(*c)),
            Regex::Concat(a, b) => {
                let (a, b) = (self.build(a), self.build(b));
                self.cat(a, b)
            }
            Regex::Union(a, b) => {
                let (a, b) = (self.build(a), self.build(b));
                self.alt(vec![a, b])
            }
            Regex::Star(a) => {
                let a = self.build(a);
                self.star(a)
            }
            Regex::Complement(a) => {
                let a = self.build(a);
                self.not(a)
            }
        };
        self.roots.insert(r.clone(), id);
        id
    }

    fn deriv(&mut self, id: NodeId, c: char) -> NodeId {
        if let Some(&d) = self.derivs.get(&(id, c)) {
            return d;
        }
        let d = match self.nodes[id as usize].clone() {
            Node::Empty | Node::Eps => EMPTY,
            Node::Lit(l) => {
                if l == c {
                    EPS
                } else {
                    EMPTY
                }
            }
            Node::Cat(a, b) => {
                let da = self.deriv(a, c);
                let left = self.cat(da, b);
                if self.nullable[a as usize] {
                    let db = self.deriv(b, c);
                    self.alt(vec![left, db])
                } else {
                    left
                }
            }
            Node::Alt(xs) => {
                let ds = xs.iter().map(|&x| self.deriv(x, c)).collect();
                self.alt(ds)
            }
            Node::Star(a) => {
                let da = self.deriv(a, c);
                self.cat(da, id)
            }
            Node::Not(a) => {
                let da = self.deriv(a, c);
                self.not(da)
            }
        };
        self.derivs.insert((id, c), d);
        d
    }

    /// Derivative term of `r`, for walking words symbol by symbol.
    pub fn start(&mut self, r: &Regex) -> u32 {
        self.build(r)
    }

    /// Derivative of term `id` by `c`.
    pub fn step(&mut self, id: u32, c: char) -> u32 {
        self.deriv(id, c)
    }

    /// True if the term is syntactically `∅`. Terms under complement are
    /// never reported dead even when their language is empty.
    pub fn is_dead(&self, id: u32) -> bool {
        id == EMPTY
    }

    pub fn is_nullable(&self, id: u32) -> bool {
        self.nullable[id as usize]
    }

    /// Membership of `w` in `L(r)`; complement is taken relative to `A*`, so
    /// words with symbols outside the alphabet never match.
    pub fn matches(&mut self, r: &Regex, w: &str) -> bool {
        if !w.chars().all(|c| self.alphabet.contains(c)) {
            return false;
        }
        let mut id = self.build(r);
        for c in w.chars() {
            id = self.deriv(id, c);
            if id == EMPTY {
                return false;
            }
        }
        self.nullable[id as usize]
    }
}

/// Evaluates atoms and formulas under (possibly partial) assignments.
///
/// Strings and integers are indexed by variable id; `None` means unassigned.
pub struct Evaluator<'f> {
    formula: &'f Formula,
    matcher: RegexMatcher,
}

impl<'f> Evaluator<'f> {
    pub fn new(formula: &'f Formula) -> Self {
        Evaluator {
            formula,
            matcher: RegexMatcher::new(formula.alphabet.clone()),
        }
    }

    pub fn formula(&self) -> &'f Formula {
        self.formula
    }

    fn pattern_value(&self, p: &Pattern, strs: &[Option<String>]) -> Option<String> {
        let mut out = String::new();
        for item in p.items() {
            match item {
                crate::frontend::PatItem::Const(c) => out.push_str(c),
                crate::frontend::PatItem::Var(v) => out.push_str(strs[v.0 as usize].as_ref()?),
            }
        }
        Some(out)
    }

    /// `None` if a variable is unassigned; `Some(None)` if a binary-value
    /// term is applied to a non-binary word.
    fn lin_value(
        &self,
        e: &LinExpr,
        strs: &[Option<String>],
        ints: &[Option<i64>],
    ) -> Option<Option<BigInt>> {
        let mut acc = BigInt::from(e.constant);
        for (t, &c) in &e.terms {
            let v: BigInt = match t {
                Term::Int(v) => BigInt::from(ints[v.0 as usize]?),
                Term::Len(v) => BigInt::from(strs[v.0 as usize].as_ref()?.chars().count()),
                Term::Num(v) => {
                    let w = strs[v.0 as usize].as_ref()?;
                    match bin_value(w) {
                        Ok(n) => BigInt::from(n),
                        Err(_) => return Some(None),
                    }
                }
            };
            acc += v * c;
        }
        Some(Some(acc))
    }

    pub fn numstr_holds(&self, n: &BigInt, w: &str) -> bool {
        if !is_binary(w) || n.is_negative() || (self.formula.strict_numstr && w.is_empty()) {
            return false;
        }
        match bin_value(w) {
            Ok(v) => BigInt::from(v) == *n,
            Err(_) => false,
        }
    }

    /// Truth value of `atom`, or `None` if it depends on an unassigned variable.
    pub fn atom_value(
        &mut self,
        atom: &Atom,
        strs: &[Option<String>],
        ints: &[Option<i64>],
    ) -> Option<bool> {
        match atom {
            Atom::Member {
                pattern,
                regex,
                positive,
            } => {
                let w = self.pattern_value(pattern, strs)?;
                Some(self.matcher.matches(regex, &w) == *positive)
            }
            Atom::Lin { lhs, rel, rhs } => {
                let l = self.lin_value(lhs, strs, ints)?;
                let r = self.lin_value(rhs, strs, ints)?;
                match (l, r) {
                    (Some(l), Some(r)) => Some(rel.holds(l, r)),
                    _ => Some(false),
                }
            }
            Atom::NumStr {
                num,
                pattern,
                positive,
            } => {
                let w = self.pattern_value(pattern, strs)?;
                let n = self.lin_value(num, strs, ints)?;
                let holds = match n {
                    Some(n) => self.numstr_holds(&n, &w),
                    None => false,
                };
                Some(holds == *positive)
            }
            Atom::WordEq { lhs, rhs, positive } => {
                let l = self.pattern_value(lhs, strs)?;
                let r = self.pattern_value(rhs, strs)?;
                Some((l == r) == *positive)
            }
        }
    }

    pub fn eval_partial(&mut self, strs: &[Option<String>], ints: &[Option<i64>]) -> Option<bool> {
        let root = &self.formula.root;
        root.eval3(&mut |a| self.atom_value(a, strs, ints))
    }

    pub fn eval_expr(&mut self, e: &Expr, strs: &[Option<String>], ints: &[Option<i64>]) -> Option<bool> {
        e.eval3(&mut |a| self.atom_value(a, strs, ints))
    }

    pub fn regex_matches(&mut self, r: &Regex, w: &str) -> bool {
        self.matcher.matches(r, w)
    }

    /// Checks a model: total over the declared variables, words over the
    /// alphabet, and the formula evaluates to true.
    pub fn check_model(&mut self, m: &Model) -> bool {
        let f = self.formula;
        let mut strs = Vec::with_capacity(f.vars.num_strings());
        for v in f.vars.str_vars() {
            match m.strings.get(f.vars.str_name(v)) {
                Some(w) if w.chars().all(|c| f.alphabet.contains(c)) => strs.push(Some(w.clone())),
                _ => return false,
            }
        }
        let mut ints = Vec::with_capacity(f.vars.num_ints());
        for v in f.vars.int_vars() {
            match m.ints.get(f.vars.int_name(v)) {
                Some(&i) => ints.push(Some(i)),
                None => return false,
            }
        }
        self.eval_partial(&strs, &ints) == Some(true)
    }
}

/// Independent model check used for every `Sat` verdict.
pub fn verify_model(f: &Formula, m: &Model) -> bool {
    Evaluator::new(f).check_model(m)
}
