//! Typed syntax of string constraints.
//!
//! A [`Formula`] bundles the declared alphabet, the variable table and a
//! Boolean tree ([`Expr`]) over [`Atom`]s. Regular expressions ([`Regex`]) are
//! always ground: variables only ever occur in [`Pattern`]s and linear terms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Finite, ordered alphabet. The order fixes every enumeration in the crate
/// (witness tie-breaking, oracle search order, subset construction).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[char]>);

impl Alphabet {
    /// Builds an alphabet, dropping duplicates but keeping first-seen order.
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Self {
        let mut seen = Vec::new();
        for c in symbols {
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        Alphabet(seen.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.0.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn symbol(&self, idx: usize) -> char {
        self.0[idx]
    }

    /// Maps a word to symbol indices; `None` if it contains a foreign symbol.
    pub fn encode(&self, word: &str) -> Option<Vec<usize>> {
        word.chars().map(|c| self.index_of(c)).collect()
    }

    pub fn decode(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.0[i]).collect()
    }

    pub fn as_string(&self) -> String {
        self.0.iter().collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.as_string())
    }
}

/// Ground regular expression, possibly with complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(char),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Complement(Box<Regex>),
}

impl Regex {
    pub fn lit(c: char) -> Regex {
        Regex::Literal(c)
    }

    /// Concatenation of the letters of `w`; `ε` for the empty word.
    pub fn word(w: &str) -> Regex {
        let mut chars = w.chars().rev();
        match chars.next() {
            None => Regex::Epsilon,
            Some(last) => chars.fold(Regex::Literal(last), |acc, c| {
                Regex::concat(Regex::Literal(c), acc)
            }),
        }
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    pub fn complement(a: Regex) -> Regex {
        Regex::Complement(Box::new(a))
    }

    /// Right-nested concatenation; `ε` when empty.
    pub fn concat_all<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        let parts: Vec<Regex> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, r| Regex::concat(r, acc))
            .unwrap_or(Regex::Epsilon)
    }

    /// Right-nested union; `∅` when empty.
    pub fn union_all<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        let parts: Vec<Regex> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, r| Regex::union(r, acc))
            .unwrap_or(Regex::Empty)
    }

    /// Union of every symbol of the alphabet (`re.allchar`).
    pub fn any_char(alphabet: &Alphabet) -> Regex {
        Regex::union_all(alphabet.symbols().iter().map(|&c| Regex::Literal(c)))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Literal(_) => 1,
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) | Regex::Complement(a) => 1 + a.size(),
        }
    }

    pub fn has_complement(&self) -> bool {
        self.cdepth() > 0
    }

    /// Complement depth: leaves count 0, concatenation and union add up the
    /// depths of both operands, star passes through and every complement adds 1.
    pub fn cdepth(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Literal(_) => 0,
            Regex::Concat(a, b) | Regex::Union(a, b) => a.cdepth() + b.cdepth(),
            Regex::Star(a) => a.cdepth(),
            Regex::Complement(a) => 1 + a.cdepth(),
        }
    }

    /// Calls `f` on every literal symbol.
    pub fn for_each_literal(&self, f: &mut impl FnMut(char)) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Literal(c) => f(*c),
            Regex::Concat(a, b) | Regex::Union(a, b) => {
                a.for_each_literal(f);
                b.for_each_literal(f);
            }
            Regex::Star(a) | Regex::Complement(a) => a.for_each_literal(f),
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => write!(f, "∅"),
            Regex::Epsilon => write!(f, "ε"),
            Regex::Literal(c) => write!(f, "{c}"),
            Regex::Concat(a, b) => write!(f, "({a}·{b})"),
            Regex::Union(a, b) => write!(f, "({a}∪{b})"),
            Regex::Star(a) => write!(f, "{a}*"),
            Regex::Complement(a) => write!(f, "¬{a}"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrVar(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVar(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    String,
    Int,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarRef {
    Str(StrVar),
    Int(IntVar),
}

/// Declared variables, in declaration order per sort.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    strings: Vec<String>,
    ints: Vec<String>,
    order: Vec<VarRef>,
    by_name: HashMap<String, VarRef>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable. Returns `None` if the name is already taken.
    pub fn declare(&mut self, name: &str, sort: Sort) -> Option<VarRef> {
        if self.by_name.contains_key(name) {
            return None;
        }
        let r = match sort {
            Sort::String => {
                self.strings.push(name.to_string());
                VarRef::Str(StrVar(self.strings.len() as u32 - 1))
            }
            Sort::Int => {
                self.ints.push(name.to_string());
                VarRef::Int(IntVar(self.ints.len() as u32 - 1))
            }
        };
        self.by_name.insert(name.to_string(), r);
        self.order.push(r);
        Some(r)
    }

    /// Declares a fresh variable named `prefix` plus a counter.
    pub fn fresh(&mut self, prefix: &str, sort: Sort) -> VarRef {
        let mut n = 0usize;
        loop {
            let name = format!("{prefix}{n}");
            if let Some(r) = self.declare(&name, sort) {
                return r;
            }
            n += 1;
        }
    }

    pub fn fresh_str(&mut self, prefix: &str) -> StrVar {
        match self.fresh(prefix, Sort::String) {
            VarRef::Str(v) => v,
            VarRef::Int(_) => unreachable!(),
        }
    }

    pub fn fresh_int(&mut self, prefix: &str) -> IntVar {
        match self.fresh(prefix, Sort::Int) {
            VarRef::Int(v) => v,
            VarRef::Str(_) => unreachable!(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        self.by_name.get(name).copied()
    }

    pub fn str_name(&self, v: StrVar) -> &str {
        &self.strings[v.0 as usize]
    }

    pub fn int_name(&self, v: IntVar) -> &str {
        &self.ints[v.0 as usize]
    }

    pub fn num_strings(&self) -> usize {
        self.strings.len()
    }

    pub fn num_ints(&self) -> usize {
        self.ints.len()
    }

    pub fn str_vars(&self) -> impl Iterator<Item = StrVar> {
        (0..self.strings.len() as u32).map(StrVar)
    }

    pub fn int_vars(&self) -> impl Iterator<Item = IntVar> {
        (0..self.ints.len() as u32).map(IntVar)
    }

    /// All variables in declaration order.
    pub fn declaration_order(&self) -> &[VarRef] {
        &self.order
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatItem {
    Var(StrVar),
    Const(String),
}

/// Sequence of variables and constant words. Adjacent constants are merged
/// and empty constants dropped, so the empty pattern denotes `ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<PatItem>);

impl Pattern {
    pub fn new<I: IntoIterator<Item = PatItem>>(items: I) -> Self {
        let mut out: Vec<PatItem> = Vec::new();
        for item in items {
            match item {
                PatItem::Const(s) if s.is_empty() => {}
                PatItem::Const(s) => {
                    if let Some(PatItem::Const(prev)) = out.last_mut() {
                        prev.push_str(&s);
                    } else {
                        out.push(PatItem::Const(s));
                    }
                }
                v => out.push(v),
            }
        }
        Pattern(out)
    }

    pub fn var(v: StrVar) -> Self {
        Pattern(vec![PatItem::Var(v)])
    }

    pub fn word(w: &str) -> Self {
        Pattern::new([PatItem::Const(w.to_string())])
    }

    pub fn items(&self) -> &[PatItem] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Pattern) -> Pattern {
        Pattern::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn vars(&self) -> impl Iterator<Item = StrVar> + '_ {
        self.0.iter().filter_map(|i| match i {
            PatItem::Var(v) => Some(*v),
            PatItem::Const(_) => None,
        })
    }

    /// The constant word, if the pattern has no variables.
    pub fn as_constant(&self) -> Option<String> {
        let mut s = String::new();
        for item in &self.0 {
            match item {
                PatItem::Const(c) => s.push_str(c),
                PatItem::Var(_) => return None,
            }
        }
        Some(s)
    }

    /// The variable, if the pattern is exactly one variable.
    pub fn as_single_var(&self) -> Option<StrVar> {
        match self.0.as_slice() {
            [PatItem::Var(v)] => Some(*v),
            _ => None,
        }
    }

    /// `len` of the pattern as a linear expression.
    pub fn length_expr(&self) -> LinExpr {
        let mut e = LinExpr::constant(0);
        for item in &self.0 {
            match item {
                PatItem::Var(v) => e.add_term(Term::Len(*v), 1),
                PatItem::Const(c) => e.constant += c.chars().count() as i64,
            }
        }
        e
    }

    pub fn substitute(&self, h: &dyn Fn(StrVar) -> String) -> String {
        let mut s = String::new();
        for item in &self.0 {
            match item {
                PatItem::Var(v) => s.push_str(&h(*v)),
                PatItem::Const(c) => s.push_str(c),
            }
        }
        s
    }
}

/// Integer-valued leaf of a linear expression.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(IntVar),
    /// `str.len` of a string variable.
    Len(StrVar),
    /// Binary value of a string variable. Only introduced by numstr rewriting;
    /// it has no surface syntax.
    Num(StrVar),
}

/// `Σ coeff·term + constant` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinExpr {
    pub terms: BTreeMap<Term, i64>,
    pub constant: i64,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn term(t: Term) -> Self {
        let mut e = LinExpr::constant(0);
        e.add_term(t, 1);
        e
    }

    pub fn add_term(&mut self, t: Term, coeff: i64) {
        let c = self.terms.entry(t).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (&t, &c) in &other.terms {
            out.add_term(t, c);
        }
        out.constant += other.constant;
        out
    }

    pub fn scale(&self, k: i64) -> LinExpr {
        if k == 0 {
            return LinExpr::constant(0);
        }
        LinExpr {
            terms: self.terms.iter().map(|(&t, &c)| (t, c * k)).collect(),
            constant: self.constant * k,
        }
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scale(-1))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_single_int_var(&self) -> Option<IntVar> {
        if self.constant != 0 || self.terms.len() != 1 {
            return None;
        }
        match self.terms.iter().next() {
            Some((Term::Int(v), 1)) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Eq,
    Ge,
    /// Only produced by negating an equality.
    Ne,
}

impl Rel {
    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Ne => lhs != rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `pattern ∈ L(regex)` (or its negation).
    Member {
        pattern: Pattern,
        regex: Regex,
        positive: bool,
    },
    /// `lhs rel rhs` over integers.
    Lin { lhs: LinExpr, rel: Rel, rhs: LinExpr },
    /// `numstr(num, pattern)`: the pattern is a binary word whose value is `num`.
    NumStr {
        num: LinExpr,
        pattern: Pattern,
        positive: bool,
    },
    /// Word equation; parsed and classified but never solved.
    WordEq {
        lhs: Pattern,
        rhs: Pattern,
        positive: bool,
    },
}

impl Atom {
    /// Logical negation, absorbed into the atom.
    pub fn negate(&self) -> Atom {
        match self {
            Atom::Member {
                pattern,
                regex,
                positive,
            } => Atom::Member {
                pattern: pattern.clone(),
                regex: regex.clone(),
                positive: !positive,
            },
            Atom::NumStr {
                num,
                pattern,
                positive,
            } => Atom::NumStr {
                num: num.clone(),
                pattern: pattern.clone(),
                positive: !positive,
            },
            Atom::WordEq { lhs, rhs, positive } => Atom::WordEq {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                positive: !positive,
            },
            Atom::Lin { lhs, rel, rhs } => {
                let (rel, rhs) = match rel {
                    Rel::Le => (Rel::Ge, rhs.add(&LinExpr::constant(1))),
                    Rel::Ge => (Rel::Le, rhs.add(&LinExpr::constant(-1))),
                    Rel::Eq => (Rel::Ne, rhs.clone()),
                    Rel::Ne => (Rel::Eq, rhs.clone()),
                };
                Atom::Lin {
                    lhs: lhs.clone(),
                    rel,
                    rhs,
                }
            }
        }
    }

    pub fn regexes(&self) -> Option<&Regex> {
        match self {
            Atom::Member { regex, .. } => Some(regex),
            _ => None,
        }
    }

    pub fn patterns(&self) -> Vec<&Pattern> {
        match self {
            Atom::Member { pattern, .. } | Atom::NumStr { pattern, .. } => vec![pattern],
            Atom::WordEq { lhs, rhs, .. } => vec![lhs, rhs],
            Atom::Lin { .. } => vec![],
        }
    }

    pub fn lin_exprs(&self) -> Vec<&LinExpr> {
        match self {
            Atom::Lin { lhs, rhs, .. } => vec![lhs, rhs],
            Atom::NumStr { num, .. } => vec![num],
            _ => vec![],
        }
    }

    pub fn str_vars(&self) -> Vec<StrVar> {
        let mut out: Vec<StrVar> = self.patterns().iter().flat_map(|p| p.vars()).collect();
        for e in self.lin_exprs() {
            for t in e.terms.keys() {
                if let Term::Len(v) | Term::Num(v) = t {
                    out.push(*v);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn int_vars(&self) -> Vec<IntVar> {
        let mut out: Vec<IntVar> = self
            .lin_exprs()
            .iter()
            .flat_map(|e| e.terms.keys())
            .filter_map(|t| match t {
                Term::Int(v) => Some(*v),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Boolean combination of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    Atom(Atom),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn atom(a: Atom) -> Expr {
        Expr::Atom(a)
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(parts: Vec<Expr>) -> Expr {
        Expr::And(parts)
    }

    pub fn or(parts: Vec<Expr>) -> Expr {
        Expr::Or(parts)
    }

    /// Atoms in left-to-right order, duplicates included.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Expr::True | Expr::False => {}
            Expr::Atom(a) => out.push(a),
            Expr::Not(e) => e.collect_atoms(out),
            Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| e.collect_atoms(out)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::True | Expr::False | Expr::Atom(_) => 1,
            Expr::Not(e) => 1 + e.size(),
            Expr::And(es) | Expr::Or(es) => 1 + es.iter().map(Expr::size).sum::<usize>(),
        }
    }

    /// Evaluates the Boolean skeleton under an atom valuation.
    pub fn eval_with(&self, atom_value: &mut impl FnMut(&Atom) -> bool) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Atom(a) => atom_value(a),
            Expr::Not(e) => !e.eval_with(atom_value),
            Expr::And(es) => es.iter().all(|e| e.eval_with(atom_value)),
            Expr::Or(es) => es.iter().any(|e| e.eval_with(atom_value)),
        }
    }

    /// Three-valued evaluation; `None` means undetermined.
    pub fn eval3(&self, atom_value: &mut impl FnMut(&Atom) -> Option<bool>) -> Option<bool> {
        match self {
            Expr::True => Some(true),
            Expr::False => Some(false),
            Expr::Atom(a) => atom_value(a),
            Expr::Not(e) => e.eval3(atom_value).map(|b| !b),
            Expr::And(es) => {
                let mut unknown = false;
                for e in es {
                    match e.eval3(atom_value) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            Expr::Or(es) => {
                let mut unknown = false;
                for e in es {
                    match e.eval3(atom_value) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }
}

/// A parsed script: alphabet, declarations and the conjunction of assertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub alphabet: Alphabet,
    pub vars: VarTable,
    pub root: Expr,
    /// When set, `numstr(n, ε)` is false for every `n`.
    pub strict_numstr: bool,
}

impl Formula {
    pub fn new(alphabet: Alphabet, vars: VarTable, root: Expr) -> Self {
        Formula {
            alphabet,
            vars,
            root,
            strict_numstr: false,
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        self.root.atoms()
    }

    /// Largest complement depth over all regexes (0 without regexes).
    pub fn cdepth(&self) -> usize {
        self.atoms()
            .iter()
            .filter_map(|a| a.regexes())
            .map(Regex::cdepth)
            .max()
            .unwrap_or(0)
    }
}
