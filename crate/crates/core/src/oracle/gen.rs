//! Seeded random instances: regexes, automata, intersection families and
//! formulas with membership and length atoms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::Nfa;
use crate::frontend::{
    Alphabet, Atom, Expr, Formula, LinExpr, PatItem, Pattern, Regex, Rel, Sort, StrVar, Term, VarRef, VarTable,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A regex with about `size` nodes and complement depth at most
/// `max_cdepth`.
pub fn random_regex(rng: &mut impl Rng, symbols: &[char], size: usize, max_cdepth: usize) -> Regex {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => Regex::Epsilon,
            1 if size == 1 && rng.gen_bool(0.3) => Regex::Empty,
            _ => Regex::lit(*symbols.choose(rng).expect("nonempty alphabet")),
        };
    }
    let choice = rng.gen_range(0..if max_cdepth > 0 { 8 } else { 7 });
    match choice {
        0 | 1 => Regex::star(random_regex(rng, symbols, size - 1, max_cdepth)),
        // complement depth adds up over concatenation and union
        2..=6 => {
            let left = rng.gen_range(1..size);
            let c = rng.gen_range(0..=max_cdepth);
            let a = random_regex(rng, symbols, left, c);
            let b = random_regex(rng, symbols, size - left, max_cdepth - c);
            if choice <= 4 {
                Regex::concat(a, b)
            } else {
                Regex::union(a, b)
            }
        }
        _ => Regex::complement(random_regex(rng, symbols, size - 1, max_cdepth - 1)),
    }
}

/// An NFA with `states` states, each transition present with probability
/// `density` and each state final with probability one third (state
/// `states - 1` always final).
pub fn random_nfa(rng: &mut impl Rng, alphabet: &Alphabet, states: usize, density: f64) -> Nfa {
    let mut m = Nfa::new(alphabet.clone(), states, 0);
    for p in 0..states as u32 {
        for a in 0..alphabet.len() {
            for q in 0..states as u32 {
                if rng.gen_bool(density) {
                    m.add_transition(p, a, q);
                }
            }
        }
        m.set_final(p, rng.gen_bool(1.0 / 3.0));
    }
    m.set_final(states as u32 - 1, true);
    m
}

/// `k` random automata, the shape of an intersection-nonemptiness instance
/// `x ∈ L(M₁) ∧ … ∧ x ∈ L(M_k)`.
pub fn intersection_family(rng: &mut impl Rng, alphabet: &Alphabet, k: usize, states: usize) -> Vec<Nfa> {
    (0..k).map(|_| random_nfa(rng, alphabet, states, 0.3)).collect()
}

#[derive(Clone, Debug)]
pub struct FormulaParams {
    pub max_vars: usize,
    pub max_atoms: usize,
    pub symbols: Vec<char>,
    pub max_regex_size: usize,
    pub max_len_const: i64,
    /// Complement depth allowed in membership regexes.
    pub max_cdepth: usize,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams {
            max_vars: 3,
            max_atoms: 4,
            symbols: vec!['a', 'b'],
            max_regex_size: 12,
            max_len_const: 6,
            max_cdepth: 0,
        }
    }
}

fn random_pattern(rng: &mut impl Rng, vars: &[StrVar], symbols: &[char]) -> Pattern {
    let n = rng.gen_range(1..=2);
    let mut items = Vec::new();
    for _ in 0..n {
        if rng.gen_bool(0.75) {
            items.push(PatItem::Var(*vars.choose(rng).expect("variables")));
        } else {
            let len = rng.gen_range(1..=2);
            items.push(PatItem::Const((0..len).map(|_| *symbols.choose(rng).unwrap()).collect()));
        }
    }
    Pattern::new(items)
}

fn random_atom(rng: &mut impl Rng, vars: &[StrVar], p: &FormulaParams) -> Atom {
    if rng.gen_bool(0.6) {
        let size = rng.gen_range(1..=p.max_regex_size);
        return Atom::Member {
            pattern: random_pattern(rng, vars, &p.symbols),
            regex: random_regex(rng, &p.symbols, size, p.max_cdepth),
            positive: rng.gen_bool(0.7),
        };
    }
    let mut lhs = LinExpr::term(Term::Len(*vars.choose(rng).unwrap()));
    if rng.gen_bool(0.4) {
        let y = *vars.choose(rng).unwrap();
        lhs.add_term(Term::Len(y), if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    let rel = *[Rel::Le, Rel::Eq, Rel::Ge].choose(rng).unwrap();
    let c = rng.gen_range(0..=p.max_len_const);
    Atom::Lin {
        lhs,
        rel,
        rhs: LinExpr::constant(c),
    }
}

/// A formula with membership and length atoms over up to `max_vars` string
/// variables, combined by a random and/or/not tree.
pub fn random_formula(rng: &mut impl Rng, p: &FormulaParams) -> Formula {
    let mut table = VarTable::new();
    let k = rng.gen_range(1..=p.max_vars);
    let vars: Vec<StrVar> = (0..k)
        .map(|i| match table.declare(&format!("x{i}"), Sort::String) {
            Some(VarRef::Str(v)) => v,
            _ => unreachable!(),
        })
        .collect();
    let n = rng.gen_range(1..=p.max_atoms);
    let mut parts: Vec<Expr> = (0..n).map(|_| Expr::atom(random_atom(rng, &vars, p))).collect();
    // fold into a random tree, conjunction-heavy
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len() - 1);
        let a = parts.remove(i);
        let b = parts.remove(i);
        let mut e = if rng.gen_bool(0.7) {
            Expr::and(vec![a, b])
        } else {
            Expr::or(vec![a, b])
        };
        if rng.gen_bool(0.1) {
            e = Expr::not(e);
        }
        parts.insert(i, e);
    }
    Formula::new(Alphabet::new(p.symbols.iter().copied()), table, parts.pop().unwrap())
}
