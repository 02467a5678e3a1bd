//! Length comparison and equality of patterns expressed with numstr,
//! regular constraints and linear arithmetic.
//!
//! With `z ∈ 10*`, `numstr(i, z)` and `numstr(j, z·0)` pin `i = 2^k` and
//! `j = 2^(k+1)` for `k = |z| - 1`. A binary word `1α` has a value in
//! `[2^|α|, 2^(|α|+1))`, so `i ≤ n_α < j` forces `|α| = k`. Equality of `α`
//! and `β` then follows from equal lengths and equal values of `1α1β` and
//! `1β1α`.
//!
//! These encodings only mean what they say when every pattern evaluates to
//! a binary word; constants outside `{0,1}` make them unsatisfiable and are
//! reported as [`AlphabetWarning`]s.

use thiserror::Error;

use crate::frontend::{
    classify_theory, Alphabet, Atom, Expr, Formula, LinExpr, ParseError, PatItem, Pattern, Regex, Rel, Sort,
    StrVar, Term, TheoryTag, VarRef, VarTable,
};

/// Prefix of variables introduced by the encoders.
pub const FRESH_PREFIX: &str = "enc!";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("constant {constant:?} is not a binary word; numstr over it never holds")]
pub struct AlphabetWarning {
    pub constant: String,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: Formula,
    pub tag: TheoryTag,
    pub warnings: Vec<AlphabetWarning>,
}

/// Builds encodings over a shared variable table.
pub struct Encoder {
    alphabet: Vec<char>,
    vars: VarTable,
    warnings: Vec<AlphabetWarning>,
}

fn numstr(num: LinExpr, pattern: Pattern) -> Expr {
    Expr::atom(Atom::NumStr {
        num,
        pattern,
        positive: true,
    })
}

fn int(v: crate::frontend::IntVar) -> LinExpr {
    LinExpr::term(Term::Int(v))
}

fn le(lhs: LinExpr, rhs: LinExpr) -> Expr {
    Expr::atom(Atom::Lin { lhs, rel: Rel::Le, rhs })
}

fn one() -> Pattern {
    Pattern::word("1")
}

impl Encoder {
    pub fn new(alphabet: &Alphabet, vars: VarTable) -> Self {
        let mut symbols: Vec<char> = alphabet.symbols().to_vec();
        for c in ['0', '1'] {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        Encoder {
            alphabet: symbols,
            vars,
            warnings: Vec::new(),
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    fn check(&mut self, p: &Pattern) {
        for item in p.items() {
            if let PatItem::Const(w) = item {
                for c in w.chars() {
                    if !self.alphabet.contains(&c) {
                        self.alphabet.push(c);
                    }
                }
                if !crate::numstr::is_binary(w) && !self.warnings.iter().any(|x| &x.constant == w) {
                    self.warnings.push(AlphabetWarning { constant: w.clone() });
                }
            }
        }
    }

    fn fresh_str(&mut self) -> StrVar {
        self.vars.fresh_str(&format!("{FRESH_PREFIX}z"))
    }

    fn fresh_int(&mut self, name: &str) -> crate::frontend::IntVar {
        self.vars.fresh_int(&format!("{FRESH_PREFIX}{name}"))
    }

    /// `|α| = |β|`.
    pub fn eq_len(&mut self, alpha: &Pattern, beta: &Pattern) -> Expr {
        self.check(alpha);
        self.check(beta);
        let z = self.fresh_str();
        let i = self.fresh_int("i");
        let j = self.fresh_int("j");
        let na = self.fresh_int("na");
        let nb = self.fresh_int("nb");
        let pz = Pattern::var(z);
        let plus_one = |v| int(v).add(&LinExpr::constant(1));
        Expr::and(vec![
            Expr::atom(Atom::Member {
                pattern: pz.clone(),
                regex: Regex::concat(Regex::lit('1'), Regex::star(Regex::lit('0'))),
                positive: true,
            }),
            numstr(int(i), pz.clone()),
            numstr(int(j), pz.concat(&Pattern::word("0"))),
            numstr(int(na), one().concat(alpha)),
            numstr(int(nb), one().concat(beta)),
            le(int(i), int(na)),
            le(plus_one(na), int(j)),
            le(int(i), int(nb)),
            le(plus_one(nb), int(j)),
        ])
    }

    /// `α = β`, via `|α| = |β|` and `val(1α1β) = val(1β1α)`.
    pub fn eq(&mut self, alpha: &Pattern, beta: &Pattern) -> Expr {
        let lens = self.eq_len(alpha, beta);
        let i = self.fresh_int("i");
        let j = self.fresh_int("j");
        let ab = one().concat(alpha).concat(&one()).concat(beta);
        let ba = one().concat(beta).concat(&one()).concat(alpha);
        Expr::and(vec![
            lens,
            numstr(int(i), ab),
            numstr(int(j), ba),
            Expr::atom(Atom::Lin {
                lhs: int(i),
                rel: Rel::Eq,
                rhs: int(j),
            }),
        ])
    }

    /// `|α| ≤ |β|`, via `|α·z| = |β|` for a binary `z`.
    pub fn leq_len(&mut self, alpha: &Pattern, beta: &Pattern) -> Expr {
        let z = self.fresh_str();
        let bits = Regex::star(Regex::union(Regex::lit('0'), Regex::lit('1')));
        let pad = Expr::atom(Atom::Member {
            pattern: Pattern::var(z),
            regex: bits,
            positive: true,
        });
        let lens = self.eq_len(&alpha.concat(&Pattern::var(z)), beta);
        Expr::and(vec![pad, lens])
    }

    pub fn finish(self, root: Expr) -> Encoding {
        let formula = Formula::new(Alphabet::new(self.alphabet), self.vars, root);
        let tag = classify_theory(&formula);
        Encoding {
            formula,
            tag,
            warnings: self.warnings,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    EqLen,
    Eq,
    LeqLen,
}

impl std::str::FromStr for EncodingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eqlen" => Ok(EncodingKind::EqLen),
            "eq" => Ok(EncodingKind::Eq),
            "leqlen" => Ok(EncodingKind::LeqLen),
            _ => Err(format!("unknown encoding `{s}` (expected eqlen, eq or leqlen)")),
        }
    }
}

/// The encoding of `kind` for two patterns whose variables live in `vars`.
pub fn encode(kind: EncodingKind, alpha: &Pattern, beta: &Pattern, vars: &VarTable, alphabet: &Alphabet) -> Encoding {
    let mut e = Encoder::new(alphabet, vars.clone());
    let root = match kind {
        EncodingKind::EqLen => e.eq_len(alpha, beta),
        EncodingKind::Eq => e.eq(alpha, beta),
        EncodingKind::LeqLen => e.leq_len(alpha, beta),
    };
    e.finish(root)
}

pub fn encode_eq_len(alpha: &Pattern, beta: &Pattern, vars: &VarTable, alphabet: &Alphabet) -> Encoding {
    encode(EncodingKind::EqLen, alpha, beta, vars, alphabet)
}

pub fn encode_eq(alpha: &Pattern, beta: &Pattern, vars: &VarTable, alphabet: &Alphabet) -> Encoding {
    encode(EncodingKind::Eq, alpha, beta, vars, alphabet)
}

pub fn encode_leq_len(alpha: &Pattern, beta: &Pattern, vars: &VarTable, alphabet: &Alphabet) -> Encoding {
    encode(EncodingKind::LeqLen, alpha, beta, vars, alphabet)
}

/// Encoding of two constant words over `{0,1}`.
pub fn encode_words(kind: EncodingKind, alpha: &str, beta: &str) -> Encoding {
    encode(
        kind,
        &Pattern::word(alpha),
        &Pattern::word(beta),
        &VarTable::new(),
        &Alphabet::new(['0', '1']),
    )
}

/// Reads a pattern written as `.`-separated items, each a double-quoted
/// constant or a variable name. Unknown names are declared as strings.
pub fn parse_pattern(text: &str, vars: &mut VarTable) -> Result<Pattern, ParseError> {
    let err = |msg: String| ParseError::Syntax { line: 1, col: 1, msg };
    let mut items = Vec::new();
    let text = text.trim();
    if text.is_empty() {
        return Ok(Pattern::new([]));
    }
    for part in text.split('.') {
        let part = part.trim();
        if let Some(w) = part.strip_prefix('"') {
            let w = w.strip_suffix('"').ok_or_else(|| err(format!("unterminated constant {part}")))?;
            items.push(PatItem::Const(w.to_string()));
        } else if !part.is_empty() && part.chars().all(|c| c.is_alphanumeric() || c == '_') {
            let v = match vars.lookup(part) {
                Some(VarRef::Str(v)) => v,
                Some(VarRef::Int(_)) => return Err(err(format!("`{part}` is an integer variable"))),
                None => match vars.declare(part, Sort::String) {
                    Some(VarRef::Str(v)) => v,
                    _ => unreachable!("fresh declaration"),
                },
            };
            items.push(PatItem::Var(v));
        } else {
            return Err(err(format!("bad pattern item `{part}`")));
        }
    }
    Ok(Pattern::new(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Decidability;
    use crate::oracle::brute_force_solve;

    fn sat(e: &Encoding) -> bool {
        brute_force_solve(&e.formula, 8, 1 << 10).unwrap().is_sat()
    }

    #[test]
    fn small_cases() {
        assert!(sat(&encode_words(EncodingKind::Eq, "101", "101")));
        assert!(!sat(&encode_words(EncodingKind::Eq, "10", "01")));
        assert!(!sat(&encode_words(EncodingKind::Eq, "1", "11")));
        assert!(sat(&encode_words(EncodingKind::LeqLen, "1", "11")));
        assert!(!sat(&encode_words(EncodingKind::LeqLen, "11", "1")));
        assert!(!sat(&encode_words(EncodingKind::EqLen, "1", "00")));
        assert!(sat(&encode_words(EncodingKind::EqLen, "10", "00")));
    }

    #[test]
    fn tags_and_warnings() {
        let e = encode_words(EncodingKind::EqLen, "ab", "cd");
        assert_eq!(e.warnings.len(), 2);
        assert!(!sat(&e));
        let mut vars = VarTable::new();
        let a = parse_pattern("x.\"1\"", &mut vars).unwrap();
        let b = parse_pattern("y", &mut vars).unwrap();
        let e = encode_eq(&a, &b, &vars, &Alphabet::new(['0', '1']));
        assert_eq!(e.tag.theory_name(), "A_snc");
        assert_eq!(e.tag.decidability, Decidability::Open);
        assert_eq!(e.formula.vars.str_name(StrVar(0)), "x");
    }
}
