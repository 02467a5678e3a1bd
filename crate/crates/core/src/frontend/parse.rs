//! Elaboration of SMT-LIB scripts into [`Formula`]s.

use std::collections::BTreeSet;

use super::ast::*;
use super::sexpr::{read_all, Pos, SExpr};
use super::ParseError;

enum Value {
    Bool(Expr),
    Int(LinExpr),
    Str(Pattern),
    Re(Regex),
}

impl Value {
    fn sort_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "Bool",
            Value::Int(_) => "Int",
            Value::Str(_) => "String",
            Value::Re(_) => "RegLan",
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn sort_err(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Sort {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn unknown(pos: Pos, name: &str) -> ParseError {
    ParseError::UnknownSymbol {
        line: pos.line,
        col: pos.col,
        name: name.to_string(),
    }
}

/// Parses a script in the supported SMT-LIB subset.
pub fn parse_script(text: &str) -> Result<Formula, ParseError> {
    let commands = read_all(text)?;
    let mut vars = VarTable::new();
    let mut declared_alphabet: Option<Alphabet> = None;
    let mut strict = false;
    let mut assertions: Vec<&SExpr> = Vec::new();

    for cmd in &commands {
        let (items, pos) = match cmd {
            SExpr::List(items, pos) if !items.is_empty() => (items, *pos),
            other => return Err(syntax(other.pos(), "expected a command")),
        };
        let head = items[0]
            .as_symbol()
            .ok_or_else(|| syntax(pos, "command name must be a symbol"))?;
        match head {
            "set-logic" | "check-sat" | "get-model" | "exit" | "get-info" | "echo" => {}
            "set-info" | "set-option" => match (items.get(1), items.get(2)) {
                (Some(SExpr::Keyword(k, _)), Some(v)) if k == "alphabet" => match v {
                    SExpr::Str(s, _) => declared_alphabet = Some(Alphabet::new(s.chars())),
                    other => return Err(syntax(other.pos(), ":alphabet expects a string")),
                },
                (Some(SExpr::Keyword(k, _)), Some(v)) if k == "numstr-strict" => {
                    strict = matches!(v.as_symbol(), Some("true"));
                }
                (Some(SExpr::Keyword(_, _)), _) => {}
                _ => return Err(syntax(pos, format!("malformed {head}"))),
            },
            "declare-fun" | "declare-const" => {
                let (name, sort_expr) = match (head, items.as_slice()) {
                    ("declare-fun", [_, name, SExpr::List(args, _), sort]) if args.is_empty() => {
                        (name, sort)
                    }
                    ("declare-fun", [_, _, SExpr::List(_, p), _]) => {
                        return Err(sort_err(*p, "only nullary functions are supported"))
                    }
                    ("declare-const", [_, name, sort]) => (name, sort),
                    _ => return Err(syntax(pos, format!("malformed {head}"))),
                };
                let name = name
                    .as_symbol()
                    .ok_or_else(|| syntax(name.pos(), "variable name must be a symbol"))?;
                let sort = match sort_expr.as_symbol() {
                    Some("String") => Sort::String,
                    Some("Int") => Sort::Int,
                    _ => return Err(sort_err(sort_expr.pos(), "unsupported sort")),
                };
                if vars.declare(name, sort).is_none() {
                    return Err(syntax(pos, format!("`{name}` declared twice")));
                }
            }
            "assert" => match items.as_slice() {
                [_, body] => assertions.push(body),
                _ => return Err(syntax(pos, "assert takes exactly one term")),
            },
            other => return Err(syntax(pos, format!("unsupported command `{other}`"))),
        }
    }

    let alphabet = match declared_alphabet {
        Some(a) => a,
        None => infer_alphabet(&assertions),
    };

    let elab = Elaborator {
        vars: &vars,
        alphabet: &alphabet,
    };
    let mut conjuncts = Vec::new();
    for a in assertions {
        match elab.term(a)? {
            Value::Bool(e) => conjuncts.push(e),
            other => {
                return Err(sort_err(
                    a.pos(),
                    format!("assertion has sort {}", other.sort_name()),
                ))
            }
        }
    }
    let root = if conjuncts.len() == 1 {
        conjuncts.pop().unwrap()
    } else {
        Expr::And(conjuncts)
    };
    let mut f = Formula::new(alphabet, vars, root);
    f.strict_numstr = strict;
    Ok(f)
}

/// Characters of every string literal (and `re.range` span), plus `0`/`1`
/// when `numstr` occurs.
fn infer_alphabet(assertions: &[&SExpr]) -> Alphabet {
    fn walk(e: &SExpr, chars: &mut BTreeSet<char>, numstr: &mut bool) {
        match e {
            SExpr::Str(s, _) => chars.extend(s.chars()),
            SExpr::Symbol(s, _) if s == "numstr" => *numstr = true,
            SExpr::List(items, _) => {
                if let [SExpr::Symbol(h, _), SExpr::Str(lo, _), SExpr::Str(hi, _)] = items.as_slice()
                {
                    if h == "re.range" {
                        if let (Some(a), Some(b)) = (lo.chars().next(), hi.chars().next()) {
                            chars.extend(a..=b);
                        }
                    }
                }
                items.iter().for_each(|i| walk(i, chars, numstr));
            }
            _ => {}
        }
    }
    let mut chars = BTreeSet::new();
    let mut numstr = false;
    for a in assertions {
        walk(a, &mut chars, &mut numstr);
    }
    if numstr {
        chars.insert('0');
        chars.insert('1');
    }
    Alphabet::new(chars)
}

struct Elaborator<'a> {
    vars: &'a VarTable,
    alphabet: &'a Alphabet,
}

impl Elaborator<'_> {
    fn check_word(&self, s: &str, pos: Pos) -> Result<(), ParseError> {
        match s.chars().find(|c| !self.alphabet.contains(*c)) {
            Some(c) => Err(unknown(pos, &c.to_string())),
            None => Ok(()),
        }
    }

    fn term(&self, e: &SExpr) -> Result<Value, ParseError> {
        match e {
            SExpr::Int(n, _) => Ok(Value::Int(LinExpr::constant(*n))),
            SExpr::Str(s, pos) => {
                self.check_word(s, *pos)?;
                Ok(Value::Str(Pattern::word(s)))
            }
            SExpr::Keyword(k, pos) => Err(syntax(*pos, format!("unexpected keyword :{k}"))),
            SExpr::Symbol(s, pos) => match s.as_str() {
                "true" => Ok(Value::Bool(Expr::True)),
                "false" => Ok(Value::Bool(Expr::False)),
                "re.none" => Ok(Value::Re(Regex::Empty)),
                "re.allchar" => Ok(Value::Re(Regex::any_char(self.alphabet))),
                "re.all" => Ok(Value::Re(Regex::star(Regex::any_char(self.alphabet)))),
                name => match self.vars.lookup(name) {
                    Some(VarRef::Str(v)) => Ok(Value::Str(Pattern::var(v))),
                    Some(VarRef::Int(v)) => Ok(Value::Int(LinExpr::term(Term::Int(v)))),
                    None => Err(unknown(*pos, name)),
                },
            },
            SExpr::List(items, pos) => self.app(items, *pos),
        }
    }

    fn bool_arg(&self, e: &SExpr) -> Result<Expr, ParseError> {
        match self.term(e)? {
            Value::Bool(b) => Ok(b),
            v => Err(sort_err(e.pos(), format!("expected Bool, found {}", v.sort_name()))),
        }
    }

    fn int_arg(&self, e: &SExpr) -> Result<LinExpr, ParseError> {
        match self.term(e)? {
            Value::Int(i) => Ok(i),
            v => Err(sort_err(e.pos(), format!("expected Int, found {}", v.sort_name()))),
        }
    }

    fn str_arg(&self, e: &SExpr) -> Result<Pattern, ParseError> {
        match self.term(e)? {
            Value::Str(p) => Ok(p),
            v => Err(sort_err(e.pos(), format!("expected String, found {}", v.sort_name()))),
        }
    }

    fn re_arg(&self, e: &SExpr) -> Result<Regex, ParseError> {
        match self.term(e)? {
            Value::Re(r) => Ok(r),
            v => Err(sort_err(e.pos(), format!("expected RegLan, found {}", v.sort_name()))),
        }
    }

    fn app(&self, items: &[SExpr], pos: Pos) -> Result<Value, ParseError> {
        let (head, args) = match items.split_first() {
            Some((SExpr::Symbol(h, _), args)) => (h.as_str(), args),
            Some((other, _)) => return Err(syntax(other.pos(), "operator must be a symbol")),
            None => return Err(syntax(pos, "empty application")),
        };
        let arity = |lo: usize, hi: usize| -> Result<(), ParseError> {
            if args.len() < lo || args.len() > hi {
                Err(syntax(
                    pos,
                    format!("`{head}` applied to {} argument(s)", args.len()),
                ))
            } else {
                Ok(())
            }
        };
        const MANY: usize = usize::MAX;
        match head {
            "and" | "or" => {
                let parts = args.iter().map(|a| self.bool_arg(a)).collect::<Result<_, _>>()?;
                Ok(Value::Bool(if head == "and" {
                    Expr::And(parts)
                } else {
                    Expr::Or(parts)
                }))
            }
            "not" => {
                arity(1, 1)?;
                Ok(Value::Bool(Expr::not(self.bool_arg(&args[0])?)))
            }
            "=>" => {
                arity(2, MANY)?;
                let mut parts: Vec<Expr> =
                    args.iter().map(|a| self.bool_arg(a)).collect::<Result<_, _>>()?;
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = Expr::Or(vec![Expr::not(p), acc]);
                }
                Ok(Value::Bool(acc))
            }
            "=" | "distinct" => {
                arity(2, if head == "=" { MANY } else { 2 })?;
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                let mut conj = Vec::new();
                for (i, pair) in vals.windows(2).enumerate() {
                    conj.push(self.equality(&pair[0], &pair[1], args[i + 1].pos())?);
                }
                let eq = if conj.len() == 1 {
                    conj.pop().unwrap()
                } else {
                    Expr::And(conj)
                };
                Ok(Value::Bool(if head == "distinct" {
                    Expr::not(eq)
                } else {
                    eq
                }))
            }
            "<=" | "<" | ">=" | ">" => {
                arity(2, MANY)?;
                let vals = args.iter().map(|a| self.int_arg(a)).collect::<Result<Vec<_>, _>>()?;
                let mut conj: Vec<Expr> = vals
                    .windows(2)
                    .map(|w| {
                        let (lhs, rhs) = (w[0].clone(), w[1].clone());
                        let (rel, rhs) = match head {
                            "<=" => (Rel::Le, rhs),
                            "<" => (Rel::Le, rhs.add(&LinExpr::constant(-1))),
                            ">=" => (Rel::Ge, rhs),
                            _ => (Rel::Ge, rhs.add(&LinExpr::constant(1))),
                        };
                        Expr::Atom(Atom::Lin { lhs, rel, rhs })
                    })
                    .collect();
                Ok(Value::Bool(if conj.len() == 1 {
                    conj.pop().unwrap()
                } else {
                    Expr::And(conj)
                }))
            }
            "+" => {
                arity(1, MANY)?;
                let mut acc = LinExpr::constant(0);
                for a in args {
                    acc = acc.add(&self.int_arg(a)?);
                }
                Ok(Value::Int(acc))
            }
            "-" => {
                arity(1, MANY)?;
                let first = self.int_arg(&args[0])?;
                if args.len() == 1 {
                    return Ok(Value::Int(first.scale(-1)));
                }
                let mut acc = first;
                for a in &args[1..] {
                    acc = acc.sub(&self.int_arg(a)?);
                }
                Ok(Value::Int(acc))
            }
            "*" => {
                arity(2, MANY)?;
                let mut acc = LinExpr::constant(1);
                for a in args {
                    let v = self.int_arg(a)?;
                    acc = if acc.is_constant() {
                        v.scale(acc.constant)
                    } else if v.is_constant() {
                        acc.scale(v.constant)
                    } else {
                        return Err(sort_err(pos, "non-linear multiplication"));
                    };
                }
                Ok(Value::Int(acc))
            }
            "str.len" => {
                arity(1, 1)?;
                Ok(Value::Int(self.str_arg(&args[0])?.length_expr()))
            }
            "str.++" => {
                arity(1, MANY)?;
                let mut acc = Pattern::default();
                for a in args {
                    acc = acc.concat(&self.str_arg(a)?);
                }
                Ok(Value::Str(acc))
            }
            "str.in_re" | "str.in.re" => {
                arity(2, 2)?;
                let pattern = self.str_arg(&args[0])?;
                let regex = self.re_arg(&args[1])?;
                Ok(Value::Bool(Expr::Atom(Atom::Member {
                    pattern,
                    regex,
                    positive: true,
                })))
            }
            "numstr" => {
                arity(2, 2)?;
                let num = self.int_arg(&args[0])?;
                let pattern = self.str_arg(&args[1])?;
                Ok(Value::Bool(Expr::Atom(Atom::NumStr {
                    num,
                    pattern,
                    positive: true,
                })))
            }
            "str.to_re" | "str.to.re" => {
                arity(1, 1)?;
                let p = self.str_arg(&args[0])?;
                let w = p
                    .as_constant()
                    .ok_or_else(|| sort_err(args[0].pos(), "regex terms must be ground"))?;
                Ok(Value::Re(Regex::word(&w)))
            }
            "re.++" | "re.union" => {
                arity(1, MANY)?;
                let parts = args.iter().map(|a| self.re_arg(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Re(if head == "re.++" {
                    Regex::concat_all(parts)
                } else {
                    Regex::union_all(parts)
                }))
            }
            "re.*" | "re.+" | "re.opt" | "re.comp" => {
                arity(1, 1)?;
                let r = self.re_arg(&args[0])?;
                Ok(Value::Re(match head {
                    "re.*" => Regex::star(r),
                    "re.+" => Regex::concat(r.clone(), Regex::star(r)),
                    "re.opt" => Regex::union(r, Regex::Epsilon),
                    _ => Regex::complement(r),
                }))
            }
            "re.range" => {
                arity(2, 2)?;
                let bound = |e: &SExpr| -> Result<char, ParseError> {
                    match e {
                        SExpr::Str(s, _) if s.chars().count() == 1 => Ok(s.chars().next().unwrap()),
                        other => Err(sort_err(other.pos(), "re.range expects one-character strings")),
                    }
                };
                let (lo, hi) = (bound(&args[0])?, bound(&args[1])?);
                Ok(Value::Re(Regex::union_all(
                    self.alphabet
                        .symbols()
                        .iter()
                        .filter(|&&c| lo <= c && c <= hi)
                        .map(|&c| Regex::Literal(c)),
                )))
            }
            other => Err(unknown(items[0].pos(), other)),
        }
    }

    fn equality(&self, a: &Value, b: &Value, pos: Pos) -> Result<Expr, ParseError> {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => Ok(Expr::Atom(Atom::Lin {
                lhs: x.clone(),
                rel: Rel::Eq,
                rhs: y.clone(),
            })),
            (Value::Str(x), Value::Str(y)) => Ok(Expr::Atom(Atom::WordEq {
                lhs: x.clone(),
                rhs: y.clone(),
                positive: true,
            })),
            (Value::Bool(x), Value::Bool(y)) => Ok(Expr::Or(vec![
                Expr::And(vec![x.clone(), y.clone()]),
                Expr::And(vec![Expr::not(x.clone()), Expr::not(y.clone())]),
            ])),
            _ => Err(sort_err(
                pos,
                format!("cannot compare {} with {}", a.sort_name(), b.sort_name()),
            )),
        }
    }
}
