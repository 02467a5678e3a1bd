//! Rendering of formulas back into the SMT-LIB subset accepted by the parser.

use std::fmt::Write;

use super::ast::*;

pub fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\"\""),
            c if (' '..='~').contains(&c) => out.push(c),
            c => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
        }
    }
    out.push('"');
    out
}

pub fn pattern_to_smtlib(p: &Pattern, vars: &VarTable) -> String {
    let item = |i: &PatItem| match i {
        PatItem::Var(v) => vars.str_name(*v).to_string(),
        PatItem::Const(c) => quote(c),
    };
    match p.items() {
        [] => quote(""),
        [single] => item(single),
        items => format!(
            "(str.++ {})",
            items.iter().map(item).collect::<Vec<_>>().join(" ")
        ),
    }
}

pub fn regex_to_smtlib(r: &Regex) -> String {
    match r {
        Regex::Empty => "re.none".into(),
        Regex::Epsilon => "(str.to_re \"\")".into(),
        Regex::Literal(c) => format!("(str.to_re {})", quote(&c.to_string())),
        Regex::Concat(a, b) => format!("(re.++ {} {})", regex_to_smtlib(a), regex_to_smtlib(b)),
        Regex::Union(a, b) => format!("(re.union {} {})", regex_to_smtlib(a), regex_to_smtlib(b)),
        Regex::Star(a) => format!("(re.* {})", regex_to_smtlib(a)),
        Regex::Complement(a) => format!("(re.comp {})", regex_to_smtlib(a)),
    }
}

fn int_lit(n: i64) -> String {
    if n < 0 {
        format!("(- {})", n.unsigned_abs())
    } else {
        n.to_string()
    }
}

pub fn lin_to_smtlib(e: &LinExpr, vars: &VarTable) -> String {
    let mut parts: Vec<String> = e
        .terms
        .iter()
        .map(|(t, &c)| {
            let base = match t {
                Term::Int(v) => vars.int_name(*v).to_string(),
                Term::Len(v) => format!("(str.len {})", vars.str_name(*v)),
                Term::Num(v) => format!("(@num {})", vars.str_name(*v)),
            };
            if c == 1 {
                base
            } else {
                format!("(* {} {})", int_lit(c), base)
            }
        })
        .collect();
    if e.constant != 0 || parts.is_empty() {
        parts.push(int_lit(e.constant));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

pub fn atom_to_smtlib(a: &Atom, vars: &VarTable) -> String {
    let (body, positive) = match a {
        Atom::Member {
            pattern,
            regex,
            positive,
        } => (
            format!(
                "(str.in_re {} {})",
                pattern_to_smtlib(pattern, vars),
                regex_to_smtlib(regex)
            ),
            *positive,
        ),
        Atom::NumStr {
            num,
            pattern,
            positive,
        } => (
            format!(
                "(numstr {} {})",
                lin_to_smtlib(num, vars),
                pattern_to_smtlib(pattern, vars)
            ),
            *positive,
        ),
        Atom::WordEq { lhs, rhs, positive } => (
            format!(
                "(= {} {})",
                pattern_to_smtlib(lhs, vars),
                pattern_to_smtlib(rhs, vars)
            ),
            *positive,
        ),
        Atom::Lin { lhs, rel, rhs } => {
            let op = match rel {
                Rel::Le => "<=",
                Rel::Eq | Rel::Ne => "=",
                Rel::Ge => ">=",
            };
            (
                format!(
                    "({op} {} {})",
                    lin_to_smtlib(lhs, vars),
                    lin_to_smtlib(rhs, vars)
                ),
                *rel != Rel::Ne,
            )
        }
    };
    if positive {
        body
    } else {
        format!("(not {body})")
    }
}

pub fn expr_to_smtlib(e: &Expr, vars: &VarTable) -> String {
    match e {
        Expr::True => "true".into(),
        Expr::False => "false".into(),
        Expr::Atom(a) => atom_to_smtlib(a, vars),
        Expr::Not(inner) => format!("(not {})", expr_to_smtlib(inner, vars)),
        Expr::And(parts) | Expr::Or(parts) => {
            let op = if matches!(e, Expr::And(_)) { "and" } else { "or" };
            let inner: Vec<String> = parts.iter().map(|p| expr_to_smtlib(p, vars)).collect();
            format!("({op} {})", inner.join(" "))
        }
    }
}

/// Full script: alphabet, declarations in order, one assertion per top-level
/// conjunct, and `(check-sat)`.
pub fn to_smtlib(f: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(set-info :alphabet {})", quote(&f.alphabet.as_string()));
    if f.strict_numstr {
        let _ = writeln!(out, "(set-info :numstr-strict true)");
    }
    for v in f.vars.declaration_order() {
        let (name, sort) = match v {
            VarRef::Str(s) => (f.vars.str_name(*s), "String"),
            VarRef::Int(i) => (f.vars.int_name(*i), "Int"),
        };
        let _ = writeln!(out, "(declare-fun {name} () {sort})");
    }
    let conjuncts: Vec<&Expr> = match &f.root {
        Expr::And(parts) => parts.iter().collect(),
        other => vec![other],
    };
    for c in conjuncts {
        let _ = writeln!(out, "(assert {})", expr_to_smtlib(c, &f.vars));
    }
    out.push_str("(check-sat)\n");
    out
}
