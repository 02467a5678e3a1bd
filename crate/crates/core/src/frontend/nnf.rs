use super::ast::{Expr, Formula};

/// Pushes negations onto atoms. The result contains no `Not` nodes, nested
/// conjunctions/disjunctions are flattened and constants are folded.
pub fn to_nnf(f: &Formula) -> Formula {
    Formula {
        root: nnf_expr(&f.root, false),
        ..f.clone()
    }
}

pub fn nnf_expr(e: &Expr, negated: bool) -> Expr {
    match (e, negated) {
        (Expr::True, false) | (Expr::False, true) => Expr::True,
        (Expr::True, true) | (Expr::False, false) => Expr::False,
        (Expr::Atom(a), false) => Expr::Atom(a.clone()),
        (Expr::Atom(a), true) => Expr::Atom(a.negate()),
        (Expr::Not(inner), _) => nnf_expr(inner, !negated),
        (Expr::And(parts), false) | (Expr::Or(parts), true) => {
            junction(parts.iter().map(|p| nnf_expr(p, negated)), true)
        }
        (Expr::Or(parts), false) | (Expr::And(parts), true) => {
            junction(parts.iter().map(|p| nnf_expr(p, negated)), false)
        }
    }
}

fn junction(parts: impl Iterator<Item = Expr>, conj: bool) -> Expr {
    let (unit, zero) = if conj {
        (Expr::True, Expr::False)
    } else {
        (Expr::False, Expr::True)
    };
    let mut out = Vec::new();
    for p in parts {
        if p == zero {
            return zero;
        }
        if p == unit {
            continue;
        }
        match p {
            Expr::And(inner) if conj => out.extend(inner),
            Expr::Or(inner) if !conj => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => unit,
        1 => out.pop().unwrap(),
        _ if conj => Expr::And(out),
        _ => Expr::Or(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::ast::*;

    fn member(positive: bool) -> Atom {
        Atom::Member {
            pattern: Pattern::var(StrVar(0)),
            regex: Regex::star(Regex::lit('a')),
            positive,
        }
    }

    fn len_le(k: i64) -> Atom {
        Atom::Lin {
            lhs: LinExpr::term(Term::Len(StrVar(0))),
            rel: Rel::Le,
            rhs: LinExpr::constant(k),
        }
    }

    #[test]
    fn de_morgan() {
        let a = Expr::Atom(member(true));
        let b = Expr::Atom(len_le(3));
        let e = nnf_expr(&Expr::not(Expr::Or(vec![a, b])), false);
        assert_eq!(
            e,
            Expr::And(vec![
                Expr::Atom(member(false)),
                Expr::Atom(Atom::Lin {
                    lhs: LinExpr::term(Term::Len(StrVar(0))),
                    rel: Rel::Ge,
                    rhs: LinExpr::constant(4),
                })
            ])
        );
    }

    #[test]
    fn double_negation() {
        let e = nnf_expr(&Expr::not(Expr::not(Expr::Atom(member(true)))), false);
        assert_eq!(e, Expr::Atom(member(true)));
    }

    #[test]
    fn negated_equality_becomes_disequality() {
        let eq = Atom::Lin {
            lhs: LinExpr::term(Term::Int(IntVar(0))),
            rel: Rel::Eq,
            rhs: LinExpr::constant(2),
        };
        match nnf_expr(&Expr::not(Expr::Atom(eq)), false) {
            Expr::Atom(Atom::Lin { rel, .. }) => assert_eq!(rel, Rel::Ne),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constants_fold() {
        let e = Expr::And(vec![Expr::True, Expr::not(Expr::False), Expr::Atom(member(true))]);
        assert_eq!(nnf_expr(&e, false), Expr::Atom(member(true)));
        let e = Expr::Or(vec![Expr::Atom(member(true)), Expr::not(Expr::False)]);
        assert_eq!(nnf_expr(&e, false), Expr::True);
    }
}
