use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::frontend::{Atom, Expr, Formula, IntVar, LinExpr, Pattern, Regex, Rel, StrVar, Term};

use super::{bin_value, is_binary, min_bin, NumstrError};

/// Prefix of integer variables introduced for compound numstr terms.
pub const FRESH_PREFIX: &str = "ns!j";

/// Records that the binary value of `var` is tied to the integer `num`, and
/// the regular constraint `constraint` imposed on `var` for that purpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumstrLink {
    pub num: IntVar,
    pub var: StrVar,
    pub positive: bool,
    pub constraint: Regex,
}

#[derive(Clone, Debug)]
pub struct Rewritten {
    pub formula: Formula,
    pub links: Vec<NumstrLink>,
}

/// `{0,1}*`, or `{0,1}+` when the empty word is not a number.
pub fn binary_regex(strict: bool) -> Regex {
    let bit = Regex::union(Regex::lit('0'), Regex::lit('1'));
    if strict {
        Regex::concat(bit.clone(), Regex::star(bit))
    } else {
        Regex::star(bit)
    }
}

/// Words denoting `m`: `0*·min_bin(m)`. For zero this is `0*`, or `0*0` in
/// strict mode.
pub fn value_regex(m: &BigUint, strict: bool) -> Regex {
    let zeros = Regex::star(Regex::lit('0'));
    if m.bits() == 0 && !strict {
        return zeros;
    }
    Regex::concat(zeros, Regex::word(&min_bin(m.clone())))
}

fn member(var: StrVar, regex: Regex, positive: bool) -> Expr {
    Expr::atom(Atom::Member {
        pattern: Pattern::var(var),
        regex,
        positive,
    })
}

fn lin(lhs: LinExpr, rel: Rel, rhs: LinExpr) -> Expr {
    Expr::atom(Atom::Lin { lhs, rel, rhs })
}

struct Rewriter {
    strict: bool,
    vars: crate::frontend::VarTable,
    defs: Vec<Expr>,
    links: Vec<NumstrLink>,
}

impl Rewriter {
    fn atom(&mut self, num: &LinExpr, pattern: &Pattern, positive: bool) -> Result<Expr, NumstrError> {
        let holds = |b: bool| if b == positive { Expr::True } else { Expr::False };
        if let Some(w) = pattern.as_constant() {
            if !is_binary(&w) || (self.strict && w.is_empty()) {
                return Ok(holds(false));
            }
            let value = BigInt::from(bin_value(&w)?);
            if num.is_constant() {
                return Ok(holds(BigInt::from(num.constant) == value));
            }
            // an i64-valued expression can still exceed i64 through its
            // coefficients, but such values are outside the model space
            let Some(v) = value.to_i64() else {
                return Ok(holds(false));
            };
            let rel = if positive { Rel::Eq } else { Rel::Ne };
            return Ok(lin(num.clone(), rel, LinExpr::constant(v)));
        }
        let Some(y) = pattern.as_single_var() else {
            return Err(NumstrError::UnsupportedPattern(pattern.items().len()));
        };
        if num.is_constant() {
            if num.constant < 0 {
                return Ok(holds(false));
            }
            let m = BigInt::from(num.constant).magnitude().clone();
            return Ok(member(y, value_regex(&m, self.strict), positive));
        }
        let j = match num.as_single_int_var() {
            Some(v) => v,
            None => {
                let j = self.vars.fresh_int(FRESH_PREFIX);
                self.defs.push(lin(LinExpr::term(Term::Int(j)), Rel::Eq, num.clone()));
                j
            }
        };
        let bin = binary_regex(self.strict);
        self.links.push(NumstrLink {
            num: j,
            var: y,
            positive,
            constraint: bin.clone(),
        });
        let mut diff = LinExpr::term(Term::Int(j));
        diff.add_term(Term::Num(y), -1);
        Ok(if positive {
            Expr::and(vec![member(y, bin, true), lin(diff, Rel::Eq, LinExpr::constant(0))])
        } else {
            // a negative j differs from every binary value, so no sign case
            Expr::or(vec![
                member(y, bin.clone(), false),
                Expr::and(vec![member(y, bin, true), lin(diff, Rel::Ne, LinExpr::constant(0))]),
            ])
        })
    }

    fn expr(&mut self, e: &Expr) -> Result<Expr, NumstrError> {
        Ok(match e {
            Expr::True | Expr::False => e.clone(),
            Expr::Atom(Atom::NumStr {
                num,
                pattern,
                positive,
            }) => self.atom(num, pattern, *positive)?,
            Expr::Atom(_) => e.clone(),
            Expr::Not(inner) => Expr::not(self.expr(inner)?),
            Expr::And(es) => Expr::and(es.iter().map(|e| self.expr(e)).collect::<Result<_, _>>()?),
            Expr::Or(es) => Expr::or(es.iter().map(|e| self.expr(e)).collect::<Result<_, _>>()?),
        })
    }
}

/// Replaces every numstr atom by membership and linear atoms.
///
/// * `numstr(m, y)` for a constant `m` becomes `y ∈ 0*·min_bin(m)`.
/// * `numstr(t, y)` for an integer term becomes `y ∈ {0,1}* ∧ j = Num(y)`,
///   where `j` is `t` itself if it is a variable and a fresh variable
///   defined by `j = t` otherwise; a link `j → y` is recorded.
/// * A constant pattern turns the atom into a linear atom or a constant.
///
/// Negative atoms become `y ∉ {0,1}* ∨ (y ∈ {0,1}* ∧ j ≠ Num(y))`, or the
/// negated membership when `m` is constant. Patterns with more than one item
/// are rejected.
pub fn rewrite_numstr(f: &Formula) -> Result<Rewritten, NumstrError> {
    let mut rw = Rewriter {
        strict: f.strict_numstr,
        vars: f.vars.clone(),
        defs: Vec::new(),
        links: Vec::new(),
    };
    let mut root = rw.expr(&f.root)?;
    if !rw.defs.is_empty() {
        let mut parts = std::mem::take(&mut rw.defs);
        parts.push(root);
        root = Expr::and(parts);
    }
    let mut formula = Formula::new(f.alphabet.clone(), rw.vars, root);
    formula.strict_numstr = f.strict_numstr;
    Ok(Rewritten {
        formula,
        links: rw.links,
    })
}
