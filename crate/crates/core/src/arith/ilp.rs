//! Pure integer linear feasibility and minimization.
//!
//! Equalities are eliminated exactly over the integers (Euclid-style
//! coefficient reduction, then substitution of a unit-coefficient variable),
//! inequalities are tightened by the gcd of their coefficients, and what is
//! left goes to branch-and-bound over the rational relaxation.
//!
//! Termination: if an integer system with `m` constraints, `n` variables and
//! coefficients of absolute value at most `a` has a solution, it has one
//! with every entry at most `n·(m·a)^(2m+1)` in absolute value. Branches
//! leaving that ball are cut, so the search tree is finite; a node budget
//! keeps it practical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lp::{minimize, Cmp, LpResult, Row};
use super::ArithError;

/// Affine form `Σ coeffs[j]·y_j + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
}

impl Affine {
    fn eval(&self, y: &[BigInt]) -> BigInt {
        self.coeffs
            .iter()
            .zip(y)
            .map(|(c, v)| c * v)
            .fold(self.constant.clone(), |a, b| a + b)
    }
}

/// `Σ coeffs·x ≤ rhs` or `= rhs` over original variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntConstraint {
    pub coeffs: Vec<BigInt>,
    pub eq: bool,
    pub rhs: BigInt,
}

/// Integer system after equality elimination: inequalities `Σ a·y ≤ b` over
/// fresh variables `y`, and every original variable as an affine form in `y`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub width: usize,
    pub ineqs: Vec<(Vec<BigInt>, BigInt)>,
    pub subst: Vec<Affine>,
    radius: BigInt,
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

// Replaces y_k by `e` (which has a zero coefficient at k) in `coeffs·y + c`.
fn substitute(coeffs: &mut [BigInt], constant: &mut BigInt, k: usize, e: &Affine) {
    let f = std::mem::take(&mut coeffs[k]);
    if f.is_zero() {
        return;
    }
    for (j, ej) in e.coeffs.iter().enumerate() {
        if !ej.is_zero() {
            coeffs[j] += &f * ej;
        }
    }
    *constant += &f * &e.constant;
}

fn bit_len(v: &BigInt) -> u64 {
    v.bits().max(1)
}

/// Eliminates equalities and tightens inequalities. `None` if the system is
/// found infeasible on the way.
pub fn reduce(n: usize, constraints: &[IntConstraint]) -> Option<Reduced> {
    let mut width = n;
    // rows as (coeffs, constant) meaning coeffs·y + constant (≤ | =) 0
    let mut ineqs: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    let mut eqs: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    for c in constraints {
        let mut coeffs = c.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        let row = (coeffs, -c.rhs.clone());
        if c.eq {
            eqs.push(row);
        } else {
            ineqs.push(row);
        }
    }
    let mut subst: Vec<Affine> = (0..n)
        .map(|i| {
            let mut coeffs = vec![BigInt::zero(); n];
            coeffs[i] = BigInt::one();
            Affine {
                coeffs,
                constant: BigInt::zero(),
            }
        })
        .collect();

    let extend = |rows: &mut Vec<(Vec<BigInt>, BigInt)>, w: usize| {
        for r in rows.iter_mut() {
            r.0.resize(w, BigInt::zero());
        }
    };

    while let Some((mut coeffs, mut constant)) = eqs.pop() {
        loop {
            let g = gcd_all(&coeffs);
            if g.is_zero() {
                if !constant.is_zero() {
                    return None;
                }
                break;
            }
            if !(&constant % &g).is_zero() {
                return None;
            }
            coeffs.iter_mut().for_each(|c| *c = &*c / &g);
            constant = &constant / &g;
            let (k, _) = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .min_by_key(|(_, c)| c.abs())
                .expect("nonzero gcd means a nonzero coefficient");
            if coeffs[k].is_negative() {
                coeffs.iter_mut().for_each(|c| *c = -&*c);
                constant = -constant;
            }
            let a = coeffs[k].clone();
            let e = if a.is_one() {
                // y_k = -(Σ_{j≠k} c_j y_j + constant)
                let mut ec: Vec<BigInt> = coeffs.iter().map(|c| -c).collect();
                ec[k] = BigInt::zero();
                Affine {
                    coeffs: ec,
                    constant: -constant.clone(),
                }
            } else {
                // y_k = t - Σ_{j≠k} floor(c_j / a)·y_j with a fresh t
                let t = width;
                width += 1;
                for c in subst.iter_mut() {
                    c.coeffs.resize(width, BigInt::zero());
                }
                extend(&mut ineqs, width);
                extend(&mut eqs, width);
                coeffs.resize(width, BigInt::zero());
                let mut ec = vec![BigInt::zero(); width];
                for j in 0..width {
                    if j != k && !coeffs[j].is_zero() {
                        ec[j] = -coeffs[j].div_floor(&a);
                    }
                }
                ec[t] = BigInt::one();
                Affine {
                    coeffs: ec,
                    constant: BigInt::zero(),
                }
            };
            for r in ineqs.iter_mut().chain(eqs.iter_mut()) {
                substitute(&mut r.0, &mut r.1, k, &e);
            }
            for s in subst.iter_mut() {
                substitute(&mut s.coeffs, &mut s.constant, k, &e);
            }
            let unit = a.is_one();
            substitute(&mut coeffs, &mut constant, k, &e);
            if unit {
                debug_assert!(coeffs.iter().all(Zero::is_zero) && constant.is_zero());
                break;
            }
        }
    }

    // tighten: a·y ≤ -c  ⇒  (a/g)·y ≤ floor(-c / g)
    let mut out = Vec::with_capacity(ineqs.len());
    for (mut coeffs, constant) in ineqs {
        coeffs.resize(width, BigInt::zero());
        let rhs = -constant;
        let g = gcd_all(&coeffs);
        if g.is_zero() {
            if rhs.is_negative() {
                return None;
            }
            continue;
        }
        coeffs.iter_mut().for_each(|c| *c = &*c / &g);
        out.push((coeffs, rhs.div_floor(&g)));
    }
    out.sort();
    out.dedup();

    let m = out.len().max(1) as u64;
    let a_max = out
        .iter()
        .flat_map(|(c, b)| c.iter().chain(std::iter::once(b)))
        .map(bit_len)
        .max()
        .unwrap_or(1);
    let exp = (width.max(1) as u64).ilog2() as u64 + 1 + (2 * m + 1) * (64 - m.leading_zeros() as u64 + a_max);
    Some(Reduced {
        width,
        ineqs: out,
        subst,
        radius: BigInt::one() << exp,
    })
}

fn floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

fn ceil(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

#[derive(Clone)]
struct Bound {
    var: usize,
    upper: bool,
    value: BigInt,
}

impl Reduced {
    fn rows(&self, extra: &[(Vec<BigInt>, BigInt)], bounds: &[Bound]) -> Vec<Row> {
        let mut rows: Vec<Row> = self
            .ineqs
            .iter()
            .chain(extra)
            .map(|(c, b)| Row {
                coeffs: c.clone(),
                cmp: Cmp::Le,
                rhs: b.clone(),
            })
            .collect();
        for b in bounds {
            let mut c = vec![BigInt::zero(); self.width];
            c[b.var] = BigInt::one();
            rows.push(Row {
                coeffs: c,
                cmp: if b.upper { Cmp::Le } else { Cmp::Ge },
                rhs: b.value.clone(),
            });
        }
        rows
    }

    /// Minimizes `objective` (an affine form over `y`) over integer points
    /// satisfying the inequalities and `extra`. With `objective = None`
    /// returns the first integer point found. The objective must be bounded
    /// below on the relaxation.
    pub fn branch_and_bound(
        &self,
        extra: &[(Vec<BigInt>, BigInt)],
        objective: Option<&Affine>,
        budget: &mut usize,
    ) -> Result<Option<Vec<BigInt>>, ArithError> {
        let zero = vec![BigInt::zero(); self.width];
        let obj = objective.map(|o| &o.coeffs).unwrap_or(&zero);
        let mut best: Option<(BigInt, Vec<BigInt>)> = None;
        let mut stack: Vec<Vec<Bound>> = vec![Vec::new()];
        while let Some(bounds) = stack.pop() {
            if *budget == 0 {
                return Err(ArithError::BudgetExceeded);
            }
            *budget -= 1;
            let (value, x) = match minimize(self.width, &self.rows(extra, &bounds), obj) {
                LpResult::Infeasible => continue,
                LpResult::Unbounded => unreachable!("objective bounded below by construction"),
                LpResult::Optimal { value, x } => (value, x),
            };
            if let Some((b, _)) = &best {
                if ceil(&value) >= *b {
                    continue;
                }
            }
            match x.iter().position(|v| !v.is_integer()) {
                None => {
                    let y: Vec<BigInt> = x.iter().map(|v| v.to_integer()).collect();
                    match objective {
                        None => return Ok(Some(y)),
                        Some(o) => {
                            let v = o.eval(&y) - &o.constant;
                            best = Some((v, y));
                        }
                    }
                }
                Some(j) => {
                    let lo = floor(&x[j]);
                    let hi: BigInt = &lo + BigInt::one();
                    let mut down = bounds.clone();
                    down.push(Bound {
                        var: j,
                        upper: true,
                        value: lo.clone(),
                    });
                    let mut up = bounds;
                    up.push(Bound {
                        var: j,
                        upper: false,
                        value: hi.clone(),
                    });
                    if hi <= self.radius {
                        stack.push(up);
                    }
                    if -&lo <= self.radius {
                        stack.push(down);
                    }
                }
            }
        }
        Ok(best.map(|(_, y)| y))
    }

    /// Original variable values of a point.
    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.subst.iter().map(|s| s.eval(y)).collect()
    }
}

// 0, 1, -1, 2, -2, ... within [lo, hi], stopping once |v| exceeds `stop`.
fn candidates(lo: BigInt, hi: BigInt, stop: BigInt) -> impl Iterator<Item = BigInt> {
    let mut k = BigInt::zero();
    std::iter::from_fn(move || loop {
        if k > stop {
            return None;
        }
        let v = if k.is_positive() && (&k % 2u32).is_zero() {
            -(&k / 2u32)
        } else {
            (&k + 1u32) / 2u32
        };
        k += 1u32;
        if v >= lo && v <= hi {
            return Some(v);
        }
    })
}

fn lp_range(n: usize, rows: &[Row], var: usize) -> (Option<BigInt>, Option<BigInt>) {
    let mut obj = vec![BigInt::zero(); n];
    obj[var] = BigInt::one();
    let lo = match minimize(n, rows, &obj) {
        LpResult::Optimal { value, .. } => Some(ceil(&value)),
        _ => None,
    };
    obj[var] = -BigInt::one();
    let hi = match minimize(n, rows, &obj) {
        LpResult::Optimal { value, .. } => Some(-ceil(&value)),
        _ => None,
    };
    (lo, hi)
}

/// Feasibility of `constraints` over `n` integer variables, returning the
/// assignment lexicographically smallest on the first `lead` variables
/// under the order `|v|` first, then nonnegative before negative.
///
/// A first feasible point bounds every search: for each leading variable
/// only values no larger in absolute value than its current value are
/// tried, each by fixing it and re-deciding feasibility.
pub fn lex_min(
    n: usize,
    constraints: &[IntConstraint],
    lead: usize,
    budget: &mut usize,
) -> Result<Option<Vec<BigInt>>, ArithError> {
    let feasible = |cs: &[IntConstraint], budget: &mut usize| -> Result<Option<Vec<BigInt>>, ArithError> {
        let Some(r) = reduce(n, cs) else { return Ok(None) };
        Ok(r.branch_and_bound(&[], None, budget)?.map(|y| r.lift(&y)))
    };
    let Some(mut vals) = feasible(constraints, budget)? else {
        return Ok(None);
    };
    let mut cs = constraints.to_vec();
    for i in 0..lead.min(n) {
        let rows: Vec<Row> = cs
            .iter()
            .map(|c| Row {
                coeffs: c.coeffs.clone(),
                cmp: if c.eq { Cmp::Eq } else { Cmp::Le },
                rhs: c.rhs.clone(),
            })
            .collect();
        let cur = vals[i].clone();
        let bound = cur.abs();
        let (lo, hi) = lp_range(n, &rows, i);
        let lo = lo.map_or(-&bound, |l| l.max(-&bound));
        let hi = hi.map_or(bound.clone(), |h| h.min(bound.clone()));
        for v in candidates(lo, hi, &bound * 2u32) {
            if v == cur {
                break;
            }
            if *budget == 0 {
                return Err(ArithError::BudgetExceeded);
            }
            *budget -= 1;
            let mut unit = vec![BigInt::zero(); n];
            unit[i] = BigInt::one();
            let mut trial = cs.clone();
            trial.push(IntConstraint {
                coeffs: unit,
                eq: true,
                rhs: v,
            });
            if let Some(p) = feasible(&trial, budget)? {
                vals = p;
                break;
            }
        }
        let mut unit = vec![BigInt::zero(); n];
        unit[i] = BigInt::one();
        cs.push(IntConstraint {
            coeffs: unit,
            eq: true,
            rhs: vals[i].clone(),
        });
    }
    Ok(Some(vals))
}
