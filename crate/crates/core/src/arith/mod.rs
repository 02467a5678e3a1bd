//! Integer constraints over integer variables and string lengths, where
//! each length variable additionally ranges over a [`ProgressionSet`].
//!
//! Small bounded systems are decided by enumerating the box left after
//! bound propagation. Otherwise one progression is chosen per length
//! variable (`len = p + c·r`, `r ≥ 0`), disequalities are split, and the
//! resulting pure system goes to [`ilp`].

pub mod ilp;
pub mod lp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::frontend::Rel;
use crate::lengths::ProgressionSet;

use ilp::IntConstraint;
use lp::{Cmp, LpResult, Row};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("a witness value does not fit in 64 bits")]
    Overflow,
    #[error("branch-and-bound node budget exhausted")]
    BudgetExceeded,
}

/// `Σ coeffs·v rel rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinConstraint {
    pub coeffs: Vec<(usize, i64)>,
    pub rel: Rel,
    pub rhs: i64,
}

impl LinConstraint {
    pub fn new(coeffs: Vec<(usize, i64)>, rel: Rel, rhs: i64) -> Self {
        LinConstraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, values: &[i64]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .map(|&(v, a)| a as i128 * values[v] as i128)
            .sum();
        self.rel.holds(lhs, self.rhs as i128)
    }
}

/// Variables are identified by index; the index order is the order used
/// for witness selection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub names: Vec<String>,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<LinConstraint>,
    pub progressions: BTreeMap<usize, ProgressionSet>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, nonneg: bool) -> usize {
        self.names.push(name.into());
        self.nonneg.push(nonneg);
        self.names.len() - 1
    }

    /// A length variable: nonnegative and restricted to `set`.
    pub fn add_len_var(&mut self, name: impl Into<String>, set: ProgressionSet) -> usize {
        let v = self.add_var(name, true);
        self.progressions.insert(v, set);
        v
    }

    pub fn add_constraint(&mut self, c: LinConstraint) {
        self.constraints.push(c);
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Exact re-check of an assignment.
    pub fn check(&self, values: &[i64]) -> bool {
        values.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.holds(values))
            && (0..self.num_vars()).all(|v| !self.nonneg[v] || values[v] >= 0)
            && self
                .progressions
                .iter()
                .all(|(&v, s)| values[v] >= 0 && s.contains(values[v] as u64))
    }
}

#[derive(Clone, Debug)]
pub struct ArithConfig {
    /// Branch-and-bound nodes over a whole call.
    pub node_budget: usize,
    /// Largest box enumerated directly.
    pub enumeration_limit: u64,
}

impl Default for ArithConfig {
    fn default() -> Self {
        ArithConfig {
            node_budget: 20_000,
            enumeration_limit: 200_000,
        }
    }
}

type Interval = (Option<i128>, Option<i128>);

// Sound bound propagation; `None` if some interval becomes empty.
fn propagate(sys: &LinearSystem) -> Option<Vec<Interval>> {
    let n = sys.num_vars();
    let mut b: Vec<Interval> = (0..n)
        .map(|v| (if sys.nonneg[v] { Some(0) } else { None }, None))
        .collect();
    for (&v, s) in &sys.progressions {
        let lo = s.min()? as i128;
        b[v].0 = Some(b[v].0.map_or(lo, |x| x.max(lo)));
        if let Some(hi) = s.max() {
            b[v].1 = Some(hi as i128);
        }
    }
    // each constraint as Σ a v ≤ r
    let mut rows: Vec<(Vec<(usize, i128)>, i128)> = Vec::new();
    for c in &sys.constraints {
        let co: Vec<(usize, i128)> = c.coeffs.iter().map(|&(v, a)| (v, a as i128)).collect();
        let neg: Vec<(usize, i128)> = co.iter().map(|&(v, a)| (v, -a)).collect();
        let r = c.rhs as i128;
        match c.rel {
            Rel::Le => rows.push((co, r)),
            Rel::Ge => rows.push((neg, -r)),
            Rel::Eq => {
                rows.push((co, r));
                rows.push((neg, -r));
            }
            Rel::Ne => {}
        }
    }
    const CAP: i128 = 1 << 100;
    for _ in 0..8 * (n + 1) {
        let mut changed = false;
        for (co, r) in &rows {
            // minimal contribution of each term
            let mins: Vec<Option<i128>> = co
                .iter()
                .map(|&(v, a)| if a >= 0 { b[v].0.map(|l| a * l) } else { b[v].1.map(|h| a * h) })
                .collect();
            let unknown = mins.iter().filter(|m| m.is_none()).count();
            if unknown > 1 {
                continue;
            }
            let known: i128 = mins.iter().flatten().sum();
            for (i, &(v, a)) in co.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let rest = match mins[i] {
                    Some(m) if unknown == 0 => known - m,
                    None => known,
                    Some(_) => continue,
                };
                let slack = r - rest;
                if slack.abs() > CAP {
                    continue;
                }
                if a > 0 {
                    let hi = slack.div_euclid(a);
                    if b[v].1.is_none_or(|h| hi < h) {
                        b[v].1 = Some(hi);
                        changed = true;
                    }
                } else {
                    // a·v ≤ slack ⇒ v ≥ ceil(slack / a)
                    let lo = -(slack.div_euclid(-a));
                    if b[v].0.is_none_or(|l| lo > l) {
                        b[v].0 = Some(lo);
                        changed = true;
                    }
                }
                if let (Some(l), Some(h)) = b[v] {
                    if l > h {
                        return None;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Some(b)
}

// 0, 1, -1, 2, -2, ... restricted to [lo, hi]
fn ordered_values(lo: i128, hi: i128) -> Vec<i64> {
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    let start = if lo > 0 { lo } else if hi < 0 { hi } else { 0 };
    out.push(start as i64);
    let (mut up, mut down) = (start + 1, start - 1);
    while up <= hi || down >= lo {
        if up <= hi && (down < lo || up.abs() <= down.abs()) {
            out.push(up as i64);
            up += 1;
        } else {
            out.push(down as i64);
            down -= 1;
        }
    }
    out
}

fn enumerate(sys: &LinearSystem, bounds: &[Interval]) -> Option<Vec<i64>> {
    let n = sys.num_vars();
    let domains: Vec<Vec<i64>> = (0..n)
        .map(|v| {
            let (lo, hi) = (bounds[v].0.unwrap(), bounds[v].1.unwrap());
            ordered_values(lo, hi)
                .into_iter()
                .filter(|&x| sys.progressions.get(&v).is_none_or(|s| s.contains(x as u64)))
                .collect()
        })
        .collect();
    // constraints become checkable once their last variable is assigned
    let mut ready: Vec<Vec<&LinConstraint>> = vec![Vec::new(); n];
    for c in &sys.constraints {
        match c.coeffs.iter().map(|&(v, _)| v).max() {
            Some(v) => ready[v].push(c),
            None => {
                if !c.rel.holds(0, c.rhs) {
                    return None;
                }
            }
        }
    }
    let mut values = vec![0i64; n];
    fn go(
        d: usize,
        values: &mut Vec<i64>,
        domains: &[Vec<i64>],
        ready: &[Vec<&LinConstraint>],
    ) -> bool {
        if d == domains.len() {
            return true;
        }
        for &x in &domains[d] {
            values[d] = x;
            if ready[d].iter().all(|c| c.holds(values)) && go(d + 1, values, domains, ready) {
                return true;
            }
        }
        false
    }
    if n == 0 {
        return Some(values);
    }
    go(0, &mut values, &domains, &ready).then_some(values)
}

/// One admissible shape for a length variable: `start + period·r` with
/// `0 ≤ r` and, if `end` is set, `start + period·r ≤ end`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LenOption {
    start: i128,
    end: Option<i128>,
    period: i128,
}

fn len_options(s: &ProgressionSet, b: Interval) -> Vec<LenOption> {
    let (lo, hi) = (b.0.unwrap_or(0), b.1);
    let mut singles: Vec<i128> = Vec::new();
    let mut out = Vec::new();
    for p in s.progressions() {
        let (off, per) = (p.offset as i128, p.period as i128);
        if per == 0 {
            if off >= lo && hi.is_none_or(|h| off <= h) {
                singles.push(off);
            }
            continue;
        }
        // first member ≥ lo
        let start = if off >= lo { off } else { off + (lo - off + per - 1) / per * per };
        if hi.is_none_or(|h| start <= h) {
            out.push(LenOption {
                start,
                end: hi,
                period: per,
            });
        }
    }
    singles.sort_unstable();
    singles.dedup();
    // merge runs of consecutive singletons into intervals
    let mut i = 0;
    while i < singles.len() {
        let mut j = i;
        while j + 1 < singles.len() && singles[j + 1] == singles[j] + 1 {
            j += 1;
        }
        out.push(LenOption {
            start: singles[i],
            end: Some(singles[j]),
            period: 1,
        });
        i = j + 1;
    }
    out.sort_by_key(|o| o.start);
    out
}

struct Search<'a> {
    sys: &'a LinearSystem,
    bounds: Vec<Interval>,
    options: Vec<(usize, Vec<LenOption>)>,
    ne: Vec<&'a LinConstraint>,
    budget: usize,
}

impl<'a> Search<'a> {
    // Pure integer constraints for a full or partial choice. Unchosen length
    // variables are relaxed to the hull of their options.
    fn constraints(
        &self,
        chosen: &[usize],
        ne_sides: &[bool],
    ) -> (usize, Vec<IntConstraint>) {
        let n = self.sys.num_vars();
        let mut width = n;
        let mut cs = Vec::new();
        let unit = |w: usize, v: usize, a: i64| {
            let mut c = vec![BigInt::zero(); w];
            c[v] = BigInt::from(a);
            c
        };
        let push = |cs: &mut Vec<IntConstraint>, coeffs: Vec<BigInt>, rel: Rel, rhs: i128| {
            let rhs = BigInt::from(rhs);
            match rel {
                Rel::Le => cs.push(IntConstraint { coeffs, eq: false, rhs }),
                Rel::Ge => cs.push(IntConstraint {
                    coeffs: coeffs.iter().map(|c| -c).collect(),
                    eq: false,
                    rhs: -rhs,
                }),
                Rel::Eq => cs.push(IntConstraint { coeffs, eq: true, rhs }),
                Rel::Ne => unreachable!("disequalities are split before this point"),
            }
        };
        for c in &self.sys.constraints {
            if c.rel == Rel::Ne {
                continue;
            }
            let mut co = vec![BigInt::zero(); n];
            for &(v, a) in &c.coeffs {
                co[v] += a;
            }
            push(&mut cs, co, c.rel, c.rhs as i128);
        }
        for (i, c) in self.ne.iter().enumerate().take(ne_sides.len()) {
            let mut co = vec![BigInt::zero(); n];
            for &(v, a) in &c.coeffs {
                co[v] += a;
            }
            if ne_sides[i] {
                push(&mut cs, co, Rel::Le, c.rhs as i128 - 1);
            } else {
                push(&mut cs, co, Rel::Ge, c.rhs as i128 + 1);
            }
        }
        for v in 0..n {
            if let Some(l) = self.bounds[v].0 {
                push(&mut cs, unit(n, v, 1), Rel::Ge, l);
            }
            if let Some(h) = self.bounds[v].1 {
                push(&mut cs, unit(n, v, 1), Rel::Le, h);
            }
        }
        let mut extra_r = Vec::new();
        for (k, (v, opts)) in self.options.iter().enumerate() {
            if k < chosen.len() {
                let o = &opts[chosen[k]];
                if o.end == Some(o.start) {
                    push(&mut cs, unit(n, *v, 1), Rel::Eq, o.start);
                    continue;
                }
                // v - period·r = start, r ≥ 0
                let r = width;
                width += 1;
                extra_r.push((*v, r, o.clone()));
            } else {
                let lo = opts.iter().map(|o| o.start).min().unwrap_or(0);
                push(&mut cs, unit(n, *v, 1), Rel::Ge, lo);
                if opts.iter().all(|o| o.end.is_some()) {
                    let hi = opts.iter().filter_map(|o| o.end).max().unwrap_or(lo);
                    push(&mut cs, unit(n, *v, 1), Rel::Le, hi);
                }
            }
        }
        for c in cs.iter_mut() {
            c.coeffs.resize(width, BigInt::zero());
        }
        for (v, r, o) in extra_r {
            let mut co = unit(width, v, 1);
            co[r] = BigInt::from(-(o.period as i64));
            push(&mut cs, co, Rel::Eq, o.start);
            push(&mut cs, unit(width, r, 1), Rel::Ge, 0);
            if let Some(e) = o.end {
                push(&mut cs, unit(width, v, 1), Rel::Le, e);
            }
        }
        (width, cs)
    }

    fn relaxation_feasible(&self, chosen: &[usize], ne_sides: &[bool]) -> bool {
        let (width, cs) = self.constraints(chosen, ne_sides);
        let rows: Vec<Row> = cs
            .into_iter()
            .map(|c| Row {
                coeffs: c.coeffs,
                cmp: if c.eq { Cmp::Eq } else { Cmp::Le },
                rhs: c.rhs,
            })
            .collect();
        !matches!(lp::minimize(width, &rows, &vec![BigInt::zero(); width]), LpResult::Infeasible)
    }

    fn leaf(&mut self, chosen: &[usize], ne_sides: &[bool]) -> Result<Option<Vec<i64>>, ArithError> {
        let (width, cs) = self.constraints(chosen, ne_sides);
        let n = self.sys.num_vars();
        let Some(vals) = ilp::lex_min(width, &cs, n, &mut self.budget)? else {
            return Ok(None);
        };
        vals[..n]
            .iter()
            .map(|v| i64::try_from(v).map_err(|_| ArithError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, ne_sides: &mut Vec<bool>) -> Result<Option<Vec<i64>>, ArithError> {
        if chosen.len() == self.options.len() && ne_sides.len() == self.ne.len() {
            return self.leaf(chosen, ne_sides);
        }
        if !self.relaxation_feasible(chosen, ne_sides) {
            return Ok(None);
        }
        if chosen.len() < self.options.len() {
            for i in 0..self.options[chosen.len()].1.len() {
                chosen.push(i);
                let r = self.dfs(chosen, ne_sides)?;
                chosen.pop();
                if r.is_some() {
                    return Ok(r);
                }
            }
        } else {
            for side in [false, true] {
                ne_sides.push(side);
                let r = self.dfs(chosen, ne_sides)?;
                ne_sides.pop();
                if r.is_some() {
                    return Ok(r);
                }
            }
        }
        Ok(None)
    }
}

/// Decides the system and returns a witness, or `None` if it has no
/// integer solution.
pub fn solve_linear_system(
    sys: &LinearSystem,
    cfg: &ArithConfig,
) -> Result<Option<Vec<i64>>, ArithError> {
    if sys.progressions.values().any(ProgressionSet::is_empty) {
        return Ok(None);
    }
    let Some(bounds) = propagate(sys) else {
        return Ok(None);
    };
    let mut box_size: u64 = 1;
    let mut bounded = true;
    for (lo, hi) in &bounds {
        match (lo, hi) {
            (Some(l), Some(h)) => {
                box_size = box_size.saturating_mul((h - l + 1).max(0).min(u64::MAX as i128) as u64);
            }
            _ => bounded = false,
        }
    }
    if bounded && box_size <= cfg.enumeration_limit {
        let r = enumerate(sys, &bounds);
        debug_assert!(r.as_ref().is_none_or(|v| sys.check(v)));
        return Ok(r);
    }
    let options: Vec<(usize, Vec<LenOption>)> = sys
        .progressions
        .iter()
        .map(|(&v, s)| (v, len_options(s, bounds[v])))
        .collect();
    if options.iter().any(|(_, o)| o.is_empty()) {
        return Ok(None);
    }
    let mut search = Search {
        sys,
        bounds,
        options,
        ne: sys.constraints.iter().filter(|c| c.rel == Rel::Ne).collect(),
        budget: cfg.node_budget,
    };
    let r = search.dfs(&mut Vec::new(), &mut Vec::new())?;
    if let Some(v) = &r {
        assert!(sys.check(v), "arith witness fails re-check");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lengths::Progression;

    fn prog(offset: u64, period: u64) -> Progression {
        Progression { offset, period }
    }

    #[test]
    fn smallest_length_witness() {
        let mut sys = LinearSystem::new();
        let x = sys.add_len_var("len_x", ProgressionSet::all());
        sys.add_constraint(LinConstraint::new(vec![(x, 1)], Rel::Ge, 3));
        assert_eq!(solve_linear_system(&sys, &ArithConfig::default()).unwrap(), Some(vec![3]));
    }

    #[test]
    fn odd_lengths() {
        let mut sys = LinearSystem::new();
        let x = sys.add_len_var("len_x", ProgressionSet::from_progressions([prog(1, 2)]));
        sys.add_constraint(LinConstraint::new(vec![(x, 1)], Rel::Ge, 3));
        let cfg = ArithConfig::default();
        assert_eq!(solve_linear_system(&sys, &cfg).unwrap(), Some(vec![3]));
        sys.add_constraint(LinConstraint::new(vec![(x, 1)], Rel::Eq, 4));
        assert_eq!(solve_linear_system(&sys, &cfg).unwrap(), None);
    }

    #[test]
    fn unbounded_path_uses_branch_and_bound() {
        // len_x odd, len_y even, len_x - len_y = 1, len_x ≥ 10, i = len_x + len_y
        let mut sys = LinearSystem::new();
        let x = sys.add_len_var("x", ProgressionSet::from_progressions([prog(1, 2)]));
        let y = sys.add_len_var("y", ProgressionSet::from_progressions([prog(0, 2)]));
        let i = sys.add_var("i", false);
        sys.add_constraint(LinConstraint::new(vec![(x, 1), (y, -1)], Rel::Eq, 1));
        sys.add_constraint(LinConstraint::new(vec![(x, 1)], Rel::Ge, 10));
        sys.add_constraint(LinConstraint::new(vec![(i, 1), (x, -1), (y, -1)], Rel::Eq, 0));
        let cfg = ArithConfig {
            enumeration_limit: 0,
            ..ArithConfig::default()
        };
        assert_eq!(solve_linear_system(&sys, &cfg).unwrap(), Some(vec![11, 10, 21]));
        // both even: x - y = 1 impossible
        sys.progressions.insert(x, ProgressionSet::from_progressions([prog(0, 2)]));
        assert_eq!(solve_linear_system(&sys, &cfg).unwrap(), None);
    }

    #[test]
    fn disequality_split() {
        let mut sys = LinearSystem::new();
        let i = sys.add_var("i", false);
        sys.add_constraint(LinConstraint::new(vec![(i, 1)], Rel::Ne, 0));
        sys.add_constraint(LinConstraint::new(vec![(i, 1)], Rel::Le, 100));
        let cfg = ArithConfig {
            enumeration_limit: 0,
            ..ArithConfig::default()
        };
        assert_eq!(solve_linear_system(&sys, &cfg).unwrap(), Some(vec![1]));
    }

    #[test]
    fn ordered_values_alternate() {
        assert_eq!(ordered_values(-2, 3), vec![0, 1, -1, 2, -2, 3]);
        assert_eq!(ordered_values(4, 6), vec![4, 5, 6]);
        assert_eq!(ordered_values(-6, -4), vec![-4, -5, -6]);
    }
}
