//! Exact two-phase simplex over rationals, Bland's pivoting rule.
//!
//! Variables are free; each is split internally into a difference of two
//! nonnegative columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `Σ coeffs[j]·x_j cmp rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<BigInt>,
    pub cmp: Cmp,
    pub rhs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let d = &f * &self.rows[r][j];
                    self.rows[i][j] -= d;
                }
            }
            let d = &f * &self.rhs[r];
            self.rhs[i] -= d;
        }
        self.basis[r] = c;
    }

    // Minimizes `cost` over columns not in `banned`. Returns false if
    // unbounded.
    fn optimize(&mut self, cost: &[BigRational], banned: &[bool]) -> bool {
        let ncols = cost.len();
        loop {
            let mut entering = None;
            for j in 0..ncols {
                if banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        rc -= &cost[b] * &self.rows[i][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &cost[b] * v)
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Minimizes `objective · x` subject to `rows`, with `n` free variables.
pub fn minimize(n: usize, rows: &[Row], objective: &[BigInt]) -> LpResult {
    let m = rows.len();
    // columns: x⁺ (n), x⁻ (n), one slack per inequality row, one artificial
    // per row needing it
    let mut slack_of = vec![None; m];
    let mut art_of = vec![None; m];
    let mut ncols = 2 * n;
    let mut norm: Vec<(Vec<BigInt>, Cmp, BigInt)> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let (mut coeffs, mut cmp, mut rhs) = (row.coeffs.clone(), row.cmp, row.rhs.clone());
        if rhs.is_negative() {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
            rhs = -rhs;
            cmp = match cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
        }
        if cmp != Cmp::Eq {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
        norm.push((coeffs, cmp, rhs));
    }
    for (i, (_, cmp, _)) in norm.iter().enumerate() {
        if *cmp != Cmp::Le {
            art_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
    };
    for (i, (coeffs, cmp, rhs)) in norm.iter().enumerate() {
        let mut r = vec![BigRational::zero(); ncols];
        for j in 0..n {
            let c = coeffs.get(j).cloned().unwrap_or_default();
            r[n + j] = BigRational::from_integer(-&c);
            r[j] = BigRational::from_integer(c);
        }
        if let Some(s) = slack_of[i] {
            r[s] = if *cmp == Cmp::Le {
                BigRational::one()
            } else {
                -BigRational::one()
            };
        }
        let b = match art_of[i] {
            Some(a) => {
                r[a] = BigRational::one();
                a
            }
            None => slack_of[i].expect("a Le row has a slack"),
        };
        tab.rows.push(r);
        tab.rhs.push(BigRational::from_integer(rhs.clone()));
        tab.basis.push(b);
    }
    let is_art: Vec<bool> = (0..ncols).map(|j| art_of.contains(&Some(j))).collect();

    // phase 1
    if is_art.iter().any(|&a| a) {
        let cost: Vec<BigRational> = is_art
            .iter()
            .map(|&a| if a { BigRational::one() } else { BigRational::zero() })
            .collect();
        tab.optimize(&cost, &vec![false; ncols]);
        if tab.value(&cost).is_positive() {
            return LpResult::Infeasible;
        }
        // drive zero-level artificials out of the basis
        let mut i = 0;
        while i < tab.rows.len() {
            if is_art[tab.basis[i]] {
                match (0..ncols).find(|&j| !is_art[j] && !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // phase 2
    let mut cost = vec![BigRational::zero(); ncols];
    for j in 0..n {
        let c = objective.get(j).cloned().unwrap_or_default();
        cost[n + j] = BigRational::from_integer(-&c);
        cost[j] = BigRational::from_integer(c);
    }
    if !tab.optimize(&cost, &is_art) {
        return LpResult::Unbounded;
    }
    let mut vals = vec![BigRational::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        vals[b] = tab.rhs[i].clone();
    }
    let x = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    LpResult::Optimal {
        value: tab.value(&cost),
        x,
    }
}
