//! Integer feasibility with a length variable restricted to a progression set.

use regsat::arith::{solve_linear_system, ArithConfig, LinConstraint, LinearSystem};
use regsat::frontend::Rel;
use regsat::lengths::{Progression, ProgressionSet};

fn main() {
    let mut sys = LinearSystem::new();
    // len(x) ∈ {1 + 3k}
    let x = sys.add_len_var("len_x", ProgressionSet::from_progressions([Progression { offset: 1, period: 3 }]));
    let i = sys.add_var("i", false);
    // 2·len(x) - 5i = 3, len(x) ≥ 10
    sys.add_constraint(LinConstraint::new(vec![(x, 2), (i, -5)], Rel::Eq, 3));
    sys.add_constraint(LinConstraint::new(vec![(x, 1)], Rel::Ge, 10));
    match solve_linear_system(&sys, &ArithConfig::default()).unwrap() {
        Some(v) => println!("len_x = {}, i = {}", v[x], v[i]),
        None => println!("infeasible"),
    }
}
