//! Bounded brute force as a reference for the solver on random formulas.

use regsat::frontend::to_smtlib;
use regsat::oracle::gen::{random_formula, rng, FormulaParams};
use regsat::oracle::brute_force_solve;
use regsat::solver::{solve, SolverConfig};

fn main() {
    let params = FormulaParams::default();
    for seed in 0..5 {
        let f = random_formula(&mut rng(seed), &params);
        let bounded = brute_force_solve(&f, 6, 0).unwrap();
        println!("{}; solver: {}, oracle sat within bounds: {}\n", to_smtlib(&f), solve(&f, &SolverConfig::default()), bounded.is_sat());
    }
}
