//! Solve a script and print the verdict, the model and search statistics.

use regsat::frontend::parse_script;
use regsat::solver::{solve_with_stats, SolverConfig};

const SCRIPT: &str = r#"
(set-info :alphabet "ab")
(declare-fun x () String)
(declare-fun y () String)
(assert (str.in_re (str.++ x y) (re.* (re.union (str.to_re "ab") (str.to_re "b")))))
(assert (not (str.in_re y (re.* (str.to_re "b")))))
(assert (= (str.len x) (+ (str.len y) 3)))
"#;

fn main() {
    let f = parse_script(SCRIPT).unwrap();
    let (verdict, stats) = solve_with_stats(&f, &SolverConfig::default());
    println!("{verdict}");
    if let Some(m) = verdict.model() {
        println!("{m:?}");
    }
    println!("skeletons {} plans {} products {} expansions {}", stats.skeletons, stats.plans, stats.products, stats.expansions);
}
