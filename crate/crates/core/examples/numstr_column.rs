//! Column-wise search for binary words whose values satisfy linear constraints.

use regsat::automata::compile_regex;
use regsat::frontend::{parse_regex, Alphabet, Rel};
use regsat::numstr::{multitape_emptiness, ColumnAutomaton, ColumnConfig, ColumnConstraint, Tape, TapeKind};

fn main() {
    let sigma = Alphabet::new(['0', '1']);
    let bin = |r: &str| TapeKind::Binary(compile_regex(&parse_regex(r).unwrap(), &sigma).unwrap());
    // value(x) = 4·value(y) + 1 and value(x) ≥ 20, with x ∈ 1(01)*
    let problem = ColumnAutomaton {
        tapes: vec![
            Tape { name: "x".into(), kind: bin("1(01)*") },
            Tape { name: "y".into(), kind: bin("1(0|1)*") },
        ],
        constraints: vec![
            ColumnConstraint { num: vec![(0, 1), (1, -4)], len: vec![], rel: Rel::Eq, rhs: 1 },
            ColumnConstraint { num: vec![(0, 1)], len: vec![], rel: Rel::Ge, rhs: 20 },
        ],
    };
    match multitape_emptiness(&problem, &ColumnConfig::default()).unwrap() {
        Some(w) => println!("{} columns: {:?}", w.columns, w.values),
        None => println!("no solution"),
    }
}
