//! Parse a script and report its theory node.

use regsat::frontend::{classify_theory, parse_script};

const SCRIPT: &str = r#"
(set-info :alphabet "01")
(declare-fun x () String)
(declare-fun y () String)
(declare-fun n () Int)
(assert (str.in_re (str.++ x y) (re.comp (re.* (str.to_re "01")))))
(assert (numstr n x))
(assert (>= (str.len y) n))
"#;

fn main() {
    let f = parse_script(SCRIPT).expect("well-formed script");
    let tag = classify_theory(&f);
    println!("{} flags={:?} cdepth={} {:?}", tag.theory_name(), tag.flags.names(), tag.complement_depth, tag.decidability);
}
