//! Compile a regex, determinize it and complement it.

use regsat::automata::{compile_regex, determinize, determinize_complement, DEFAULT_STATE_BUDGET};
use regsat::frontend::{parse_regex, Alphabet};

fn main() {
    let sigma = Alphabet::new(['a', 'b']);
    let r = parse_regex("(a|b)*a(a|b)(a|b)").unwrap();
    let m = compile_regex(&r, &sigma).unwrap();
    let d = determinize(&m, DEFAULT_STATE_BUDGET).unwrap();
    let c = determinize_complement(&m, DEFAULT_STATE_BUDGET).unwrap();
    println!("{r}: nfa {} states, dfa {} states", m.num_states(), d.num_states());
    for w in ["abb", "bab", "aaaa"] {
        println!("  {w:5} in L: {}  in complement: {}", m.accepts(w).unwrap(), c.accepts(w).unwrap());
    }
    print!("{}", m.to_dot("third_from_last_is_a"));
}
