//! Length sets of automata as finite unions of arithmetic progressions.

use regsat::automata::compile_regex;
use regsat::frontend::{parse_regex, Alphabet};
use regsat::lengths::nfa_length_abstraction;

fn main() {
    let sigma = Alphabet::new(['a', 'b']);
    for r in ["(aaa)*", "a(aa)*|bbbbb(bbbbbbb)*", "ab(a|b)", "~((a|b)(a|b))"] {
        let m = compile_regex(&parse_regex(r).unwrap(), &sigma).unwrap();
        let lens = nfa_length_abstraction(&m);
        let shown: Vec<String> = lens
            .progressions()
            .iter()
            .map(|p| if p.period == 0 { p.offset.to_string() } else { format!("{}+{}k", p.offset, p.period) })
            .collect();
        println!("{r:24} lengths {{{}}}", shown.join(", "));
    }
}
