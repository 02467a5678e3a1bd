//! Emptiness of an intersection without building the full product.

use std::sync::Arc;

use regsat::automata::{compile_regex, is_empty, lazy_product, Member, Mode};
use regsat::frontend::{parse_regex, Alphabet};

fn main() {
    let sigma = Alphabet::new(['a', 'b']);
    let members: Vec<Member> = ["(a|b)*a(a|b)*", "(a|b)*b(a|b)*", "~((a|b)*bb(a|b)*)", "(aa|ab|ba|bb)*"]
        .iter()
        .map(|s| Member::new(Arc::new(compile_regex(&parse_regex(s).unwrap(), &sigma).unwrap()), Mode::AsIs))
        .collect();
    let mut p = lazy_product(members);
    let (empty, witness) = is_empty(&mut p).unwrap();
    println!("empty: {empty}, witness: {witness:?}, tuples expanded: {}", p.expanded());
}
