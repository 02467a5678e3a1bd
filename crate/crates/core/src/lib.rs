pub mod arith;
pub mod automata;
pub mod cli;
pub mod encodings;
pub mod frontend;
pub mod lengths;
pub mod numstr;
pub mod oracle;
pub mod semantics;
pub mod solver;
