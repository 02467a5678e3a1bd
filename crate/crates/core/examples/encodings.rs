//! Length comparison and equality of patterns through numstr.

use regsat::encodings::{encode_words, EncodingKind};
use regsat::frontend::to_smtlib;
use regsat::oracle::brute_force_solve;

fn main() {
    for (kind, a, b) in [
        (EncodingKind::EqLen, "10", "01"),
        (EncodingKind::Eq, "10", "01"),
        (EncodingKind::LeqLen, "1", "011"),
    ] {
        let e = encode_words(kind, a, b);
        let v = brute_force_solve(&e.formula, 8, 1 << 10).unwrap();
        println!("{kind:?}({a:?}, {b:?}) in {}: sat = {}", e.tag.theory_name(), v.is_sat());
    }
    print!("{}", to_smtlib(&encode_words(EncodingKind::Eq, "1", "1").formula));
}
