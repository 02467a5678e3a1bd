//! Placement of a formula in the lattice of regular-membership theories.
//!
//! The base is `s` (simple regexes) or `e` (regexes with complement). The
//! optional extensions are `l` (string length), `n` (the binary `numstr`
//! predicate) and `c` (concatenation inside membership/numstr patterns).
//! Word equations put the formula into the `A=` family.

use serde::Serialize;

use super::ast::{Atom, Formula, Term};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    S,
    E,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TheoryFlags {
    pub length: bool,
    pub numstr: bool,
    pub concat: bool,
    pub word_equations: bool,
}

impl TheoryFlags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.length {
            out.push("length");
        }
        if self.numstr {
            out.push("numstr");
        }
        if self.concat {
            out.push("concat");
        }
        if self.word_equations {
            out.push("word_equations");
        }
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Decidability {
    PSpaceComplete,
    Decidable,
    Undecidable,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryTag {
    pub base: Base,
    pub flags: TheoryFlags,
    pub complement_depth: usize,
    pub decidability: Decidability,
}

impl TheoryTag {
    /// `A_sl`, `A_elnc`, ...; word-equation variants are written `A=_sl`.
    pub fn theory_name(&self) -> String {
        let mut s = String::from(if self.flags.word_equations { "A=_" } else { "A_" });
        s.push(match self.base {
            Base::S => 's',
            Base::E => 'e',
        });
        if self.flags.length {
            s.push('l');
        }
        if self.flags.numstr {
            s.push('n');
        }
        if self.flags.concat {
            s.push('c');
        }
        s
    }

    /// Diagnostic for stacked complements: deciding such formulas needs space
    /// growing like a tower of exponentials in the complement depth.
    pub fn blowup_warning(&self) -> Option<String> {
        (self.complement_depth >= 2).then(|| {
            format!(
                "complement depth {}: determinization may need a tower of {} exponential(s)",
                self.complement_depth,
                self.complement_depth - 1
            )
        })
    }
}

/// Decidability status of a theory node.
///
/// Without word equations: `slnc`/`elnc` are undecidable, `snc`, `enc` and
/// `eln` are open, every other `s` node is PSPACE-complete and every other
/// `e` node decidable. With word equations: regular constraints alone stay
/// decidable, adding both length and numstr is undecidable, the rest is open.
pub fn decidability_of(base: Base, flags: TheoryFlags) -> Decidability {
    use Decidability::*;
    let TheoryFlags {
        length: l,
        numstr: n,
        concat: c,
        word_equations: we,
    } = flags;
    if we {
        return match (l, n) {
            (false, false) => Decidable,
            (true, true) => Undecidable,
            _ => Open,
        };
    }
    match (base, l, n, c) {
        (_, true, true, true) => Undecidable,
        (_, false, true, true) => Open,
        (Base::E, true, true, false) => Open,
        (Base::S, _, _, _) => PSpaceComplete,
        (Base::E, _, _, _) => Decidable,
    }
}

/// Flags are read off the syntax: `length` if some `str.len` term occurs,
/// `numstr` if a numstr atom occurs, `concat` if some membership, numstr or
/// equation pattern has two or more items, `word_equations` if an equation
/// between string terms occurs.
pub fn classify_theory(f: &Formula) -> TheoryTag {
    let mut flags = TheoryFlags::default();
    let mut complement = false;
    for atom in f.atoms() {
        for e in atom.lin_exprs() {
            if e.terms.keys().any(|t| matches!(t, Term::Len(_))) {
                flags.length = true;
            }
        }
        if atom.patterns().iter().any(|p| p.items().len() >= 2) {
            flags.concat = true;
        }
        match atom {
            Atom::Member { regex, .. } => complement |= regex.has_complement(),
            Atom::NumStr { .. } => flags.numstr = true,
            Atom::WordEq { .. } => flags.word_equations = true,
            Atom::Lin { .. } => {}
        }
    }
    let base = if complement { Base::E } else { Base::S };
    TheoryTag {
        base,
        flags,
        complement_depth: f.cdepth(),
        decidability: decidability_of(base, flags),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_script;

    fn tag(src: &str) -> TheoryTag {
        classify_theory(&parse_script(src).unwrap())
    }

    #[test]
    fn worked_example_is_sln() {
        let t = tag(
            r#"(declare-const x String)
               (assert (str.in_re x (re.* (str.to_re "1"))))
               (assert (numstr 15 x))
               (assert (>= (str.len x) 3))"#,
        );
        assert_eq!(t.theory_name(), "A_sln");
        assert_eq!(t.decidability, Decidability::PSpaceComplete);
    }

    #[test]
    fn single_membership_is_s() {
        let t = tag(r#"(declare-const x String) (assert (str.in_re x (re.* (str.to_re "a"))))"#);
        assert_eq!(t.theory_name(), "A_s");
        assert_eq!(t.decidability, Decidability::PSpaceComplete);
        assert_eq!(t.complement_depth, 0);
    }

    #[test]
    fn everything_is_elnc() {
        let t = tag(
            r#"(declare-const x String) (declare-const y String) (declare-const i Int)
               (assert (str.in_re (str.++ x y) (re.comp (str.to_re "01"))))
               (assert (numstr i x))
               (assert (<= (str.len y) i))"#,
        );
        assert_eq!(t.theory_name(), "A_elnc");
        assert_eq!(t.decidability, Decidability::Undecidable);
    }

    #[test]
    fn lattice_table() {
        use Decidability::*;
        let f = |l, n, c| TheoryFlags {
            length: l,
            numstr: n,
            concat: c,
            word_equations: false,
        };
        let cases = [
            (Base::S, f(false, false, false), PSpaceComplete),
            (Base::S, f(true, false, true), PSpaceComplete),
            (Base::S, f(false, true, false), PSpaceComplete),
            (Base::S, f(true, true, false), PSpaceComplete),
            (Base::S, f(false, true, true), Open),
            (Base::S, f(true, true, true), Undecidable),
            (Base::E, f(true, false, true), Decidable),
            (Base::E, f(false, true, false), Decidable),
            (Base::E, f(true, true, false), Open),
            (Base::E, f(false, true, true), Open),
            (Base::E, f(true, true, true), Undecidable),
        ];
        for (b, fl, d) in cases {
            assert_eq!(decidability_of(b, fl), d, "{b:?} {fl:?}");
        }
    }

    #[test]
    fn blowup_warning_from_depth_two() {
        let t = tag(
            r#"(declare-const x String)
               (assert (str.in_re x (re.comp (re.++ (str.to_re "a") (re.comp (str.to_re "b"))))))"#,
        );
        assert_eq!(t.complement_depth, 2);
        assert!(t.blowup_warning().is_some());
    }
}
