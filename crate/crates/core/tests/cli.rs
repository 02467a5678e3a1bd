use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use regsat::cli::{format_model, parse_model, run, EXIT_SAT, EXIT_UNKNOWN, EXIT_UNSAT, EXIT_USAGE};
use regsat::semantics::Model;

const EXAMPLE_C: &str = r#"(set-info :alphabet "01")
(declare-fun x1 () String)
(assert (str.in_re x1 (re.* (str.to_re "1"))))
(assert (numstr 15 x1))
(assert (>= (str.len x1) 3))
(check-sat)
"#;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regsat")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regsat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_example_c_prints_model() {
    let f = scratch("c.smt2", EXAMPLE_C);
    let o = bin(&["solve", f.to_str().unwrap(), "--model"]);
    assert_eq!(o.status.code(), Some(EXIT_SAT));
    let out = stdout(&o);
    assert!(out.starts_with("sat\n"), "{out}");
    assert!(out.contains(r#"(define-fun x1 () String "1111")"#), "{out}");
    assert!(o.stderr.is_empty());
}

#[test]
fn model_round_trips_through_check_model() {
    let f = scratch("c2.smt2", EXAMPLE_C);
    let o = bin(&["solve", f.to_str().unwrap(), "--model"]);
    let m = scratch("c2.model", &stdout(&o));
    let o = bin(&["check-model", f.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = scratch("c2.bad", r#"(model (define-fun x1 () String "111"))"#);
    let o = bin(&["check-model", f.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unsat_and_word_equations() {
    let f = scratch(
        "u.smt2",
        "(declare-fun x () String)\n(assert (str.in_re x (re.* (str.to_re \"a\"))))\n(assert (str.in_re x (re.+ (str.to_re \"b\"))))\n",
    );
    let o = bin(&["solve", f.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(EXIT_UNSAT), "unsat\n"));
    let f = scratch(
        "w.smt2",
        "(declare-fun x () String)\n(declare-fun y () String)\n(assert (= x (str.++ y \"a\")))\n",
    );
    let o = bin(&["solve", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_UNKNOWN));
    assert_eq!(stdout(&o), "unknown (word-equations-unsupported)\n");
}

#[test]
fn parse_errors_exit_2_on_stderr() {
    let f = scratch("bad.smt2", "(assert (str.in_re x");
    let o = bin(&["solve", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = bin(&["solve"]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}

#[test]
fn classify_prints_json_lines() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/classify");
    let o = bin(&["classify", dir]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);
    for key in ["file", "base", "flags", "cdepth", "theory_name", "decidability"] {
        assert!(lines.iter().all(|l| l.get(key).is_some()), "missing {key}");
    }
    let elnc = lines.iter().find(|l| l["theory_name"] == "A_elnc").unwrap();
    assert_eq!(elnc["base"], "e");
    assert_eq!(elnc["flags"], serde_json::json!(["length", "numstr", "concat"]));
    assert_eq!(elnc["decidability"], "Undecidable");
}

#[test]
fn encode_reports_theory_and_parses_back() {
    let o = bin(&["encode", "eq", "x.\"1\"", "y"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("; theory A_snc (Open)\n"), "{out}");
    let f = regsat::frontend::parse_script(&out).unwrap();
    assert_eq!(regsat::frontend::classify_theory(&f).theory_name(), "A_snc");
    let o = bin(&["encode", "eqlen", "\"ab\"", "\"cd\""]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a binary word"));
}

#[test]
fn oracle_finds_example_c() {
    let f = scratch("c3.smt2", EXAMPLE_C);
    let o = bin(&["oracle", "--max-len", "4", "--max-int", "16", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_SAT));
    assert!(stdout(&o).contains("\"1111\""));
    let o = bin(&["oracle", "--max-len", "3", "--max-int", "16", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_UNKNOWN));
}

#[test]
fn fuzz_is_seeded_and_in_process() {
    let go = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["regsat", "fuzz", "--seed", "11", "--count", "8"], &mut out, &mut err);
        (code, out)
    };
    let (code, a) = go();
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&a));
    assert_eq!(a, go().1);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 8);
}

#[test]
fn dumps_automata_and_frontier() {
    let f = scratch(
        "n.smt2",
        "(set-info :alphabet \"01\")\n(declare-fun x () String)\n(declare-fun i () Int)\n(assert (numstr i x))\n(assert (= (* 2 i) 26))\n",
    );
    let dir = f.with_extension("dots");
    let fr = f.with_extension("json");
    let o = bin(&[
        "solve",
        f.to_str().unwrap(),
        "--dump-automata",
        dir.to_str().unwrap(),
        "--dump-frontier",
        fr.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(EXIT_SAT));
    let dots: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert!(!dots.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fr).unwrap()).unwrap();
    assert!(!v.as_array().unwrap().is_empty());
}

proptest! {
    #[test]
    fn model_text_round_trips(
        strings in proptest::collection::btree_map("[a-z][a-z0-9]{0,4}", "[ab\"\\\\é]{0,6}", 0..4),
        ints in proptest::collection::btree_map("[A-Z][a-z0-9]{0,4}", any::<i64>().prop_filter("min", |v| *v != i64::MIN), 0..4),
    ) {
        let m = Model { strings, ints };
        prop_assert_eq!(parse_model(&format_model(&m)).unwrap(), m);
    }
}
