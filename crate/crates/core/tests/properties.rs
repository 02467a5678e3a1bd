use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use regsat::arith::{solve_linear_system, ArithConfig, LinConstraint, LinearSystem};
use regsat::automata::{compile_regex, determinize_complement, is_empty, lazy_product, Member, Mode, DEFAULT_STATE_BUDGET};
use regsat::encodings::{encode, parse_pattern, EncodingKind, FRESH_PREFIX};
use regsat::frontend::{
    cdepth, classify_theory, parse_regex, to_nnf, Alphabet, Atom, Base, Expr, Formula, LinExpr, PatItem, Pattern,
    Regex, Rel, Sort, StrVar, Term, VarRef, VarTable,
};
use regsat::lengths::{nfa_length_abstraction, threshold, Progression, ProgressionSet};
use regsat::numstr::{
    bin_value, multitape_emptiness, ColumnAutomaton, ColumnConfig, ColumnConstraint, Tape, TapeKind, TapeValue,
};
use regsat::oracle::gen::{random_formula, random_nfa, random_regex, rng, FormulaParams};
use regsat::oracle::{brute_force_solve, nfa_length_set};
use regsat::semantics::{verify_model, Evaluator, Model, RegexMatcher};
use regsat::solver::{
    atom_chains, atom_machines, build_var_automaton, plan_occurrences, solve, AtomLists, RegularAtom, Skeletons,
    SolverConfig, Verdict,
};

fn words(symbols: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| symbols.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn has_complement(r: &Regex) -> bool {
    match r {
        Regex::Empty | Regex::Epsilon | Regex::Literal(_) => false,
        Regex::Concat(a, b) | Regex::Union(a, b) => has_complement(a) || has_complement(b),
        Regex::Star(a) => has_complement(a),
        Regex::Complement(_) => true,
    }
}

fn str_var(vars: &mut VarTable, name: &str) -> StrVar {
    match vars.declare(name, Sort::String) {
        Some(VarRef::Str(v)) => v,
        _ => panic!("{name} already declared"),
    }
}

// ---- frontend

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nnf_preserves_truth(
        seed in any::<u64>(),
        strs in proptest::collection::vec("[ab]{0,5}", 3),
        ints in proptest::collection::vec(-32i64..=32, 0..1),
    ) {
        let params = FormulaParams { max_cdepth: 1, max_atoms: 5, ..FormulaParams::default() };
        let f = random_formula(&mut rng(seed), &params);
        let g = to_nnf(&f);
        let s: Vec<Option<String>> = strs.into_iter().take(f.vars.num_strings()).map(Some).collect();
        let i: Vec<Option<i64>> = ints.into_iter().map(Some).collect();
        let a = Evaluator::new(&f).eval_partial(&s, &i);
        let b = Evaluator::new(&g).eval_partial(&s, &i);
        prop_assert!(a.is_some());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn classification_is_monotone(seed in any::<u64>(), extra in 0usize..4, k in 0i64..4) {
        let params = FormulaParams { max_cdepth: 2, symbols: vec!['0', '1'], ..FormulaParams::default() };
        let f = random_formula(&mut rng(seed), &params);
        let before = classify_theory(&f);
        let vars = f.vars.clone();
        let x = vars.str_vars().next().unwrap();
        let atom = match extra {
            0 => Atom::Member {
                pattern: Pattern::var(x).concat(&Pattern::var(x)),
                regex: Regex::star(Regex::lit('1')),
                positive: true,
            },
            1 => Atom::Lin { lhs: LinExpr::term(Term::Len(x)), rel: Rel::Ge, rhs: LinExpr::constant(k) },
            2 => Atom::NumStr { num: LinExpr::constant(k), pattern: Pattern::var(x), positive: true },
            _ => Atom::Member {
                pattern: Pattern::var(x),
                regex: Regex::complement(Regex::lit('0')),
                positive: false,
            },
        };
        let g = Formula::new(f.alphabet.clone(), vars, Expr::and(vec![f.root.clone(), Expr::atom(atom)]));
        let after = classify_theory(&g);
        let (b, a) = (before.flags.names(), after.flags.names());
        prop_assert!(b.iter().all(|n| a.contains(n)), "{:?} -> {:?}", b, a);
        prop_assert!(after.complement_depth >= before.complement_depth);
        prop_assert!(before.base == Base::S || after.base == Base::E);
    }

    #[test]
    fn cdepth_zero_iff_complement_free(seed in any::<u64>(), size in 1usize..16, max_c in 0usize..3) {
        let r = random_regex(&mut rng(seed), &['a', 'b'], size, max_c);
        prop_assert_eq!(cdepth(&r) == 0, !has_complement(&r));
        prop_assert!(cdepth(&r) <= max_c);
    }
}

// ---- automata

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_automaton_agrees_with_matcher(seed in any::<u64>(), size in 1usize..14, max_c in 0usize..3) {
        let symbols = ['a', 'b', 'c'];
        let sigma = Alphabet::new(symbols);
        let r = random_regex(&mut rng(seed), &symbols, size, max_c);
        let m = compile_regex(&r, &sigma).unwrap();
        let mut matcher = RegexMatcher::new(sigma);
        for w in words(&symbols, 5) {
            prop_assert_eq!(m.accepts(&w).unwrap(), matcher.matches(&r, &w), "{} on {:?}", r, w);
        }
    }

    #[test]
    fn complement_partitions_words(seed in any::<u64>(), states in 1usize..7, density in 0.1f64..0.6) {
        let sigma = Alphabet::new(['a', 'b']);
        let m = random_nfa(&mut rng(seed), &sigma, states, density);
        let c = determinize_complement(&m, DEFAULT_STATE_BUDGET).unwrap();
        for w in words(&['a', 'b'], 6) {
            prop_assert_ne!(m.accepts(&w).unwrap(), c.accepts(&w).unwrap(), "{:?}", w);
        }
    }

    #[test]
    fn product_expands_only_reachable_tuples(seed in any::<u64>(), k in 1usize..4) {
        let sigma = Alphabet::new(['a', 'b']);
        let mut r = rng(seed);
        let members: Vec<Member> = (0..k)
            .map(|_| Member::new(Arc::new(random_nfa(&mut r, &sigma, 5, 0.3)), Mode::AsIs))
            .collect();
        let mut p = lazy_product(members.clone());
        let (empty, witness) = is_empty(&mut p).unwrap();
        let used = p.expanded();
        let mut full = lazy_product(members);
        let reachable = full.explore().unwrap().len();
        prop_assert!(used <= reachable, "{} > {}", used, reachable);
        if let Some(w) = witness {
            prop_assert!(!empty);
            prop_assert!(full.accepts(&w).unwrap());
        }
    }
}

// ---- lengths

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn length_abstraction_is_exact_up_to_fifty(seed in any::<u64>(), states in 1usize..8, density in 0.05f64..0.5) {
        let sigma = Alphabet::new(['a', 'b']);
        let m = random_nfa(&mut rng(seed), &sigma, states, density);
        let set = nfa_length_abstraction(&m);
        let exact = nfa_length_set(&m, 50);
        for n in 0..=50usize {
            prop_assert_eq!(set.contains(n as u64), exact.contains(&n), "length {}", n);
        }
        let t = threshold(m.num_states());
        for p in set.progressions() {
            prop_assert!(p.period as usize <= m.num_states());
            prop_assert!(p.offset < t + p.period.max(1), "{:?} past threshold {}", p, t);
        }
    }
}

// ---- arith

#[derive(Debug, Clone)]
struct SmallSystem {
    lens: Vec<Option<Vec<(u64, u64)>>>,
    rows: Vec<(Vec<i64>, Rel, i64)>,
}

fn small_system() -> impl Strategy<Value = SmallSystem> {
    let rel = prop_oneof![Just(Rel::Le), Just(Rel::Ge), Just(Rel::Eq), Just(Rel::Ne)];
    (1usize..=3).prop_flat_map(move |n| {
        let prog = proptest::collection::vec((0u64..6, 0u64..4), 1..3);
        (
            proptest::collection::vec(proptest::option::of(prog), n),
            proptest::collection::vec(
                (proptest::collection::vec(-6i64..=6, n), rel.clone(), -12i64..=24),
                1..4,
            ),
        )
            .prop_map(|(lens, rows)| SmallSystem { lens, rows })
    })
}

const BOX: i64 = 12;

fn build(s: &SmallSystem) -> LinearSystem {
    let mut sys = LinearSystem::new();
    for (v, l) in s.lens.iter().enumerate() {
        match l {
            Some(ps) => sys.add_len_var(
                format!("l{v}"),
                ProgressionSet::from_progressions(ps.iter().map(|&(offset, period)| Progression { offset, period })),
            ),
            None => sys.add_var(format!("v{v}"), true),
        };
        sys.add_constraint(LinConstraint::new(vec![(v, 1)], Rel::Le, BOX));
    }
    for (coeffs, rel, rhs) in &s.rows {
        sys.add_constraint(LinConstraint::new(coeffs.iter().copied().enumerate().collect(), *rel, *rhs));
    }
    sys
}

fn exhaustive(sys: &LinearSystem) -> bool {
    let n = sys.num_vars();
    let mut v = vec![0i64; n];
    loop {
        if sys.check(&v) {
            return true;
        }
        let mut i = 0;
        while i < n && v[i] == BOX {
            v[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        v[i] += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn arith_matches_box_search(s in small_system()) {
        let sys = build(&s);
        let got = solve_linear_system(&sys, &ArithConfig::default()).unwrap();
        if let Some(v) = &got {
            prop_assert!(sys.check(v), "witness {:?} fails", v);
        }
        prop_assert_eq!(got.is_some(), exhaustive(&sys));
    }
}

// ---- numstr

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn column_witnesses_check_and_none_means_none(
        seed in any::<u64>(),
        a in -3i64..=3,
        b in -3i64..=3,
        rel in prop_oneof![Just(Rel::Le), Just(Rel::Ge), Just(Rel::Eq)],
        rhs in -8i64..=8,
    ) {
        let bits = ['0', '1'];
        let sigma = Alphabet::new(bits);
        let mut r = rng(seed);
        let regexes = [random_regex(&mut r, &bits, 6, 0), random_regex(&mut r, &bits, 6, 0)];
        let nfas: Vec<_> = regexes.iter().map(|x| compile_regex(x, &sigma).unwrap()).collect();
        let problem = ColumnAutomaton {
            tapes: nfas
                .iter()
                .enumerate()
                .map(|(i, m)| Tape { name: format!("t{i}"), kind: TapeKind::Binary(m.clone()) })
                .collect(),
            constraints: vec![ColumnConstraint { num: vec![(0, a), (1, b)], len: vec![], rel, rhs }],
        };
        let holds = |x: &BigInt, y: &BigInt| {
            let lhs = BigInt::from(a) * x + BigInt::from(b) * y;
            let rhs = BigInt::from(rhs);
            match rel {
                Rel::Le => lhs <= rhs,
                Rel::Ge => lhs >= rhs,
                _ => lhs == rhs,
            }
        };
        let val = |w: &str| BigInt::from(bin_value(w).unwrap());
        match multitape_emptiness(&problem, &ColumnConfig::default()) {
            Ok(Some(w)) => {
                let ws: Vec<&str> = w
                    .values
                    .iter()
                    .map(|v| match v {
                        TapeValue::Word(s) => s.as_str(),
                        other => panic!("binary tape gave {other:?}"),
                    })
                    .collect();
                for (m, s) in nfas.iter().zip(&ws) {
                    prop_assert!(m.accepts(s).unwrap(), "{:?} not accepted", s);
                }
                prop_assert!(holds(&val(ws[0]), &val(ws[1])));
            }
            Ok(None) => {
                let short = words(&bits, 5);
                let l0: Vec<_> = short.iter().filter(|w| nfas[0].accepts(w).unwrap()).collect();
                let l1: Vec<_> = short.iter().filter(|w| nfas[1].accepts(w).unwrap()).collect();
                for x in &l0 {
                    for y in &l1 {
                        prop_assert!(!holds(&val(x), &val(y)), "missed {:?} {:?}", x, y);
                    }
                }
            }
            Err(_) => {}
        }
    }
}

// ---- solver

fn truth(e: &Expr, v: &HashMap<Atom, bool>) -> bool {
    match e {
        Expr::True => true,
        Expr::False => false,
        Expr::Atom(a) => v[a],
        Expr::Not(x) => !truth(x, v),
        Expr::And(xs) => xs.iter().all(|x| truth(x, v)),
        Expr::Or(xs) => xs.iter().any(|x| truth(x, v)),
    }
}

fn bool_expr(n_atoms: usize) -> impl Strategy<Value = Expr> {
    let x = StrVar(0);
    let leaf = (0..n_atoms as i64).prop_map(move |k| {
        Expr::atom(Atom::Lin { lhs: LinExpr::term(Term::Len(x)), rel: Rel::Ge, rhs: LinExpr::constant(k) })
    });
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            proptest::collection::vec(inner.clone(), 1..3).prop_map(Expr::and),
            proptest::collection::vec(inner, 1..3).prop_map(Expr::or),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn skeletons_match_truth_table(e in bool_expr(6)) {
        let atoms = regsat::solver::distinct_atoms(&e);
        prop_assert!(atoms.len() <= 6);
        let mut rows = 0usize;
        let mut satisfying = BTreeSet::new();
        for mask in 0u32..1 << atoms.len() {
            let v: HashMap<Atom, bool> = atoms.iter().enumerate().map(|(i, a)| (a.clone(), mask >> i & 1 == 1)).collect();
            if truth(&e, &v) {
                rows += 1;
                satisfying.insert(mask);
            }
        }
        let total: Vec<_> = Skeletons::new(&e, true).collect();
        prop_assert_eq!(total.len(), rows);
        // partial skeletons are implicants whose extensions cover every satisfying row
        let mut covered = BTreeSet::new();
        for s in Skeletons::new(&e, false) {
            for mask in 0u32..1 << atoms.len() {
                let fits = s.iter().all(|(a, b)| {
                    let i = atoms.iter().position(|x| x == a).unwrap();
                    (mask >> i & 1 == 1) == *b
                });
                if fits {
                    prop_assert!(satisfying.contains(&mask));
                    covered.insert(mask);
                }
            }
        }
        prop_assert_eq!(covered, satisfying);
    }

    #[test]
    fn sat_models_verify_and_unsat_has_no_small_model(seed in any::<u64>(), c in 0usize..2) {
        let params = FormulaParams { max_cdepth: c, ..FormulaParams::default() };
        let f = random_formula(&mut rng(seed), &params);
        match solve(&f, &SolverConfig::default()) {
            Verdict::Sat(m) => prop_assert!(verify_model(&f, &m), "{:?}", m),
            Verdict::Unsat => prop_assert!(!brute_force_solve(&f, 5, 0).unwrap().is_sat()),
            Verdict::Unknown(r) => prop_assert!(false, "unknown ({})", r),
        }
    }
}

// Binary formulas with numstr over a concatenation next to length terms.
fn undecidable_formula(seed: u64) -> Formula {
    let params = FormulaParams { symbols: vec!['0', '1'], max_vars: 2, max_atoms: 3, ..FormulaParams::default() };
    let f = random_formula(&mut rng(seed), &params);
    let mut vars = f.vars.clone();
    let x = vars.str_vars().next().unwrap();
    let Some(VarRef::Int(i)) = vars.declare("n", Sort::Int) else { unreachable!() };
    let root = Expr::and(vec![
        f.root.clone(),
        Expr::atom(Atom::NumStr {
            num: LinExpr::term(Term::Int(i)),
            pattern: Pattern::new([PatItem::Const("1".into()), PatItem::Var(x)]),
            positive: true,
        }),
        Expr::atom(Atom::Lin {
            lhs: LinExpr::term(Term::Int(i)),
            rel: Rel::Le,
            rhs: LinExpr::term(Term::Len(x)).add(&LinExpr::constant(seed as i64 % 5)),
        }),
    ]);
    Formula::new(f.alphabet.clone(), vars, root)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn undecidable_fragment_is_never_unsat(seed in any::<u64>()) {
        let f = undecidable_formula(seed);
        prop_assert_eq!(classify_theory(&f).theory_name(), "A_slnc");
        let mut cfg = SolverConfig::default();
        cfg.fallback.max_len = 4;
        cfg.fallback.max_int = 32;
        match solve(&f, &cfg) {
            Verdict::Sat(m) => prop_assert!(verify_model(&f, &m)),
            Verdict::Unsat => prop_assert!(false, "unsat on an undecidable fragment"),
            Verdict::Unknown(_) => {}
        }
    }

    #[test]
    fn word_equations_are_never_unsat(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &FormulaParams::default());
        let x = f.vars.str_vars().next().unwrap();
        let eq = Atom::WordEq { lhs: Pattern::var(x), rhs: Pattern::word("ab"), positive: true };
        let g = Formula::new(f.alphabet.clone(), f.vars.clone(), Expr::and(vec![f.root.clone(), Expr::atom(eq)]));
        prop_assert!(!solve(&g, &SolverConfig::default()).is_unsat());
    }
}

// Every plan for `x·y ∈ R ∧ x ∈ R1 ∧ y ∈ R2` chains its segments, and the
// plans together describe exactly the satisfying pairs.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plans_chain_and_cover_pairs(seed in any::<u64>()) {
        let symbols = ['a', 'b'];
        let sigma = Alphabet::new(symbols);
        let mut r = rng(seed);
        let mut vars = VarTable::new();
        let x = str_var(&mut vars, "x");
        let y = str_var(&mut vars, "y");
        let res = [random_regex(&mut r, &symbols, 8, 0), random_regex(&mut r, &symbols, 6, 1), random_regex(&mut r, &symbols, 6, 0)];
        let xy = Pattern::var(x).concat(&Pattern::var(y));
        let lists = AtomLists {
            regular: vec![
                RegularAtom { pattern: xy.clone(), automaton: Arc::new(compile_regex(&res[0], &sigma).unwrap()), positive: true },
                RegularAtom { pattern: Pattern::var(x), automaton: Arc::new(compile_regex(&res[1], &sigma).unwrap()), positive: true },
                RegularAtom { pattern: Pattern::var(y), automaton: Arc::new(compile_regex(&res[2], &sigma).unwrap()), positive: false },
            ],
            ..AtomLists::default()
        };
        let machines = atom_machines(&lists, DEFAULT_STATE_BUDGET).unwrap();
        let chains = atom_chains(&machines[0], &xy, 0, usize::MAX).unwrap();
        for c in &chains {
            prop_assert_eq!(c.len(), 2);
            prop_assert_eq!(c[0].start, Some(machines[0].nfa.initial()));
            prop_assert_eq!(c[0].end, c[1].start);
            prop_assert_eq!(c[1].end, None);
        }
        let plans = plan_occurrences(&lists, &sigma, DEFAULT_STATE_BUDGET).unwrap();
        let mut products: Vec<_> = plans
            .iter()
            .map(|p| {
                (
                    build_var_automaton(x, p, &lists, &sigma, DEFAULT_STATE_BUDGET).unwrap(),
                    build_var_automaton(y, p, &lists, &sigma, DEFAULT_STATE_BUDGET).unwrap(),
                )
            })
            .collect();
        let mut matcher = RegexMatcher::new(sigma.clone());
        let short = words(&symbols, 3);
        for u in &short {
            for v in &short {
                let expect = matcher.matches(&res[0], &format!("{u}{v}"))
                    && matcher.matches(&res[1], u)
                    && !matcher.matches(&res[2], v);
                let mut got = false;
                for (px, py) in products.iter_mut() {
                    if px.accepts(u).unwrap() && py.accepts(v).unwrap() {
                        got = true;
                        break;
                    }
                }
                prop_assert_eq!(got, expect, "x={:?} y={:?}", u, v);
            }
        }
    }
}

#[test]
fn repeated_variable_over_a_chain_has_one_plan() {
    let sigma = Alphabet::new(['a']);
    let mut vars = VarTable::new();
    let x = str_var(&mut vars, "x");
    let m = compile_regex(&parse_regex("aa").unwrap(), &sigma).unwrap();
    let lists = AtomLists {
        regular: vec![RegularAtom {
            pattern: Pattern::var(x).concat(&Pattern::var(x)),
            automaton: Arc::new(m),
            positive: true,
        }],
        ..AtomLists::default()
    };
    let plans = plan_occurrences(&lists, &sigma, DEFAULT_STATE_BUDGET).unwrap();
    assert_eq!(plans.len(), 1);
    let mut ax = build_var_automaton(x, &plans[0], &lists, &sigma, DEFAULT_STATE_BUDGET).unwrap();
    assert!(ax.accepts("a").unwrap());
    assert!(!ax.accepts("").unwrap());
    assert!(!ax.accepts("aa").unwrap());
}

#[test]
fn negated_membership_removes_epsilon() {
    let sigma = Alphabet::new(['a', 'b']);
    let mut vars = VarTable::new();
    let x = str_var(&mut vars, "x");
    let atom = |r: &str, positive| RegularAtom {
        pattern: Pattern::var(x),
        automaton: Arc::new(compile_regex(&parse_regex(r).unwrap(), &sigma).unwrap()),
        positive,
    };
    let lists = AtomLists { regular: vec![atom("(ab)*", true), atom("a*", false)], ..AtomLists::default() };
    let plans = plan_occurrences(&lists, &sigma, DEFAULT_STATE_BUDGET).unwrap();
    let mut ax = build_var_automaton(x, &plans[0], &lists, &sigma, DEFAULT_STATE_BUDGET).unwrap();
    assert!(!ax.accepts("").unwrap());
    assert!(ax.accepts("ab").unwrap());
    assert_eq!(is_empty(&mut ax).unwrap().1.as_deref(), Some("ab"));
}

// ---- semantics

#[test]
fn verify_model_rejects_partial_and_foreign_models() {
    let f = regsat::frontend::parse_script(
        "(set-info :alphabet \"ab\")\n(declare-fun x () String)\n(declare-fun n () Int)\n(assert (str.in_re x (re.* (str.to_re \"a\"))))\n",
    )
    .unwrap();
    let model = |x: &str, n: Option<i64>| Model {
        strings: [("x".to_string(), x.to_string())].into(),
        ints: n.map(|n| ("n".to_string(), n)).into_iter().collect(),
    };
    assert!(verify_model(&f, &model("aa", Some(0))));
    assert!(!verify_model(&f, &model("aa", None)));
    assert!(!verify_model(&f, &model("aáa", Some(0))));
    assert!(!verify_model(&f, &model("ab", Some(0))));
}

// ---- encodings

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoders_only_add_fresh_variables(
        a in proptest::collection::vec(prop_oneof!["x|y|z", "\"[01]{1,2}\""], 1..4),
        b in proptest::collection::vec(prop_oneof!["x|y|z", "\"[01]{1,2}\""], 1..4),
        kind in prop_oneof![Just(EncodingKind::EqLen), Just(EncodingKind::Eq), Just(EncodingKind::LeqLen)],
    ) {
        let mut vars = VarTable::new();
        let n = str_var(&mut vars, "n");
        let alpha = parse_pattern(&a.join("."), &mut vars).unwrap();
        let beta = parse_pattern(&b.join("."), &mut vars).unwrap();
        let before = vars.clone();
        let e = encode(kind, &alpha, &beta, &vars, &Alphabet::new(['0', '1']));
        prop_assert_eq!(&vars, &before);
        prop_assert!(e.warnings.is_empty());
        let out = &e.formula.vars;
        for v in before.str_vars() {
            prop_assert_eq!(out.str_name(v), before.str_name(v));
        }
        for v in out.str_vars().skip(before.num_strings()) {
            prop_assert!(out.str_name(v).starts_with(FRESH_PREFIX));
        }
        for v in out.int_vars() {
            prop_assert!(out.int_name(v).starts_with(FRESH_PREFIX));
        }
        // untouched input variables never appear
        let unused = format!("Var({:?})", n);
        let clean = e.formula.root.atoms().iter().all(|atom| !format!("{:?}", atom).contains(&unused));
        prop_assert!(clean);
        prop_assert!(classify_theory(&e.formula).flags.numstr);
    }
}

// ---- oracle

#[test]
fn oracle_does_not_reach_into_the_decision_procedure() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/src/oracle");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        for banned in ["crate::solver", "crate::lengths", "crate::arith", "super::super"] {
            assert!(!text.contains(banned), "{} uses {banned}", path.display());
        }
    }
}
