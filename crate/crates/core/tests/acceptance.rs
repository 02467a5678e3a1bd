//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::collections::{HashSet, VecDeque};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use regsat::automata::{compile_regex, LazyProduct, Member, Mode, Nfa};
use regsat::encodings::{encode_words, EncodingKind};
use regsat::frontend::{classify_theory, parse_script, Alphabet, Decidability, Pattern, Regex, VarTable};
use regsat::lengths::{nfa_length_abstraction, product_length_abstraction};
use regsat::numstr::{bin_value, min_bin};
use regsat::oracle::gen::{intersection_family, random_formula, random_nfa, random_regex, rng, FormulaParams};
use regsat::oracle::{brute_force_solve, brute_force_with, nfa_length_set, product_length_set, OracleConfig};
use regsat::solver::{
    solve, solve_atom_lists, verify_model, AtomLists, ListOutcome, RegularAtom, SolveStats, SolverConfig, Verdict,
};

type Outcome = Result<String, String>;

fn words(symbols: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| symbols.iter().map(move |&c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn worked_example() -> Outcome {
    let src = r#"(declare-fun x1 () String)
        (assert (str.in_re x1 (re.* (str.to_re "1"))))
        (assert (numstr 15 x1))
        (assert (>= (str.len x1) 3))"#;
    let t = Instant::now();
    let f = parse_script(src).map_err(|e| e.to_string())?;
    let v = solve(&f, &SolverConfig::default());
    let elapsed = t.elapsed();
    let Verdict::Sat(m) = &v else {
        return Err(format!("verdict {v}"));
    };
    let x = &m.strings["x1"];
    if x != "1111" || !verify_model(&f, m) || bin_value(x).ok() != Some(15u32.into()) {
        return Err(format!("model x1 = {x:?}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("x1 = \"1111\" in {elapsed:?}"))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let params = FormulaParams::default();
    let results: Vec<Result<(bool, bool), String>> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let f = random_formula(&mut rng(seed), &params);
            let o = brute_force_solve(&f, 6, 0).map_err(|e| format!("seed {seed}: oracle {e}"))?;
            let v = solve(&f, &SolverConfig::default());
            if let Verdict::Sat(m) = &v {
                if !verify_model(&f, m) {
                    return Err(format!("seed {seed}: unverified model"));
                }
            }
            if o.is_sat() && !v.is_sat() {
                return Err(format!("seed {seed}: oracle sat, solver {v}"));
            }
            if v.is_unsat() && o.is_sat() {
                return Err(format!("seed {seed}: solver unsat, oracle sat"));
            }
            Ok((o.is_sat(), v.is_sat()))
        })
        .collect();
    let mut disagreements = Vec::new();
    let (mut osat, mut ssat) = (0, 0);
    for r in results {
        match r {
            Ok((o, s)) => {
                osat += o as usize;
                ssat += s as usize;
            }
            Err(e) => disagreements.push(e),
        }
    }
    let elapsed = t.elapsed();
    if !disagreements.is_empty() {
        return Err(format!("{} disagreements, first: {}", disagreements.len(), disagreements[0]));
    }
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("1000 formulas, oracle sat {osat}, solver sat {ssat}, {elapsed:?}"))
}

fn complement_semantics() -> Outcome {
    let ab = Alphabet::new(['a', 'b']);
    let all = words(&['a', 'b'], 6);
    let mut g = rng(2024);
    let mut violations = 0;
    for _ in 0..200 {
        let size = rand::Rng::gen_range(&mut g, 1..=12);
        let r = random_regex(&mut g, &['a', 'b'], size, 2);
        let m = compile_regex(&r, &ab).map_err(|e| e.to_string())?;
        let c = compile_regex(&Regex::complement(r), &ab).map_err(|e| e.to_string())?;
        for w in &all {
            if c.accepts(w).unwrap() == m.accepts(w).unwrap() {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        return Err(format!("{violations} violations"));
    }
    Ok(format!("200 regexes x {} words", all.len()))
}

fn reachable_count(p: &mut LazyProduct) -> usize {
    p.explore().unwrap().len()
}

fn length_exactness() -> Outcome {
    let ab = Alphabet::new(['a', 'b']);
    let mut g = rng(77);
    let mut checked = 0;
    let mut violations = Vec::new();
    while checked < 500 {
        let lo = checked % 2 == 0;
        let (set, truth) = if lo {
            let n = rand::Rng::gen_range(&mut g, 1..=8);
            let m = random_nfa(&mut g, &ab, n, 0.25);
            (nfa_length_abstraction(&m), nfa_length_set(&m, 50))
        } else {
            let a = Arc::new(random_nfa(&mut g, &ab, 3, 0.35));
            let b = Arc::new(random_nfa(&mut g, &ab, 3, 0.35));
            let members = vec![Member::new(a, Mode::AsIs), Member::new(b, Mode::AsIs)];
            let mut p = LazyProduct::new(ab.clone(), members.clone());
            if reachable_count(&mut p) > 8 {
                continue;
            }
            let set = product_length_abstraction(&mut p).unwrap();
            let mut q = LazyProduct::new(ab.clone(), members);
            (set, product_length_set(&mut q, 50).unwrap())
        };
        for n in 0..=50usize {
            if set.contains(n as u64) != truth.contains(&n) {
                violations.push((checked, n));
            }
        }
        checked += 1;
    }
    if !violations.is_empty() {
        return Err(format!("{} violations, first {:?}", violations.len(), violations[0]));
    }
    Ok("500 automata, lengths 0..=50".into())
}

fn numstr_semantics() -> Outcome {
    let v = |w: &str| bin_value(w).map_err(|e| e.to_string());
    if v("1111")? != 15u32.into() || v("01111")? != 15u32.into() || v("10")? != 2u32.into() {
        return Err("fixed values".into());
    }
    for n in 0u32..=1 << 16 {
        if bin_value(&min_bin(n)).map_err(|e| e.to_string())? != n.into() {
            return Err(format!("round trip fails at {n}"));
        }
    }
    Ok("fixed values and round trip up to 2^16".into())
}

fn encodings() -> Outcome {
    let t = Instant::now();
    let ws = words(&['0', '1'], 4);
    let mut pairs = Vec::new();
    for k in [EncodingKind::EqLen, EncodingKind::LeqLen, EncodingKind::Eq] {
        for a in &ws {
            for b in &ws {
                pairs.push((k, a, b));
            }
        }
    }
    let cfg = OracleConfig::new(12, 1 << 14);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(k, a, b)| {
            let e = encode_words(k, a, b);
            let expected = match k {
                EncodingKind::EqLen => a.len() == b.len(),
                EncodingKind::LeqLen => a.len() <= b.len(),
                EncodingKind::Eq => a == b,
            };
            match brute_force_with(&e.formula, &cfg) {
                Ok(r) if r.is_sat() == expected => None,
                Ok(r) => Some(format!("{k:?}({a:?}, {b:?}): oracle sat = {}", r.is_sat())),
                Err(err) => Some(format!("{k:?}({a:?}, {b:?}): {err}")),
            }
        })
        .collect();
    let elapsed = t.elapsed();
    if !bad.is_empty() {
        return Err(format!("{} mismatches, first: {}", bad.len(), bad[0]));
    }
    if elapsed >= Duration::from_secs(600) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} pairs per encoder, {elapsed:?}", ws.len() * ws.len()))
}

fn classifier_golden() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/classify");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "smt2"))
        .collect();
    files.sort();
    if files.len() != 12 {
        return Err(format!("expected 12 inputs, found {}", files.len()));
    }
    for path in &files {
        let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let f = parse_script(&src).map_err(|e| format!("{}: {e}", path.display()))?;
        let tag = classify_theory(&f);
        let got = format!(
            "{}\n",
            serde_json::json!({
                "theory_name": tag.theory_name(),
                "decidability": tag.decidability,
            })
        );
        let expected = std::fs::read_to_string(path.with_extension("json")).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("{}: got {got:?}, expected {expected:?}", path.display()));
        }
        if tag.decidability == Decidability::Undecidable {
            match solve(&f, &SolverConfig::default()) {
                Verdict::Unsat => return Err(format!("{}: unsat on an undecidable fragment", path.display())),
                Verdict::Sat(m) if !verify_model(&f, &m) => {
                    return Err(format!("{}: unverified model", path.display()))
                }
                _ => {}
            }
        }
    }
    Ok(format!("{} golden files", files.len()))
}

// Tuples reachable from the start tuple of the explicit product.
fn bfs_tuples(ms: &[Nfa]) -> usize {
    let k = ms[0].alphabet().len();
    let start: Vec<u32> = ms.iter().map(|m| m.initial()).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for a in 0..k {
            let mut combos: Vec<Vec<u32>> = vec![Vec::new()];
            for (m, &q) in ms.iter().zip(&t) {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        m.successors(q, a).iter().map(move |&r| {
                            let mut c = c.clone();
                            c.push(r);
                            c
                        })
                    })
                    .collect();
            }
            for c in combos {
                if seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
    }
    seen.len()
}

fn lazy_frugality() -> Outcome {
    let ab = Alphabet::new(['a', 'b']);
    let mut g = rng(6);
    let mut report = Vec::new();
    for round in 0..10 {
        let ms = intersection_family(&mut g, &ab, 6, 5);
        let mut vars = VarTable::new();
        let x = vars.fresh_str("x");
        let lists = AtomLists {
            regular: ms
                .iter()
                .map(|m| RegularAtom {
                    pattern: Pattern::var(x),
                    automaton: Arc::new(m.clone()),
                    positive: true,
                })
                .collect(),
            ..Default::default()
        };
        let mut stats = SolveStats::default();
        let out = solve_atom_lists(&vars, &ab, &lists, &SolverConfig::default(), &mut stats);
        let reachable = bfs_tuples(&ms);
        if stats.expansions > reachable {
            return Err(format!("round {round}: expanded {} > reachable {reachable}", stats.expansions));
        }
        let answer = match &out {
            ListOutcome::Sat(m) => {
                let w = &m.strings["x0"];
                if !ms.iter().all(|m| m.accepts(w).unwrap()) {
                    return Err(format!("round {round}: witness {w:?} rejected"));
                }
                "sat"
            }
            ListOutcome::Unsat => {
                let mut p = LazyProduct::new(
                    ab.clone(),
                    ms.iter().map(|m| Member::new(Arc::new(m.clone()), Mode::AsIs)).collect(),
                );
                if p.shortest_witness().unwrap().is_some() {
                    return Err(format!("round {round}: unsat but intersection nonempty"));
                }
                "unsat"
            }
            ListOutcome::Unknown(r) => return Err(format!("round {round}: unknown ({r})")),
        };
        report.push(format!("{answer} {}/{reachable}", stats.expansions));
    }
    Ok(format!("expanded/reachable: {}", report.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("worked example", worked_example),
        ("oracle equivalence", oracle_equivalence),
        ("complement semantics", complement_semantics),
        ("length abstraction exactness", length_exactness),
        ("numstr semantics", numstr_semantics),
        ("encodings", encodings),
        ("classifier golden suite", classifier_golden),
        ("lazy product frugality", lazy_frugality),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        match run() {
            Ok(detail) => println!("acceptance {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
