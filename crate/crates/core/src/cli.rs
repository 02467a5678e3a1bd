//! Command-line interface. Verdicts and JSON go to `out`, diagnostics to
//! `err`; [`run`] returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::encodings::{encode, parse_pattern, EncodingKind};
use crate::frontend::sexpr::{read_all, SExpr};
use crate::frontend::{classify_theory, parse_script, quote, to_smtlib, Alphabet, Formula, VarTable};
use crate::oracle::gen::{random_formula, rng, FormulaParams};
use crate::oracle::{brute_force_with, BoundedVerdict, OracleConfig};
use crate::semantics::{verify_model, Model};
use crate::solver::{solve_with_stats, SolverConfig, Verdict};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNKNOWN: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "regsat", version, about = "Satisfiability of regular, length and numstr string constraints")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide a script; exit 10 on sat, 20 on unsat, 0 on unknown.
    Solve {
        file: PathBuf,
        /// Cap on product tuples and subset-construction states.
        #[arg(long)]
        budget_states: Option<usize>,
        /// Write every compiled automaton as a Graphviz file into DIR.
        #[arg(long, value_name = "DIR")]
        dump_automata: Option<PathBuf>,
        /// Write the column-search frontier as JSON into FILE.
        #[arg(long, value_name = "FILE")]
        dump_frontier: Option<PathBuf>,
        /// Print the model after `sat`.
        #[arg(long)]
        model: bool,
        /// Give up after this many seconds.
        #[arg(long, value_name = "SECS")]
        timeout: Option<f64>,
    },
    /// Print the theory of every script under PATH as one JSON line each.
    Classify { path: PathBuf },
    /// Bounded brute-force search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 16)]
        max_int: i64,
    },
    /// Print the encoding of a length comparison or equality as a script.
    Encode {
        /// One of eqlen, eq, leqlen.
        kind: EncodingKind,
        /// Left pattern: `.`-separated quoted constants and variable names.
        alpha: String,
        /// Right pattern.
        beta: String,
        /// Extra alphabet symbols.
        #[arg(long, default_value = "01")]
        alphabet: String,
    },
    /// Re-check a model; exit 0 if it satisfies the script, 1 otherwise.
    CheckModel { file: PathBuf, model: PathBuf },
    /// Compare solver and oracle on random formulas.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Complement depth allowed in generated regexes.
        #[arg(long, default_value_t = 0)]
        cdepth: usize,
    },
}

#[derive(Serialize)]
struct ClassifyLine<'a> {
    file: &'a str,
    base: &'static str,
    flags: Vec<&'static str>,
    cdepth: usize,
    theory_name: String,
    decidability: crate::frontend::Decidability,
}

#[derive(Serialize)]
struct FuzzLine {
    seed: u64,
    solver: String,
    oracle: &'static str,
    agree: bool,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Exit = Result<i32, String>;

fn load(path: &Path) -> Result<Formula, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_script(&text).map_err(|e| format!("{}:{e}", path.display()))
}

/// `(define-fun …)` lines for `m`, wrapped in `(model …)`.
pub fn format_model(m: &Model) -> String {
    let mut s = String::from("(model\n");
    for (k, v) in &m.strings {
        s.push_str(&format!("  (define-fun {k} () String {})\n", quote(v)));
    }
    for (k, v) in &m.ints {
        let v = if *v < 0 { format!("(- {})", v.unsigned_abs()) } else { v.to_string() };
        s.push_str(&format!("  (define-fun {k} () Int {v})\n"));
    }
    s.push(')');
    s
}

/// Reads the output of [`format_model`]; a bare list of `define-fun`s is
/// accepted too, and a leading `sat` line is skipped.
pub fn parse_model(text: &str) -> Result<Model, String> {
    let items = read_all(text).map_err(|e| e.to_string())?;
    let mut defs = Vec::new();
    for it in items {
        match it {
            SExpr::List(xs, _) if xs.first().and_then(SExpr::as_symbol) == Some("model") => {
                defs.extend(xs.into_iter().skip(1))
            }
            SExpr::Symbol(s, _) if s == "sat" => {}
            other => defs.push(other),
        }
    }
    let mut m = Model::default();
    for d in defs {
        let SExpr::List(xs, _) = &d else {
            return Err("expected (define-fun …)".into());
        };
        let (Some("define-fun"), Some(name)) = (xs.first().and_then(SExpr::as_symbol), xs.get(1).and_then(SExpr::as_symbol))
        else {
            return Err("expected (define-fun name () Sort value)".into());
        };
        match (xs.get(3).and_then(SExpr::as_symbol), xs.get(4)) {
            (Some("String"), Some(SExpr::Str(s, _))) => {
                m.strings.insert(name.to_string(), s.clone());
            }
            (Some("Int"), Some(SExpr::Int(v, _))) => {
                m.ints.insert(name.to_string(), *v);
            }
            (Some("Int"), Some(SExpr::List(ys, _)))
                if ys.len() == 2 && ys[0].as_symbol() == Some("-") && matches!(ys[1], SExpr::Int(..)) =>
            {
                let SExpr::Int(v, _) = ys[1] else { unreachable!() };
                m.ints.insert(name.to_string(), -v);
            }
            _ => return Err(format!("bad value for `{name}`")),
        }
    }
    Ok(m)
}

fn cmd_solve(
    io: &mut Io,
    file: &Path,
    budget_states: Option<usize>,
    dump_automata: Option<&Path>,
    dump_frontier: Option<&Path>,
    print_model: bool,
    timeout: Option<f64>,
) -> Exit {
    let f = load(file)?;
    let tag = classify_theory(&f);
    if let Some(w) = tag.blowup_warning() {
        let _ = writeln!(io.err, "warning: {w}");
    }
    let mut cfg = SolverConfig::default();
    if let Some(b) = budget_states {
        cfg.state_budget = b;
        cfg.column.dfa_budget = b;
    }
    cfg.collect_automata = dump_automata.is_some();
    cfg.trace_frontier = dump_frontier.is_some();
    cfg.time_limit = timeout.map(Duration::from_secs_f64);
    let (verdict, stats) = solve_with_stats(&f, &cfg);
    if let Some(dir) = dump_automata {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for (i, (regex, m)) in stats.automata.iter().enumerate() {
            let path = dir.join(format!("atom{i}.dot"));
            let dot = format!("// {regex}\n{}", m.to_dot(&format!("atom{i}")));
            std::fs::write(&path, dot).map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    if let Some(path) = dump_frontier {
        let json = serde_json::to_string_pretty(&stats.frontier).map_err(|e| e.to_string())?;
        std::fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let _ = writeln!(io.out, "{verdict}");
    Ok(match verdict {
        Verdict::Sat(m) => {
            if print_model {
                let _ = writeln!(io.out, "{}", format_model(&m));
            }
            EXIT_SAT
        }
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    })
}

fn scripts_under(path: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
        entries.sort();
        for p in entries {
            if p.is_dir() || p.extension().is_some_and(|x| x == "smt2") {
                scripts_under(&p, out)?;
            }
        }
    } else {
        out.push(path.to_path_buf());
    }
    Ok(())
}

fn cmd_classify(io: &mut Io, path: &Path) -> Exit {
    let mut files = Vec::new();
    scripts_under(path, &mut files).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut failed = false;
    for file in files {
        match load(&file) {
            Ok(f) => {
                let tag = classify_theory(&f);
                let line = ClassifyLine {
                    file: &file.to_string_lossy(),
                    base: match tag.base {
                        crate::frontend::Base::S => "s",
                        crate::frontend::Base::E => "e",
                    },
                    flags: tag.flags.names(),
                    cdepth: tag.complement_depth,
                    theory_name: tag.theory_name(),
                    decidability: tag.decidability,
                };
                let _ = writeln!(io.out, "{}", serde_json::to_string(&line).expect("serializable"));
            }
            Err(e) => {
                failed = true;
                let _ = writeln!(io.err, "error: {e}");
            }
        }
    }
    Ok(if failed { EXIT_USAGE } else { 0 })
}

fn cmd_oracle(io: &mut Io, file: &Path, max_len: usize, max_int: i64) -> Exit {
    let f = load(file)?;
    match brute_force_with(&f, &OracleConfig::new(max_len, max_int)) {
        Ok(BoundedVerdict::Sat(m)) => {
            let _ = writeln!(io.out, "sat\n{}", format_model(&m));
            Ok(EXIT_SAT)
        }
        Ok(BoundedVerdict::BoundedUnsat { max_len, max_int }) => {
            let _ = writeln!(io.out, "no model (max-len {max_len}, max-int {max_int})");
            Ok(EXIT_UNKNOWN)
        }
        Err(e) => {
            let _ = writeln!(io.out, "unknown ({e})");
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_encode(io: &mut Io, kind: EncodingKind, alpha: &str, beta: &str, alphabet: &str) -> Exit {
    let mut vars = VarTable::new();
    let a = parse_pattern(alpha, &mut vars).map_err(|e| e.to_string())?;
    let b = parse_pattern(beta, &mut vars).map_err(|e| e.to_string())?;
    let e = encode(kind, &a, &b, &vars, &Alphabet::new(alphabet.chars()));
    for w in &e.warnings {
        let _ = writeln!(io.err, "warning: {w}");
    }
    let _ = writeln!(
        io.out,
        "; theory {} ({:?})",
        e.tag.theory_name(),
        e.tag.decidability
    );
    let _ = write!(io.out, "{}", to_smtlib(&e.formula));
    Ok(0)
}

fn cmd_check_model(io: &mut Io, file: &Path, model: &Path) -> Exit {
    let f = load(file)?;
    let text = std::fs::read_to_string(model).map_err(|e| format!("{}: {e}", model.display()))?;
    let m = parse_model(&text).map_err(|e| format!("{}: {e}", model.display()))?;
    if verify_model(&f, &m) {
        let _ = writeln!(io.out, "valid");
        Ok(0)
    } else {
        let _ = writeln!(io.out, "invalid");
        Ok(1)
    }
}

fn cmd_fuzz(io: &mut Io, seed: u64, count: u64, max_len: usize, cdepth: usize) -> Exit {
    let params = FormulaParams {
        max_cdepth: cdepth,
        ..FormulaParams::default()
    };
    let mut disagreements = 0;
    for s in seed..seed + count {
        let f = random_formula(&mut rng(s), &params);
        let (v, _) = solve_with_stats(&f, &SolverConfig::default());
        let o = brute_force_with(&f, &OracleConfig::new(max_len, 0)).map_err(|e| e.to_string())?;
        let agree = !(o.is_sat() && !v.is_sat() || v.is_unsat() && o.is_sat())
            && v.model().is_none_or(|m| verify_model(&f, m));
        if !agree {
            disagreements += 1;
            let _ = writeln!(io.err, "disagreement at seed {s}:\n{}", to_smtlib(&f));
        }
        let line = FuzzLine {
            seed: s,
            solver: v.to_string(),
            oracle: if o.is_sat() { "sat" } else { "no-model" },
            agree,
        };
        let _ = writeln!(io.out, "{}", serde_json::to_string(&line).expect("serializable"));
    }
    let _ = writeln!(io.err, "{count} formulas, {disagreements} disagreements");
    Ok(if disagreements > 0 { 1 } else { 0 })
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    let r = match &cli.cmd {
        Cmd::Solve {
            file,
            budget_states,
            dump_automata,
            dump_frontier,
            model,
            timeout,
        } => cmd_solve(
            &mut io,
            file,
            *budget_states,
            dump_automata.as_deref(),
            dump_frontier.as_deref(),
            *model,
            *timeout,
        ),
        Cmd::Classify { path } => cmd_classify(&mut io, path),
        Cmd::Oracle { file, max_len, max_int } => cmd_oracle(&mut io, file, *max_len, *max_int),
        Cmd::Encode {
            kind,
            alpha,
            beta,
            alphabet,
        } => cmd_encode(&mut io, *kind, alpha, beta, alphabet),
        Cmd::CheckModel { file, model } => cmd_check_model(&mut io, file, model),
        Cmd::Fuzz {
            seed,
            count,
            max_len,
            cdepth,
        } => cmd_fuzz(&mut io, *seed, *count, *max_len, *cdepth),
    };
    match r {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
