//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. The lines go straight to standard output
//! so they show up even when the test harness captures output.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use flpcheck_cli::run;
use flpcheck_core::equiv::{check_equiv, check_ground_equiv, Bounds, EquivTask, Mode, Outcome, Verdict};
use flpcheck_core::eval::{enumerate_partials, EvalConfig};
use flpcheck_core::lang::{parse_expr, parse_program, Program, Type};
use flpcheck_core::partial::{enumerate_partial_values, less_defined_eq, render, LevelPlan, PartialValue};

/// Per-pair limits for counterexample searches.
const MAX_TESTS: u64 = 5000;
const PAIR_TIME: Duration = Duration::from_secs(10);
const EQUIV_TIME: Duration = Duration::from_secs(30);
/// Wall-clock cap for the forced partial-set run.
const GATE_TIME: Duration = Duration::from_secs(60);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn path(name: &str) -> String {
    root().join("corpus").join(name).to_string_lossy().into_owned()
}

fn load(name: &str) -> Program {
    parse_program(&std::fs::read_to_string(path(name)).unwrap()).unwrap()
}

fn flpcheck(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("flpcheck").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out) = flpcheck(&a);
    (code, serde_json::from_str(&out).unwrap())
}

fn task(p: &Program, prop: &str) -> EquivTask {
    let d = p.props.iter().find(|d| d.name == prop).unwrap_or_else(|| panic!("no property {prop}"));
    EquivTask { annotation: d.annotation, ..EquivTask::new(&d.lhs, &d.rhs) }
}

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cex_of(v: &Verdict) -> Result<&flpcheck_core::equiv::Counterexample, String> {
    match &v.outcome {
        Outcome::Counterexample(c) => Ok(c),
        other => Err(format!("expected a counterexample, got {other:?}")),
    }
}

fn criterion_1() -> Check {
    let pairs = [
        ("contrived.flp", "f_equiv_g"),
        ("ints12.flp", "ints1_equiv_ints2"),
        ("ndinsert.flp", "insert_equiv_insert'"),
        ("perm.flp", "perm_equiv_perm'"),
        ("sortequiv.flp", "sort_equiv_sort'"),
        ("sortpermute.flp", "sort_equiv_sort'"),
        ("revrev.flp", "revrev_equiv_id"),
        ("primes.flp", "primes_equiv"),
        ("quicksort.flp", "sortSatisfiesSpecification"),
        ("ndinsert_spec.flp", "ndinsertSatisfiesSpecification"),
        ("g12.flp", "g1_equiv_g2"),
        ("f12.flp", "f1_equiv_f2"),
        ("h12.flp", "h1_equiv_h2"),
    ];
    for (file, name) in pairs {
        let start = Instant::now();
        let (code, report) = json(&["check", &path(file), "--levels", "6", "--template-levels", "6"]);
        let elapsed = start.elapsed();
        let t = report["tasks"]
            .as_array()
            .and_then(|ts| ts.iter().find(|t| t["name"] == name))
            .ok_or_else(|| format!("{file}: no task {name}"))?;
        ensure(code == 1, || format!("{file}: exit code {code}"))?;
        ensure(t["outcome"]["kind"] == "counterexample", || format!("{file}: {}", t["outcome"]))?;
        let tests = t["stats"]["tests"].as_u64().unwrap_or(u64::MAX);
        ensure(tests <= MAX_TESTS, || format!("{file}: {tests} tests"))?;
        ensure(elapsed <= PAIR_TIME, || format!("{file}: took {elapsed:?}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    let p = load("contrived.flp");
    let v = check_equiv(&p, &task(&p, "f_equiv_g")).map_err(|e| e.to_string())?;
    let c = cex_of(&v)?;
    ensure(c.inputs == vec![PartialValue::Bottom], || format!("contrived inputs {:?}", c.inputs))?;
    ensure(c.template.as_ref().map(render).as_deref() == Some("C failed"), || format!("contrived template {:?}", c.template))?;

    let p = load("sortequiv.flp");
    let v = check_equiv(&p, &task(&p, "sort_equiv_sort'")).map_err(|e| e.to_string())?;
    let c = cex_of(&v)?;
    let reference = PartialValue::cons(PartialValue::Int(1), PartialValue::cons(PartialValue::Int(0), PartialValue::Bottom));
    let tpl = c.template.as_ref().map(render);
    ensure(tpl.as_deref() == Some("(failed : failed)"), || format!("sortequiv template {tpl:?}"))?;
    ensure(c.inputs.len() == 1 && c.inputs[0].size() == reference.size(), || {
        format!("sortequiv input {} is not of size {}", render(&c.inputs[0]), reference.size())
    })?;

    let p = load("primes.flp");
    let v = check_equiv(&p, &task(&p, "primes_equiv")).map_err(|e| e.to_string())?;
    let c = cex_of(&v)?;
    let mut cur = c.template.clone().ok_or("primes: no template")?;
    let mut defined_heads = 0;
    while let PartialValue::Con(n, xs) = cur {
        if n != "Cons" {
            break;
        }
        if xs[0] != PartialValue::Bottom {
            defined_heads += 1;
        }
        ensure(defined_heads <= 5, || format!("primes template {}", render(c.template.as_ref().unwrap())))?;
        cur = xs[1].clone();
    }
    Ok(())
}

fn criterion_3() -> Check {
    for (file, name) in [("mc91.flp", "mc91r_equiv_mc91n"), ("fac.flp", "facSatisfiesSpecification")] {
        let start = Instant::now();
        let (code, report) = json(&["check", &path(file)]);
        let elapsed = start.elapsed();
        let t = report["tasks"]
            .as_array()
            .and_then(|ts| ts.iter().find(|t| t["name"] == name))
            .ok_or_else(|| format!("{file}: no task {name}"))?;
        ensure(code == 0, || format!("{file}: exit code {code}"))?;
        ensure(t["outcome"]["kind"] == "equivalent_up_to_bound", || format!("{file}: {}", t["outcome"]))?;
        ensure(elapsed <= EQUIV_TIME, || format!("{file}: took {elapsed:?}"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    for (file, prop) in [
        ("contrived.flp", "f_equiv_g"),
        ("g12.flp", "g1_equiv_g2"),
        ("ndinsert.flp", "insert_equiv_insert'"),
        ("f12.flp", "f1_equiv_f2"),
        ("h12.flp", "h1_equiv_h2"),
        ("sortequiv.flp", "sort_equiv_sort'"),
    ] {
        let p = load(file);
        let t = task(&p, prop);
        let g = check_ground_equiv(&p, &t).map_err(|e| e.to_string())?;
        ensure(matches!(g.outcome, Outcome::EquivalentUpToBound { .. }), || format!("{file} ground: {:?}", g.outcome))?;
        let v = check_equiv(&p, &t).map_err(|e| e.to_string())?;
        ensure(v.is_counterexample(), || format!("{file} auto: {:?}", v.outcome))?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    let p = load("ints12.flp");
    let t = task(&p, "ints1_equiv_ints2");
    let forced = EquivTask { mode_override: Some(Mode::PartialSet), ..t.clone() };
    let start = Instant::now();
    let v = check_equiv(&p, &forced).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(matches!(v.outcome, Outcome::Inconclusive { .. }), || format!("forced set mode: {:?}", v.outcome))?;
    ensure(elapsed <= GATE_TIME, || format!("forced set mode took {elapsed:?}"))?;
    let v = check_equiv(&p, &t).map_err(|e| e.to_string())?;
    ensure(v.mode == Mode::PartialTemplate && v.is_counterexample(), || format!("auto mode: {v:?}"))
}

fn criterion_6() -> Check {
    let p = load("primes_plain.flp");
    let mut t = EquivTask { bounds: Bounds { safe_mode: true, ..Bounds::default() }, ..task(&p, "primes_equiv") };
    let v = check_equiv(&p, &t).map_err(|e| e.to_string())?;
    ensure(matches!(v.outcome, Outcome::Skipped { .. }), || format!("unannotated: {:?}", v.outcome))?;
    let p = load("primes.flp");
    t = EquivTask { bounds: Bounds { safe_mode: true, ..Bounds::default() }, ..task(&p, "primes_equiv") };
    let v = check_equiv(&p, &t).map_err(|e| e.to_string())?;
    ensure(v.is_counterexample(), || format!("annotated: {:?}", v.outcome))
}

fn criterion_7() -> Check {
    let f = path("examples.flp");
    for (expr, want) in [
        ("double coin", "{0, 2}\n"),
        ("coin + coin", "{0, 1, 2}\n"),
        ("insert 0 [1,2]", "{[0, 1, 2], [1, 0, 2], [1, 2, 0]}\n"),
    ] {
        let (code, out) = flpcheck(&["eval", &f, "-e", expr]);
        ensure(code == 0 && out == want, || format!("{expr}: {out:?} (exit {code})"))?;
    }
    Ok(())
}

/// Every partial value of `ty` with at most `budget` defined nodes.
fn brute_force(p: &Program, ty: &Type, budget: usize, ints: &[i64]) -> Vec<PartialValue> {
    let mut out = vec![PartialValue::Bottom];
    if budget == 0 {
        return out;
    }
    match ty {
        Type::Int => out.extend(ints.iter().map(|&n| PartialValue::Int(n))),
        Type::Con(name, args) => {
            let decl = p.type_decl(name).unwrap();
            for c in &decl.constructors {
                let mut combos: Vec<Vec<PartialValue>> = vec![vec![]];
                for a in &c.args {
                    let f = a.subst(&|v: &str| decl.params.iter().position(|q| q == v).map(|k| args[k].clone()));
                    let subs = brute_force(p, &f, budget - 1, ints);
                    combos = combos
                        .iter()
                        .flat_map(|pre| {
                            subs.iter().map(move |s| {
                                let mut v = pre.clone();
                                v.push(s.clone());
                                v
                            })
                        })
                        .filter(|v| v.iter().map(PartialValue::size).sum::<usize>() < budget)
                        .collect();
                }
                out.extend(combos.into_iter().map(|xs| PartialValue::Con(c.name.clone(), xs)));
            }
        }
        Type::Var(_) => {}
    }
    out
}

fn criterion_8() -> Check {
    let p = parse_program(
        "data AB = A | B\ndata C = C AB\ndata T = L | N T Int T\n\
         fromTo :: Int -> Int -> [Int]\nfromTo m n = if m > n then [] else m : fromTo (m + 1) n\n",
    )
    .map_err(|d| format!("{d:?}"))?;
    for d in p.types.iter().filter(|d| d.constructors.len() <= 3) {
        let ty = Type::Con(d.name.clone(), d.params.iter().map(|_| Type::con("AB")).collect());
        for level in 0..=4 {
            let plan = LevelPlan::new(ty.clone(), level);
            let got = enumerate_partial_values(&p, &plan).map_err(|e| e.to_string())?;
            let got_set: BTreeSet<PartialValue> = got.iter().cloned().collect();
            let want: BTreeSet<PartialValue> = brute_force(&p, &ty, level, &plan.integer_ring).into_iter().collect();
            ensure(got_set.len() == got.len() && got_set == want, || format!("{} at level {level}", d.name))?;
        }
    }
    let e = parse_expr(&p, "fromTo 1 3").map_err(|d| format!("{d:?}"))?;
    let got = enumerate_partials(&p, &e, &EvalConfig::default()).map_err(|e| e.to_string())?;
    let full = PartialValue::ints(&[1, 2, 3]);
    let want: BTreeSet<PartialValue> = brute_force(&p, &Type::list(Type::Int), 7, &[1, 2, 3])
        .into_iter()
        .filter(|t| t.depth() <= 5 && less_defined_eq(t, &full))
        .collect();
    ensure(got.complete && got.outcomes == want, || format!("fromTo 1 3: {} values, want {}", got.outcomes.len(), want.len()))
}

fn criterion_9() -> Check {
    let (a, b) = (path("semver/m_1.0.0.flp"), path("semver/m_1.1.0.flp"));
    let (code, r) = json(&["diff", &a, &b, "--old-version", "1.0.0", "--new-version", "1.1.0"]);
    ensure(code == 1 && r["diff"]["judgment"]["ok"] == false, || format!("1.0.0 -> 1.1.0: exit {code}"))?;
    let f = r["diff"]["behavior"]
        .as_array()
        .and_then(|bs| bs.iter().find(|b| b["op"] == "f"))
        .ok_or("no behavior entry for f")?;
    ensure(f["task"]["outcome"]["kind"] == "counterexample", || format!("f: {}", f["task"]["outcome"]))?;
    let (code, r) = json(&["diff", &a, &a, "--old-version", "1.0.0", "--new-version", "1.0.1"]);
    ensure(code == 0 && r["diff"]["judgment"]["ok"] == true, || format!("identical diff: exit {code}"))?;
    let (code, r) = json(&["diff", &a, &b, "--old-version", "1.2.0", "--new-version", "1.2.1"]);
    let api = &r["diff"]["api"]["violations"];
    ensure(code == 1 && api.as_array().is_some_and(|v| v.iter().any(|x| x["entity"] == "h")), || {
        format!("1.2.0 -> 1.2.1: {api}")
    })?;
    let (_, r) = json(&["diff", &a, &b, "--old-version", "1.2.0", "--new-version", "1.3.0"]);
    let api = &r["diff"]["api"]["violations"];
    ensure(api.as_array().is_some_and(|v| v.is_empty()), || format!("1.2.0 -> 1.3.0: {api}"))
}

fn full_corpus_reports() -> String {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "flp"))
        .collect();
    files.sort();
    let mut all = String::new();
    for f in files {
        all.push_str(&flpcheck(&["check", f.to_str().unwrap(), "--json"]).1);
    }
    let (a, b) = (path("semver/m_1.0.0.flp"), path("semver/m_1.1.0.flp"));
    all.push_str(&flpcheck(&["diff", &a, &b, "--old-version", "1.0.0", "--new-version", "1.1.0", "--json"]).1);
    all
}

fn criterion_10() -> Check {
    let first = full_corpus_reports();
    let second = full_corpus_reports();
    ensure(!first.is_empty() && first == second, || "reports differ between runs".to_string())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1 non-equivalence detection", criterion_1),
        ("2 specific witnesses", criterion_2),
        ("3 equivalence confirmation", criterion_3),
        ("4 ground vs contextual separation", criterion_4),
        ("5 mode-gate safety", criterion_5),
        ("6 safe mode", criterion_6),
        ("7 call-time choice", criterion_7),
        ("8 partial enumeration oracle", criterion_8),
        ("9 semver diff", criterion_9),
        ("10 determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (name, check) in criteria {
        let line = match check() {
            Ok(()) => format!("PASS criterion {name}"),
            Err(why) => {
                failed.push(name);
                format!("FAIL criterion {name}: {why}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
