//! Proven analysis verdicts checked against evaluation on small inputs.

use std::path::PathBuf;

use flpcheck_core::analysis::Analyzer;
use flpcheck_core::equiv::DEFAULT_ELEMENT_TYPE;
use flpcheck_core::eval::{EvalConfig, Evaluator};
use flpcheck_core::lang::{parse_program, Program, Type};
use flpcheck_core::partial::{default_ring, Enumerator};

fn corpus() -> Vec<(String, Program)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "flp"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), parse_program(&src).unwrap())
        })
        .collect()
}

fn monomorphic(t: &Type) -> Type {
    t.subst(&|_| Some(Type::con(DEFAULT_ELEMENT_TYPE)))
}

#[test]
fn proven_verdicts_hold_on_total_inputs() {
    let cfg = EvalConfig::default();
    let mut checked = 0;
    for (file, p) in corpus() {
        let a = Analyzer::new(&p);
        let ev = Evaluator::new(&p, &cfg).unwrap();
        let mut en = Enumerator::new(&p, default_ring(4));
        for op in p.user_ops() {
            let Some(sig) = &op.signature else { continue };
            let params: Vec<Type> = sig.params.iter().map(monomorphic).collect();
            let term = a.termination(&op.name).unwrap().is_proven();
            let det = a.deterministic(&op.name).unwrap().is_proven();
            let total = a.totally_defined(&op.name).unwrap().is_proven();
            for inputs in en.tuples_up_to(&params, 4) {
                if !inputs.iter().all(|x| x.is_total()) {
                    continue;
                }
                let (r, _) = ev.call_values(&op.name, &inputs).unwrap();
                if term {
                    assert!(r.complete, "{file}: {} {inputs:?} did not finish", op.name);
                }
                if det && r.complete {
                    assert!(r.outcomes.len() <= 1, "{file}: {} {inputs:?} has {:?}", op.name, r.outcomes);
                }
                if total {
                    assert!(!r.outcomes.is_empty(), "{file}: {} {inputs:?} has no value", op.name);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn expected_verdicts_on_corpus() {
    let all = corpus();
    let get = |f: &str| &all.iter().find(|(n, _)| n == f).unwrap().1;
    let a = Analyzer::new(get("mc91.flp"));
    assert!(!a.termination("mc91r").unwrap().is_proven());
    let a = Analyzer::new(get("primes.flp"));
    assert!(a.productivity("from").unwrap().is_proven());
    assert!(a.productivity("dummy_primes").unwrap().is_proven());
    assert!(!a.termination("dummy_primes").unwrap().is_proven());
    assert!(a.termination("dropMultiples").unwrap().is_proven());
    assert!(a.productivity("sieve").unwrap().is_proven());
    assert!(!a.productivity("primes").unwrap().is_proven());
    let a = Analyzer::new(get("sortequiv.flp"));
    assert!(a.termination("sort").unwrap().is_proven());
    assert!(!a.deterministic("perm").unwrap().is_proven());
    let a = Analyzer::new(get("not.flp"));
    assert!(a.totally_defined("not").unwrap().is_proven());
    assert!(a.deterministic("not").unwrap().is_proven());
    let a = Analyzer::new(get("loops.flp"));
    assert!(!a.termination("l1").unwrap().is_proven());
    assert!(!a.productivity("l1").unwrap().is_proven());
    assert!(a.termination("l2").unwrap().is_proven());
}
