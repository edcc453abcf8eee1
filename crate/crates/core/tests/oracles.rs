//! Enumeration and evaluation results compared against naive generators.

use std::collections::BTreeSet;

use flpcheck_core::eval::{enumerate_partials, eval_values, EvalConfig};
use flpcheck_core::lang::{parse_expr, parse_program, Program, Type};
use flpcheck_core::partial::{
    default_ring, downward_closure, enumerate_partial_values, less_defined_eq, partial_to_expr, LevelPlan,
    PartialValue,
};

const TYPES: &str = "\
data AB = A | B
data C = C AB
data T = L | N T Int T
data Rose = Rose [Rose]
data Three = X Bool | Y AB AB | Z
";

/// Every partial value of `ty` with at most `budget` defined nodes, built
/// by plain recursion over the declarations.
fn naive(p: &Program, ty: &Type, budget: usize, ints: &[i64]) -> Vec<PartialValue> {
    let mut out = vec![PartialValue::Bottom];
    if budget == 0 {
        return out;
    }
    match ty {
        Type::Int => out.extend(ints.iter().map(|&n| PartialValue::Int(n))),
        Type::Con(name, args) => {
            let decl = p.type_decl(name).unwrap();
            for c in &decl.constructors {
                let fields: Vec<Type> = c
                    .args
                    .iter()
                    .map(|a| a.subst(&|v: &str| decl.params.iter().position(|q| q == v).map(|k| args[k].clone())))
                    .collect();
                let mut combos: Vec<(Vec<PartialValue>, usize)> = vec![(vec![], 0)];
                for f in &fields {
                    let subs = naive(p, f, budget - 1, ints);
                    let mut next = Vec::new();
                    for (pre, used) in &combos {
                        for s in &subs {
                            if used + size(s) < budget {
                                let mut v = pre.clone();
                                v.push(s.clone());
                                next.push((v, used + size(s)));
                            }
                        }
                    }
                    combos = next;
                }
                out.extend(combos.into_iter().map(|(xs, _)| PartialValue::Con(c.name.clone(), xs)));
            }
        }
        Type::Var(_) => {}
    }
    out
}

fn size(t: &PartialValue) -> usize {
    match t {
        PartialValue::Bottom => 0,
        PartialValue::Int(_) => 1,
        PartialValue::Con(_, xs) => 1 + xs.iter().map(size).sum::<usize>(),
    }
}

fn types_to_check(p: &Program) -> Vec<Type> {
    let mut tys = vec![Type::Int];
    for d in &p.types {
        if d.constructors.len() > 3 {
            continue;
        }
        // Instantiate parameters with two different small types.
        for inst in [Type::con("Bool"), Type::Int] {
            tys.push(Type::Con(d.name.clone(), d.params.iter().map(|_| inst.clone()).collect()));
        }
    }
    tys.push(Type::list(Type::con("AB")));
    tys.push(Type::tuple(Type::con("C"), Type::list(Type::Int)));
    tys.dedup();
    tys
}

#[test]
fn enumeration_matches_naive_generator() {
    let p = parse_program(TYPES).unwrap();
    let mut checked = 0;
    for ty in types_to_check(&p) {
        for level in 0..=4 {
            let plan = LevelPlan::new(ty.clone(), level);
            let got = enumerate_partial_values(&p, &plan).unwrap();
            let set: BTreeSet<PartialValue> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates for {ty:?} at {level}");
            let want: BTreeSet<PartialValue> = naive(&p, &ty, level, &plan.integer_ring).into_iter().collect();
            assert_eq!(set, want, "{ty:?} at level {level}");
            assert!(got.windows(2).all(|w| size(&w[0]) <= size(&w[1])));
            checked += 1;
        }
    }
    assert!(checked >= 50);
}

#[test]
fn from_to_partials_are_the_closure_of_its_value() {
    let p = parse_program("fromTo :: Int -> Int -> [Int]\nfromTo m n = if m > n then [] else m : fromTo (m + 1) n\n")
        .unwrap();
    let e = parse_expr(&p, "fromTo 1 3").unwrap();
    let cfg = EvalConfig::default();
    let values = eval_values(&p, &e, &cfg).unwrap();
    assert!(values.complete);
    assert_eq!(values.outcomes.len(), 1);
    let full = values.outcomes.iter().next().unwrap().clone();
    assert_eq!(full, PartialValue::ints(&[1, 2, 3]));
    let oracle: BTreeSet<PartialValue> = naive(&p, &Type::list(Type::Int), 7, &[1, 2, 3])
        .into_iter()
        .filter(|t| less_defined_eq(t, &full))
        .collect();
    let got = enumerate_partials(&p, &e, &cfg).unwrap();
    assert!(got.complete);
    assert_eq!(got.outcomes, oracle);
    assert_eq!(downward_closure(&full, 1000).unwrap(), oracle);
    assert_eq!(oracle.len(), 1 + 2 * (1 + 2 * (1 + 2 * 2)));
}

#[test]
fn data_terms_evaluate_to_their_closure() {
    let p = parse_program(TYPES).unwrap();
    let cfg = EvalConfig::default();
    for t in enumerate_partial_values(&p, &LevelPlan::new(Type::con("Three"), 4)).unwrap() {
        let e = partial_to_expr(&t);
        let got = enumerate_partials(&p, &e, &cfg).unwrap();
        assert_eq!(got.outcomes, downward_closure(&t, 1000).unwrap(), "{t:?}");
        let vals = eval_values(&p, &e, &cfg).unwrap();
        let want: BTreeSet<PartialValue> = if t.is_total() { [t.clone()].into() } else { BTreeSet::new() };
        assert_eq!(vals.outcomes, want);
    }
}

#[test]
fn default_ring_alternates() {
    assert_eq!(default_ring(5), vec![0, 1, -1, 2, -2]);
}
