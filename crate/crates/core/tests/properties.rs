use std::collections::BTreeSet;

use proptest::prelude::*;

use flpcheck_core::eval::{enumerate_partials, eval_values, EvalConfig};
use flpcheck_core::lang::{parse_expr, parse_program, Program, Type};
use flpcheck_core::partial::{
    downward_closure, enumerate_partial_values, less_defined, less_defined_eq, partial_to_expr, render, LevelPlan,
    PartialValue,
};

const SRC: &str = "\
data AB = A | B
data T = L | N T AB T
coin :: Int
coin = 0 ? 1
double :: Int -> Int
double x = x + x
";

fn program() -> Program {
    parse_program(SRC).unwrap()
}

/// Partial values of `T` (trees over AB).
fn tree() -> impl Strategy<Value = PartialValue> {
    let leaf = prop_oneof![Just(PartialValue::Bottom), Just(PartialValue::con("L", vec![]))];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let ab = prop_oneof![
            Just(PartialValue::Bottom),
            Just(PartialValue::con("A", vec![])),
            Just(PartialValue::con("B", vec![]))
        ];
        (inner.clone(), ab, inner).prop_map(|(l, x, r)| PartialValue::con("N", vec![l, x, r]))
    })
}

/// A value below `t`, choosing at each node whether to cut it.
fn below(t: &PartialValue, cuts: &mut impl Iterator<Item = bool>) -> PartialValue {
    if cuts.next().unwrap_or(false) {
        return PartialValue::Bottom;
    }
    match t {
        PartialValue::Con(c, xs) => PartialValue::Con(c.clone(), xs.iter().map(|x| below(x, cuts)).collect()),
        _ => t.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn less_defined_is_a_partial_order(a in tree(), b in tree(), c in tree()) {
        prop_assert!(less_defined_eq(&a, &a));
        prop_assert!(!less_defined(&a, &a));
        if less_defined_eq(&a, &b) && less_defined_eq(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if less_defined_eq(&a, &b) && less_defined_eq(&b, &c) {
            prop_assert!(less_defined_eq(&a, &c));
        }
        prop_assert!(less_defined_eq(&PartialValue::Bottom, &a));
    }

    #[test]
    fn cutting_subtrees_goes_down(t in tree(), cuts in proptest::collection::vec(any::<bool>(), 0..32)) {
        let u = below(&t, &mut cuts.into_iter());
        prop_assert!(less_defined_eq(&u, &t));
        let closure = downward_closure(&t, 1 << 16).unwrap();
        prop_assert!(closure.contains(&u));
        prop_assert!(closure.iter().all(|x| less_defined_eq(x, &t)));
    }

    #[test]
    fn data_terms_round_trip(t in tree()) {
        let p = program();
        let text = render(&t);
        let e = parse_expr(&p, &text).unwrap();
        prop_assert_eq!(&e, &partial_to_expr(&t));
        let cfg = EvalConfig::default();
        let r = eval_values(&p, &e, &cfg).unwrap();
        let want: BTreeSet<PartialValue> = if t.is_total() { [t.clone()].into() } else { BTreeSet::new() };
        prop_assert_eq!(r.outcomes, want);
        prop_assert_eq!(enumerate_partials(&p, &e, &cfg).unwrap().outcomes, downward_closure(&t, 1 << 16).unwrap());
    }

    #[test]
    fn enumeration_levels_are_prefixes(level in 0usize..5) {
        let p = program();
        let ty = Type::con("T");
        let small = enumerate_partial_values(&p, &LevelPlan::new(ty.clone(), level)).unwrap();
        let large = enumerate_partial_values(&p, &LevelPlan::new(ty, level + 1)).unwrap();
        prop_assert_eq!(&large[..small.len()], &small[..]);
        prop_assert!(large[small.len()..].iter().all(|t| t.size() == level + 1));
    }

    #[test]
    fn shared_choices_stay_shared(k in 1i64..6) {
        let p = program();
        let cfg = EvalConfig::default();
        let e = parse_expr(&p, &format!("double (coin + {k})")).unwrap();
        let r = eval_values(&p, &e, &cfg).unwrap();
        let want: BTreeSet<PartialValue> = [PartialValue::Int(2 * k), PartialValue::Int(2 * k + 2)].into();
        prop_assert_eq!(r.outcomes, want);
        let again = eval_values(&p, &e, &cfg).unwrap();
        prop_assert_eq!(eval_values(&p, &e, &cfg).unwrap(), again);
    }
}
