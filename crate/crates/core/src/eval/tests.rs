use super::*;
use crate::lang::{parse_expr, parse_program, Program};
use crate::partial::PartialValue::{self, Bottom, Int};

const SRC: &str = "\
data AB = A | B
data C = C AB
coin :: Int
coin = 0 ? 1
double :: Int -> Int
double x = x + x
insert :: a -> [a] -> [a]
insert x ys = x : ys
insert x (y : ys) = y : insert x ys
insert' :: a -> [a] -> [a]
insert' x [] = [x]
insert' x (y : ys) = x : y : ys ? y : insert' x ys
perm :: [a] -> [a]
perm [] = []
perm (x : xs) = insert x (perm xs)
sorted :: [Int] -> Bool
sorted [] = True
sorted [_] = True
sorted (x : y : ys) = x <= y && sorted (y : ys)
sort :: [Int] -> [Int]
sort xs | sorted ys = ys where ys = perm xs
idSorted :: [Int] -> [Int]
idSorted xs | sorted xs = xs
sort' :: [Int] -> [Int]
sort' xs = idSorted (perm xs)
f :: AB -> C
f x = C (h x)
g :: AB -> C
g A = C A
g B = C B
h :: AB -> AB
h A = A
ints1 :: Int -> [Int]
ints1 n = n : ints1 (n + 1)
ints2 :: Int -> [Int]
ints2 n = n : ints2 (n + 2)
fromTo :: Int -> Int -> [Int]
fromTo m n = if m > n then [] else m : fromTo (m + 1) n
f1 :: Bool -> Bool
f1 True = True
f1 False = True
f2 :: Bool -> Bool
f2 _ = True
loop :: Int
loop = loop
";

fn prog() -> Program {
    parse_program(SRC).unwrap()
}

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn values(src: &str) -> OutcomeSet {
    let p = prog();
    eval_values(&p, &parse_expr(&p, src).unwrap(), &cfg()).unwrap()
}

fn ints(xs: &[i64]) -> BTreeSet<PartialValue> {
    xs.iter().map(|n| Int(*n)).collect()
}

fn reach(src: &str, t: &PartialValue) -> Reachability {
    let p = prog();
    reach_partial(&p, &parse_expr(&p, src).unwrap(), t, &cfg()).unwrap()
}

fn partials(src: &str) -> OutcomeSet {
    let p = prog();
    enumerate_partials(&p, &parse_expr(&p, src).unwrap(), &cfg()).unwrap()
}

fn con(c: &str, xs: Vec<PartialValue>) -> PartialValue {
    PartialValue::con(c, xs)
}

fn cons(h: PartialValue, t: PartialValue) -> PartialValue {
    PartialValue::cons(h, t)
}

#[test]
fn call_time_choice() {
    let r = values("double coin");
    assert!(r.complete);
    assert_eq!(r.outcomes, ints(&[0, 2]));
    let r = values("coin + coin");
    assert_eq!(r.outcomes, ints(&[0, 1, 2]));
    let r = values("let x = coin in x + x");
    assert_eq!(r.outcomes, ints(&[0, 2]));
}

#[test]
fn insert_is_non_deterministic() {
    let r = values("insert 0 [1, 2]");
    assert!(r.complete);
    let expected: BTreeSet<_> =
        [[0, 1, 2], [1, 0, 2], [1, 2, 0]].iter().map(|l| PartialValue::ints(l)).collect();
    assert_eq!(r.outcomes, expected);
}

#[test]
fn head_of_insert_with_failed_tail() {
    let r = values("head (insert 1 failed)");
    assert!(r.complete);
    assert_eq!(r.outcomes, ints(&[1]));
    let r = values("head (insert' 1 failed)");
    assert!(r.complete);
    assert!(r.outcomes.is_empty());
}

#[test]
fn simple_values() {
    let r = values("not (not True)");
    assert_eq!(r.outcomes.into_iter().collect::<Vec<_>>(), vec![con("True", vec![])]);
    assert_eq!(values("sort [3, 1, 2]").outcomes.len(), 1);
    assert_eq!(values("7 - 2 * 3").outcomes, ints(&[1]));
    assert_eq!(values("div 7 0").outcomes, ints(&[]));
    assert_eq!(values("[1, 2] == [1, 2]").outcomes.len(), 1);
    assert_eq!(values("(1, A) < (1, B)").outcomes, [con("True", vec![])].into_iter().collect());
    assert_eq!(values("if 1 < 2 then 3 else loop").outcomes, ints(&[3]));
    assert_eq!(values("False && loop == 0").outcomes, [con("False", vec![])].into_iter().collect());
}

#[test]
fn budgets_make_searches_incomplete() {
    let r = values("loop");
    assert!(!r.complete);
    assert!(r.outcomes.is_empty());
    let r = values("ints1 0");
    assert!(!r.complete);
    assert!(r.outcomes.is_empty());
    let r = values("let x = x + 1 in x");
    assert!(r.complete && r.outcomes.is_empty());
}

#[test]
fn reachability_examples() {
    let c_bot = con("C", vec![Bottom]);
    assert_eq!(reach("f failed", &c_bot), Reachability::Yes);
    assert_eq!(reach("g failed", &c_bot), Reachability::No);
    let t = cons(Int(2), Bottom);
    assert_eq!(reach("insert 2 [3, 1]", &t), Reachability::Yes);
    assert_eq!(reach("sort' [2, 3, 1]", &t), Reachability::No);
    assert_eq!(reach("sort [2, 3, 1]", &t), Reachability::No);
    assert_eq!(reach("sort [2, 3, 1]", &PartialValue::ints(&[1, 2, 3])), Reachability::Yes);
    assert_eq!(reach("sort' (1 : failed)", &cons(Bottom, Bottom)), Reachability::No);
    assert_eq!(reach("loop", &Bottom), Reachability::Yes);
    assert_eq!(reach("failed", &Bottom), Reachability::Yes);
    let t = cons(Int(0), cons(Int(1), Bottom));
    assert_eq!(reach("ints1 0", &t), Reachability::Yes);
    assert_eq!(reach("ints2 0", &t), Reachability::No);
    assert_eq!(reach("loop", &Int(1)), Reachability::Unknown);
}

#[test]
fn partial_value_sets() {
    let r = partials("fromTo 1 5");
    assert!(r.complete);
    for t in [
        Bottom,
        cons(Bottom, Bottom),
        cons(Int(1), Bottom),
        cons(Bottom, cons(Bottom, Bottom)),
        cons(Int(1), cons(Bottom, Bottom)),
        cons(Bottom, cons(Int(2), Bottom)),
        cons(Int(1), cons(Int(2), Bottom)),
    ] {
        assert!(r.outcomes.contains(&t), "{t:?}");
    }
    let r = partials("f1 failed");
    assert!(r.complete);
    assert_eq!(r.outcomes, [Bottom].into_iter().collect());
    let r = partials("f2 failed");
    assert!(r.complete);
    assert_eq!(r.outcomes, [Bottom, con("True", vec![])].into_iter().collect());
    let r = partials("A");
    assert_eq!(r.outcomes, [Bottom, con("A", vec![])].into_iter().collect());
    let r = partials("f failed");
    assert_eq!(r.outcomes, [Bottom, con("C", vec![Bottom])].into_iter().collect());
    let r = partials("g failed");
    assert!(r.complete);
    assert_eq!(r.outcomes, [Bottom].into_iter().collect());
}

#[test]
fn failures_under_choices_yield_partial_values() {
    // The failing component becomes ⊥, the other one stays observable.
    let r = partials("(failed ? 1, coin)");
    assert!(r.complete);
    assert!(r.outcomes.contains(&con("Tuple2", vec![Bottom, Int(1)])));
    assert!(r.outcomes.contains(&con("Tuple2", vec![Int(1), Int(0)])));
    assert!(!r.outcomes.contains(&con("Tuple2", vec![Int(0), Bottom])));
}

#[test]
fn depth_budget_truncates() {
    let p = prog();
    let small = EvalConfig { depth_budget: 3, ..cfg() };
    let r = enumerate_partials(&p, &parse_expr(&p, "ints1 0").unwrap(), &small).unwrap();
    assert!(!r.complete);
    assert!(r.outcomes.contains(&cons(Int(0), cons(Int(1), Bottom))));
    assert!(!r.outcomes.iter().any(|t| t.depth() > 3));
}

#[test]
fn invalid_config_rejected() {
    let p = prog();
    let bad = EvalConfig { step_budget: 0, ..cfg() };
    assert!(eval_values(&p, &parse_expr(&p, "1").unwrap(), &bad).is_err());
}

#[test]
fn calls_with_partial_arguments() {
    let p = prog();
    let ev = Evaluator::new(&p, &cfg()).unwrap();
    let (r, _) = ev.call_reach("f", &[Bottom], &con("C", vec![Bottom])).unwrap();
    assert_eq!(r, Reachability::Yes);
    let (r, _) = ev.call_reach("insert", &[Int(1), Bottom], &cons(Int(1), Bottom)).unwrap();
    assert_eq!(r, Reachability::Yes);
    let (r, _) = ev.call_reach("insert'", &[Int(1), Bottom], &cons(Bottom, Bottom)).unwrap();
    assert_eq!(r, Reachability::No);
    assert!(ev.call_reach("insert", &[Int(1)], &Bottom).is_err());
}
