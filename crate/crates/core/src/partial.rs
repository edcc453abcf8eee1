//! Partial values: constructor trees that may contain the undefined value ⊥.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::lang::{pretty, Expr, Program, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PartialValue {
    Bottom,
    Int(i64),
    Con(String, Vec<PartialValue>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartialError {
    #[error("unknown type {0}")]
    UnknownType(String),
    #[error("type {0} expects {1} arguments")]
    TypeArity(String, usize),
    #[error("type variable {0} must be instantiated before enumeration")]
    TypeVariable(String),
}

impl PartialValue {
    pub fn con(name: &str, args: Vec<PartialValue>) -> PartialValue {
        PartialValue::Con(name.to_string(), args)
    }

    pub fn nil() -> PartialValue {
        PartialValue::con("Nil", vec![])
    }

    pub fn cons(h: PartialValue, t: PartialValue) -> PartialValue {
        PartialValue::con("Cons", vec![h, t])
    }

    pub fn list(items: Vec<PartialValue>) -> PartialValue {
        items.into_iter().rev().fold(PartialValue::nil(), |acc, x| PartialValue::cons(x, acc))
    }

    pub fn ints(items: &[i64]) -> PartialValue {
        PartialValue::list(items.iter().map(|n| PartialValue::Int(*n)).collect())
    }

    /// Number of non-⊥ nodes.
    pub fn size(&self) -> usize {
        match self {
            PartialValue::Bottom => 0,
            PartialValue::Int(_) => 1,
            PartialValue::Con(_, xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
        }
    }

    /// Number of levels of defined nodes (⊥ has depth 0).
    pub fn depth(&self) -> usize {
        match self {
            PartialValue::Bottom => 0,
            PartialValue::Int(_) => 1,
            PartialValue::Con(_, xs) => 1 + xs.iter().map(|x| x.depth()).max().unwrap_or(0),
        }
    }

    pub fn is_total(&self) -> bool {
        match self {
            PartialValue::Bottom => false,
            PartialValue::Int(_) => true,
            PartialValue::Con(_, xs) => xs.iter().all(|x| x.is_total()),
        }
    }

    /// Paths (child index sequences) of all defined nodes, in pre-order.
    pub fn defined_positions(&self) -> Vec<Vec<usize>> {
        fn go(t: &PartialValue, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match t {
                PartialValue::Bottom => {}
                PartialValue::Int(_) => out.push(path.clone()),
                PartialValue::Con(_, xs) => {
                    out.push(path.clone());
                    for (i, x) in xs.iter().enumerate() {
                        path.push(i);
                        go(x, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Copy of `self` with the subtree at `path` replaced by ⊥.
    pub fn bottom_at(&self, path: &[usize]) -> PartialValue {
        match (path.split_first(), self) {
            (None, _) => PartialValue::Bottom,
            (Some((i, rest)), PartialValue::Con(c, xs)) => {
                let mut xs = xs.clone();
                xs[*i] = xs[*i].bottom_at(rest);
                PartialValue::Con(c.clone(), xs)
            }
            _ => self.clone(),
        }
    }
}

/// Every ⊥ becomes `failed`; everything else maps to itself.
pub fn partial_to_expr(t: &PartialValue) -> Expr {
    match t {
        PartialValue::Bottom => Expr::Failed,
        PartialValue::Int(n) => Expr::Int(*n),
        PartialValue::Con(c, xs) => Expr::Con(c.clone(), xs.iter().map(partial_to_expr).collect()),
    }
}

pub fn render(t: &PartialValue) -> String {
    pretty(&partial_to_expr(t))
}

/// `t` is at most as defined as `u` (reflexive).
pub fn less_defined_eq(t: &PartialValue, u: &PartialValue) -> bool {
    match (t, u) {
        (PartialValue::Bottom, _) => true,
        (PartialValue::Int(a), PartialValue::Int(b)) => a == b,
        (PartialValue::Con(c, xs), PartialValue::Con(d, ys)) => {
            c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| less_defined_eq(x, y))
        }
        _ => false,
    }
}

/// `t` arises from `u` by replacing at least one subtree with ⊥.
pub fn less_defined(t: &PartialValue, u: &PartialValue) -> bool {
    t != u && less_defined_eq(t, u)
}

/// All values at most as defined as `t`; `None` if there are more than `cap`.
pub fn downward_closure(t: &PartialValue, cap: usize) -> Option<BTreeSet<PartialValue>> {
    fn go(t: &PartialValue, cap: usize) -> Option<Vec<PartialValue>> {
        match t {
            PartialValue::Bottom => Some(vec![PartialValue::Bottom]),
            PartialValue::Int(_) => Some(vec![PartialValue::Bottom, t.clone()]),
            PartialValue::Con(c, xs) => {
                let mut combos: Vec<Vec<PartialValue>> = vec![vec![]];
                for x in xs {
                    let sub = go(x, cap)?;
                    let mut next = Vec::with_capacity(combos.len() * sub.len());
                    for prefix in &combos {
                        for s in &sub {
                            let mut v = prefix.clone();
                            v.push(s.clone());
                            next.push(v);
                        }
                    }
                    if next.len() > cap {
                        return None;
                    }
                    combos = next;
                }
                let mut out = vec![PartialValue::Bottom];
                out.extend(combos.into_iter().map(|args| PartialValue::Con(c.clone(), args)));
                Some(out)
            }
        }
    }
    let v = go(t, cap)?;
    if v.len() > cap {
        return None;
    }
    Some(v.into_iter().collect())
}

/// Position of an integer in the ring sequence 0, 1, -1, 2, -2, ...
pub fn int_rank(n: i64) -> u64 {
    if n > 0 {
        2 * n as u64 - 1
    } else {
        2 * n.unsigned_abs()
    }
}

/// The first `len` elements of 0, 1, -1, 2, -2, ...
pub fn default_ring(len: usize) -> Vec<i64> {
    (0..len as i64).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPlan {
    pub ty: Type,
    pub max_level: usize,
    pub integer_ring: Vec<i64>,
}

impl LevelPlan {
    pub fn new(ty: Type, max_level: usize) -> LevelPlan {
        LevelPlan { ty, max_level, integer_ring: default_ring(max_level.max(1)) }
    }
}

/// The order in which values are enumerated: ascending size, then ⊥ before
/// integers before constructors (in declaration order), then children
/// left to right.
pub fn enum_cmp(program: &Program, a: &PartialValue, b: &PartialValue) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| same_size_cmp(program, a, b))
}

fn same_size_cmp(program: &Program, a: &PartialValue, b: &PartialValue) -> Ordering {
    use PartialValue::*;
    let rank = |t: &PartialValue| match t {
        Bottom => 0,
        Int(_) => 1,
        Con(c, _) => 2 + program.constructor(c).map(|(_, i)| i).unwrap_or(0),
    };
    match (a, b) {
        (Int(x), Int(y)) => int_rank(*x).cmp(&int_rank(*y)),
        (Con(c, xs), Con(d, ys)) if c == d => tuple_cmp(program, xs, ys),
        _ => rank(a).cmp(&rank(b)),
    }
}

/// Lexicographic comparison of equally sized tuples, each component ordered
/// by [`enum_cmp`].
pub fn tuple_cmp(program: &Program, xs: &[PartialValue], ys: &[PartialValue]) -> Ordering {
    for (x, y) in xs.iter().zip(ys) {
        let o = enum_cmp(program, x, y);
        if o != Ordering::Equal {
            return o;
        }
    }
    xs.len().cmp(&ys.len())
}

/// Orders input tuples: total size first, then lexicographically.
pub fn tuple_enum_cmp(program: &Program, xs: &[PartialValue], ys: &[PartialValue]) -> Ordering {
    let sx: usize = xs.iter().map(|x| x.size()).sum();
    let sy: usize = ys.iter().map(|y| y.size()).sum();
    sx.cmp(&sy).then_with(|| tuple_cmp(program, xs, ys))
}

/// Memoizing generator of partial values by exact size.
pub struct Enumerator<'p> {
    program: &'p Program,
    ring: Vec<i64>,
    memo: HashMap<(Type, usize), Rc<Vec<PartialValue>>>,
}

impl<'p> Enumerator<'p> {
    pub fn new(program: &'p Program, ring: Vec<i64>) -> Enumerator<'p> {
        Enumerator { program, ring, memo: HashMap::new() }
    }

    pub fn check_type(&self, ty: &Type) -> Result<(), PartialError> {
        match ty {
            Type::Int => Ok(()),
            Type::Var(v) => Err(PartialError::TypeVariable(v.clone())),
            Type::Con(n, args) => {
                let td = self.program.type_decl(n).ok_or_else(|| PartialError::UnknownType(n.clone()))?;
                if td.params.len() != args.len() {
                    return Err(PartialError::TypeArity(n.clone(), td.params.len()));
                }
                args.iter().try_for_each(|a| self.check_type(a))
            }
        }
    }

    /// All partial values of `ty` with exactly `size` defined nodes.
    pub fn exact(&mut self, ty: &Type, size: usize) -> Rc<Vec<PartialValue>> {
        if size == 0 {
            return Rc::new(vec![PartialValue::Bottom]);
        }
        let key = (ty.clone(), size);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        match ty {
            Type::Int => {
                if size == 1 {
                    out.extend(self.ring.iter().map(|n| PartialValue::Int(*n)));
                }
            }
            Type::Var(_) => {}
            Type::Con(n, args) => {
                let program = self.program;
                if let Some(td) = program.type_decl(n) {
                    for c in &td.constructors {
                        let fields = program.con_field_types(&c.name, args).unwrap_or_default();
                        for kids in self.exact_tuple(&fields, size - 1) {
                            out.push(PartialValue::Con(c.name.clone(), kids));
                        }
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.memo.insert(key, rc.clone());
        rc
    }

    /// Tuples of values for `types` whose sizes sum to exactly `size`, in
    /// lexicographic enumeration order.
    pub fn exact_tuple(&mut self, types: &[Type], size: usize) -> Vec<Vec<PartialValue>> {
        match types.split_first() {
            None => {
                if size == 0 {
                    vec![vec![]]
                } else {
                    vec![]
                }
            }
            Some((first, [])) => self.exact(first, size).iter().map(|v| vec![v.clone()]).collect(),
            Some((first, rest)) => {
                let mut out = Vec::new();
                for s in 0..=size {
                    let heads = self.exact(first, s);
                    if heads.is_empty() {
                        continue;
                    }
                    let tails = self.exact_tuple(rest, size - s);
                    for h in heads.iter() {
                        for t in &tails {
                            let mut v = Vec::with_capacity(types.len());
                            v.push(h.clone());
                            v.extend(t.iter().cloned());
                            out.push(v);
                        }
                    }
                }
                out
            }
        }
    }

    /// Tuples with total size at most `max`, ordered by total size.
    pub fn tuples_up_to(&mut self, types: &[Type], max: usize) -> Vec<Vec<PartialValue>> {
        (0..=max).flat_map(|s| self.exact_tuple(types, s)).collect()
    }
}

/// Every partial value of the plan's type with size ≤ max_level, in
/// enumeration order.
pub fn enumerate_partial_values(program: &Program, plan: &LevelPlan) -> Result<Vec<PartialValue>, PartialError> {
    let mut e = Enumerator::new(program, plan.integer_ring.clone());
    e.check_type(&plan.ty)?;
    Ok((0..=plan.max_level).flat_map(|s| e.exact(&plan.ty, s).as_ref().clone()).collect())
}
