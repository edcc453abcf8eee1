//! Conservative static analyses used to gate checking modes: termination,
//! productivity, deterministic definition and total definition.
//!
//! Every analysis answers `Proven` only when a simple syntactic criterion
//! holds; `Unknown` is always a safe answer.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::lang::{Binding, Expr, OpDecl, Pattern, PrimOp, Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown operation {0}")]
    UnknownOperation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Proven,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisVerdict {
    pub status: Status,
    pub reason: String,
}

impl AnalysisVerdict {
    fn proven(reason: impl Into<String>) -> AnalysisVerdict {
        AnalysisVerdict { status: Status::Proven, reason: reason.into() }
    }

    fn unknown(reason: impl Into<String>) -> AnalysisVerdict {
        AnalysisVerdict { status: Status::Unknown, reason: reason.into() }
    }

    pub fn is_proven(&self) -> bool {
        self.status == Status::Proven
    }
}

/// All four verdicts for one operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpAnalysis {
    pub op: String,
    pub termination: AnalysisVerdict,
    pub productivity: AnalysisVerdict,
    pub deterministic: AnalysisVerdict,
    pub totally_defined: AnalysisVerdict,
}

/// Call graph and memo tables for one program.
pub struct Analyzer<'p> {
    program: &'p Program,
    index: HashMap<&'p str, usize>,
    callees: Vec<BTreeSet<usize>>,
    scc_of: Vec<usize>,
    sccs: Vec<Vec<usize>>,
    scc_term: RefCell<HashMap<usize, AnalysisVerdict>>,
    productive: RefCell<HashMap<usize, AnalysisVerdict>>,
}

fn rule_exprs(r: &Rule) -> impl Iterator<Item = &Expr> {
    r.guard.iter().chain(std::iter::once(&r.body)).chain(r.wheres.iter().map(|b| &b.expr))
}

impl<'p> Analyzer<'p> {
    pub fn new(program: &'p Program) -> Analyzer<'p> {
        let index: HashMap<&str, usize> = program.ops.iter().enumerate().map(|(i, o)| (o.name.as_str(), i)).collect();
        let mut callees = vec![BTreeSet::new(); program.ops.len()];
        for (i, op) in program.ops.iter().enumerate() {
            for r in &op.rules {
                for e in rule_exprs(r) {
                    e.walk(&mut |x| {
                        if let Expr::Call(g, _) = x {
                            if let Some(&j) = index.get(g.as_str()) {
                                callees[i].insert(j);
                            }
                        }
                    });
                }
            }
        }
        let mut g = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..program.ops.len()).map(|i| g.add_node(i)).collect();
        for (i, cs) in callees.iter().enumerate() {
            for &j in cs {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
        let mut scc_of = vec![0; program.ops.len()];
        let mut sccs = Vec::new();
        for (k, comp) in tarjan_scc(&g).into_iter().enumerate() {
            let mut members: Vec<usize> = comp.into_iter().map(|n| g[n]).collect();
            members.sort_unstable();
            for &m in &members {
                scc_of[m] = k;
            }
            sccs.push(members);
        }
        Analyzer {
            program,
            index,
            callees,
            scc_of,
            sccs,
            scc_term: RefCell::new(HashMap::new()),
            productive: RefCell::new(HashMap::new()),
        }
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    fn id(&self, op: &str) -> Result<usize, AnalysisError> {
        self.index.get(op).copied().ok_or_else(|| AnalysisError::UnknownOperation(op.to_string()))
    }

    fn op(&self, i: usize) -> &'p OpDecl {
        &self.program.ops[i]
    }

    fn name(&self, i: usize) -> &'p str {
        &self.program.ops[i].name
    }

    fn is_recursive(&self, scc: usize) -> bool {
        let m = &self.sccs[scc];
        m.len() > 1 || self.callees[m[0]].contains(&m[0])
    }

    /// Every operation reachable from `i`, including `i`, in index order.
    fn reachable(&self, i: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            if seen.insert(k) {
                stack.extend(self.callees[k].iter().copied());
            }
        }
        seen.into_iter().collect()
    }

    pub fn termination(&self, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
        Ok(self.term(self.id(op)?))
    }

    fn term(&self, i: usize) -> AnalysisVerdict {
        let own = self.scc_termination(self.scc_of[i]);
        if !own.is_proven() {
            return own;
        }
        for j in self.reachable(i) {
            let v = self.scc_termination(self.scc_of[j]);
            if !v.is_proven() {
                return AnalysisVerdict::unknown(format!("calls {} whose termination is unknown", self.name(j)));
            }
        }
        own
    }

    fn scc_termination(&self, scc: usize) -> AnalysisVerdict {
        if let Some(v) = self.scc_term.borrow().get(&scc) {
            return v.clone();
        }
        let v = self.compute_scc_termination(scc);
        self.scc_term.borrow_mut().insert(scc, v.clone());
        v
    }

    fn compute_scc_termination(&self, scc: usize) -> AnalysisVerdict {
        let members = &self.sccs[scc];
        for &m in members {
            if self.op(m).rules.iter().any(has_cyclic_binding) {
                return AnalysisVerdict::unknown(format!("{} has a recursive local binding", self.name(m)));
            }
        }
        if !self.is_recursive(scc) {
            return AnalysisVerdict::proven("no recursion");
        }
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut sites = Vec::new();
        for &m in members {
            if self.op(m).arity() == 0 {
                return AnalysisVerdict::unknown(format!("{} is recursive without arguments", self.name(m)));
            }
            for r in &self.op(m).rules {
                collect_descents(self, r, local[&m], &local, &mut sites);
            }
        }
        let arities: Vec<usize> = members.iter().map(|&m| self.op(m).arity()).collect();
        let combos: usize = arities.iter().try_fold(1usize, |acc, &a| acc.checked_mul(a)).unwrap_or(usize::MAX);
        if combos > 1 << 16 {
            return AnalysisVerdict::unknown("too many argument position combinations");
        }
        let mut pos = vec![0usize; members.len()];
        loop {
            let ok = sites.iter().all(|s: &Site| s.strict[pos[s.callee]].contains(&pos[s.caller]));
            if ok {
                let desc: Vec<String> =
                    members.iter().zip(&pos).map(|(&m, p)| format!("{} argument {}", self.name(m), p + 1)).collect();
                return AnalysisVerdict::proven(format!("structural descent on {}", desc.join(", ")));
            }
            // next combination
            let mut k = 0;
            loop {
                if k == pos.len() {
                    let first = sites.first().map(|s| self.name(members[s.caller])).unwrap_or("");
                    return AnalysisVerdict::unknown(format!(
                        "recursive calls in {first} do not descend structurally"
                    ));
                }
                pos[k] += 1;
                if pos[k] < arities[k] {
                    break;
                }
                pos[k] = 0;
                k += 1;
            }
        }
    }

    pub fn productivity(&self, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
        Ok(self.prod(self.id(op)?))
    }

    fn prod(&self, i: usize) -> AnalysisVerdict {
        if let Some(v) = self.productive.borrow().get(&i) {
            return v.clone();
        }
        let v = self.compute_productivity(i);
        self.productive.borrow_mut().insert(i, v.clone());
        v
    }

    fn compute_productivity(&self, i: usize) -> AnalysisVerdict {
        let t = self.term(i);
        if t.is_proven() {
            return AnalysisVerdict::proven("terminating");
        }
        let scc = self.scc_of[i];
        for &m in &self.sccs[scc] {
            for r in &self.op(m).rules {
                let finite = r.guard.iter().chain(r.wheres.iter().map(|b| &b.expr)).find_map(|e| self.finite(e, scc).err());
                let res = match finite {
                    Some(msg) => Err(msg),
                    None if has_cyclic_binding(r) => Err(format!("{} has a recursive local binding", self.name(m))),
                    None => self.data(&r.body, false, scc),
                };
                if let Err(msg) = res {
                    return AnalysisVerdict::unknown(msg);
                }
            }
        }
        AnalysisVerdict::proven("recursive calls are guarded by constructors")
    }

    /// An expression whose result flows into the operation's result.
    fn data(&self, e: &Expr, guarded: bool, scc: usize) -> Result<(), String> {
        match e {
            Expr::Var(_) | Expr::Int(_) | Expr::Failed => Ok(()),
            Expr::Con(_, xs) => xs.iter().try_for_each(|x| self.data(x, true, scc)),
            Expr::Call(g, xs) => {
                let j = self.index[g.as_str()];
                xs.iter().try_for_each(|x| self.finite(x, scc))?;
                if self.scc_of[j] == scc {
                    if guarded {
                        Ok(())
                    } else {
                        Err(format!("unguarded recursive call to {g}"))
                    }
                } else if self.prod(j).is_proven() {
                    Ok(())
                } else {
                    Err(format!("calls {g} whose productivity is unknown"))
                }
            }
            Expr::Prim(_, xs) => xs.iter().try_for_each(|x| self.finite(x, scc)),
            Expr::Choice(a, b) => {
                self.data(a, guarded, scc)?;
                self.data(b, guarded, scc)
            }
            Expr::If(c, t, f) => {
                self.finite(c, scc)?;
                self.data(t, guarded, scc)?;
                self.data(f, guarded, scc)
            }
            Expr::Case(s, alts) => {
                self.finite(s, scc)?;
                alts.iter().try_for_each(|a| self.data(&a.body, guarded, scc))
            }
            Expr::Let(bs, body) => {
                if cyclic(bs) {
                    return Err("recursive local binding".into());
                }
                bs.iter().try_for_each(|b| self.finite(&b.expr, scc))?;
                self.data(body, guarded, scc)
            }
        }
    }

    /// An expression that must evaluate to finite data in finitely many steps.
    fn finite(&self, e: &Expr, scc: usize) -> Result<(), String> {
        let mut res = Ok(());
        e.walk(&mut |x| {
            if res.is_err() {
                return;
            }
            match x {
                Expr::Call(g, _) => {
                    let j = self.index[g.as_str()];
                    if self.scc_of[j] == scc {
                        res = Err(format!("recursive call to {g} is consumed"));
                    } else if !self.term(j).is_proven() {
                        res = Err(format!("consumes the result of {g} whose termination is unknown"));
                    }
                }
                Expr::Let(bs, _) if cyclic(bs) => res = Err("recursive local binding".into()),
                _ => {}
            }
        });
        res
    }

    pub fn deterministic(&self, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
        let i = self.id(op)?;
        for j in self.reachable(i) {
            let o = self.op(j);
            if o.rules.iter().any(|r| r.guard.is_some()) {
                return Ok(AnalysisVerdict::unknown(format!("{} has guarded rules", o.name)));
            }
            for r in &o.rules {
                let mut bad = None;
                for e in rule_exprs(r) {
                    e.walk(&mut |x| match x {
                        Expr::Choice(..) if bad.is_none() => bad = Some("uses ?"),
                        Expr::Failed if bad.is_none() => bad = Some("uses failed"),
                        _ => {}
                    });
                }
                if let Some(b) = bad {
                    return Ok(AnalysisVerdict::unknown(format!("{} {b}", o.name)));
                }
            }
            for (a, r1) in o.rules.iter().enumerate() {
                for r2 in &o.rules[a + 1..] {
                    if r1.params.iter().zip(&r2.params).all(|(p, q)| overlap(p, q)) {
                        return Ok(AnalysisVerdict::unknown(format!("{} has overlapping rules", o.name)));
                    }
                }
            }
        }
        Ok(AnalysisVerdict::proven("no choices and non-overlapping rules"))
    }

    pub fn totally_defined(&self, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
        let i = self.id(op)?;
        let t = self.term(i);
        if !t.is_proven() {
            return Ok(AnalysisVerdict::unknown(format!("termination unknown: {}", t.reason)));
        }
        for j in self.reachable(i) {
            let o = self.op(j);
            if o.rules.iter().any(|r| r.guard.is_some()) {
                return Ok(AnalysisVerdict::unknown(format!("{} has guarded rules", o.name)));
            }
            let rows: Vec<Vec<&Pattern>> = o.rules.iter().map(|r| r.params.iter().collect()).collect();
            if !exhaustive(self.program, rows, o.arity()) {
                return Ok(AnalysisVerdict::unknown(format!("{} has non-exhaustive rules", o.name)));
            }
            for r in &o.rules {
                let binds = r.wheres.iter().all(|b| irrefutable(self.program, &b.pat));
                let exprs = rule_exprs(r).all(|e| total_expr(self.program, e));
                if !binds || !exprs {
                    return Ok(AnalysisVerdict::unknown(format!("{} may fail", o.name)));
                }
            }
        }
        Ok(AnalysisVerdict::proven("terminating with exhaustive rules"))
    }

    /// All verdicts for every user-defined operation, in declaration order.
    pub fn analyze_all(&self) -> Vec<OpAnalysis> {
        self.program
            .user_ops()
            .map(|o| OpAnalysis {
                op: o.name.clone(),
                termination: self.termination(&o.name).unwrap(),
                productivity: self.productivity(&o.name).unwrap(),
                deterministic: self.deterministic(&o.name).unwrap(),
                totally_defined: self.totally_defined(&o.name).unwrap(),
            })
            .collect()
    }
}

struct Site {
    caller: usize,
    callee: usize,
    /// For each argument of the call, the caller parameters it is a strict
    /// subterm of.
    strict: Vec<Vec<usize>>,
}

type Env = HashMap<String, Option<(usize, bool)>>;

struct Cx<'a> {
    caller: usize,
    local: &'a HashMap<usize, usize>,
    subpats: Vec<(usize, Expr)>,
}

fn bind_pattern(p: &Pattern, origin: Option<(usize, bool)>, env: &mut Env) {
    match p {
        Pattern::Var(v) => {
            env.insert(v.clone(), origin);
        }
        Pattern::Wild | Pattern::Int(_) => {}
        Pattern::Con(_, ps) => {
            let inner = origin.map(|(i, _)| (i, true));
            ps.iter().for_each(|q| bind_pattern(q, inner, env));
        }
    }
}

fn collect_descents(a: &Analyzer<'_>, r: &Rule, caller: usize, local: &HashMap<usize, usize>, out: &mut Vec<Site>) {
    let mut env = Env::new();
    for (i, p) in r.params.iter().enumerate() {
        bind_pattern(p, Some((i, false)), &mut env);
    }
    let mut vars = Vec::new();
    r.wheres.iter().for_each(|b| b.pat.vars(&mut vars));
    for v in vars {
        env.insert(v, None);
    }
    let cx = Cx { caller, local, subpats: subpatterns(&r.params) };
    for e in rule_exprs(r) {
        descents(a, e, &env, &cx, out);
    }
}

/// Proper subpatterns of the parameters that contain no wildcards, as
/// expressions, with the parameter they come from.
fn subpatterns(params: &[Pattern]) -> Vec<(usize, Expr)> {
    fn go(i: usize, p: &Pattern, top: bool, out: &mut Vec<(usize, Expr)>) {
        if let Pattern::Con(c, ps) = p {
            let args: Option<Vec<Expr>> = ps.iter().map(pattern_expr).collect();
            if let (false, Some(args)) = (top, args) {
                out.push((i, Expr::Con(c.clone(), args)));
            }
            ps.iter().for_each(|q| go(i, q, false, out));
        }
    }
    let mut out = Vec::new();
    params.iter().enumerate().for_each(|(i, p)| go(i, p, true, &mut out));
    out
}

fn pattern_expr(p: &Pattern) -> Option<Expr> {
    match p {
        Pattern::Var(v) => Some(Expr::Var(v.clone())),
        Pattern::Wild => None,
        Pattern::Int(n) => Some(Expr::Int(*n)),
        Pattern::Con(c, ps) => Some(Expr::Con(c.clone(), ps.iter().map(pattern_expr).collect::<Option<_>>()?)),
    }
}

/// An argument that rebuilds a proper subpattern of a parameter, provided
/// none of its variables has been shadowed.
fn rebuilt_subterm(x: &Expr, env: &Env, subpats: &[(usize, Expr)]) -> Vec<usize> {
    subpats
        .iter()
        .filter(|(i, e)| {
            let mut ok = e == x;
            x.walk(&mut |y| {
                if let Expr::Var(v) = y {
                    ok &= env.get(v) == Some(&Some((*i, true)));
                }
            });
            ok
        })
        .map(|(i, _)| *i)
        .collect()
}

fn descents(a: &Analyzer<'_>, e: &Expr, env: &Env, cx: &Cx<'_>, out: &mut Vec<Site>) {
    match e {
        Expr::Call(g, xs) => {
            if let Some(&callee) = cx.local.get(&a.index[g.as_str()]) {
                let (caller, subpats) = (cx.caller, &cx.subpats[..]);
                let strict = xs
                    .iter()
                    .map(|x| match x {
                        Expr::Var(v) => match env.get(v) {
                            Some(Some((i, true))) => vec![*i],
                            _ => vec![],
                        },
                        _ => rebuilt_subterm(x, env, subpats),
                    })
                    .collect();
                out.push(Site { caller, callee, strict });
            }
            xs.iter().for_each(|x| descents(a, x, env, cx, out));
        }
        Expr::Case(s, alts) => {
            descents(a, s, env, cx, out);
            let origin = match s.as_ref() {
                Expr::Var(v) => env.get(v).copied().flatten(),
                _ => None,
            };
            for alt in alts {
                let mut inner = env.clone();
                bind_pattern(&alt.pat, origin, &mut inner);
                descents(a, &alt.body, &inner, cx, out);
            }
        }
        Expr::Let(bs, body) => {
            let mut inner = env.clone();
            let mut vars = Vec::new();
            bs.iter().for_each(|b| b.pat.vars(&mut vars));
            for v in vars {
                inner.insert(v, None);
            }
            bs.iter().for_each(|b| descents(a, &b.expr, &inner, cx, out));
            descents(a, body, &inner, cx, out);
        }
        _ => e.children().into_iter().for_each(|c| descents(a, c, env, cx, out)),
    }
}

fn mentions(e: &Expr, vars: &[String]) -> bool {
    let mut hit = false;
    e.walk(&mut |x| {
        if let Expr::Var(v) = x {
            hit |= vars.contains(v);
        }
    });
    hit
}

/// Whether a group of bindings refers to its own variables.
fn cyclic(bs: &[Binding]) -> bool {
    let mut vars = Vec::new();
    bs.iter().for_each(|b| b.pat.vars(&mut vars));
    bs.iter().any(|b| mentions(&b.expr, &vars))
}

fn has_cyclic_binding(r: &Rule) -> bool {
    if cyclic(&r.wheres) {
        return true;
    }
    let mut found = false;
    for e in rule_exprs(r) {
        e.walk(&mut |x| {
            if let Expr::Let(bs, _) = x {
                found |= cyclic(bs);
            }
        });
    }
    found
}

fn overlap(p: &Pattern, q: &Pattern) -> bool {
    match (p, q) {
        (Pattern::Var(_) | Pattern::Wild, _) | (_, Pattern::Var(_) | Pattern::Wild) => true,
        (Pattern::Int(a), Pattern::Int(b)) => a == b,
        (Pattern::Con(c, ps), Pattern::Con(d, qs)) => c == d && ps.iter().zip(qs).all(|(x, y)| overlap(x, y)),
        _ => false,
    }
}

/// Whether the pattern rows cover every value of their columns.
fn exhaustive(program: &Program, rows: Vec<Vec<&Pattern>>, width: usize) -> bool {
    if width == 0 {
        return !rows.is_empty();
    }
    let heads: Vec<&str> = rows
        .iter()
        .filter_map(|r| match r[0] {
            Pattern::Con(c, _) => Some(c.as_str()),
            _ => None,
        })
        .collect();
    let td = heads.first().and_then(|c| program.constructor(c)).map(|(t, _)| t);
    if let Some(td) = td {
        if td.constructors.iter().all(|c| heads.contains(&c.name.as_str())) {
            return td.constructors.iter().all(|c| {
                let n = c.args.len();
                let spec: Vec<Vec<&Pattern>> = rows
                    .iter()
                    .filter_map(|r| match r[0] {
                        Pattern::Con(d, ps) if d == &c.name => Some(ps.iter().chain(r[1..].iter().copied()).collect()),
                        Pattern::Con(..) | Pattern::Int(_) => None,
                        _ => Some(std::iter::repeat_n(&Pattern::Wild, n).chain(r[1..].iter().copied()).collect()),
                    })
                    .collect();
                exhaustive(program, spec, n + width - 1)
            });
        }
    }
    let default: Vec<Vec<&Pattern>> =
        rows.iter().filter(|r| r[0].is_var_like()).map(|r| r[1..].to_vec()).collect();
    exhaustive(program, default, width - 1)
}

fn irrefutable(program: &Program, p: &Pattern) -> bool {
    exhaustive(program, vec![vec![p]], 1)
}

/// No `failed`, exhaustive case expressions and pattern bindings, and
/// division only by non-zero literals.
fn total_expr(program: &Program, e: &Expr) -> bool {
    let mut ok = true;
    e.walk(&mut |x| match x {
        Expr::Failed => ok = false,
        Expr::Case(_, alts) => {
            let rows = alts.iter().map(|a| vec![&a.pat]).collect();
            ok &= exhaustive(program, rows, 1);
        }
        Expr::Let(bs, _) => ok &= bs.iter().all(|b| irrefutable(program, &b.pat)),
        Expr::Prim(PrimOp::Div | PrimOp::Mod, xs) => ok &= matches!(xs.get(1), Some(Expr::Int(n)) if *n != 0),
        _ => {}
    });
    ok
}

pub fn termination_check(program: &Program, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
    Analyzer::new(program).termination(op)
}

pub fn productivity_check(program: &Program, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
    Analyzer::new(program).productivity(op)
}

pub fn deterministic_check(program: &Program, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
    Analyzer::new(program).deterministic(op)
}

pub fn totally_defined_check(program: &Program, op: &str) -> Result<AnalysisVerdict, AnalysisError> {
    Analyzer::new(program).totally_defined(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    const SRC: &str = "\
data AB = A | B
data C = C AB
mc91r :: Int -> Int
mc91r n = if n > 100 then n - 10 else mc91r (mc91r (n + 11))
perm :: [a] -> [a]
perm [] = []
perm (x : xs) = insert x (perm xs)
insert :: a -> [a] -> [a]
insert x ys = x : ys
insert x (y : ys) = y : insert x ys
ints1 :: Int -> [Int]
ints1 n = n : ints1 (n + 1)
loop :: Int
loop = loop
h :: AB -> AB
h A = A
f1 :: Bool -> Bool
f1 True = True
f1 False = True
f2 :: Bool -> Bool
f2 _ = True
coin :: Int
coin = 0 ? 1
sorted :: [Int] -> Bool
sorted [] = True
sorted [_] = True
sorted (x : y : ys) = x <= y && sorted (y : ys)
idSorted :: [Int] -> [Int]
idSorted xs | sorted xs = xs
primes :: [Int]
primes = sieve (from 2)
from :: Int -> [Int]
from n = n : from (n + 1)
sieve :: [Int] -> [Int]
sieve (p : xs) = p : sieve (dropMult p xs)
dropMult :: Int -> [Int] -> [Int]
dropMult p (x : xs) = if mod x p == 0 then dropMult p xs else x : dropMult p xs
len :: [a] -> Int
len [] = 0
len (_ : xs) = 1 + len xs
lenInts :: Int -> [Int]
lenInts n = len (ints1 n) : lenInts n
even' :: [a] -> Bool
even' [] = True
even' (_ : xs) = odd' xs
odd' :: [a] -> Bool
odd' [] = False
odd' (_ : xs) = even' xs
swapRec :: [a] -> [a] -> Int
swapRec [] _ = 0
swapRec (x : xs) ys = swapRec ys xs
caseRec :: [a] -> Int
caseRec xs = case xs of
  [] -> 0
  (_ : ys) -> caseRec ys
";

    fn an(p: &Program) -> Analyzer<'_> {
        Analyzer::new(p)
    }

    #[test]
    fn termination() {
        let p = parse_program(SRC).unwrap();
        let a = an(&p);
        let t = |o: &str| a.termination(o).unwrap().status;
        assert_eq!(t("mc91r"), Status::Unknown);
        assert_eq!(t("not"), Status::Proven);
        assert_eq!(t("perm"), Status::Proven);
        assert_eq!(t("insert"), Status::Proven);
        assert_eq!(t("ints1"), Status::Unknown);
        assert_eq!(t("loop"), Status::Unknown);
        assert_eq!(t("even'"), Status::Proven);
        assert_eq!(t("caseRec"), Status::Proven);
        assert_eq!(t("swapRec"), Status::Unknown);
        assert_eq!(t("primes"), Status::Unknown);
        assert!(a.termination("nope").is_err());
    }

    #[test]
    fn productivity() {
        let p = parse_program(SRC).unwrap();
        let a = an(&p);
        let t = |o: &str| a.productivity(o).unwrap().status;
        assert_eq!(t("ints1"), Status::Proven);
        assert_eq!(t("from"), Status::Proven);
        assert_eq!(t("primes"), Status::Unknown);
        assert_eq!(t("loop"), Status::Unknown);
        assert_eq!(t("perm"), Status::Proven);
        assert_eq!(t("lenInts"), Status::Unknown);
        assert_eq!(t("mc91r"), Status::Unknown);
    }

    #[test]
    fn determinism() {
        let p = parse_program(SRC).unwrap();
        let a = an(&p);
        let t = |o: &str| a.deterministic(o).unwrap().status;
        assert_eq!(t("insert"), Status::Unknown);
        assert_eq!(t("perm"), Status::Unknown);
        assert_eq!(t("f1"), Status::Proven);
        assert_eq!(t("f2"), Status::Proven);
        assert_eq!(t("coin"), Status::Unknown);
        assert_eq!(t("sorted"), Status::Proven);
        assert_eq!(t("idSorted"), Status::Unknown);
    }

    #[test]
    fn totality() {
        let p = parse_program(SRC).unwrap();
        let a = an(&p);
        let t = |o: &str| a.totally_defined(o).unwrap().status;
        assert_eq!(t("not"), Status::Proven);
        assert_eq!(t("h"), Status::Unknown);
        assert_eq!(t("idSorted"), Status::Unknown);
        assert_eq!(t("f1"), Status::Proven);
        assert_eq!(t("sorted"), Status::Proven);
        assert_eq!(t("perm"), Status::Proven);
        assert_eq!(t("caseRec"), Status::Proven);
        assert_eq!(t("head"), Status::Unknown);
        assert_eq!(t("mc91r"), Status::Unknown);
    }

    #[test]
    fn unrelated_operations_do_not_change_verdicts() {
        let p = parse_program(SRC).unwrap();
        let q = parse_program(&format!("{SRC}extra :: Int -> Int\nextra n = extra (n + 1)\n")).unwrap();
        let before = an(&p).analyze_all();
        let after = an(&q).analyze_all();
        assert_eq!(before[..], after[..before.len()]);
    }
}
