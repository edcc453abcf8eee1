//! Lazy graph-reduction machine with explicit stack. Each branch of the
//! non-deterministic search owns a persistent heap, so forking a branch is
//! cheap and bindings evaluated before a fork stay shared by both copies.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::rc::Rc;

use crate::lang::PrimOp;
use crate::partial::PartialValue;

use super::compile::{Code, CodeRef, Compiled, ConId, FlatPat, OpId, Pat};
use super::EvalConfig;

pub(crate) type Addr = usize;
pub(crate) type Env = Rc<Vec<Addr>>;
type Heap = im_rc::Vector<Obj>;

#[derive(Clone, Debug)]
pub(crate) enum Whnf {
    Int(i64),
    Con(ConId, Rc<[Addr]>),
}

#[derive(Clone, Debug)]
enum Obj {
    Thunk(CodeRef, Env),
    Value(Whnf),
    Blackhole,
}

/// What part of a result the observer wants to see.
#[derive(Debug)]
pub(crate) enum Demand {
    /// Stop here: the position is observed as ⊥ without evaluation.
    Stop,
    /// Any integer; the integer found is reported.
    AnyInt,
    Int(i64),
    Con(ConId, Vec<Rc<Demand>>),
}

#[derive(Clone, Debug)]
pub(crate) enum Observe {
    /// Follow the demand tree; positions outside it are reported as ⊥.
    Template(Rc<Demand>),
    /// Evaluate everything. With `catch`, a failing position is reported
    /// as ⊥ instead of killing the branch.
    Deep { depth: usize, catch: bool },
}

#[derive(Clone, Debug)]
struct Cand {
    rule: usize,
    pats: Vec<Pat>,
}

#[derive(Clone, Debug)]
pub(crate) struct MatchState {
    op: OpId,
    subjects: Vec<Addr>,
    cands: Vec<Cand>,
}

#[derive(Clone, Debug)]
enum Frame {
    Update(Addr),
    Match(Box<MatchState>, usize),
    Case(Rc<[super::compile::AltCode]>, Env),
    If(CodeRef, CodeRef, Env),
    AndR(CodeRef, Env),
    OrR(CodeRef, Env),
    PrimL(PrimOp, CodeRef, Env),
    PrimR(PrimOp, Whnf),
    CmpL { op: PrimOp, rest: Vec<(Addr, Addr)>, right: Addr },
    CmpR { op: PrimOp, rest: Vec<(Addr, Addr)>, left: Whnf },
    TemplateCheck(Rc<Demand>),
    TemplateKids { con: ConId, addrs: Rc<[Addr]>, kids: Rc<Demand>, done: Vec<PartialValue> },
    DeepCheck { depth: usize, catch: Option<(u64, Heap)> },
    DeepKids { con: ConId, addrs: Rc<[Addr]>, depth: usize, catch: bool, done: Vec<PartialValue> },
}

#[derive(Clone, Debug)]
enum Ctrl {
    Eval(CodeRef, Env),
    Enter(Addr),
    Ret(Whnf),
    Obs(PartialValue),
    Observe(Addr, Observe),
    Match(Box<MatchState>),
    Fail,
    /// The branch exceeded its step budget.
    Cut,
}

#[derive(Clone, Debug)]
pub(crate) struct Branch {
    heap: Heap,
    stack: Vec<Frame>,
    ctrl: Ctrl,
    steps: u64,
    truncated: bool,
}

enum Event {
    Fork(Branch),
    Done(PartialValue),
    Died,
    Cut,
}

/// How a search is started.
pub(crate) enum Root<'a> {
    Expr(CodeRef),
    Call(OpId, &'a [PartialValue]),
}

#[derive(Debug, Default, Clone)]
pub(crate) struct SearchResult {
    pub results: BTreeSet<PartialValue>,
    pub complete: bool,
    /// Some result was cut at the depth budget.
    pub truncated: bool,
    pub branches: u64,
}

const SLICE: usize = 4096;

pub(crate) struct Search<'c> {
    code: &'c Compiled,
    cfg: EvalConfig,
    frontier: VecDeque<Branch>,
    resumed: HashSet<u64>,
    next_catch: u64,
    total_steps: u64,
    result: SearchResult,
}

impl<'c> Search<'c> {
    pub fn run(
        code: &'c Compiled,
        cfg: &EvalConfig,
        root: Root<'_>,
        observe: Observe,
        value_mode: bool,
        stop_at_first: bool,
    ) -> SearchResult {
        let mut s = Search {
            code,
            cfg: cfg.clone(),
            frontier: VecDeque::new(),
            resumed: HashSet::new(),
            next_catch: 0,
            total_steps: 0,
            result: SearchResult { complete: true, branches: 1, ..Default::default() },
        };
        let mut heap = Heap::new();
        let root_addr = match root {
            Root::Expr(c) => {
                heap.push_back(Obj::Thunk(c, Rc::new(vec![])));
                heap.len() - 1
            }
            Root::Call(op, args) => {
                let addrs: Vec<Addr> = args.iter().map(|a| alloc_partial(code, &mut heap, a)).collect();
                let call = Code::Call(op, (0..addrs.len()).map(|i| Rc::new(Code::Var(i))).collect());
                heap.push_back(Obj::Thunk(Rc::new(call), Rc::new(addrs)));
                heap.len() - 1
            }
        };
        s.frontier.push_back(Branch {
            heap,
            stack: Vec::new(),
            ctrl: Ctrl::Observe(root_addr, observe),
            steps: 0,
            truncated: false,
        });
        s.drive(value_mode, stop_at_first);
        s.result
    }

    fn drive(&mut self, value_mode: bool, stop_at_first: bool) {
        let max_total = self.cfg.step_budget.saturating_mul(100);
        'outer: while let Some(mut br) = self.frontier.pop_front() {
            for _ in 0..SLICE {
                match self.step(&mut br) {
                    None => continue,
                    Some(Event::Fork(other)) => {
                        if self.frontier.len() + 1 >= self.cfg.branch_budget as usize {
                            self.result.complete = false;
                        } else {
                            self.result.branches += 1;
                            self.frontier.push_back(other);
                        }
                    }
                    Some(Event::Done(pv)) => {
                        if br.truncated {
                            self.result.truncated = true;
                            self.result.complete = false;
                            if value_mode {
                                continue 'outer;
                            }
                        }
                        self.result.results.insert(pv);
                        if stop_at_first {
                            return;
                        }
                        continue 'outer;
                    }
                    Some(Event::Died) => continue 'outer,
                    Some(Event::Cut) => {
                        self.result.complete = false;
                        continue 'outer;
                    }
                }
            }
            if self.total_steps > max_total {
                self.result.complete = false;
                return;
            }
            self.frontier.push_back(br);
        }
    }

    fn step(&mut self, br: &mut Branch) -> Option<Event> {
        let ctrl = std::mem::replace(&mut br.ctrl, Ctrl::Fail);
        match ctrl {
            Ctrl::Eval(code, env) => self.eval(br, code, env),
            Ctrl::Enter(a) => {
                match &br.heap[a] {
                    Obj::Value(w) => br.ctrl = Ctrl::Ret(w.clone()),
                    Obj::Thunk(c, e) => {
                        let (c, e) = (c.clone(), e.clone());
                        br.heap.set(a, Obj::Blackhole);
                        br.stack.push(Frame::Update(a));
                        br.ctrl = Ctrl::Eval(c, e);
                    }
                    Obj::Blackhole => br.ctrl = Ctrl::Fail,
                }
                None
            }
            Ctrl::Ret(w) => self.ret(br, w),
            Ctrl::Obs(pv) => self.obs(br, pv),
            Ctrl::Observe(a, o) => {
                self.observe(br, a, o);
                None
            }
            Ctrl::Match(m) => self.match_loop(br, *m),
            Ctrl::Fail => self.fail(br),
            Ctrl::Cut => Some(Event::Cut),
        }
    }

    fn alloc(heap: &mut Heap, o: Obj) -> Addr {
        heap.push_back(o);
        heap.len() - 1
    }

    fn arg(br: &mut Branch, code: &CodeRef, env: &Env) -> Addr {
        match code.as_ref() {
            Code::Var(i) => env[*i],
            Code::Int(n) => Self::alloc(&mut br.heap, Obj::Value(Whnf::Int(*n))),
            _ => Self::alloc(&mut br.heap, Obj::Thunk(code.clone(), env.clone())),
        }
    }

    fn eval(&mut self, br: &mut Branch, code: CodeRef, env: Env) -> Option<Event> {
        match code.as_ref() {
            Code::Var(i) => br.ctrl = Ctrl::Enter(env[*i]),
            Code::Int(n) => br.ctrl = Ctrl::Ret(Whnf::Int(*n)),
            Code::Con(c, args) => {
                let addrs: Vec<Addr> = args.iter().map(|a| Self::arg(br, a, &env)).collect();
                br.ctrl = Ctrl::Ret(Whnf::Con(*c, addrs.into()));
            }
            Code::Call(op, args) => {
                let subjects: Vec<Addr> = args.iter().map(|a| Self::arg(br, a, &env)).collect();
                let rules = &self.code.ops[*op as usize].rules;
                let cands = rules.iter().enumerate().map(|(i, r)| Cand { rule: i, pats: r.pats.clone() }).collect();
                return self.match_loop(br, MatchState { op: *op, subjects, cands });
            }
            Code::Prim(PrimOp::And, a, b) => {
                br.stack.push(Frame::AndR(b.clone(), env.clone()));
                br.ctrl = Ctrl::Eval(a.clone(), env);
            }
            Code::Prim(PrimOp::Or, a, b) => {
                br.stack.push(Frame::OrR(b.clone(), env.clone()));
                br.ctrl = Ctrl::Eval(a.clone(), env);
            }
            Code::Prim(p, a, b) => {
                br.stack.push(Frame::PrimL(*p, b.clone(), env.clone()));
                br.ctrl = Ctrl::Eval(a.clone(), env);
            }
            Code::Choice(a, b) => {
                let mut other = br.clone();
                other.ctrl = Ctrl::Eval(b.clone(), env.clone());
                br.ctrl = Ctrl::Eval(a.clone(), env);
                return Some(Event::Fork(other));
            }
            Code::Failed => br.ctrl = Ctrl::Fail,
            Code::If(c, t, e) => {
                br.stack.push(Frame::If(t.clone(), e.clone(), env.clone()));
                br.ctrl = Ctrl::Eval(c.clone(), env);
            }
            Code::Case(s, alts) => {
                br.stack.push(Frame::Case(alts.clone(), env.clone()));
                br.ctrl = Ctrl::Eval(s.clone(), env);
            }
            Code::Let(binds, body) => {
                let base = br.heap.len();
                let mut slots = env.as_ref().clone();
                for i in 0..binds.len() {
                    br.heap.push_back(Obj::Blackhole);
                    slots.push(base + i);
                }
                let env2 = Rc::new(slots);
                for (i, b) in binds.iter().enumerate() {
                    let obj = match b.as_ref() {
                        Code::Int(n) => Obj::Value(Whnf::Int(*n)),
                        _ => Obj::Thunk(b.clone(), env2.clone()),
                    };
                    br.heap.set(base + i, obj);
                }
                br.ctrl = Ctrl::Eval(body.clone(), env2);
            }
        }
        None
    }

    fn match_loop(&mut self, br: &mut Branch, mut m: MatchState) -> Option<Event> {
        if m.cands.is_empty() {
            br.ctrl = Ctrl::Fail;
            return None;
        }
        if let Some(i) = m.cands.iter().position(|c| c.pats.iter().all(Pat::is_var_like)) {
            let chosen = m.cands.remove(i);
            let fork = if m.cands.is_empty() {
                None
            } else {
                let mut other = br.clone();
                other.ctrl = Ctrl::Match(Box::new(m.clone()));
                Some(other)
            };
            br.steps += 1;
            self.total_steps += 1;
            if br.steps > self.cfg.step_budget {
                br.ctrl = Ctrl::Cut;
                return fork.map(Event::Fork);
            }
            let rule = &self.code.ops[m.op as usize].rules[chosen.rule];
            let mut env = vec![0; rule.slots];
            for (p, a) in chosen.pats.iter().zip(&m.subjects) {
                if let Pat::Var(slot) = p {
                    env[*slot] = *a;
                }
            }
            br.ctrl = Ctrl::Eval(rule.body.clone(), Rc::new(env));
            return fork.map(Event::Fork);
        }
        let pos = (0..m.subjects.len())
            .find(|&p| m.cands.iter().any(|c| !c.pats[p].is_var_like()))
            .expect("a candidate with a constructor pattern exists");
        let (demanding, waiting): (Vec<Cand>, Vec<Cand>) =
            m.cands.into_iter().partition(|c| !c.pats[pos].is_var_like());
        m.cands = demanding;
        let fork = if waiting.is_empty() {
            None
        } else {
            let mut other = br.clone();
            other.ctrl = Ctrl::Match(Box::new(MatchState { op: m.op, subjects: m.subjects.clone(), cands: waiting }));
            Some(other)
        };
        let subject = m.subjects[pos];
        br.stack.push(Frame::Match(Box::new(m), pos));
        br.ctrl = Ctrl::Enter(subject);
        fork.map(Event::Fork)
    }

    fn matched(&mut self, br: &mut Branch, mut m: MatchState, pos: usize, w: Whnf) -> Option<Event> {
        let mut kept = Vec::new();
        let mut fields: Option<Rc<[Addr]>> = None;
        for mut c in m.cands.drain(..) {
            let p = c.pats.remove(pos);
            match (p, &w) {
                (Pat::Int(k), Whnf::Int(n)) if k == *n => kept.push(c),
                (Pat::Con(id, sub), Whnf::Con(wid, addrs)) if id == *wid => {
                    let tail = c.pats.split_off(pos);
                    c.pats.extend(sub);
                    c.pats.extend(tail);
                    fields = Some(addrs.clone());
                    kept.push(c);
                }
                _ => {}
            }
        }
        m.subjects.remove(pos);
        if let Some(addrs) = fields {
            let tail = m.subjects.split_off(pos);
            m.subjects.extend(addrs.iter().copied());
            m.subjects.extend(tail);
        }
        m.cands = kept;
        self.match_loop(br, m)
    }

    fn bool_val(&self, b: bool) -> Whnf {
        Whnf::Con(if b { self.code.true_id } else { self.code.false_id }, Rc::from(Vec::new()))
    }

    fn is_true(&self, w: &Whnf) -> Option<bool> {
        match w {
            Whnf::Con(c, _) if *c == self.code.true_id => Some(true),
            Whnf::Con(c, _) if *c == self.code.false_id => Some(false),
            _ => None,
        }
    }

    fn ret(&mut self, br: &mut Branch, w: Whnf) -> Option<Event> {
        let Some(frame) = br.stack.pop() else {
            // A bare value without observer frame cannot happen: roots are
            // always observed.
            return Some(Event::Died);
        };
        match frame {
            Frame::Update(a) => {
                br.heap.set(a, Obj::Value(w.clone()));
                br.ctrl = Ctrl::Ret(w);
            }
            Frame::Match(m, pos) => return self.matched(br, *m, pos, w),
            Frame::Case(alts, env) => {
                for alt in alts.iter() {
                    let env2 = match (alt.pat, &w) {
                        (FlatPat::Con(c), Whnf::Con(wc, addrs)) if c == *wc => {
                            let mut e = env.as_ref().clone();
                            e.extend(addrs.iter().copied());
                            Rc::new(e)
                        }
                        (FlatPat::Int(k), Whnf::Int(n)) if k == *n => env.clone(),
                        (FlatPat::Var, _) => {
                            let a = Self::alloc(&mut br.heap, Obj::Value(w.clone()));
                            let mut e = env.as_ref().clone();
                            e.push(a);
                            Rc::new(e)
                        }
                        (FlatPat::Wild, _) => env.clone(),
                        _ => continue,
                    };
                    br.ctrl = Ctrl::Eval(alt.body.clone(), env2);
                    return None;
                }
                br.ctrl = Ctrl::Fail;
            }
            Frame::If(t, e, env) => {
                br.ctrl = match self.is_true(&w) {
                    Some(true) => Ctrl::Eval(t, env),
                    Some(false) => Ctrl::Eval(e, env),
                    None => Ctrl::Fail,
                }
            }
            Frame::AndR(b, env) => {
                br.ctrl = match self.is_true(&w) {
                    Some(true) => Ctrl::Eval(b, env),
                    Some(false) => Ctrl::Ret(w),
                    None => Ctrl::Fail,
                }
            }
            Frame::OrR(b, env) => {
                br.ctrl = match self.is_true(&w) {
                    Some(false) => Ctrl::Eval(b, env),
                    Some(true) => Ctrl::Ret(w),
                    None => Ctrl::Fail,
                }
            }
            Frame::PrimL(op, b, env) => {
                br.stack.push(Frame::PrimR(op, w));
                br.ctrl = Ctrl::Eval(b, env);
            }
            Frame::PrimR(op, l) => self.prim(br, op, l, w),
            Frame::CmpL { op, rest, right } => {
                br.stack.push(Frame::CmpR { op, rest, left: w });
                br.ctrl = Ctrl::Enter(right);
            }
            Frame::CmpR { op, rest, left } => self.compare(br, op, left, w, rest),
            Frame::TemplateCheck(d) => {
                br.ctrl = match (d.as_ref(), &w) {
                    (Demand::AnyInt, Whnf::Int(n)) => Ctrl::Obs(PartialValue::Int(*n)),
                    (Demand::Int(k), Whnf::Int(n)) if k == n => Ctrl::Obs(PartialValue::Int(*n)),
                    (Demand::Con(c, kids), Whnf::Con(wc, addrs)) if c == wc => {
                        if kids.is_empty() {
                            Ctrl::Obs(PartialValue::Con(self.con_name(*c), vec![]))
                        } else {
                            let first = addrs[0];
                            let k0 = kids[0].clone();
                            br.stack.push(Frame::TemplateKids {
                                con: *c,
                                addrs: addrs.clone(),
                                kids: d.clone(),
                                done: Vec::with_capacity(kids.len()),
                            });
                            Ctrl::Observe(first, Observe::Template(k0))
                        }
                    }
                    _ => Ctrl::Fail,
                }
            }
            Frame::DeepCheck { depth, catch } => match w {
                Whnf::Int(n) => br.ctrl = Ctrl::Obs(PartialValue::Int(n)),
                Whnf::Con(c, addrs) => {
                    if addrs.is_empty() {
                        br.ctrl = Ctrl::Obs(PartialValue::Con(self.con_name(c), vec![]));
                    } else {
                        let catch = catch.is_some();
                        let first = addrs[0];
                        br.stack.push(Frame::DeepKids { con: c, addrs, depth, catch, done: Vec::new() });
                        br.ctrl = Ctrl::Observe(first, Observe::Deep { depth: depth + 1, catch });
                    }
                }
            },
            Frame::TemplateKids { .. } | Frame::DeepKids { .. } => {
                unreachable!("observation frames only receive observations")
            }
        }
        None
    }

    fn con_name(&self, c: ConId) -> String {
        self.code.cons[c as usize].name.clone()
    }

    fn obs(&mut self, br: &mut Branch, pv: PartialValue) -> Option<Event> {
        let Some(frame) = br.stack.pop() else {
            return Some(Event::Done(pv));
        };
        match frame {
            Frame::TemplateKids { con, addrs, kids, mut done } => {
                done.push(pv);
                let Demand::Con(_, ks) = kids.as_ref() else { unreachable!() };
                if done.len() == ks.len() {
                    br.ctrl = Ctrl::Obs(PartialValue::Con(self.con_name(con), done));
                } else {
                    let next = addrs[done.len()];
                    let d = ks[done.len()].clone();
                    br.stack.push(Frame::TemplateKids { con, addrs, kids, done });
                    br.ctrl = Ctrl::Observe(next, Observe::Template(d));
                }
            }
            Frame::DeepKids { con, addrs, depth, catch, mut done } => {
                done.push(pv);
                if done.len() == addrs.len() {
                    br.ctrl = Ctrl::Obs(PartialValue::Con(self.con_name(con), done));
                } else {
                    let next = addrs[done.len()];
                    br.stack.push(Frame::DeepKids { con, addrs, depth, catch, done });
                    br.ctrl = Ctrl::Observe(next, Observe::Deep { depth: depth + 1, catch });
                }
            }
            _ => unreachable!("observations only flow into observation frames"),
        }
        None
    }

    fn observe(&mut self, br: &mut Branch, a: Addr, o: Observe) {
        match o {
            Observe::Template(d) => {
                if let Demand::Stop = d.as_ref() {
                    br.ctrl = Ctrl::Obs(PartialValue::Bottom);
                } else {
                    br.stack.push(Frame::TemplateCheck(d));
                    br.ctrl = Ctrl::Enter(a);
                }
            }
            Observe::Deep { depth, catch } => {
                if depth >= self.cfg.depth_budget {
                    br.truncated = true;
                    br.ctrl = Ctrl::Obs(PartialValue::Bottom);
                    return;
                }
                let catch = if catch {
                    self.next_catch += 1;
                    Some((self.next_catch, br.heap.clone()))
                } else {
                    None
                };
                br.stack.push(Frame::DeepCheck { depth, catch });
                br.ctrl = Ctrl::Enter(a);
            }
        }
    }

    fn fail(&mut self, br: &mut Branch) -> Option<Event> {
        while let Some(f) = br.stack.pop() {
            if let Frame::DeepCheck { catch: Some((id, heap)), .. } = f {
                if self.resumed.insert(id) {
                    br.heap = heap;
                    br.ctrl = Ctrl::Obs(PartialValue::Bottom);
                    return None;
                }
                return Some(Event::Died);
            }
        }
        Some(Event::Died)
    }

    fn prim(&mut self, br: &mut Branch, op: PrimOp, l: Whnf, r: Whnf) {
        br.ctrl = match (&l, &r) {
            (Whnf::Int(a), Whnf::Int(b)) => {
                let (a, b) = (*a, *b);
                if op.is_comparison() {
                    Ctrl::Ret(self.bool_val(cmp_result(op, a.cmp(&b))))
                } else {
                    match arith(op, a, b) {
                        Some(n) => Ctrl::Ret(Whnf::Int(n)),
                        None => Ctrl::Fail,
                    }
                }
            }
            (Whnf::Con(..), Whnf::Con(..)) if op.is_comparison() => {
                return self.compare(br, op, l, r, Vec::new());
            }
            _ => Ctrl::Fail,
        }
    }

    /// Structural comparison of two head-normal forms; `rest` holds pending
    /// pairs of later positions (top of the stack is compared first).
    fn compare(&mut self, br: &mut Branch, op: PrimOp, l: Whnf, r: Whnf, mut rest: Vec<(Addr, Addr)>) {
        let ord = match (&l, &r) {
            (Whnf::Int(a), Whnf::Int(b)) => a.cmp(b),
            (Whnf::Con(a, xs), Whnf::Con(b, ys)) => {
                let o = self.code.cons[*a as usize].tag.cmp(&self.code.cons[*b as usize].tag);
                if o == Ordering::Equal {
                    for (x, y) in xs.iter().zip(ys.iter()).rev() {
                        rest.push((*x, *y));
                    }
                }
                o
            }
            _ => {
                br.ctrl = Ctrl::Fail;
                return;
            }
        };
        if ord != Ordering::Equal {
            br.ctrl = Ctrl::Ret(self.bool_val(cmp_result(op, ord)));
            return;
        }
        match rest.pop() {
            None => br.ctrl = Ctrl::Ret(self.bool_val(cmp_result(op, Ordering::Equal))),
            Some((a, b)) => {
                br.stack.push(Frame::CmpL { op, rest, right: b });
                br.ctrl = Ctrl::Enter(a);
            }
        }
    }
}

fn cmp_result(op: PrimOp, o: Ordering) -> bool {
    match op {
        PrimOp::Eq => o == Ordering::Equal,
        PrimOp::Ne => o != Ordering::Equal,
        PrimOp::Lt => o == Ordering::Less,
        PrimOp::Le => o != Ordering::Greater,
        PrimOp::Gt => o == Ordering::Greater,
        PrimOp::Ge => o != Ordering::Less,
        _ => unreachable!("not a comparison"),
    }
}

fn arith(op: PrimOp, a: i64, b: i64) -> Option<i64> {
    match op {
        PrimOp::Add => a.checked_add(b),
        PrimOp::Sub => a.checked_sub(b),
        PrimOp::Mul => a.checked_mul(b),
        PrimOp::Div => {
            if b == 0 {
                None
            } else {
                let q = a.checked_div(b)?;
                Some(if a % b != 0 && ((a < 0) != (b < 0)) { q - 1 } else { q })
            }
        }
        PrimOp::Mod => {
            if b == 0 {
                None
            } else {
                let r = a.checked_rem(b)?;
                Some(if r != 0 && ((r < 0) != (b < 0)) { r + b } else { r })
            }
        }
        _ => None,
    }
}

fn alloc_partial(code: &Compiled, heap: &mut Heap, t: &PartialValue) -> Addr {
    let obj = match t {
        PartialValue::Bottom => Obj::Thunk(code.failed.clone(), Rc::new(vec![])),
        PartialValue::Int(n) => Obj::Value(Whnf::Int(*n)),
        PartialValue::Con(c, xs) => {
            let addrs: Vec<Addr> = xs.iter().map(|x| alloc_partial(code, heap, x)).collect();
            let id = code.con_ids[c.as_str()];
            Obj::Value(Whnf::Con(id, addrs.into()))
        }
    };
    heap.push_back(obj);
    heap.len() - 1
}
