//! Classifies identifiers and checks the static invariants of a program:
//! declared types, unique names, saturated applications, scoping and
//! linear patterns.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::parser::{RBind, RExpr, RPat, RawDecl};
use super::prelude::IFTHEN;
use super::Diagnostic;

pub(crate) struct Resolver<'a> {
    /// constructor name -> arity
    cons: HashMap<String, usize>,
    /// operation name -> arity
    ops: HashMap<String, usize>,
    pub diags: &'a mut Vec<Diagnostic>,
}

/// Parameters, guard, body, where-bindings and position of one rule.
type PendingRule = (Vec<RPat>, Option<RExpr>, RExpr, Vec<RBind>, Span);

struct PendingOp {
    name: String,
    signature: Option<(Signature, Span)>,
    rules: Vec<PendingRule>,
    builtin: bool,
    span: Span,
}

/// Combine prelude and user declarations into a validated program.
pub(crate) fn build_program(prelude: Vec<RawDecl>, user: Vec<RawDecl>, diags: &mut Vec<Diagnostic>) -> Program {
    let mut types: Vec<TypeDecl> = Vec::new();
    let mut ops: Vec<PendingOp> = Vec::new();
    let mut props: Vec<PropDecl> = Vec::new();
    let mut con_names: HashMap<String, Span> = HashMap::new();
    let user_op_names: HashSet<String> = user
        .iter()
        .flat_map(|d| match d {
            RawDecl::Rule { name, .. } => vec![name.clone()],
            RawDecl::Sig { names, .. } => names.iter().map(|n| n.0.clone()).collect(),
            _ => vec![],
        })
        .collect();

    for (builtin, decls) in [(true, prelude), (false, user)] {
        for d in decls {
            match d {
                RawDecl::Data { name, params, cons, span } => {
                    if types.iter().any(|t| t.name == name) {
                        diags.push(Diagnostic::duplicate(span, &format!("type {name} is already defined")));
                        continue;
                    }
                    let mut seen = HashSet::new();
                    for p in &params {
                        if !seen.insert(p.clone()) {
                            diags.push(Diagnostic::duplicate(span, &format!("type parameter {p} repeated")));
                        }
                    }
                    let mut constructors = Vec::new();
                    for (c, args, cspan) in cons {
                        if let Some(prev) = con_names.get(&c) {
                            diags.push(Diagnostic::duplicate(
                                cspan,
                                &format!("constructor {c} is already defined at {prev}"),
                            ));
                            continue;
                        }
                        if !c.starts_with(|ch: char| ch.is_ascii_uppercase()) {
                            diags.push(Diagnostic::syntax(cspan, &format!("constructor {c} must start with an uppercase letter")));
                        }
                        con_names.insert(c.clone(), cspan);
                        constructors.push(ConDecl { name: c, args });
                    }
                    types.push(TypeDecl { name, params, constructors, builtin, span });
                }
                RawDecl::Sig { names, sig } => {
                    for (n, span) in names {
                        if !builtin && n == IFTHEN {
                            diags.push(Diagnostic::duplicate(span, "ifthen is reserved"));
                            continue;
                        }
                        if builtin && user_op_names.contains(&n) {
                            continue;
                        }
                        let op = pending(&mut ops, &n, builtin, span);
                        if op.signature.is_some() {
                            diags.push(Diagnostic::duplicate(span, &format!("duplicate type signature for {n}")));
                        } else {
                            op.signature = Some((sig.clone(), span));
                        }
                    }
                }
                RawDecl::Rule { name, params, guard, body, wheres, span } => {
                    if !builtin && name == IFTHEN {
                        diags.push(Diagnostic::duplicate(span, "ifthen is reserved"));
                        continue;
                    }
                    if builtin && user_op_names.contains(&name) {
                        continue;
                    }
                    let op = pending(&mut ops, &name, builtin, span);
                    op.rules.push((params, guard, body, wheres, span));
                }
                RawDecl::Prop { name, annotation, lhs: (lhs, _), rhs: (rhs, _), span } => {
                    if props.iter().any(|p: &PropDecl| p.name == name) {
                        diags.push(Diagnostic::duplicate(span, &format!("property {name} is already defined")));
                        continue;
                    }
                    props.push(PropDecl { name, annotation, lhs, rhs, span });
                }
            }
        }
    }

    let type_arity: HashMap<String, usize> = types.iter().map(|t| (t.name.clone(), t.params.len())).collect();
    for t in &types {
        for c in &t.constructors {
            for a in &c.args {
                check_type(a, &type_arity, Some(&t.params), t.span, diags);
            }
        }
    }

    let mut cons = HashMap::new();
    for t in &types {
        for c in &t.constructors {
            cons.insert(c.name.clone(), c.args.len());
        }
    }
    let mut op_arity = HashMap::new();
    for op in &ops {
        if cons.contains_key(&op.name) {
            diags.push(Diagnostic::duplicate(op.span, &format!("{} is already defined as a constructor", op.name)));
        }
        let arity = match (op.rules.first(), &op.signature) {
            (Some(r), _) => r.0.len(),
            (None, Some((s, _))) => s.params.len(),
            _ => 0,
        };
        for r in &op.rules {
            if r.0.len() != arity {
                diags.push(Diagnostic::arity(
                    r.4,
                    &format!("rules for {} have different numbers of arguments ({} and {})", op.name, arity, r.0.len()),
                ));
            }
        }
        if let Some((s, span)) = &op.signature {
            check_type_sig(s, &type_arity, *span, diags);
            if s.params.len() != arity {
                diags.push(Diagnostic::arity(
                    *span,
                    &format!(
                        "signature of {} declares {} arguments but its rules take {}",
                        op.name,
                        s.params.len(),
                        arity
                    ),
                ));
            }
        }
        if op.rules.is_empty() {
            diags.push(Diagnostic::validation(op.span, &format!("type signature for {} lacks a definition", op.name)));
        }
        op_arity.insert(op.name.clone(), arity);
    }

    let mut r = Resolver { cons, ops: op_arity, diags };
    let mut out_ops = Vec::new();
    for op in ops {
        let mut rules = Vec::new();
        for (params, guard, body, wheres, span) in op.rules {
            rules.push(r.rule(params, guard, body, wheres, span));
        }
        out_ops.push(OpDecl {
            name: op.name,
            signature: op.signature.map(|s| s.0),
            rules,
            builtin: op.builtin,
            span: op.span,
        });
    }
    let program = Program { types, ops: out_ops, props };
    for p in &program.props {
        check_prop(&program, p, r.diags);
    }
    program
}

fn pending<'o>(ops: &'o mut Vec<PendingOp>, name: &str, builtin: bool, span: Span) -> &'o mut PendingOp {
    let idx = match ops.iter().position(|o| o.name == name) {
        Some(i) => i,
        None => {
            ops.push(PendingOp { name: name.to_string(), signature: None, rules: vec![], builtin, span });
            ops.len() - 1
        }
    };
    &mut ops[idx]
}

fn check_type(
    t: &Type,
    arity: &HashMap<String, usize>,
    params: Option<&[String]>,
    span: Span,
    diags: &mut Vec<Diagnostic>,
) {
    match t {
        Type::Int => {}
        Type::Var(v) => {
            if let Some(ps) = params {
                if !ps.contains(v) {
                    diags.push(Diagnostic::unknown(span, &format!("type variable {v} is not a parameter of the type")));
                }
            }
        }
        Type::Con(n, args) => {
            match arity.get(n) {
                None => diags.push(Diagnostic::unknown(span, &format!("unknown type {n}"))),
                Some(k) if *k != args.len() => diags.push(Diagnostic::arity(
                    span,
                    &format!("type {n} expects {k} arguments but is given {}", args.len()),
                )),
                _ => {}
            }
            for a in args {
                check_type(a, arity, params, span, diags);
            }
        }
    }
}

fn check_type_sig(s: &Signature, arity: &HashMap<String, usize>, span: Span, diags: &mut Vec<Diagnostic>) {
    for t in s.params.iter().chain(std::iter::once(&s.result)) {
        check_type(t, arity, None, span, diags);
    }
}

fn check_prop(p: &Program, prop: &PropDecl, diags: &mut Vec<Diagnostic>) {
    let mut sigs = Vec::new();
    for name in [&prop.lhs, &prop.rhs] {
        match p.op(name) {
            None => diags.push(Diagnostic::unknown(
                prop.span,
                &format!("property {} refers to unknown operation {name}", prop.name),
            )),
            Some(op) => match &op.signature {
                None => diags.push(Diagnostic::validation(
                    prop.span,
                    &format!("operation {name} used in property {} needs a type signature", prop.name),
                )),
                Some(s) => sigs.push(s),
            },
        }
    }
    if sigs.len() == 2 && !sigs[0].alpha_eq(sigs[1]) {
        diags.push(Diagnostic::validation(
            prop.span,
            &format!("property {}: {} and {} have different type signatures", prop.name, prop.lhs, prop.rhs),
        ));
    }
}

impl Resolver<'_> {
    fn rule(
        &mut self,
        params: Vec<RPat>,
        guard: Option<RExpr>,
        body: RExpr,
        wheres: Vec<RBind>,
        span: Span,
    ) -> Rule {
        let params: Vec<Pattern> = params.iter().map(|p| self.pattern(p)).collect();
        let mut scope = Vec::new();
        for p in &params {
            p.vars(&mut scope);
        }
        self.check_linear(&scope, span);
        let (wheres, scope) = self.binding_group(wheres, scope, span);
        let guard = guard.map(|g| self.expr(&g, &scope, span));
        let body = self.expr(&body, &scope, span);
        Rule { params, guard, body, wheres, span }
    }

    fn binding_group(&mut self, binds: Vec<RBind>, mut scope: Vec<String>, span: Span) -> (Vec<Binding>, Vec<String>) {
        let pats: Vec<Pattern> = binds.iter().map(|b| self.pattern(&b.pat)).collect();
        let mut bound = Vec::new();
        for p in &pats {
            p.vars(&mut bound);
        }
        self.check_linear(&bound, span);
        scope.extend(bound);
        let out = binds
            .iter()
            .zip(pats)
            .map(|(b, pat)| Binding { pat, expr: self.expr(&b.expr, &scope, b.span) })
            .collect();
        (out, scope)
    }

    fn check_linear(&mut self, vars: &[String], span: Span) {
        let mut seen = HashSet::new();
        for v in vars {
            if !seen.insert(v) {
                self.diags.push(Diagnostic::duplicate(span, &format!("variable {v} is bound more than once")));
            }
        }
    }

    fn pattern(&mut self, p: &RPat) -> Pattern {
        match p {
            RPat::Wild => Pattern::Wild,
            RPat::Int(n) => Pattern::Int(*n),
            RPat::Ident(n, s, args) => {
                if n.starts_with(|c: char| c.is_ascii_lowercase()) {
                    if !args.is_empty() {
                        self.diags.push(Diagnostic::syntax(*s, &format!("variable {n} cannot take arguments in a pattern")));
                    }
                    return Pattern::Var(n.clone());
                }
                let args: Vec<Pattern> = args.iter().map(|a| self.pattern(a)).collect();
                match self.cons.get(n) {
                    None => self.diags.push(Diagnostic::unknown(*s, &format!("unknown constructor {n}"))),
                    Some(k) if *k != args.len() => self.diags.push(Diagnostic::arity(
                        *s,
                        &format!("constructor {n} expects {k} arguments but is given {}", args.len()),
                    )),
                    _ => {}
                }
                Pattern::Con(n.clone(), args)
            }
            RPat::Tuple(a, b) => Pattern::Con("Tuple2".into(), vec![self.pattern(a), self.pattern(b)]),
            RPat::Cons(a, b) => Pattern::Con("Cons".into(), vec![self.pattern(a), self.pattern(b)]),
            RPat::List(items) => {
                let mut acc = Pattern::Con("Nil".into(), vec![]);
                for it in items.iter().rev() {
                    acc = Pattern::Con("Cons".into(), vec![self.pattern(it), acc]);
                }
                acc
            }
        }
    }

    pub(crate) fn expr(&mut self, e: &RExpr, scope: &[String], span: Span) -> Expr {
        match e {
            RExpr::Int(n) => Expr::Int(*n),
            RExpr::Failed => Expr::Failed,
            RExpr::Neg(x, s) => Expr::Prim(PrimOp::Sub, vec![Expr::Int(0), self.expr(x, scope, *s)]),
            RExpr::Tuple(a, b) => Expr::Con("Tuple2".into(), vec![self.expr(a, scope, span), self.expr(b, scope, span)]),
            RExpr::List(items) => {
                let mut acc = Expr::Con("Nil".into(), vec![]);
                for it in items.iter().rev() {
                    acc = Expr::Con("Cons".into(), vec![self.expr(it, scope, span), acc]);
                }
                acc
            }
            RExpr::Bin(op, a, b, s) => {
                let a = self.expr(a, scope, *s);
                let b = self.expr(b, scope, *s);
                match *op {
                    "?" => Expr::Choice(Box::new(a), Box::new(b)),
                    ":" => Expr::Con("Cons".into(), vec![a, b]),
                    "++" => self.call_checked("append", vec![a, b], *s),
                    other => Expr::Prim(prim_of(other).expect("binary operator table"), vec![a, b]),
                }
            }
            RExpr::If(c, t, f) => Expr::If(
                Box::new(self.expr(c, scope, span)),
                Box::new(self.expr(t, scope, span)),
                Box::new(self.expr(f, scope, span)),
            ),
            RExpr::Case(s, alts) => {
                let scrut = self.expr(s, scope, span);
                let mut out = Vec::new();
                for (p, body) in alts {
                    let pat = self.pattern(p);
                    if !pat.is_flat() {
                        self.diags.push(Diagnostic::validation(
                            span,
                            "case alternatives only support flat patterns (a constructor applied to variables)",
                        ));
                    }
                    let mut inner = scope.to_vec();
                    let mut vs = Vec::new();
                    pat.vars(&mut vs);
                    self.check_linear(&vs, span);
                    inner.extend(vs);
                    out.push(Alt { pat, body: self.expr(body, &inner, span) });
                }
                Expr::Case(Box::new(scrut), out)
            }
            RExpr::Let(binds, body) => {
                let (binds, inner) = self.binding_group(binds.clone(), scope.to_vec(), span);
                Expr::Let(binds, Box::new(self.expr(body, &inner, span)))
            }
            RExpr::App(name, s, args) => {
                let args: Vec<Expr> = args.iter().map(|a| self.expr(a, scope, *s)).collect();
                if scope.iter().any(|v| v == name) {
                    if !args.is_empty() {
                        self.diags.push(Diagnostic::validation(
                            *s,
                            &format!("variable {name} cannot be applied to arguments"),
                        ));
                    }
                    return Expr::Var(name.clone());
                }
                if let Some(k) = self.cons.get(name) {
                    if *k != args.len() {
                        self.diags.push(Diagnostic::arity(
                            *s,
                            &format!("constructor {name} expects {k} arguments but is given {}", args.len()),
                        ));
                    }
                    return Expr::Con(name.clone(), args);
                }
                if self.ops.contains_key(name) {
                    return self.call_checked(name, args, *s);
                }
                if let Some(p) = prim_of(name) {
                    if args.len() != 2 {
                        self.diags.push(Diagnostic::arity(
                            *s,
                            &format!("{name} expects 2 arguments but is given {}", args.len()),
                        ));
                    }
                    return Expr::Prim(p, args);
                }
                let msg = if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    format!("unknown constructor or operation {name}")
                } else if args.is_empty() {
                    format!("variable {name} not in scope")
                } else {
                    format!("unknown operation {name}")
                };
                self.diags.push(Diagnostic::unknown(*s, &msg));
                Expr::Call(name.clone(), args)
            }
        }
    }

    fn call_checked(&mut self, name: &str, args: Vec<Expr>, span: Span) -> Expr {
        match self.ops.get(name) {
            Some(k) if *k != args.len() => self.diags.push(Diagnostic::arity(
                span,
                &format!("operation {name} expects {k} arguments but is given {}", args.len()),
            )),
            None => self.diags.push(Diagnostic::unknown(span, &format!("unknown operation {name}"))),
            _ => {}
        }
        Expr::Call(name.to_string(), args)
    }

    /// Resolver for standalone expressions against an existing program.
    pub(crate) fn for_program<'d>(p: &Program, diags: &'d mut Vec<Diagnostic>) -> Resolver<'d> {
        let mut cons = HashMap::new();
        for t in &p.types {
            for c in &t.constructors {
                cons.insert(c.name.clone(), c.args.len());
            }
        }
        let ops = p.ops.iter().map(|o| (o.name.clone(), o.arity())).collect();
        Resolver { cons, ops, diags }
    }
}

fn prim_of(s: &str) -> Option<PrimOp> {
    Some(match s {
        "+" => PrimOp::Add,
        "-" => PrimOp::Sub,
        "*" => PrimOp::Mul,
        "div" => PrimOp::Div,
        "mod" => PrimOp::Mod,
        "==" => PrimOp::Eq,
        "/=" => PrimOp::Ne,
        "<" => PrimOp::Lt,
        "<=" => PrimOp::Le,
        ">" => PrimOp::Gt,
        ">=" => PrimOp::Ge,
        "&&" => PrimOp::And,
        "||" => PrimOp::Or,
        _ => return None,
    })
}
