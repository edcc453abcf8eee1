use super::ast::*;
use super::prelude::IFTHEN;

/// Remove guards and where-clauses: `l | c = r where bs` becomes
/// `l = let bs in ifthen c r`. Pattern bindings in let groups are expanded
/// into lazy selector bindings.
pub fn desugar(program: &Program) -> Program {
    let mut out = program.clone();
    let mut fresh = Fresh::new(program);
    for op in &mut out.ops {
        for rule in &mut op.rules {
            let mut body = std::mem::replace(&mut rule.body, Expr::Failed);
            if let Some(g) = rule.guard.take() {
                body = Expr::Call(IFTHEN.into(), vec![g, body]);
            }
            if !rule.wheres.is_empty() {
                body = Expr::Let(std::mem::take(&mut rule.wheres), Box::new(body));
            }
            rule.body = expand_bindings(body, &mut fresh);
        }
    }
    out
}

/// Whether a program still contains surface constructs the evaluator does
/// not accept directly.
pub fn is_desugared(program: &Program) -> bool {
    program.ops.iter().all(|op| {
        op.rules.iter().all(|r| {
            let mut ok = r.guard.is_none() && r.wheres.is_empty();
            r.body.walk(&mut |e| {
                if let Expr::Let(bs, _) = e {
                    ok &= bs.iter().all(|b| matches!(b.pat, Pattern::Var(_)));
                }
            });
            ok
        })
    })
}

pub(crate) struct Fresh {
    used: std::collections::HashSet<String>,
    next: usize,
}

impl Fresh {
    pub(crate) fn new(program: &Program) -> Fresh {
        let mut used = std::collections::HashSet::new();
        for op in &program.ops {
            for r in &op.rules {
                let mut vs = Vec::new();
                r.params.iter().for_each(|p| p.vars(&mut vs));
                r.wheres.iter().for_each(|b| b.pat.vars(&mut vs));
                r.body.walk(&mut |e| {
                    if let Expr::Let(bs, _) = e {
                        bs.iter().for_each(|b| b.pat.vars(&mut vs));
                    }
                });
                used.extend(vs);
            }
        }
        Fresh { used, next: 0 }
    }

    pub(crate) fn name(&mut self) -> String {
        loop {
            self.next += 1;
            let n = format!("bind'{}", self.next);
            if self.used.insert(n.clone()) {
                return n;
            }
        }
    }
}

pub(crate) fn expand_bindings(e: Expr, fresh: &mut Fresh) -> Expr {
    match e {
        Expr::Var(_) | Expr::Int(_) | Expr::Failed => e,
        Expr::Con(c, xs) => Expr::Con(c, xs.into_iter().map(|x| expand_bindings(x, fresh)).collect()),
        Expr::Call(c, xs) => Expr::Call(c, xs.into_iter().map(|x| expand_bindings(x, fresh)).collect()),
        Expr::Prim(p, xs) => Expr::Prim(p, xs.into_iter().map(|x| expand_bindings(x, fresh)).collect()),
        Expr::Choice(a, b) => Expr::Choice(Box::new(expand_bindings(*a, fresh)), Box::new(expand_bindings(*b, fresh))),
        Expr::If(c, t, f) => Expr::If(
            Box::new(expand_bindings(*c, fresh)),
            Box::new(expand_bindings(*t, fresh)),
            Box::new(expand_bindings(*f, fresh)),
        ),
        Expr::Case(s, alts) => Expr::Case(
            Box::new(expand_bindings(*s, fresh)),
            alts.into_iter().map(|a| Alt { pat: a.pat, body: expand_bindings(a.body, fresh) }).collect(),
        ),
        Expr::Let(bs, body) => {
            let mut out = Vec::new();
            for b in bs {
                let expr = expand_bindings(b.expr, fresh);
                match b.pat {
                    Pattern::Var(v) => out.push(Binding { pat: Pattern::Var(v), expr }),
                    Pattern::Wild => {}
                    pat => {
                        let tmp = fresh.name();
                        out.push(Binding { pat: Pattern::Var(tmp.clone()), expr });
                        selectors(&pat, Expr::Var(tmp), &mut out, fresh);
                    }
                }
            }
            Expr::Let(out, Box::new(expand_bindings(*body, fresh)))
        }
    }
}

/// For each variable in `pat`, emit a binding that selects it from `from`
/// through a chain of flat case expressions.
fn selectors(pat: &Pattern, from: Expr, out: &mut Vec<Binding>, fresh: &mut Fresh) {
    match pat {
        Pattern::Var(v) => out.push(Binding { pat: Pattern::Var(v.clone()), expr: from }),
        Pattern::Wild | Pattern::Int(_) => {}
        Pattern::Con(c, args) => {
            for (i, sub) in args.iter().enumerate() {
                let mut vs = Vec::new();
                sub.vars(&mut vs);
                if vs.is_empty() {
                    continue;
                }
                let field = fresh.name();
                let flat: Vec<Pattern> = (0..args.len())
                    .map(|j| if j == i { Pattern::Var(field.clone()) } else { Pattern::Wild })
                    .collect();
                let select = Expr::Case(
                    Box::new(from.clone()),
                    vec![Alt { pat: Pattern::Con(c.clone(), flat), body: Expr::Var(field) }],
                );
                match sub {
                    Pattern::Var(v) => out.push(Binding { pat: Pattern::Var(v.clone()), expr: select }),
                    _ => {
                        let tmp = fresh.name();
                        out.push(Binding { pat: Pattern::Var(tmp.clone()), expr: select });
                        selectors(sub, Expr::Var(tmp), out, fresh);
                    }
                }
            }
        }
    }
}
