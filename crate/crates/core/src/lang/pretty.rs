use std::fmt::Write;

use super::ast::*;

const ATOM: u8 = 11;
const APP: u8 = 10;
const NEG: u8 = 9;

fn binop(p: PrimOp) -> (u8, u8, u8) {
    // (own precedence, left context, right context)
    match p {
        PrimOp::Or => (2, 3, 2),
        PrimOp::And => (3, 4, 3),
        PrimOp::Eq | PrimOp::Ne | PrimOp::Lt | PrimOp::Le | PrimOp::Gt | PrimOp::Ge => (4, 5, 5),
        PrimOp::Add | PrimOp::Sub => (6, 6, 7),
        PrimOp::Mul => (7, 7, 8),
        PrimOp::Div | PrimOp::Mod => (APP, ATOM, ATOM),
    }
}

/// Elements of a `Cons` chain ending in `Nil`, if the expression is one.
fn list_items(e: &Expr) -> Option<Vec<&Expr>> {
    let mut items = Vec::new();
    let mut cur = e;
    loop {
        match cur {
            Expr::Con(c, xs) if c == "Cons" && xs.len() == 2 => {
                items.push(&xs[0]);
                cur = &xs[1];
            }
            Expr::Con(c, xs) if c == "Nil" && xs.is_empty() => return Some(items),
            _ => return None,
        }
    }
}

pub fn pretty(e: &Expr) -> String {
    let mut s = String::new();
    expr(&mut s, e, 0);
    s
}

fn paren(out: &mut String, cond: bool, f: impl FnOnce(&mut String)) {
    if cond {
        out.push('(');
    }
    f(out);
    if cond {
        out.push(')');
    }
}

fn expr(out: &mut String, e: &Expr, ctx: u8) {
    match e {
        Expr::Var(v) => out.push_str(v),
        Expr::Int(n) => paren(out, *n < 0 && ctx > NEG, |o| write!(o, "{n}").unwrap()),
        Expr::Failed => out.push_str("failed"),
        Expr::Con(c, xs) => {
            if let Some(items) = list_items(e) {
                out.push('[');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    expr(out, it, 0);
                }
                out.push(']');
            } else if c == "Cons" && xs.len() == 2 {
                out.push('(');
                expr(out, &xs[0], 6);
                out.push_str(" : ");
                expr(out, &xs[1], 5);
                out.push(')');
            } else if c == "Tuple2" && xs.len() == 2 {
                out.push('(');
                expr(out, &xs[0], 0);
                out.push_str(", ");
                expr(out, &xs[1], 0);
                out.push(')');
            } else {
                application(out, c, xs, ctx);
            }
        }
        Expr::Call(f, xs) => application(out, f, xs, ctx),
        Expr::Prim(p, xs) => {
            if p.is_prefix() {
                application(out, p.symbol(), xs, ctx);
            } else {
                let (own, l, r) = binop(*p);
                paren(out, own < ctx, |o| {
                    expr(o, &xs[0], l);
                    write!(o, " {} ", p.symbol()).unwrap();
                    expr(o, &xs[1], r);
                });
            }
        }
        Expr::Choice(a, b) => paren(out, ctx > 0, |o| {
            expr(o, a, 1);
            o.push_str(" ? ");
            expr(o, b, 0);
        }),
        Expr::If(c, t, f) => paren(out, ctx > 0, |o| {
            o.push_str("if ");
            expr(o, c, 0);
            o.push_str(" then ");
            expr(o, t, 0);
            o.push_str(" else ");
            expr(o, f, 0);
        }),
        Expr::Case(s, alts) => paren(out, ctx > 0, |o| {
            o.push_str("case ");
            expr(o, s, 0);
            o.push_str(" of ");
            for (i, a) in alts.iter().enumerate() {
                if i > 0 {
                    o.push_str("; ");
                }
                pattern(o, &a.pat, false);
                o.push_str(" -> ");
                expr(o, &a.body, 1);
            }
        }),
        Expr::Let(bs, body) => paren(out, ctx > 0, |o| {
            o.push_str("let ");
            bindings(o, bs);
            o.push_str(" in ");
            expr(o, body, 0);
        }),
    }
}

fn application(out: &mut String, head: &str, args: &[Expr], ctx: u8) {
    paren(out, !args.is_empty() && ctx > APP, |o| {
        o.push_str(head);
        for a in args {
            o.push(' ');
            expr(o, a, ATOM);
        }
    });
}

fn bindings(out: &mut String, bs: &[Binding]) {
    for (i, b) in bs.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        pattern(out, &b.pat, false);
        out.push_str(" = ");
        expr(out, &b.expr, 1);
    }
}

fn pattern_list_items(p: &Pattern) -> Option<Vec<&Pattern>> {
    let mut items = Vec::new();
    let mut cur = p;
    loop {
        match cur {
            Pattern::Con(c, xs) if c == "Cons" && xs.len() == 2 => {
                items.push(&xs[0]);
                cur = &xs[1];
            }
            Pattern::Con(c, xs) if c == "Nil" && xs.is_empty() => return Some(items),
            _ => return None,
        }
    }
}

pub fn pretty_pattern(p: &Pattern) -> String {
    let mut s = String::new();
    pattern(&mut s, p, false);
    s
}

fn pattern(out: &mut String, p: &Pattern, atomic: bool) {
    match p {
        Pattern::Var(v) => out.push_str(v),
        Pattern::Wild => out.push('_'),
        Pattern::Int(n) => paren(out, *n < 0, |o| write!(o, "{n}").unwrap()),
        Pattern::Con(c, xs) => {
            if let Some(items) = pattern_list_items(p) {
                out.push('[');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    pattern(out, it, false);
                }
                out.push(']');
            } else if c == "Cons" && xs.len() == 2 {
                out.push('(');
                pattern(out, &xs[0], true);
                out.push_str(" : ");
                pattern(out, &xs[1], false);
                out.push(')');
            } else if c == "Tuple2" && xs.len() == 2 {
                out.push('(');
                pattern(out, &xs[0], false);
                out.push_str(", ");
                pattern(out, &xs[1], false);
                out.push(')');
            } else {
                paren(out, atomic && !xs.is_empty(), |o| {
                    o.push_str(c);
                    for x in xs {
                        o.push(' ');
                        pattern(o, x, true);
                    }
                });
            }
        }
    }
}

pub fn pretty_type(t: &Type) -> String {
    let mut s = String::new();
    ty(&mut s, t, false);
    s
}

fn ty(out: &mut String, t: &Type, atomic: bool) {
    match t {
        Type::Int => out.push_str("Int"),
        Type::Var(v) => out.push_str(v),
        Type::Con(c, xs) if c == "List" && xs.len() == 1 => {
            out.push('[');
            ty(out, &xs[0], false);
            out.push(']');
        }
        Type::Con(c, xs) if c == "Tuple2" && xs.len() == 2 => {
            out.push('(');
            ty(out, &xs[0], false);
            out.push_str(", ");
            ty(out, &xs[1], false);
            out.push(')');
        }
        Type::Con(c, xs) => paren(out, atomic && !xs.is_empty(), |o| {
            o.push_str(c);
            for x in xs {
                o.push(' ');
                ty(o, x, true);
            }
        }),
    }
}

pub fn pretty_signature(name: &str, s: &Signature) -> String {
    let mut out = format!("{name} :: ");
    for p in &s.params {
        ty(&mut out, p, false);
        out.push_str(" -> ");
    }
    ty(&mut out, &s.result, false);
    out
}

pub fn pretty_rule(name: &str, r: &Rule) -> String {
    let mut out = name.to_string();
    for p in &r.params {
        out.push(' ');
        pattern(&mut out, p, true);
    }
    if let Some(g) = &r.guard {
        out.push_str(" | ");
        expr(&mut out, g, 0);
    }
    out.push_str(" = ");
    expr(&mut out, &r.body, 0);
    if !r.wheres.is_empty() {
        out.push_str(" where ");
        bindings(&mut out, &r.wheres);
    }
    out
}

pub fn pretty_type_decl(t: &TypeDecl) -> String {
    let mut out = format!("data {}", t.name);
    for p in &t.params {
        out.push(' ');
        out.push_str(p);
    }
    out.push_str(" =");
    for (i, c) in t.constructors.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { " | " });
        out.push_str(&c.name);
        for a in &c.args {
            out.push(' ');
            ty(&mut out, a, true);
        }
    }
    out
}

/// Print the user part of a program (prelude declarations are omitted).
pub fn pretty_program(p: &Program) -> String {
    let mut out = String::new();
    for t in p.user_types() {
        out.push_str(&pretty_type_decl(t));
        out.push('\n');
    }
    for op in p.user_ops() {
        if !out.is_empty() {
            out.push('\n');
        }
        if let Some(s) = &op.signature {
            out.push_str(&pretty_signature(&op.name, s));
            out.push('\n');
        }
        for r in &op.rules {
            out.push_str(&pretty_rule(&op.name, r));
            out.push('\n');
        }
    }
    if !p.props.is_empty() {
        out.push('\n');
    }
    for pr in &p.props {
        let suffix = match pr.annotation {
            Annotation::None => "",
            Annotation::Terminate => "'TERMINATE",
            Annotation::Productive => "'PRODUCTIVE",
        };
        writeln!(out, "prop {}{} = {} <=> {}", pr.name, suffix, pr.lhs, pr.rhs).unwrap();
    }
    out
}
