//! Translation of desugared programs into the evaluator's code tree, in
//! which variables are environment slots and names are numeric ids.

use std::collections::HashMap;
use std::rc::Rc;

use crate::lang::{self, Alt, Expr, Pattern, PrimOp, Program};

use super::EvalError;

pub(crate) type ConId = u32;
pub(crate) type OpId = u32;
pub(crate) type CodeRef = Rc<Code>;

#[derive(Debug)]
pub(crate) enum Code {
    Var(usize),
    Int(i64),
    Con(ConId, Vec<CodeRef>),
    Call(OpId, Vec<CodeRef>),
    Prim(PrimOp, CodeRef, CodeRef),
    Choice(CodeRef, CodeRef),
    Failed,
    If(CodeRef, CodeRef, CodeRef),
    Case(CodeRef, Rc<[AltCode]>),
    Let(Vec<CodeRef>, CodeRef),
}

#[derive(Debug)]
pub(crate) struct AltCode {
    pub pat: FlatPat,
    pub body: CodeRef,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum FlatPat {
    /// Constructor; every field is bound to a fresh slot.
    Con(ConId),
    Int(i64),
    Var,
    Wild,
}

#[derive(Debug, Clone)]
pub(crate) enum Pat {
    Var(usize),
    Wild,
    Int(i64),
    Con(ConId, Vec<Pat>),
}

impl Pat {
    pub fn is_var_like(&self) -> bool {
        matches!(self, Pat::Var(_) | Pat::Wild)
    }
}

#[derive(Debug)]
pub(crate) struct RuleCode {
    pub pats: Vec<Pat>,
    pub slots: usize,
    pub body: CodeRef,
}

#[derive(Debug)]
pub(crate) struct OpCode {
    pub arity: usize,
    pub rules: Vec<RuleCode>,
}

#[derive(Debug)]
pub(crate) struct ConInfo {
    pub name: String,
    /// Index of the constructor within its type declaration.
    pub tag: usize,
}

#[derive(Debug)]
pub(crate) struct Compiled {
    pub cons: Vec<ConInfo>,
    pub con_ids: HashMap<String, ConId>,
    pub ops: Vec<OpCode>,
    pub op_ids: HashMap<String, OpId>,
    pub true_id: ConId,
    pub false_id: ConId,
    pub failed: CodeRef,
}

impl Compiled {
    pub fn new(program: &Program) -> Result<Compiled, EvalError> {
        let program = if lang::is_desugared(program) { program.clone() } else { lang::desugar(program) };
        let mut cons = Vec::new();
        let mut con_ids = HashMap::new();
        for t in &program.types {
            for (tag, c) in t.constructors.iter().enumerate() {
                con_ids.insert(c.name.clone(), cons.len() as ConId);
                cons.push(ConInfo { name: c.name.clone(), tag });
            }
        }
        let op_ids: HashMap<String, OpId> =
            program.ops.iter().enumerate().map(|(i, o)| (o.name.clone(), i as OpId)).collect();
        let true_id = *con_ids.get("True").ok_or(EvalError::MissingPrelude)?;
        let false_id = *con_ids.get("False").ok_or(EvalError::MissingPrelude)?;
        let mut c = Compiled {
            cons,
            con_ids,
            ops: Vec::new(),
            op_ids,
            true_id,
            false_id,
            failed: Rc::new(Code::Failed),
        };
        let mut ops = Vec::new();
        for op in &program.ops {
            let mut rules = Vec::new();
            for r in &op.rules {
                let mut scope = Vec::new();
                let pats = r.params.iter().map(|p| c.pattern(p, &mut scope)).collect::<Result<Vec<_>, _>>()?;
                let slots = scope.len();
                let body = c.expr(&r.body, &mut scope)?;
                rules.push(RuleCode { pats, slots, body });
            }
            ops.push(OpCode { arity: op.arity(), rules });
        }
        c.ops = ops;
        Ok(c)
    }

    pub fn con_id(&self, name: &str) -> Result<ConId, EvalError> {
        self.con_ids.get(name).copied().ok_or_else(|| EvalError::UnknownConstructor(name.to_string()))
    }

    pub fn op_id(&self, name: &str) -> Result<OpId, EvalError> {
        self.op_ids.get(name).copied().ok_or_else(|| EvalError::UnknownOperation(name.to_string()))
    }

    fn pattern(&self, p: &Pattern, scope: &mut Vec<String>) -> Result<Pat, EvalError> {
        Ok(match p {
            Pattern::Var(v) => {
                scope.push(v.clone());
                Pat::Var(scope.len() - 1)
            }
            Pattern::Wild => Pat::Wild,
            Pattern::Int(n) => Pat::Int(*n),
            Pattern::Con(c, ps) => {
                let id = self.con_id(c)?;
                Pat::Con(id, ps.iter().map(|q| self.pattern(q, scope)).collect::<Result<_, _>>()?)
            }
        })
    }

    /// Compile a closed expression (standalone queries).
    pub fn closed_expr(&self, e: &Expr) -> Result<CodeRef, EvalError> {
        let program_free = Program::default();
        let mut fresh = lang::Fresh::new(&program_free);
        let e = lang::expand_bindings(e.clone(), &mut fresh);
        self.expr(&e, &mut Vec::new())
    }

    pub fn expr(&self, e: &Expr, scope: &mut Vec<String>) -> Result<CodeRef, EvalError> {
        let code = match e {
            Expr::Var(v) => match scope.iter().rposition(|s| s == v) {
                Some(i) => Code::Var(i),
                None => return Err(EvalError::UnboundVariable(v.clone())),
            },
            Expr::Int(n) => Code::Int(*n),
            Expr::Failed => return Ok(self.failed.clone()),
            Expr::Con(c, xs) => Code::Con(self.con_id(c)?, self.exprs(xs, scope)?),
            Expr::Call(f, xs) => {
                let id = self.op_id(f)?;
                Code::Call(id, self.exprs(xs, scope)?)
            }
            Expr::Prim(p, xs) => {
                if xs.len() != 2 {
                    return Err(EvalError::Malformed(format!("primitive {} needs two arguments", p.symbol())));
                }
                Code::Prim(*p, self.expr(&xs[0], scope)?, self.expr(&xs[1], scope)?)
            }
            Expr::Choice(a, b) => Code::Choice(self.expr(a, scope)?, self.expr(b, scope)?),
            Expr::If(c, t, f) => Code::If(self.expr(c, scope)?, self.expr(t, scope)?, self.expr(f, scope)?),
            Expr::Case(s, alts) => {
                let scrut = self.expr(s, scope)?;
                let alts = alts.iter().map(|a| self.alt(a, scope)).collect::<Result<Vec<_>, _>>()?;
                Code::Case(scrut, alts.into())
            }
            Expr::Let(bs, body) => {
                let depth = scope.len();
                for b in bs {
                    match &b.pat {
                        Pattern::Var(v) => scope.push(v.clone()),
                        _ => return Err(EvalError::Malformed("pattern binding was not desugared".into())),
                    }
                }
                let binds = bs.iter().map(|b| self.expr(&b.expr, scope)).collect::<Result<Vec<_>, _>>();
                let body = binds.and_then(|bs| Ok((bs, self.expr(body, scope)?)));
                scope.truncate(depth);
                let (binds, body) = body?;
                Code::Let(binds, body)
            }
        };
        Ok(Rc::new(code))
    }

    fn exprs(&self, xs: &[Expr], scope: &mut Vec<String>) -> Result<Vec<CodeRef>, EvalError> {
        xs.iter().map(|x| self.expr(x, scope)).collect()
    }

    fn alt(&self, a: &Alt, scope: &mut Vec<String>) -> Result<AltCode, EvalError> {
        let depth = scope.len();
        let pat = match &a.pat {
            Pattern::Var(v) => {
                scope.push(v.clone());
                FlatPat::Var
            }
            Pattern::Wild => FlatPat::Wild,
            Pattern::Int(n) => FlatPat::Int(*n),
            Pattern::Con(c, ps) => {
                for p in ps {
                    match p {
                        Pattern::Var(v) => scope.push(v.clone()),
                        Pattern::Wild => scope.push(String::new()),
                        _ => return Err(EvalError::Malformed("nested pattern in case alternative".into())),
                    }
                }
                FlatPat::Con(self.con_id(c)?)
            }
        };
        let body = self.expr(&a.body, scope);
        scope.truncate(depth);
        Ok(AltCode { pat, body: body? })
    }
}
