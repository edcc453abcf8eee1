use std::fmt;

pub type Name = String;

/// Source position (1-based). Positions never take part in structural
/// equality, so two programs that differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Span) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Span {
    fn cmp(&self, _: &Span) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl Span {
    pub fn new(line: usize, col: usize) -> Span {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Int,
    Var(Name),
    Con(Name, Vec<Type>),
}

impl Type {
    pub fn list(elem: Type) -> Type {
        Type::Con("List".into(), vec![elem])
    }

    pub fn tuple(a: Type, b: Type) -> Type {
        Type::Con("Tuple2".into(), vec![a, b])
    }

    pub fn con(name: &str) -> Type {
        Type::Con(name.into(), vec![])
    }

    /// Replace type variables according to `sub`; unmapped variables stay.
    pub fn subst(&self, sub: &dyn Fn(&str) -> Option<Type>) -> Type {
        match self {
            Type::Int => Type::Int,
            Type::Var(v) => sub(v).unwrap_or_else(|| self.clone()),
            Type::Con(n, args) => Type::Con(n.clone(), args.iter().map(|a| a.subst(sub)).collect()),
        }
    }

    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Type::Int => {}
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Type::Con(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub params: Vec<Type>,
    pub result: Type,
}

impl Signature {
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        for t in &self.params {
            t.vars(&mut out);
        }
        self.result.vars(&mut out);
        out
    }

    pub fn subst(&self, sub: &dyn Fn(&str) -> Option<Type>) -> Signature {
        Signature {
            params: self.params.iter().map(|t| t.subst(sub)).collect(),
            result: self.result.subst(sub),
        }
    }

    /// Equality up to a consistent renaming of type variables.
    pub fn alpha_eq(&self, other: &Signature) -> bool {
        if self.params.len() != other.params.len() {
            return false;
        }
        let mut map: Vec<(Name, Name)> = Vec::new();
        let pairs = self
            .params
            .iter()
            .zip(&other.params)
            .chain(std::iter::once((&self.result, &other.result)));
        for (a, b) in pairs {
            if !alpha_type(a, b, &mut map) {
                return false;
            }
        }
        true
    }
}

fn alpha_type(a: &Type, b: &Type, map: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (Type::Int, Type::Int) => true,
        (Type::Var(x), Type::Var(y)) => {
            for (p, q) in map.iter() {
                if p == x || q == y {
                    return p == x && q == y;
                }
            }
            map.push((x.clone(), y.clone()));
            true
        }
        (Type::Con(n, xs), Type::Con(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_type(x, y, map))
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConDecl {
    pub name: Name,
    pub args: Vec<Type>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: Name,
    pub params: Vec<Name>,
    pub constructors: Vec<ConDecl>,
    pub builtin: bool,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl PrimOp {
    pub fn symbol(self) -> &'static str {
        match self {
            PrimOp::Add => "+",
            PrimOp::Sub => "-",
            PrimOp::Mul => "*",
            PrimOp::Div => "div",
            PrimOp::Mod => "mod",
            PrimOp::Eq => "==",
            PrimOp::Ne => "/=",
            PrimOp::Lt => "<",
            PrimOp::Le => "<=",
            PrimOp::Gt => ">",
            PrimOp::Ge => ">=",
            PrimOp::And => "&&",
            PrimOp::Or => "||",
        }
    }

    pub fn is_prefix(self) -> bool {
        matches!(self, PrimOp::Div | PrimOp::Mod)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, PrimOp::Eq | PrimOp::Ne | PrimOp::Lt | PrimOp::Le | PrimOp::Gt | PrimOp::Ge)
    }

    pub fn is_arith(self) -> bool {
        matches!(self, PrimOp::Add | PrimOp::Sub | PrimOp::Mul | PrimOp::Div | PrimOp::Mod)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(Name),
    Wild,
    Int(i64),
    Con(Name, Vec<Pattern>),
}

impl Pattern {
    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Var(v) => out.push(v.clone()),
            Pattern::Wild | Pattern::Int(_) => {}
            Pattern::Con(_, ps) => ps.iter().for_each(|p| p.vars(out)),
        }
    }

    pub fn is_var_like(&self) -> bool {
        matches!(self, Pattern::Var(_) | Pattern::Wild)
    }

    /// Flat patterns: a variable, wildcard, literal, or a constructor whose
    /// arguments are all variables or wildcards.
    pub fn is_flat(&self) -> bool {
        match self {
            Pattern::Con(_, ps) => ps.iter().all(Pattern::is_var_like),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alt {
    pub pat: Pattern,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub pat: Pattern,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(Name),
    Int(i64),
    Con(Name, Vec<Expr>),
    Call(Name, Vec<Expr>),
    Prim(PrimOp, Vec<Expr>),
    Choice(Box<Expr>, Box<Expr>),
    Failed,
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Case(Box<Expr>, Vec<Alt>),
    Let(Vec<Binding>, Box<Expr>),
}

impl Expr {
    pub fn call(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Call(name.into(), args)
    }

    pub fn con(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Con(name.into(), args)
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.into())
    }

    /// Visit every direct subexpression.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Var(_) | Expr::Int(_) | Expr::Failed => vec![],
            Expr::Con(_, xs) | Expr::Call(_, xs) | Expr::Prim(_, xs) => xs.iter().collect(),
            Expr::Choice(a, b) => vec![a, b],
            Expr::If(c, t, e) => vec![c, t, e],
            Expr::Case(s, alts) => {
                let mut v = vec![s.as_ref()];
                v.extend(alts.iter().map(|a| &a.body));
                v
            }
            Expr::Let(bs, body) => {
                let mut v: Vec<&Expr> = bs.iter().map(|b| &b.expr).collect();
                v.push(body);
                v
            }
        }
    }

    /// Pre-order walk over the expression tree.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Annotation {
    None,
    Terminate,
    Productive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub params: Vec<Pattern>,
    pub guard: Option<Expr>,
    pub body: Expr,
    pub wheres: Vec<Binding>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub name: Name,
    pub signature: Option<Signature>,
    pub rules: Vec<Rule>,
    pub builtin: bool,
    pub span: Span,
}

impl OpDecl {
    pub fn arity(&self) -> usize {
        match (self.rules.first(), &self.signature) {
            (Some(r), _) => r.params.len(),
            (None, Some(s)) => s.params.len(),
            (None, None) => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropDecl {
    pub name: Name,
    pub annotation: Annotation,
    pub lhs: Name,
    pub rhs: Name,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub types: Vec<TypeDecl>,
    pub ops: Vec<OpDecl>,
    pub props: Vec<PropDecl>,
}

impl Program {
    pub fn op(&self, name: &str) -> Option<&OpDecl> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn type_decl(&self, name: &str) -> Option<&TypeDecl> {
        self.types.iter().find(|t| t.name == name)
    }

    /// The declaring type and the constructor's index within it.
    pub fn constructor(&self, name: &str) -> Option<(&TypeDecl, usize)> {
        self.types
            .iter()
            .find_map(|t| t.constructors.iter().position(|c| c.name == name).map(|i| (t, i)))
    }

    pub fn con_decl(&self, name: &str) -> Option<&ConDecl> {
        self.constructor(name).map(|(t, i)| &t.constructors[i])
    }

    pub fn user_ops(&self) -> impl Iterator<Item = &OpDecl> {
        self.ops.iter().filter(|o| !o.builtin)
    }

    pub fn user_types(&self) -> impl Iterator<Item = &TypeDecl> {
        self.types.iter().filter(|t| !t.builtin)
    }

    /// Field types of a constructor for a given instantiation of its type.
    pub fn con_field_types(&self, con: &str, ty_args: &[Type]) -> Option<Vec<Type>> {
        let (td, i) = self.constructor(con)?;
        let sub = |v: &str| td.params.iter().position(|p| p == v).and_then(|k| ty_args.get(k).cloned());
        Some(td.constructors[i].args.iter().map(|a| a.subst(&sub)).collect())
    }
}
