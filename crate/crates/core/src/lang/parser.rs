//! Recursive-descent parser producing a raw syntax tree in which identifiers
//! are not yet classified as variables, operations or constructors.

use super::ast::{Annotation, Signature, Span, Type};
use super::lexer::{Tok, Token};
use super::Diagnostic;

#[derive(Clone, Debug)]
pub enum RExpr {
    /// An identifier applied to zero or more arguments.
    App(String, Span, Vec<RExpr>),
    Int(i64),
    Neg(Box<RExpr>, Span),
    Tuple(Box<RExpr>, Box<RExpr>),
    List(Vec<RExpr>),
    Bin(&'static str, Box<RExpr>, Box<RExpr>, Span),
    Failed,
    If(Box<RExpr>, Box<RExpr>, Box<RExpr>),
    Case(Box<RExpr>, Vec<(RPat, RExpr)>),
    Let(Vec<RBind>, Box<RExpr>),
}

#[derive(Clone, Debug)]
pub enum RPat {
    Ident(String, Span, Vec<RPat>),
    Wild,
    Int(i64),
    Tuple(Box<RPat>, Box<RPat>),
    List(Vec<RPat>),
    Cons(Box<RPat>, Box<RPat>),
}

#[derive(Clone, Debug)]
pub struct RBind {
    pub pat: RPat,
    pub expr: RExpr,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum RawDecl {
    Data { name: String, params: Vec<String>, cons: Vec<(String, Vec<Type>, Span)>, span: Span },
    Sig { names: Vec<(String, Span)>, sig: Signature },
    Rule { name: String, params: Vec<RPat>, guard: Option<RExpr>, body: RExpr, wheres: Vec<RBind>, span: Span },
    Prop { name: String, annotation: Annotation, lhs: (String, Span), rhs: (String, Span), span: Span },
}

type PResult<T> = Result<T, Diagnostic>;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// When set, line breaks terminate the current construct.
    nl_sensitive: bool,
}

fn binop_info(t: &Tok) -> Option<(&'static str, u8, Assoc)> {
    let s = match t {
        Tok::Sym(s) => *s,
        _ => return None,
    };
    let (p, a) = match s {
        "?" => (0, Assoc::Right),
        "||" => (2, Assoc::Right),
        "&&" => (3, Assoc::Right),
        "==" | "/=" | "<" | "<=" | ">" | ">=" => (4, Assoc::None),
        ":" | "++" => (5, Assoc::Right),
        "+" | "-" => (6, Assoc::Left),
        "*" => (7, Assoc::Left),
        _ => return None,
    };
    Some((s, p, a))
}

#[derive(Clone, Copy, PartialEq)]
enum Assoc {
    Left,
    Right,
    None,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0, nl_sensitive: false }
    }

    fn skip_soft(&mut self) {
        if !self.nl_sensitive {
            while self.toks[self.pos].tok == Tok::Newline {
                self.pos += 1;
            }
        }
    }

    fn peek(&mut self) -> &Tok {
        self.skip_soft();
        &self.toks[self.pos].tok
    }

    fn span(&mut self) -> Span {
        self.skip_soft();
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        self.skip_soft();
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&mut self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&mut self, s: &str) -> bool {
        matches!(self.peek(), Tok::Kw(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{s}'")))
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{s}'")))
        }
    }

    fn unexpected(&mut self, wanted: &str) -> Diagnostic {
        let span = self.span();
        let found = match self.peek().clone() {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Sym(s) | Tok::Kw(s) => format!("'{s}'"),
            Tok::Decl | Tok::Newline => "end of line".to_string(),
            Tok::Eof => "end of input".to_string(),
        };
        Diagnostic::syntax(span, &format!("expected {wanted}, found {found}"))
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, span))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// Parse all declarations, recovering at declaration boundaries.
    pub fn program(&mut self) -> (Vec<RawDecl>, Vec<Diagnostic>) {
        let mut decls = Vec::new();
        let mut diags = Vec::new();
        loop {
            if *self.peek() == Tok::Eof {
                break;
            }
            match self.decl() {
                Ok(d) => {
                    decls.push(d);
                    if !matches!(self.peek(), Tok::Decl | Tok::Eof) {
                        diags.push(self.unexpected("end of declaration"));
                        self.recover();
                    }
                }
                Err(d) => {
                    diags.push(d);
                    self.recover();
                }
            }
            if *self.peek() == Tok::Decl {
                self.bump();
            }
        }
        (decls, diags)
    }

    fn recover(&mut self) {
        self.nl_sensitive = false;
        while !matches!(self.toks[self.pos].tok, Tok::Decl | Tok::Eof) {
            self.pos += 1;
        }
    }

    fn decl(&mut self) -> PResult<RawDecl> {
        let span = self.span();
        if self.is_kw("data") {
            self.bump();
            return self.data_decl(span);
        }
        if self.is_kw("prop") {
            self.bump();
            return self.prop_decl(span);
        }
        let (name, nspan) = self.ident()?;
        if self.is_sym("::") || self.is_sym(",") {
            let mut names = vec![(name, nspan)];
            while self.eat_sym(",") {
                names.push(self.ident()?);
            }
            self.expect_sym("::")?;
            let sig = self.signature()?;
            return Ok(RawDecl::Sig { names, sig });
        }
        let mut params = Vec::new();
        while self.starts_apat() {
            params.push(self.apat()?);
        }
        let guard = if self.eat_sym("|") { Some(self.expr()?) } else { None };
        self.expect_sym("=")?;
        let body = self.expr()?;
        let mut wheres = Vec::new();
        if self.is_kw("where") {
            self.bump();
            wheres = self.bindings(&[])?;
        }
        Ok(RawDecl::Rule { name, params, guard, body, wheres, span })
    }

    fn data_decl(&mut self, span: Span) -> PResult<RawDecl> {
        let (name, _) = self.ident()?;
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            params.push(self.ident()?.0);
        }
        self.expect_sym("=")?;
        let mut cons = Vec::new();
        loop {
            let (c, cspan) = self.ident()?;
            let mut args = Vec::new();
            while self.starts_atype() {
                args.push(self.atype()?);
            }
            cons.push((c, args, cspan));
            if !self.eat_sym("|") {
                break;
            }
        }
        Ok(RawDecl::Data { name, params, cons, span })
    }

    fn prop_decl(&mut self, span: Span) -> PResult<RawDecl> {
        let (raw, _) = self.ident()?;
        let (name, annotation) = if let Some(n) = raw.strip_suffix("'TERMINATE") {
            (n.to_string(), Annotation::Terminate)
        } else if let Some(n) = raw.strip_suffix("'PRODUCTIVE") {
            (n.to_string(), Annotation::Productive)
        } else {
            (raw, Annotation::None)
        };
        self.expect_sym("=")?;
        let lhs = self.ident()?;
        self.expect_sym("<=>")?;
        let rhs = self.ident()?;
        Ok(RawDecl::Prop { name, annotation, lhs, rhs, span })
    }

    fn signature(&mut self) -> PResult<Signature> {
        let mut tys = vec![self.btype()?];
        while self.eat_sym("->") {
            tys.push(self.btype()?);
        }
        let result = tys.pop().expect("at least one type");
        Ok(Signature { params: tys, result })
    }

    fn starts_atype(&mut self) -> bool {
        matches!(self.peek(), Tok::Ident(_)) || self.is_sym("(") || self.is_sym("[")
    }

    fn btype(&mut self) -> PResult<Type> {
        if let Tok::Ident(n) = self.peek().clone() {
            if n.starts_with(|c: char| c.is_ascii_uppercase()) && n != "Int" {
                self.bump();
                let mut args = Vec::new();
                while self.starts_atype() {
                    args.push(self.atype()?);
                }
                return Ok(Type::Con(n, args));
            }
        }
        self.atype()
    }

    fn atype(&mut self) -> PResult<Type> {
        if self.eat_sym("(") {
            let a = self.btype()?;
            if self.eat_sym(",") {
                let b = self.btype()?;
                self.expect_sym(")")?;
                return Ok(Type::tuple(a, b));
            }
            self.expect_sym(")")?;
            return Ok(a);
        }
        if self.eat_sym("[") {
            let a = self.btype()?;
            self.expect_sym("]")?;
            return Ok(Type::list(a));
        }
        let (n, _) = self.ident()?;
        Ok(if n == "Int" {
            Type::Int
        } else if n.starts_with(|c: char| c.is_ascii_uppercase()) {
            Type::Con(n, vec![])
        } else {
            Type::Var(n)
        })
    }

    // ---- patterns ----

    fn starts_apat(&mut self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Int(_))
            || self.is_sym("_")
            || self.is_sym("(")
            || self.is_sym("[")
    }

    fn pat(&mut self) -> PResult<RPat> {
        let span = self.span();
        let head = match self.peek().clone() {
            Tok::Ident(n) if n.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.bump();
                let mut args = Vec::new();
                while self.starts_apat() {
                    args.push(self.apat()?);
                }
                RPat::Ident(n, span, args)
            }
            _ => self.apat()?,
        };
        if self.is_sym(":") {
            self.bump();
            let tail = self.pat()?;
            return Ok(RPat::Cons(Box::new(head), Box::new(tail)));
        }
        Ok(head)
    }

    fn apat(&mut self) -> PResult<RPat> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(RPat::Ident(n, span, vec![]))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(RPat::Int(n))
            }
            Tok::Sym("_") => {
                self.bump();
                Ok(RPat::Wild)
            }
            Tok::Sym("(") => {
                self.bump();
                let saved = std::mem::replace(&mut self.nl_sensitive, false);
                let r = self.paren_pat();
                self.nl_sensitive = saved;
                r
            }
            Tok::Sym("[") => {
                self.bump();
                let saved = std::mem::replace(&mut self.nl_sensitive, false);
                let mut items = Vec::new();
                let r = (|| {
                    if !self.eat_sym("]") {
                        loop {
                            items.push(self.pat()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                        self.expect_sym("]")?;
                    }
                    Ok(())
                })();
                self.nl_sensitive = saved;
                r.map(|_| RPat::List(items))
            }
            _ => Err(self.unexpected("a pattern")),
        }
    }

    fn paren_pat(&mut self) -> PResult<RPat> {
        if self.eat_sym("-") {
            return match self.bump().tok {
                Tok::Int(n) => {
                    self.expect_sym(")")?;
                    Ok(RPat::Int(-n))
                }
                _ => Err(self.unexpected("an integer literal")),
            };
        }
        let a = self.pat()?;
        if self.eat_sym(",") {
            let b = self.pat()?;
            self.expect_sym(")")?;
            return Ok(RPat::Tuple(Box::new(a), Box::new(b)));
        }
        self.expect_sym(")")?;
        Ok(a)
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<RExpr> {
        self.binary(0)
    }

    fn binary(&mut self, min: u8) -> PResult<RExpr> {
        let mut lhs = self.operand()?;
        loop {
            let t = self.peek().clone();
            let Some((op, prec, assoc)) = binop_info(&t) else { break };
            if prec < min {
                break;
            }
            let span = self.span();
            self.bump();
            let next = if assoc == Assoc::Right { prec } else { prec + 1 };
            let rhs = self.binary(next)?;
            lhs = RExpr::Bin(op, Box::new(lhs), Box::new(rhs), span);
            if assoc == Assoc::None {
                if let Some((_, p2, Assoc::None)) = binop_info(&self.peek().clone()) {
                    if p2 == prec {
                        return Err(self.unexpected("a non-associative operator to be parenthesized"));
                    }
                }
            }
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> PResult<RExpr> {
        if self.is_kw("if") {
            self.bump();
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.expr()?;
            self.expect_kw("else")?;
            let e = self.expr()?;
            return Ok(RExpr::If(Box::new(c), Box::new(t), Box::new(e)));
        }
        if self.is_kw("case") {
            self.bump();
            return self.case_expr();
        }
        if self.is_kw("let") {
            self.bump();
            let saved = std::mem::replace(&mut self.nl_sensitive, true);
            let binds = self.bindings(&["in"]);
            self.nl_sensitive = saved;
            let binds = binds?;
            self.expect_kw("in")?;
            let body = self.expr()?;
            return Ok(RExpr::Let(binds, Box::new(body)));
        }
        if self.is_sym("-") {
            let span = self.span();
            self.bump();
            let e = self.app()?;
            return Ok(match e {
                RExpr::Int(n) => RExpr::Int(-n),
                e => RExpr::Neg(Box::new(e), span),
            });
        }
        self.app()
    }

    fn case_expr(&mut self) -> PResult<RExpr> {
        let scrut = self.expr()?;
        self.expect_kw("of")?;
        let braced = self.eat_sym("{");
        let saved = std::mem::replace(&mut self.nl_sensitive, !braced);
        let r = self.alts(braced);
        self.nl_sensitive = saved;
        let alts = r?;
        if braced {
            self.expect_sym("}")?;
        }
        Ok(RExpr::Case(Box::new(scrut), alts))
    }

    fn alts(&mut self, braced: bool) -> PResult<Vec<(RPat, RExpr)>> {
        let mut alts = Vec::new();
        self.skip_newlines();
        loop {
            let p = self.pat()?;
            self.expect_sym("->")?;
            let e = self.expr()?;
            alts.push((p, e));
            // An alternative ends at ';' or a line break; continue only when
            // another `pattern ->` follows.
            let save = self.pos;
            let sep = self.eat_sym(";") || self.skip_newlines();
            if braced && self.is_sym("}") {
                break;
            }
            if !sep || !self.lookahead_alt() {
                self.pos = save;
                break;
            }
        }
        Ok(alts)
    }

    fn skip_newlines(&mut self) -> bool {
        let mut any = false;
        while self.toks[self.pos].tok == Tok::Newline {
            self.pos += 1;
            any = true;
        }
        any
    }

    fn lookahead_alt(&mut self) -> bool {
        let save = self.pos;
        let ok = self.pat().is_ok() && self.is_sym("->");
        self.pos = save;
        ok
    }

    fn lookahead_binding(&mut self) -> bool {
        let save = self.pos;
        let ok = self.pat().is_ok() && self.is_sym("=");
        self.pos = save;
        ok
    }

    /// Bindings separated by ';' or line breaks (where/let blocks).
    fn bindings(&mut self, stop_kws: &[&str]) -> PResult<Vec<RBind>> {
        let saved = std::mem::replace(&mut self.nl_sensitive, true);
        let r = (|| {
            let mut out = Vec::new();
            self.skip_newlines();
            loop {
                let span = self.span();
                let pat = self.pat()?;
                self.expect_sym("=")?;
                let expr = self.expr()?;
                out.push(RBind { pat, expr, span });
                let save = self.pos;
                let sep = self.eat_sym(";") || self.skip_newlines();
                if !sep || stop_kws.iter().any(|k| self.is_kw(k)) {
                    break;
                }
                if !self.lookahead_binding() {
                    self.pos = save;
                    break;
                }
            }
            Ok(out)
        })();
        self.nl_sensitive = saved;
        r
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Int(_) | Tok::Kw("failed"))
            || self.is_sym("(")
            || self.is_sym("[")
    }

    fn app(&mut self) -> PResult<RExpr> {
        let span = self.span();
        if let Tok::Ident(name) = self.peek().clone() {
            self.bump();
            let mut args = Vec::new();
            while self.starts_atom() {
                args.push(self.atom()?);
            }
            return Ok(RExpr::App(name, span, args));
        }
        let a = self.atom()?;
        if self.starts_atom() {
            return Err(Diagnostic::syntax(span, "only named operations and constructors can be applied"));
        }
        Ok(a)
    }

    fn atom(&mut self) -> PResult<RExpr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(RExpr::App(n, span, vec![]))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(RExpr::Int(n))
            }
            Tok::Kw("failed") => {
                self.bump();
                Ok(RExpr::Failed)
            }
            Tok::Sym("(") => {
                self.bump();
                let saved = std::mem::replace(&mut self.nl_sensitive, false);
                let r = (|| {
                    let a = self.expr()?;
                    if self.eat_sym(",") {
                        let b = self.expr()?;
                        self.expect_sym(")")?;
                        return Ok(RExpr::Tuple(Box::new(a), Box::new(b)));
                    }
                    self.expect_sym(")")?;
                    Ok(a)
                })();
                self.nl_sensitive = saved;
                r
            }
            Tok::Sym("[") => {
                self.bump();
                let saved = std::mem::replace(&mut self.nl_sensitive, false);
                let r = (|| {
                    let mut items = Vec::new();
                    if !self.eat_sym("]") {
                        loop {
                            items.push(self.expr()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                        self.expect_sym("]")?;
                    }
                    Ok(RExpr::List(items))
                })();
                self.nl_sensitive = saved;
                r
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parse a standalone expression (used by `eval -e`).
pub fn parse_raw_expr(toks: Vec<Token>) -> PResult<RExpr> {
    let mut p = Parser::new(toks);
    let e = p.expr()?;
    if !matches!(p.peek(), Tok::Eof) {
        return Err(p.unexpected("end of expression"));
    }
    Ok(e)
}
