//! Surface language: lexing, parsing, name resolution, validation,
//! desugaring and pretty-printing.

pub mod ast;
mod desugar;
mod lexer;
mod parser;
mod prelude;
mod pretty;
mod resolve;

use std::fmt;

pub use ast::*;
pub use desugar::{desugar, is_desugared};
pub(crate) use desugar::{expand_bindings, Fresh};
pub use prelude::PRELUDE;
pub use pretty::{pretty, pretty_pattern, pretty_program, pretty_rule, pretty_signature, pretty_type, pretty_type_decl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    Syntax,
    UnknownIdentifier,
    Arity,
    Duplicate,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    fn new(span: Span, kind: DiagnosticKind, msg: &str) -> Diagnostic {
        Diagnostic { line: span.line, col: span.col, kind, message: msg.to_string() }
    }
    pub(crate) fn syntax(span: Span, msg: &str) -> Diagnostic {
        Diagnostic::new(span, DiagnosticKind::Syntax, msg)
    }
    pub(crate) fn unknown(span: Span, msg: &str) -> Diagnostic {
        Diagnostic::new(span, DiagnosticKind::UnknownIdentifier, msg)
    }
    pub(crate) fn arity(span: Span, msg: &str) -> Diagnostic {
        Diagnostic::new(span, DiagnosticKind::Arity, msg)
    }
    pub(crate) fn duplicate(span: Span, msg: &str) -> Diagnostic {
        Diagnostic::new(span, DiagnosticKind::Duplicate, msg)
    }
    pub(crate) fn validation(span: Span, msg: &str) -> Diagnostic {
        Diagnostic::new(span, DiagnosticKind::Validation, msg)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

fn parse_decls(src: &str, diags: &mut Vec<Diagnostic>) -> Vec<parser::RawDecl> {
    match lexer::lex(src) {
        Ok(toks) => {
            let (decls, ds) = parser::Parser::new(toks).program();
            diags.extend(ds);
            decls
        }
        Err(d) => {
            diags.push(d);
            Vec::new()
        }
    }
}

/// Parse and validate a program. The prelude is always included.
pub fn parse_program(source: &str) -> Result<Program, Vec<Diagnostic>> {
    let mut pre_diags = Vec::new();
    let prelude = parse_decls(PRELUDE, &mut pre_diags);
    debug_assert!(pre_diags.is_empty(), "prelude must parse: {pre_diags:?}");
    let mut diags = Vec::new();
    let user = parse_decls(source, &mut diags);
    let program = resolve::build_program(prelude, user, &mut diags);
    if diags.is_empty() {
        Ok(program)
    } else {
        diags.sort_by_key(|d| (d.line, d.col));
        Err(diags)
    }
}

/// Parse a closed expression in the context of `program`.
pub fn parse_expr(program: &Program, source: &str) -> Result<Expr, Vec<Diagnostic>> {
    let toks = lexer::lex(source).map_err(|d| vec![d])?;
    let raw = parser::parse_raw_expr(toks).map_err(|d| vec![d])?;
    let mut diags = Vec::new();
    let e = {
        let mut r = resolve::Resolver::for_program(program, &mut diags);
        r.expr(&raw, &[], Span::new(1, 1))
    };
    if diags.is_empty() {
        Ok(e)
    } else {
        Err(diags)
    }
}
