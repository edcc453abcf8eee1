use super::ast::Span;
use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Kw(&'static str),
    /// A line starting in column 1: begins a new top-level declaration.
    Decl,
    /// Any other line break.
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const KEYWORDS: &[&str] = &["data", "prop", "if", "then", "else", "case", "of", "let", "in", "where", "failed"];

// Longest symbols first so that maximal munch works with a linear scan.
const SYMBOLS: &[&str] = &[
    "<=>", "::", "->", "==", "/=", "<=", ">=", "&&", "||", "++", "=", "|", "(", ")", "[", "]", ",", ";", "?", ":",
    "+", "-", "*", "<", ">", "_", "{", "}",
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let mut first = true;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'-') {
                break;
            }
            let span = Span::new(li + 1, i + 1);
            if first {
                first = false;
                if !out.is_empty() {
                    let tok = if i == 0 { Tok::Decl } else { Tok::Newline };
                    out.push(Token { tok, span });
                }
                if i != 0 && out.is_empty() {
                    return Err(Diagnostic::syntax(span, "the first declaration must start in column 1"));
                }
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<i64>()
                    .map_err(|_| Diagnostic::syntax(span, &format!("integer literal {text} is out of range")))?;
                out.push(Token { tok: Tok::Int(n), span });
                continue;
            }
            if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let tok = match KEYWORDS.iter().find(|k| **k == text) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(text),
                };
                out.push(Token { tok, span });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token { tok: Tok::Sym(s), span });
                    i += s.len();
                }
                None => return Err(Diagnostic::syntax(span, &format!("unexpected character '{c}'"))),
            }
        }
    }
    let end = Span::new(src.lines().count() + 1, 1);
    out.push(Token { tok: Tok::Eof, span: end });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn primes_in_identifiers() {
        assert_eq!(
            toks("sort'spec xs = xs"),
            vec![
                Tok::Ident("sort'spec".into()),
                Tok::Ident("xs".into()),
                Tok::Sym("="),
                Tok::Ident("xs".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn layout_markers() {
        let t = toks("f x = y\n  where y = 1\n-- c\ng = 2");
        assert!(t.contains(&Tok::Newline));
        assert_eq!(t.iter().filter(|t| **t == Tok::Decl).count(), 1);
    }

    #[test]
    fn maximal_munch() {
        assert_eq!(toks("a <=> b")[1], Tok::Sym("<=>"));
        assert_eq!(toks("a <= b")[1], Tok::Sym("<="));
        assert_eq!(toks("a ++ b")[1], Tok::Sym("++"));
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(lex("f = #").is_err());
    }
}
