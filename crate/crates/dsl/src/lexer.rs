use num_bigint::BigInt;

use crate::error::{DslError, Result, Span};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// `p` or `p/r` written without spaces.
    Number(BigInt, Option<BigInt>),
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    DotDot,
    Eof,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Split `src` into tokens; `#` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let span = |s: usize, e: usize, l: u32, c: u32| Span { start: s, end: e, line: l, col: c };
    while i < bytes.len() {
        let ch = src[i..].chars().next().expect("in bounds");
        let (start, l0, c0) = (i, line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += ch.len_utf8();
            col += 1;
            continue;
        }
        if ch == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let digits = |mut j: usize| {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            j
        };
        let tok = if ch.is_ascii_digit() {
            let e = digits(i);
            let num: BigInt = src[i..e].parse().expect("digits");
            if e + 1 < bytes.len() && bytes[e] == b'/' && bytes[e + 1].is_ascii_digit() {
                let e2 = digits(e + 1);
                let den: BigInt = src[e + 1..e2].parse().expect("digits");
                i = e2;
                Tok::Number(num, Some(den))
            } else {
                i = e;
                Tok::Number(num, None)
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            let s = src[i..j].to_string();
            i = j;
            Tok::Ident(s)
        } else if ch == '"' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j] != b'"' {
                if bytes[j] == b'\n' {
                    return Err(DslError::syntax(span(start, j, l0, c0), "unterminated string"));
                }
                j += 1;
            }
            if j >= bytes.len() {
                return Err(DslError::syntax(span(start, j, l0, c0), "unterminated string"));
            }
            let s = src[i + 1..j].to_string();
            i = j + 1;
            Tok::Str(s)
        } else {
            let two = src.get(i..i + 2);
            if two == Some("..") {
                i += 2;
                Tok::DotDot
            } else {
                i += ch.len_utf8();
                match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '=' => Tok::Eq,
                    _ => return Err(DslError::syntax(span(start, i, l0, c0), format!("unexpected character `{ch}`"))),
                }
            }
        };
        col += src[start..i].chars().count() as u32;
        out.push(Token { tok, span: span(start, i, l0, c0) });
    }
    out.push(Token { tok: Tok::Eof, span: span(i, i, line, col) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn rational_literal_needs_adjacent_digits() {
        assert_eq!(toks("3/2")[0], Tok::Number(3.into(), Some(2.into())));
        assert_eq!(toks("3 / 2").len(), 4);
        assert_eq!(toks("1/qp")[1], Tok::Slash);
    }

    #[test]
    fn positions() {
        let t = lex("a\n  bc # note\n  ..").unwrap();
        assert_eq!((t[1].span.line, t[1].span.col), (2, 3));
        assert_eq!(t[2].tok, Tok::DotDot);
        assert_eq!((t[2].span.line, t[2].span.col), (3, 3));
    }

    #[test]
    fn bad_character() {
        let e = lex("q @ 2").unwrap_err();
        assert!(matches!(e, DslError::Syntax { span: Span { line: 1, col: 3, .. }, .. }));
    }
}
