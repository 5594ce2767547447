use std::sync::Arc;

use crate::lang::Span;

use super::{SurfaceError, SurfaceErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(Arc<str>),
    Upper(Arc<str>),
    Int(i64),
    Float(f64),
    Str(Arc<str>),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Float(x) => write!(f, "`{x}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Kw(k) | Tok::Sym(k) => write!(f, "`{k}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "def", "let", "in", "fun", "match", "with", "if", "then", "else", "dataset",
];

// Longest first.
const SYMBOLS: &[&str] = &[
    "**", "++", "->", "==", "!=", "<=", ">=", "&&", "||", "(", ")", "[", "]", "{", "}", ",", ";",
    ":", ".", "=", "|", "+", "-", "*", "/", "%", "<", ">", "_",
];

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, SurfaceError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            let mut float = false;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                float = true;
                advance(&mut i, &mut line, &mut col, '.');
                while i < chars.len() && chars[i].is_ascii_digit() {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    float = true;
                    while i < j {
                        {
                            let ch = chars[i];
                            advance(&mut i, &mut line, &mut col, ch);
                        }
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        {
                            let ch = chars[i];
                            advance(&mut i, &mut line, &mut col, ch);
                        }
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let tok = if float {
                Tok::Float(
                    text.parse()
                        .map_err(|_| lex_err(span, format!("bad number {text}")))?,
                )
            } else {
                Tok::Int(
                    text.parse()
                        .map_err(|_| lex_err(span, format!("integer {text} out of range")))?,
                )
            };
            out.push(Token { tok, span });
            continue;
        }
        if c.is_alphabetic()
            || (c == '_'
                && chars
                    .get(i + 1)
                    .is_some_and(|d| d.is_alphanumeric() || *d == '_'))
        {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            let text: String = chars[start..i].iter().collect();
            let tok = if let Some(k) = KEYWORDS.iter().find(|k| **k == text) {
                Tok::Kw(k)
            } else if c.is_uppercase() {
                Tok::Upper(Arc::from(text))
            } else {
                Tok::Ident(Arc::from(text))
            };
            out.push(Token { tok, span });
            continue;
        }
        if c == '"' {
            advance(&mut i, &mut line, &mut col, c);
            let mut s = String::new();
            loop {
                let Some(&d) = chars.get(i) else {
                    return Err(lex_err(span, "unterminated string".into()));
                };
                advance(&mut i, &mut line, &mut col, d);
                match d {
                    '"' => break,
                    '\\' => {
                        let Some(&e) = chars.get(i) else {
                            return Err(lex_err(span, "unterminated string".into()));
                        };
                        advance(&mut i, &mut line, &mut col, e);
                        s.push(match e {
                            'n' => '\n',
                            't' => '\t',
                            '"' => '"',
                            '\\' => '\\',
                            other => {
                                return Err(lex_err(span, format!("unknown escape \\{other}")))
                            }
                        });
                    }
                    d => s.push(d),
                }
            }
            out.push(Token {
                tok: Tok::Str(Arc::from(s)),
                span,
            });
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                for ch in s.chars() {
                    advance(&mut i, &mut line, &mut col, ch);
                }
                out.push(Token {
                    tok: Tok::Sym(s),
                    span,
                });
            }
            None => return Err(lex_err(span, format!("unexpected character {c:?}"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, column: col },
    });
    Ok(out)
}

fn lex_err(span: Span, msg: String) -> SurfaceError {
    SurfaceError {
        kind: SurfaceErrorKind::Lex(msg),
        span: Some(span),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_projection() {
        assert_eq!(
            toks("18.17 + x.y 2e3"),
            vec![
                Tok::Float(18.17),
                Tok::Sym("+"),
                Tok::Ident("x".into()),
                Tok::Sym("."),
                Tok::Ident("y".into()),
                Tok::Float(2000.0),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_keywords_and_spans() {
        let ts = lex("-- hello\nlet x' = Cons _ \"a\\n\" in x'").unwrap();
        assert_eq!(ts[0].tok, Tok::Kw("let"));
        assert_eq!(ts[0].span, Span { line: 2, column: 1 });
        assert_eq!(ts[1].tok, Tok::Ident("x'".into()));
        assert_eq!(ts[3].tok, Tok::Upper("Cons".into()));
        assert_eq!(ts[4].tok, Tok::Sym("_"));
        assert_eq!(ts[5].tok, Tok::Str("a\n".into()));
    }

    #[test]
    fn errors_have_positions() {
        let e = lex("x = 1\n  @").unwrap_err();
        assert_eq!(e.span, Some(Span { line: 2, column: 3 }));
        assert!(lex("\"abc").is_err());
    }
}
