//! Recursive-descent parser.
//!
//! Operator precedence, loosest first:
//!
//! | operators                     | associativity |
//! |-------------------------------|---------------|
//! | `\|\|`                        | right         |
//! | `&&`                          | right         |
//! | `== != < <= > >=`             | none          |
//! | `:` `++`                      | right         |
//! | `+ -`                         | left          |
//! | `* / %`                       | left          |
//! | `**`                          | right         |
//! | unary `-`                     |               |
//! | application                   | left          |
//! | projection `e.x`              | left          |
//!
//! `fun`, `match`, `if` and `let` extend as far right as possible.

use crate::lang::{name, Name, Span};

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{SurfaceError, SurfaceErrorKind};

pub fn parse(src: &str) -> Result<SurfaceProgram, SurfaceError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    p.program()
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<SExpr, SurfaceError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn is_atom_start(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Int(_)
            | Tok::Float(_)
            | Tok::Str(_)
            | Tok::Ident(_)
            | Tok::Upper(_)
            | Tok::Sym("(" | "[" | "{")
    )
}

fn is_pattern_start(t: &Tok) -> bool {
    is_atom_start(t) || matches!(t, Tok::Sym("_" | "-"))
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn at_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Kw(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, SurfaceError> {
        Err(SurfaceError {
            kind: SurfaceErrorKind::Parse {
                expected: expected.to_string(),
                found: self.peek().to_string(),
            },
            span: Some(self.span()),
        })
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SurfaceError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<(), SurfaceError> {
        if self.at_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn expect_eof(&mut self) -> Result<(), SurfaceError> {
        self.eat_sym(";");
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn ident(&mut self) -> Result<Name, SurfaceError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn program(&mut self) -> Result<SurfaceProgram, SurfaceError> {
        let mut items = Vec::new();
        loop {
            if self.at_kw("dataset") {
                let span = self.bump().span;
                let n = self.ident()?;
                self.expect_sym(";")?;
                items.push(Item::Dataset(n, span));
            } else if self.at_kw("def") {
                let mut defs: Vec<Def> = Vec::new();
                while self.at_kw("def") {
                    let span = self.bump().span;
                    let n = self.ident()?;
                    let clause = self.clause_after_name(span, "=")?;
                    self.expect_sym(";")?;
                    match defs.last_mut() {
                        Some(d) if d.name == n => d.clauses.push(clause),
                        _ => {
                            if defs.iter().any(|d| d.name == n) {
                                return Err(SurfaceError {
                                    kind: SurfaceErrorKind::DuplicateDefinition(n.to_string()),
                                    span: Some(span),
                                });
                            }
                            defs.push(Def {
                                name: n,
                                clauses: vec![clause],
                                span,
                            });
                        }
                    }
                }
                items.push(Item::Defs(defs));
            } else if self.at_kw("let") {
                let span = self.span();
                let start = self.pos;
                self.bump();
                let n = self.ident()?;
                let clause = self.clause_after_name(span, "=")?;
                if self.eat_sym(";") {
                    if clause.patterns.is_empty() {
                        items.push(Item::Let(n, clause.body, span));
                    } else {
                        items.push(Item::Defs(vec![Def {
                            name: n,
                            clauses: vec![clause],
                            span,
                        }]));
                    }
                } else {
                    // `let ... in ...` as the final expression.
                    self.pos = start;
                    let body = self.expr()?;
                    self.expect_eof()?;
                    return Ok(SurfaceProgram { items, body });
                }
            } else {
                let body = self.expr()?;
                self.expect_eof()?;
                return Ok(SurfaceProgram { items, body });
            }
        }
    }

    /// `apat* <sep> expr`
    fn clause_after_name(&mut self, span: Span, sep: &str) -> Result<Clause, SurfaceError> {
        let mut patterns = Vec::new();
        while is_pattern_start(self.peek()) {
            patterns.push(self.apat()?);
        }
        self.expect_sym(sep)?;
        let body = self.expr()?;
        Ok(Clause {
            patterns,
            body,
            span,
        })
    }

    fn expr(&mut self) -> Result<SExpr, SurfaceError> {
        let span = self.span();
        let kind = match self.peek() {
            Tok::Kw("fun") => {
                self.bump();
                if !is_pattern_start(self.peek()) {
                    return self.error("a parameter pattern");
                }
                let clause = self.clause_after_name(span, "->")?;
                SExprKind::Fun(Box::new(clause))
            }
            Tok::Kw("match") => {
                self.bump();
                let scrutinee = self.expr()?;
                self.expect_kw("with")?;
                let mut clauses = Vec::new();
                self.eat_sym("|");
                loop {
                    let cspan = self.span();
                    let p = self.pattern()?;
                    self.expect_sym("->")?;
                    let body = self.expr()?;
                    clauses.push(Clause {
                        patterns: vec![p],
                        body,
                        span: cspan,
                    });
                    if !self.eat_sym("|") {
                        break;
                    }
                }
                SExprKind::Match(Box::new(scrutinee), clauses)
            }
            Tok::Kw("if") => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let t = self.expr()?;
                self.expect_kw("else")?;
                let e = self.expr()?;
                SExprKind::If(Box::new(c), Box::new(t), Box::new(e))
            }
            Tok::Kw("let") => {
                self.bump();
                let n = self.ident()?;
                let clause = self.clause_after_name(span, "=")?;
                self.expect_kw("in")?;
                let body = self.expr()?;
                if clause.patterns.is_empty() {
                    SExprKind::Let(n, Box::new(clause.body), Box::new(body))
                } else {
                    SExprKind::LetFun(
                        Box::new(Def {
                            name: n,
                            clauses: vec![clause],
                            span,
                        }),
                        Box::new(body),
                    )
                }
            }
            _ => return self.binary(0),
        };
        Ok(SExpr { kind, span })
    }

    fn binop_at(&self) -> Option<(BinOp, u8)> {
        let Tok::Sym(s) = self.peek() else {
            return None;
        };
        Some(match *s {
            "||" => (BinOp::Or, 1),
            "&&" => (BinOp::And, 2),
            "==" => (BinOp::Eq, 3),
            "!=" => (BinOp::Neq, 3),
            "<" => (BinOp::Lt, 3),
            "<=" => (BinOp::Leq, 3),
            ">" => (BinOp::Gt, 3),
            ">=" => (BinOp::Geq, 3),
            ":" => (BinOp::Cons, 4),
            "++" => (BinOp::Concat, 4),
            "+" => (BinOp::Add, 5),
            "-" => (BinOp::Sub, 5),
            "*" => (BinOp::Mul, 6),
            "/" => (BinOp::Div, 6),
            "%" => (BinOp::Mod, 6),
            "**" => (BinOp::Pow, 7),
            _ => return None,
        })
    }

    /// Precedence climbing over operators binding tighter than `min`.
    fn binary(&mut self, min: u8) -> Result<SExpr, SurfaceError> {
        let mut lhs = self.unary()?;
        while let Some((op, prec)) = self.binop_at() {
            if prec <= min {
                break;
            }
            let span = self.bump().span;
            let right_assoc = matches!(prec, 1 | 2 | 4 | 7);
            let rhs = if right_assoc {
                self.binary(prec - 1)?
            } else {
                self.binary(prec)?
            };
            lhs = SExpr {
                kind: SExprKind::BinOp(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
            if prec == 3 && matches!(self.binop_at(), Some((_, 3))) {
                return self.error("parentheses around chained comparisons");
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SExpr, SurfaceError> {
        let span = self.span();
        if self.eat_sym("-") {
            let e = self.unary()?;
            return Ok(SExpr {
                kind: SExprKind::Neg(Box::new(e)),
                span,
            });
        }
        if matches!(self.peek(), Tok::Kw("fun" | "match" | "if" | "let")) {
            return self.expr();
        }
        self.application()
    }

    fn application(&mut self) -> Result<SExpr, SurfaceError> {
        let mut f = self.postfix()?;
        while is_atom_start(self.peek()) {
            let arg = self.postfix()?;
            let span = f.span;
            f = SExpr {
                kind: SExprKind::App(Box::new(f), Box::new(arg)),
                span,
            };
        }
        Ok(f)
    }

    fn postfix(&mut self) -> Result<SExpr, SurfaceError> {
        let mut e = self.atom()?;
        while self.at_sym(".") {
            let span = self.bump().span;
            let field = self.ident()?;
            e = SExpr {
                kind: SExprKind::Project(Box::new(e), field),
                span,
            };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SExpr, SurfaceError> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                SExprKind::Int(n)
            }
            Tok::Float(x) => {
                self.bump();
                SExprKind::Float(x)
            }
            Tok::Str(s) => {
                self.bump();
                SExprKind::Str(s)
            }
            Tok::Ident(s) => {
                self.bump();
                SExprKind::Var(s)
            }
            Tok::Upper(s) => {
                self.bump();
                SExprKind::Constr(s)
            }
            Tok::Sym("(") => {
                self.bump();
                if let (Some((op, _)), Tok::Sym(")")) = (self.binop_at(), self.peek_at(1)) {
                    self.bump();
                    self.bump();
                    return Ok(SExpr {
                        kind: SExprKind::Section(op),
                        span,
                    });
                }
                let e = self.expr()?;
                if self.eat_sym(",") {
                    let second = self.expr()?;
                    self.expect_sym(")")?;
                    SExprKind::Tuple(Box::new(e), Box::new(second))
                } else {
                    self.expect_sym(")")?;
                    return Ok(e);
                }
            }
            Tok::Sym("[") => {
                self.bump();
                let mut items = Vec::new();
                if !self.at_sym("]") {
                    loop {
                        items.push(self.expr()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                SExprKind::List(items)
            }
            Tok::Sym("{") => {
                self.bump();
                let mut fields = Vec::new();
                if !self.at_sym("}") {
                    loop {
                        let n = self.ident()?;
                        self.expect_sym(":")?;
                        fields.push((n, self.expr()?));
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                SExprKind::Record(fields)
            }
            _ => return self.error("an expression"),
        };
        Ok(SExpr { kind, span })
    }

    /// `cpat (':' pattern)?`
    fn pattern(&mut self) -> Result<Pattern, SurfaceError> {
        let head = match self.peek().clone() {
            Tok::Upper(c) if is_pattern_start(self.peek_at(1)) => {
                self.bump();
                let mut args = Vec::new();
                while is_pattern_start(self.peek()) && !self.at_sym("-") {
                    args.push(self.apat()?);
                }
                Pattern::Constr(c, args)
            }
            _ => self.apat()?,
        };
        if self.eat_sym(":") {
            let tail = self.pattern()?;
            return Ok(Pattern::Constr(name("Cons"), vec![head, tail]));
        }
        Ok(head)
    }

    fn apat(&mut self) -> Result<Pattern, SurfaceError> {
        Ok(match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Pattern::Var(x)
            }
            Tok::Sym("_") => {
                self.bump();
                Pattern::Wild
            }
            Tok::Upper(c) => {
                self.bump();
                Pattern::Constr(c, vec![])
            }
            Tok::Int(n) => {
                self.bump();
                Pattern::Lit(Literal::Int(n))
            }
            Tok::Float(x) => {
                self.bump();
                Pattern::Lit(Literal::Float(x))
            }
            Tok::Str(s) => {
                self.bump();
                Pattern::Lit(Literal::Str(s))
            }
            Tok::Sym("-") => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        Pattern::Lit(Literal::Int(-n))
                    }
                    Tok::Float(x) => {
                        self.bump();
                        Pattern::Lit(Literal::Float(-x))
                    }
                    _ => return self.error("a number"),
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let p = self.pattern()?;
                if self.eat_sym(",") {
                    let q = self.pattern()?;
                    self.expect_sym(")")?;
                    Pattern::Constr(name("Pair"), vec![p, q])
                } else {
                    self.expect_sym(")")?;
                    p
                }
            }
            Tok::Sym("[") => {
                self.bump();
                let mut items = Vec::new();
                if !self.at_sym("]") {
                    loop {
                        items.push(self.pattern()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                items
                    .into_iter()
                    .rev()
                    .fold(Pattern::Constr(name("Nil"), vec![]), |tail, p| {
                        Pattern::Constr(name("Cons"), vec![p, tail])
                    })
            }
            Tok::Sym("{") => {
                self.bump();
                let mut fields: Vec<(Name, Pattern)> = Vec::new();
                if !self.at_sym("}") {
                    loop {
                        let fspan = self.span();
                        let n = self.ident()?;
                        let p = if self.eat_sym(":") {
                            self.pattern()?
                        } else {
                            Pattern::Var(n.clone())
                        };
                        if fields.iter().any(|(m, _)| *m == n) {
                            return Err(SurfaceError {
                                kind: SurfaceErrorKind::DuplicateField(n.to_string()),
                                span: Some(fspan),
                            });
                        }
                        fields.push((n, p));
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                fields.sort_by(|a, b| a.0.cmp(&b.0));
                Pattern::Record(fields)
            }
            _ => return self.error("a pattern"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(e: &SExpr) -> String {
        match &e.kind {
            SExprKind::Var(x) | SExprKind::Constr(x) => x.to_string(),
            SExprKind::Int(n) => n.to_string(),
            SExprKind::Float(x) => x.to_string(),
            SExprKind::App(f, a) => format!("({} {})", show(f), show(a)),
            SExprKind::BinOp(op, a, b) => format!("({} {} {})", show(a), op.symbol(), show(b)),
            SExprKind::Neg(a) => format!("(-{})", show(a)),
            SExprKind::Project(a, f) => format!("{}.{f}", show(a)),
            SExprKind::List(xs) => {
                format!("[{}]", xs.iter().map(show).collect::<Vec<_>>().join(", "))
            }
            other => format!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a + b * c ** d ** e - f").unwrap();
        assert_eq!(show(&e), "((a + (b * (c ** (d ** e)))) - f)");
        let e = parse_expr("x : y : xs ++ ys").unwrap();
        assert_eq!(show(&e), "(x : (y : (xs ++ ys)))");
        let e = parse_expr("f x.a (g y) + -1").unwrap();
        assert_eq!(show(&e), "(((f x.a) (g y)) + (-1))");
        let e = parse_expr("a < b && c == d || e").unwrap();
        assert_eq!(show(&e), "(((a < b) && (c == d)) || e)");
        assert!(parse_expr("a < b < c").is_err());
    }

    #[test]
    fn forms() {
        let e = parse_expr("fun x -> x").unwrap();
        let SExprKind::Fun(c) = &e.kind else { panic!() };
        assert_eq!(c.patterns, vec![Pattern::Var(name("x"))]);
        let e = parse_expr("[1, 2]").unwrap();
        assert_eq!(show(&e), "[1, 2]");
        let e = parse_expr("match xs with | Nil -> 0 | x : rest -> x").unwrap();
        let SExprKind::Match(_, cs) = &e.kind else {
            panic!()
        };
        assert_eq!(cs.len(), 2);
        assert_eq!(
            cs[1].patterns[0],
            Pattern::Constr(
                name("Cons"),
                vec![Pattern::Var(name("x")), Pattern::Var(name("rest"))]
            )
        );
        assert!(matches!(
            parse_expr("(+)").unwrap().kind,
            SExprKind::Section(BinOp::Add)
        ));
        assert!(matches!(
            parse_expr("(1, 2)").unwrap().kind,
            SExprKind::Tuple(..)
        ));
        assert!(matches!(
            parse_expr("{x: 1, y: 2}").unwrap().kind,
            SExprKind::Record(_)
        ));
        assert!(matches!(
            parse_expr("1 + if a then 2 else 3").unwrap().kind,
            SExprKind::BinOp(..)
        ));
    }

    #[test]
    fn piecewise_definition() {
        let src = "def baz (Cons y ys) x = x;\ndef baz Nil x = x;\nbaz";
        let p = parse(src).unwrap();
        let Item::Defs(defs) = &p.items[0] else {
            panic!()
        };
        assert_eq!(defs.len(), 1);
        assert_eq!(defs[0].clauses.len(), 2);
        assert!(defs[0].clauses.iter().all(|c| c.patterns.len() == 2));
    }

    #[test]
    fn top_level_items() {
        let p =
            parse("dataset data;\nlet d2 = 2;\nlet twice f x = f (f x);\nlet y = 1 in y").unwrap();
        assert_eq!(p.datasets(), vec![name("data")]);
        assert!(matches!(p.items[1], Item::Let(..)));
        assert!(matches!(p.items[2], Item::Defs(_)));
        assert!(matches!(p.body.kind, SExprKind::Let(..)));
    }

    #[test]
    fn errors() {
        let e = parse("def f x = ;").unwrap_err();
        assert_eq!(
            e.span,
            Some(Span {
                line: 1,
                column: 11
            })
        );
        assert!(parse("def f x = 1; def g y = 2; def f z = 3; 0").is_err());
        assert!(parse("f (").is_err());
        assert!(parse("{x: 1").is_err());
    }

    #[test]
    fn record_pattern_punning() {
        let p = parse("def f {y, x: z} = z; f").unwrap();
        let Item::Defs(d) = &p.items[0] else { panic!() };
        assert_eq!(
            d[0].clauses[0].patterns[0],
            Pattern::Record(vec![
                (name("x"), Pattern::Var(name("z"))),
                (name("y"), Pattern::Var(name("y")))
            ])
        );
    }
}
