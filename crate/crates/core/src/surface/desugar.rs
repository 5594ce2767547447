//! Surface programs to core expressions.
//!
//! Piecewise clauses are merged column by column into one eliminator trie.
//! Within a trie node, head patterns are processed together: variables must
//! agree on a name, constructors split the node by head constructor, records
//! must name the same fields, and literals bind a fresh variable whose value
//! is tested when the clause body is reached. Variables may only be aligned
//! with other kinds of pattern once the clauses have been told apart.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::lang::{
    free_variables, name, ConstructorSig, Continuation, Eliminator, Expr, Name, RecDefs, Span,
};

use super::ast::*;
use super::{SurfaceError, SurfaceErrorKind};

type Builder = Box<dyn Fn(Vec<Expr>) -> Expr>;

/// Why a set of clauses cannot be merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseProblem {
    /// Clause arities differ.
    Arity(Vec<usize>),
    /// A variable pattern lines up with another kind of pattern.
    Misaligned(Vec<&'static str>),
    /// Aligned variable patterns have different names.
    VariableNames(Vec<String>),
    /// Aligned record patterns name different fields.
    RecordFields,
    /// Aligned literals have different types.
    LiteralTypes(Vec<&'static str>),
    /// A clause can never be reached.
    Redundant {
        shadowed_by: usize,
    },
    UnknownConstructor(String),
    PatternArity {
        constructor: String,
        expected: usize,
        found: usize,
    },
}

/// A rejected clause group, naming the 1-based column and clauses involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseDiagnostic {
    pub definition: String,
    pub column: usize,
    pub clauses: Vec<usize>,
    pub problem: ClauseProblem,
}

impl fmt::Display for ClauseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses = self
            .clauses
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(
            f,
            "{}, column {}, clauses {clauses}: ",
            self.definition, self.column
        )?;
        match &self.problem {
            ClauseProblem::Arity(ns) => {
                write!(f, "clauses take different numbers of arguments {ns:?}")
            }
            ClauseProblem::Misaligned(kinds) => write!(
                f,
                "patterns of kinds {} are aligned before the clauses are distinguished",
                kinds.join("/")
            ),
            ClauseProblem::VariableNames(names) => {
                write!(
                    f,
                    "aligned variables must share one name, found {}",
                    names.join(", ")
                )
            }
            ClauseProblem::RecordFields => {
                write!(f, "aligned record patterns name different fields")
            }
            ClauseProblem::LiteralTypes(tys) => {
                write!(f, "aligned literals have different types {}", tys.join("/"))
            }
            ClauseProblem::Redundant { shadowed_by } => {
                write!(f, "unreachable, already matched by clause {shadowed_by}")
            }
            ClauseProblem::UnknownConstructor(c) => write!(f, "unknown constructor {c}"),
            ClauseProblem::PatternArity {
                constructor,
                expected,
                found,
            } => {
                write!(
                    f,
                    "{constructor} takes {expected} arguments, pattern has {found}"
                )
            }
        }
    }
}

/// Checks that `clauses` merge into a single eliminator.
pub fn check_clauses(
    clauses: &[Clause],
    sig: &ConstructorSig,
) -> Result<(), Vec<ClauseDiagnostic>> {
    let mut d = Desugarer::new(sig);
    match d.clauses("<clauses>", clauses) {
        Ok(_) => Ok(()),
        Err(SurfaceError {
            kind: SurfaceErrorKind::Clause(diag),
            ..
        }) => Err(vec![diag]),
        // Errors inside bodies are not about the clause structure.
        Err(_) => Ok(()),
    }
}

/// Desugars a whole program. Dataset names stay free.
pub fn desugar(p: &SurfaceProgram, sig: &ConstructorSig) -> Result<Expr, SurfaceError> {
    let mut d = Desugarer::new(sig);
    enum Wrap {
        Let(Name, Expr),
        Rec(Vec<RecDefs>),
    }
    let mut wraps = Vec::new();
    for item in &p.items {
        match item {
            Item::Dataset(..) => {}
            Item::Let(x, e, _) => wraps.push(Wrap::Let(x.clone(), d.expr(e)?)),
            Item::Defs(defs) => wraps.push(Wrap::Rec(d.block(defs)?)),
        }
    }
    let mut body = d.expr(&p.body)?;
    for w in wraps.into_iter().rev() {
        match w {
            Wrap::Let(x, e) => body = Expr::Let(x, Box::new(e), Box::new(body)),
            Wrap::Rec(groups) => {
                for g in groups.into_iter().rev() {
                    body = Expr::let_rec(g, body);
                }
            }
        }
    }
    Ok(body)
}

/// Desugars a single expression.
pub fn desugar_expr(e: &SExpr, sig: &ConstructorSig) -> Result<Expr, SurfaceError> {
    Desugarer::new(sig).expr(e)
}

struct Row<'c> {
    clause: usize,
    /// Top of stack last.
    stack: Vec<&'c Pattern>,
    rest: &'c [Pattern],
    body: &'c SExpr,
    guards: Vec<(Name, &'c Literal)>,
}

struct Desugarer<'s> {
    sig: &'s ConstructorSig,
    fresh: usize,
    definition: String,
}

fn at(span: Span, e: Expr) -> Expr {
    Expr::At(span, Box::new(e))
}

fn clause_err(span: Span, diag: ClauseDiagnostic) -> SurfaceError {
    SurfaceError {
        kind: SurfaceErrorKind::Clause(diag),
        span: Some(span),
    }
}

fn if_then_else(c: Expr, t: Expr, e: Expr) -> Expr {
    let elim = Eliminator::Constr(
        [
            (name("True"), Continuation::term(t)),
            (name("False"), Continuation::term(e)),
        ]
        .into_iter()
        .collect(),
    );
    Expr::app(Expr::function(elim), c)
}

/// Raises a match failure when evaluated.
fn no_match() -> Expr {
    Expr::app(
        Expr::function(Eliminator::Constr(BTreeMap::new())),
        Expr::constr("NoMatch", vec![]),
    )
}

fn literal(l: &Literal) -> Expr {
    match l {
        Literal::Int(n) => Expr::Int(*n),
        Literal::Float(x) => Expr::Float(*x),
        Literal::Str(s) => Expr::Str(s.clone()),
    }
}

impl<'s> Desugarer<'s> {
    fn new(sig: &'s ConstructorSig) -> Self {
        Desugarer {
            sig,
            fresh: 0,
            definition: String::new(),
        }
    }

    fn fresh(&mut self, prefix: &str) -> Name {
        self.fresh += 1;
        name(&format!("${prefix}{}", self.fresh))
    }

    fn expr(&mut self, e: &SExpr) -> Result<Expr, SurfaceError> {
        let span = e.span;
        Ok(match &e.kind {
            SExprKind::Var(x) => at(span, Expr::Var(x.clone())),
            SExprKind::Int(n) => Expr::Int(*n),
            SExprKind::Float(x) => Expr::Float(*x),
            SExprKind::Str(s) => Expr::Str(s.clone()),
            SExprKind::Constr(_) | SExprKind::App(..) | SExprKind::Section(_) => {
                self.application(e)?
            }
            SExprKind::BinOp(op, a, b) => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                at(span, binop(*op, a, b))
            }
            SExprKind::Neg(inner) => match &inner.kind {
                SExprKind::Int(n) => Expr::Int(-n),
                SExprKind::Float(x) => Expr::Float(-x),
                _ => at(
                    span,
                    Expr::foreign("minus", vec![Expr::Int(0), self.expr(inner)?]),
                ),
            },
            SExprKind::Fun(clause) => {
                let saved = std::mem::replace(&mut self.definition, "fun".into());
                let f = self.clauses("fun", std::slice::from_ref(&**clause));
                self.definition = saved;
                Expr::function(f?)
            }
            SExprKind::Match(s, clauses) => {
                let scrutinee = self.expr(s)?;
                let saved = std::mem::replace(&mut self.definition, "match".into());
                let elim = self.clauses("match", clauses);
                self.definition = saved;
                at(span, Expr::app(Expr::function(elim?), scrutinee))
            }
            SExprKind::If(c, t, f) => {
                let (c, t, f) = (self.expr(c)?, self.expr(t)?, self.expr(f)?);
                at(span, if_then_else(c, t, f))
            }
            SExprKind::Let(x, a, b) => Expr::let_(x, self.expr(a)?, self.expr(b)?),
            SExprKind::LetFun(def, b) => {
                let mut defs = RecDefs::new();
                defs.insert(def.name.clone(), self.def(def)?);
                Expr::let_rec(defs, self.expr(b)?)
            }
            SExprKind::Record(fields) => {
                let mut out = Vec::with_capacity(fields.len());
                for (n, fe) in fields {
                    if out.iter().any(|(m, _): &(Name, Expr)| m == n) {
                        return Err(SurfaceError {
                            kind: SurfaceErrorKind::DuplicateField(n.to_string()),
                            span: Some(fe.span),
                        });
                    }
                    out.push((n.clone(), self.expr(fe)?));
                }
                Expr::record(out)
            }
            SExprKind::Project(r, f) => at(span, Expr::project(self.expr(r)?, f)),
            SExprKind::List(items) => {
                let items = items
                    .iter()
                    .map(|i| self.expr(i))
                    .collect::<Result<Vec<_>, _>>()?;
                items
                    .into_iter()
                    .rev()
                    .fold(Expr::constr("Nil", vec![]), |tail, x| {
                        Expr::constr("Cons", vec![x, tail])
                    })
            }
            SExprKind::Tuple(a, b) => Expr::constr("Pair", vec![self.expr(a)?, self.expr(b)?]),
        })
    }

    /// Application spines, saturating constructors and operator sections.
    fn application(&mut self, e: &SExpr) -> Result<Expr, SurfaceError> {
        let mut args = Vec::new();
        let mut head = e;
        while let SExprKind::App(f, a) = &head.kind {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        let span = head.span;
        let mut args: Vec<Expr> = args
            .into_iter()
            .map(|a| self.expr(a))
            .collect::<Result<_, _>>()?;
        let (arity, build): (usize, Builder) = match &head.kind {
            SExprKind::Constr(c) => {
                let arity = self.sig.arity(c).ok_or_else(|| SurfaceError {
                    kind: SurfaceErrorKind::UnknownConstructor(c.to_string()),
                    span: Some(span),
                })?;
                if args.len() > arity {
                    return Err(SurfaceError {
                        kind: SurfaceErrorKind::ConstructorOverApplied {
                            constructor: c.to_string(),
                            arity,
                            found: args.len(),
                        },
                        span: Some(span),
                    });
                }
                let c = c.clone();
                (arity, Box::new(move |xs| Expr::Constr(c.clone(), xs)))
            }
            SExprKind::Section(op) if args.len() < 2 && op.foreign().is_some() => {
                let mut f = at(span, Expr::var(op.foreign().expect("foreign operator")));
                for a in args {
                    f = at(span, Expr::app(f, a));
                }
                return Ok(f);
            }
            SExprKind::Section(op) => {
                let op = *op;
                (
                    2,
                    Box::new(move |mut xs| {
                        let b = xs.pop().expect("two operands");
                        let a = xs.pop().expect("two operands");
                        binop(op, a, b)
                    }),
                )
            }
            _ => {
                let mut f = self.expr(head)?;
                for a in args {
                    f = at(span, Expr::app(f, a));
                }
                return Ok(f);
            }
        };
        let take = args.len().min(arity);
        let extra = args.split_off(take);
        let missing = arity - take;
        let vars: Vec<Name> = (0..missing).map(|_| self.fresh("a")).collect();
        args.extend(vars.iter().map(|v| Expr::Var(v.clone())));
        let mut out = build(args);
        for v in vars.iter().rev() {
            out = Expr::function(Eliminator::Var(v.clone(), Continuation::term(out)));
        }
        for a in extra {
            out = at(span, Expr::app(out, a));
        }
        Ok(out)
    }

    /// A block of definitions, split into strongly connected groups with
    /// dependencies first.
    fn block(&mut self, defs: &[Def]) -> Result<Vec<RecDefs>, SurfaceError> {
        let mut elims = Vec::with_capacity(defs.len());
        for d in defs {
            elims.push(self.def(d)?);
        }
        let names: Vec<&Name> = defs.iter().map(|d| &d.name).collect();
        let deps: Vec<Vec<usize>> = elims
            .iter()
            .map(|s| {
                free_variables(&Expr::Function(Arc::new(s.clone())))
                    .iter()
                    .filter_map(|x| names.iter().position(|n| *n == x))
                    .collect()
            })
            .collect();
        let mut groups = Vec::new();
        for comp in strongly_connected(&deps) {
            let mut g = RecDefs::new();
            for i in comp {
                g.insert(defs[i].name.clone(), elims[i].clone());
            }
            groups.push(g);
        }
        Ok(groups)
    }

    fn def(&mut self, d: &Def) -> Result<Eliminator, SurfaceError> {
        if d.clauses.iter().any(|c| c.patterns.is_empty()) {
            return Err(SurfaceError {
                kind: SurfaceErrorKind::MissingParameters(d.name.to_string()),
                span: Some(d.span),
            });
        }
        let saved = std::mem::replace(&mut self.definition, d.name.to_string());
        let out = self.clauses(&d.name, &d.clauses);
        self.definition = saved;
        out
    }

    fn clauses(&mut self, def_name: &str, clauses: &[Clause]) -> Result<Eliminator, SurfaceError> {
        self.definition = def_name.to_string();
        let arities: Vec<usize> = clauses.iter().map(|c| c.patterns.len()).collect();
        if arities.iter().any(|&n| n != arities[0]) {
            return Err(clause_err(
                clauses[0].span,
                ClauseDiagnostic {
                    definition: def_name.to_string(),
                    column: 0,
                    clauses: (1..=clauses.len()).collect(),
                    problem: ClauseProblem::Arity(arities),
                },
            ));
        }
        let rows = clauses
            .iter()
            .enumerate()
            .map(|(i, c)| Row {
                clause: i + 1,
                stack: vec![],
                rest: &c.patterns,
                body: &c.body,
                guards: vec![],
            })
            .collect();
        let spans: Vec<Span> = clauses.iter().map(|c| c.span).collect();
        self.function(rows, 1, &spans)
    }

    /// Starts matching the next top-level column.
    fn function(
        &mut self,
        mut rows: Vec<Row<'_>>,
        column: usize,
        spans: &[Span],
    ) -> Result<Eliminator, SurfaceError> {
        for r in &mut rows {
            r.stack.push(&r.rest[0]);
            r.rest = &r.rest[1..];
        }
        match self.cont(rows, column, spans)? {
            Continuation::Elim(s) => Ok(*s),
            Continuation::Term(_) => unreachable!("a column always starts with a pattern"),
        }
    }

    fn diag(
        &self,
        rows: &[Row<'_>],
        column: usize,
        spans: &[Span],
        problem: ClauseProblem,
    ) -> SurfaceError {
        clause_err(
            spans[rows[0].clause - 1],
            ClauseDiagnostic {
                definition: self.definition.clone(),
                column,
                clauses: rows.iter().map(|r| r.clause).collect(),
                problem,
            },
        )
    }

    fn cont(
        &mut self,
        mut rows: Vec<Row<'_>>,
        column: usize,
        spans: &[Span],
    ) -> Result<Continuation, SurfaceError> {
        if rows[0].stack.is_empty() {
            if !rows[0].rest.is_empty() {
                return Ok(Continuation::term(Expr::function(self.function(
                    rows,
                    column + 1,
                    spans,
                )?)));
            }
            return self.leaf(rows, column, spans).map(Continuation::term);
        }
        let heads: Vec<&Pattern> = rows
            .iter()
            .map(|r| *r.stack.last().expect("non-empty stack"))
            .collect();
        let mut kinds: Vec<&'static str> = heads.iter().map(|p| p.kind()).collect();
        kinds.dedup();
        if kinds.len() > 1 {
            let mut all: Vec<&'static str> = heads.iter().map(|p| p.kind()).collect();
            all.sort();
            all.dedup();
            return Err(self.diag(&rows, column, spans, ClauseProblem::Misaligned(all)));
        }
        match heads[0] {
            Pattern::Var(_) | Pattern::Wild => {
                let mut names: Vec<String> = Vec::new();
                for p in &heads {
                    if let Pattern::Var(x) = p {
                        if !names.iter().any(|n| **n == **x) {
                            names.push(x.to_string());
                        }
                    }
                }
                if names.len() > 1 {
                    return Err(self.diag(
                        &rows,
                        column,
                        spans,
                        ClauseProblem::VariableNames(names),
                    ));
                }
                let x = names.pop().unwrap_or_else(|| "_".into());
                for r in &mut rows {
                    r.stack.pop();
                }
                Ok(Continuation::elim(Eliminator::Var(
                    name(&x),
                    self.cont(rows, column, spans)?,
                )))
            }
            Pattern::Constr(..) => {
                let mut groups: BTreeMap<Name, Vec<Row<'_>>> = BTreeMap::new();
                for mut r in rows {
                    let Some(Pattern::Constr(c, args)) = r.stack.pop() else {
                        unreachable!()
                    };
                    let arity = match self.sig.arity(c) {
                        Some(n) => n,
                        None => {
                            return Err(self.diag(
                                &[r],
                                column,
                                spans,
                                ClauseProblem::UnknownConstructor(c.to_string()),
                            ))
                        }
                    };
                    if arity != args.len() {
                        let problem = ClauseProblem::PatternArity {
                            constructor: c.to_string(),
                            expected: arity,
                            found: args.len(),
                        };
                        return Err(self.diag(&[r], column, spans, problem));
                    }
                    r.stack.extend(args.iter().rev());
                    groups.entry(c.clone()).or_default().push(r);
                }
                let mut branches = BTreeMap::new();
                for (c, rs) in groups {
                    branches.insert(c, self.cont(rs, column, spans)?);
                }
                Ok(Continuation::elim(Eliminator::Constr(branches)))
            }
            Pattern::Record(fields) => {
                let names: Vec<Name> = fields.iter().map(|(n, _)| n.clone()).collect();
                for p in &heads {
                    let Pattern::Record(fs) = p else {
                        unreachable!()
                    };
                    if fs.len() != names.len() || fs.iter().zip(&names).any(|((a, _), b)| a != b) {
                        return Err(self.diag(&rows, column, spans, ClauseProblem::RecordFields));
                    }
                }
                for r in &mut rows {
                    let Some(Pattern::Record(fs)) = r.stack.pop() else {
                        unreachable!()
                    };
                    r.stack.extend(fs.iter().rev().map(|(_, p)| p));
                }
                Ok(Continuation::elim(Eliminator::Record(
                    names,
                    self.cont(rows, column, spans)?,
                )))
            }
            Pattern::Lit(_) => {
                let mut tys: Vec<&'static str> = heads
                    .iter()
                    .map(|p| match p {
                        Pattern::Lit(l) => l.type_name(),
                        _ => unreachable!(),
                    })
                    .collect();
                tys.sort();
                tys.dedup();
                if tys.len() > 1 {
                    return Err(self.diag(&rows, column, spans, ClauseProblem::LiteralTypes(tys)));
                }
                let x = self.fresh("l");
                for r in &mut rows {
                    let Some(Pattern::Lit(l)) = r.stack.pop() else {
                        unreachable!()
                    };
                    r.guards.push((x.clone(), l));
                }
                Ok(Continuation::elim(Eliminator::Var(
                    x,
                    self.cont(rows, column, spans)?,
                )))
            }
        }
    }

    /// All patterns matched: try each clause's literal tests in order.
    fn leaf(
        &mut self,
        rows: Vec<Row<'_>>,
        column: usize,
        spans: &[Span],
    ) -> Result<Expr, SurfaceError> {
        if let Some(i) = rows.iter().position(|r| r.guards.is_empty()) {
            if i + 1 < rows.len() {
                let problem = ClauseProblem::Redundant {
                    shadowed_by: rows[i].clause,
                };
                return Err(self.diag(&rows[i + 1..], column, spans, problem));
            }
        }
        let mut bodies = Vec::with_capacity(rows.len());
        for r in &rows {
            bodies.push(self.expr(r.body)?);
        }
        let mut acc = if rows.last().is_some_and(|r| r.guards.is_empty()) {
            None
        } else {
            Some(no_match())
        };
        for (r, body) in rows.iter().zip(bodies).rev() {
            acc = Some(match acc {
                None => body,
                Some(otherwise) => {
                    let test = r
                        .guards
                        .iter()
                        .map(|(x, l)| Expr::foreign("eq", vec![Expr::Var(x.clone()), literal(l)]))
                        .reduce(|a, b| Expr::foreign("and", vec![a, b]))
                        .expect("guarded row");
                    if_then_else(test, body, otherwise)
                }
            });
        }
        Ok(acc.expect("at least one row"))
    }
}

fn binop(op: BinOp, a: Expr, b: Expr) -> Expr {
    match op {
        BinOp::Cons => Expr::constr("Cons", vec![a, b]),
        BinOp::Neq => Expr::foreign("not", vec![Expr::foreign("eq", vec![a, b])]),
        _ => Expr::foreign(op.foreign().expect("foreign operator"), vec![a, b]),
    }
}

/// Tarjan's algorithm; components come out dependencies first, members in
/// index order.
fn strongly_connected(deps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'d> {
        deps: &'d [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.deps[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("component member");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort();
            s.out.push(comp);
        }
    }
    let n = deps.len();
    let mut s = State {
        deps,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: vec![],
        next: 0,
        out: vec![],
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::parse;

    fn defs(src: &str) -> Vec<Clause> {
        let p = parse(&format!("{src}\n0")).unwrap();
        let Item::Defs(d) = &p.items[0] else { panic!() };
        d[0].clauses.clone()
    }

    #[test]
    fn scc_order() {
        // 0 -> 1 -> 0, 2 -> 0, 3 alone
        let comps = strongly_connected(&[vec![1], vec![0], vec![0], vec![]]);
        assert_eq!(comps, vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn constructor_columns_merge() {
        let sig = ConstructorSig::default();
        let cs = defs("def len Nil = 0;\ndef len (Cons x xs) = 1 + len xs;");
        assert!(check_clauses(&cs, &sig).is_ok());
        let mut d = Desugarer::new(&sig);
        let s = d.clauses("len", &cs).unwrap();
        assert_eq!(
            s.to_string(),
            "(elim-constr (Cons (elim-var x (elim-var xs (foreign plus 1 (app len xs))))) (Nil 0))"
        );
    }

    #[test]
    fn misaligned_variable_rejected() {
        let sig = ConstructorSig::default();
        let cs = defs("def f (Cons y ys) = 1;\ndef f x = 2;");
        let err = check_clauses(&cs, &sig).unwrap_err();
        assert_eq!(err[0].column, 1);
        assert_eq!(err[0].clauses, vec![1, 2]);
        assert!(matches!(err[0].problem, ClauseProblem::Misaligned(_)));
    }

    #[test]
    fn literals_become_tests() {
        let sig = ConstructorSig::default();
        let cs = defs("def f 0 = 10;\ndef f 1 = 20;");
        let mut d = Desugarer::new(&sig);
        let s = d.clauses("f", &cs).unwrap();
        let text = s.to_string();
        assert!(text.starts_with("(elim-var $l1 "), "{text}");
        assert!(text.contains("(foreign eq $l1 0)"), "{text}");
        assert!(text.contains("NoMatch"), "{text}");
    }

    #[test]
    fn redundant_and_arity() {
        let sig = ConstructorSig::default();
        let err = check_clauses(&defs("def f x = 1;\ndef f x = 2;"), &sig).unwrap_err();
        assert_eq!(err[0].problem, ClauseProblem::Redundant { shadowed_by: 1 });
        let err = check_clauses(&defs("def f x = 1;\ndef f x y = 2;"), &sig).unwrap_err();
        assert!(matches!(err[0].problem, ClauseProblem::Arity(_)));
        let err = check_clauses(&defs("def f (Cons x) = 1;"), &sig).unwrap_err();
        assert!(matches!(err[0].problem, ClauseProblem::PatternArity { .. }));
        let err = check_clauses(&defs("def f {a: x} = 1;\ndef f {b: x} = 2;"), &sig).unwrap_err();
        assert_eq!(err[0].problem, ClauseProblem::RecordFields);
    }

    #[test]
    fn constructor_eta_expansion() {
        let sig = ConstructorSig::default();
        let p = parse("Cons 1").unwrap();
        let e = desugar(&p, &sig).unwrap();
        assert_eq!(e.to_string(), "(fun (elim-var $a1 (Cons 1 $a1)))");
        let p = parse("Nil 1").unwrap();
        assert!(matches!(
            desugar(&p, &sig).unwrap_err().kind,
            SurfaceErrorKind::ConstructorOverApplied { .. }
        ));
    }
}
