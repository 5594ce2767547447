use std::sync::Arc;

use crate::lang::{Name, Span};

#[derive(Debug, Clone, PartialEq)]
pub struct SExpr {
    pub kind: SExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    Cons,
    Concat,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
}

impl BinOp {
    /// Foreign function implementing the operator, if it is one.
    pub fn foreign(self) -> Option<&'static str> {
        Some(match self {
            BinOp::Or => "or",
            BinOp::And => "and",
            BinOp::Eq => "eq",
            BinOp::Lt => "lt",
            BinOp::Leq => "leq",
            BinOp::Gt => "gt",
            BinOp::Geq => "geq",
            BinOp::Concat => "concat",
            BinOp::Add => "plus",
            BinOp::Sub => "minus",
            BinOp::Mul => "times",
            BinOp::Div => "div",
            BinOp::Mod => "mod",
            BinOp::Pow => "pow",
            BinOp::Neq | BinOp::Cons => return None,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "||",
            BinOp::And => "&&",
            BinOp::Eq => "==",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
            BinOp::Leq => "<=",
            BinOp::Gt => ">",
            BinOp::Geq => ">=",
            BinOp::Cons => ":",
            BinOp::Concat => "++",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Pow => "**",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExprKind {
    Var(Name),
    Constr(Name),
    Int(i64),
    Float(f64),
    Str(Arc<str>),
    App(Box<SExpr>, Box<SExpr>),
    BinOp(BinOp, Box<SExpr>, Box<SExpr>),
    Neg(Box<SExpr>),
    /// An operator in parentheses, as a function.
    Section(BinOp),
    Fun(Box<Clause>),
    Match(Box<SExpr>, Vec<Clause>),
    If(Box<SExpr>, Box<SExpr>, Box<SExpr>),
    Let(Name, Box<SExpr>, Box<SExpr>),
    /// `let f p.. = e in body`: a local recursive function.
    LetFun(Box<Def>, Box<SExpr>),
    Record(Vec<(Name, SExpr)>),
    Project(Box<SExpr>, Name),
    List(Vec<SExpr>),
    Tuple(Box<SExpr>, Box<SExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Str(Arc<str>),
}

impl Literal {
    pub fn type_name(&self) -> &'static str {
        match self {
            Literal::Int(_) => "int",
            Literal::Float(_) => "float",
            Literal::Str(_) => "string",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    Var(Name),
    Wild,
    Constr(Name, Vec<Pattern>),
    /// Fields sorted by name.
    Record(Vec<(Name, Pattern)>),
    Lit(Literal),
}

impl Pattern {
    pub fn kind(&self) -> &'static str {
        match self {
            Pattern::Var(_) | Pattern::Wild => "variable",
            Pattern::Constr(..) => "constructor",
            Pattern::Record(_) => "record",
            Pattern::Lit(_) => "literal",
        }
    }

    /// Variables bound by the pattern, left to right.
    pub fn variables(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Var(x) => out.push(x.clone()),
            Pattern::Wild | Pattern::Lit(_) => {}
            Pattern::Constr(_, ps) => ps.iter().for_each(|p| p.variables(out)),
            Pattern::Record(fs) => fs.iter().for_each(|(_, p)| p.variables(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub patterns: Vec<Pattern>,
    pub body: SExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Def {
    pub name: Name,
    pub clauses: Vec<Clause>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Dataset(Name, Span),
    Let(Name, SExpr, Span),
    /// Consecutive `def`s, mutually recursive.
    Defs(Vec<Def>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProgram {
    pub items: Vec<Item>,
    pub body: SExpr,
}

impl SurfaceProgram {
    pub fn datasets(&self) -> Vec<Name> {
        self.items
            .iter()
            .filter_map(|i| match i {
                Item::Dataset(n, _) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }
}
