//! A small functional language whose evaluator records a dynamic dependence
//! graph, and the queries that relate parts of a program's inputs and outputs.

pub mod eval;
pub mod graph;
pub mod lang;
pub mod query;
pub mod session;
pub mod surface;

pub use eval::{EvalError, Label, Machine};
pub use graph::{DepGraph, GraphError, Relation, Selection, Universe};
pub use lang::{Address, Expr, Value};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/language.md")]
    mod language {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/sessions.md")]
    mod sessions {}
}
