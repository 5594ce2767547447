//! The surface syntax: a parser and a desugarer into core expressions.
//!
//! ```
//! use cognate::surface;
//!
//! let core = surface::compile("def double x = x * 2;\ndouble 21").unwrap();
//! assert_eq!(core.to_string(), "(letrec ((double (elim-var x (foreign times x 2)))) (app double 21))");
//! ```

pub mod ast;
pub mod desugar;
pub mod lexer;
pub mod parser;

use std::fmt;

use crate::lang::{ConstructorSig, Expr, Span};

pub use ast::SurfaceProgram;
pub use desugar::{check_clauses, desugar, ClauseDiagnostic, ClauseProblem};
pub use parser::{parse, parse_expr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceErrorKind {
    #[error("{0}")]
    Lex(String),
    #[error("expected {expected}, found {found}")]
    Parse { expected: String, found: String },
    #[error("{0} is defined twice in one block")]
    DuplicateDefinition(String),
    #[error("field {0} appears twice")]
    DuplicateField(String),
    #[error("{0}")]
    Clause(ClauseDiagnostic),
    #[error("unknown constructor {0}")]
    UnknownConstructor(String),
    #[error("{constructor} takes {arity} arguments but is given {found}")]
    ConstructorOverApplied {
        constructor: String,
        arity: usize,
        found: usize,
    },
    #[error("{0} needs at least one parameter")]
    MissingParameters(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceError {
    pub kind: SurfaceErrorKind,
    pub span: Option<Span>,
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{s}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for SurfaceError {}

/// Parses and desugars with the default constructors.
pub fn compile(src: &str) -> Result<Expr, SurfaceError> {
    desugar(&parse(src)?, &ConstructorSig::default())
}
