//! Matching a stack of values against a continuation.

use thiserror::Error;

use crate::lang::{Address, Continuation, Eliminator, Expr, Name, RawValue, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("no branch for constructor {0}")]
    NoBranch(String),
    #[error("record has no field {0}")]
    MissingField(String),
    #[error("expected a constructor value, found a {0}")]
    NotAConstructor(&'static str),
    #[error("expected a record, found a {0}")]
    NotARecord(&'static str),
    #[error("pattern complete but {0} value(s) remain unmatched")]
    Leftover(usize),
    #[error("eliminator expects a value but the match stack is empty")]
    Underflow,
}

/// Outcome of a successful match: bindings in the order they were made,
/// the selected branch, and the addresses consumed along the way.
#[derive(Debug)]
pub struct MatchResult<'k> {
    pub bindings: Vec<(Name, Value)>,
    pub branch: &'k Expr,
    pub consumed: Vec<Address>,
}

enum Cursor<'k> {
    Cont(&'k Continuation),
    Elim(&'k Eliminator),
}

/// Matches `stack` (first element on top) against `k`.
pub fn match_stack<'k>(
    stack: Vec<Value>,
    k: &'k Continuation,
) -> Result<MatchResult<'k>, MatchError> {
    run(stack, Cursor::Cont(k))
}

/// Matches `stack` against an eliminator, as function application does.
pub fn match_elim<'k>(
    stack: Vec<Value>,
    elim: &'k Eliminator,
) -> Result<MatchResult<'k>, MatchError> {
    run(stack, Cursor::Elim(elim))
}

fn run<'k>(mut stack: Vec<Value>, mut cursor: Cursor<'k>) -> Result<MatchResult<'k>, MatchError> {
    // Top of stack is the last element.
    stack.reverse();
    let mut bindings = Vec::new();
    let mut consumed = Vec::new();
    loop {
        let elim = match cursor {
            Cursor::Cont(Continuation::Term(e)) => {
                if !stack.is_empty() {
                    return Err(MatchError::Leftover(stack.len()));
                }
                return Ok(MatchResult {
                    bindings,
                    branch: e,
                    consumed,
                });
            }
            Cursor::Cont(Continuation::Elim(s)) => &**s,
            Cursor::Elim(s) => s,
        };
        let v = stack.pop().ok_or(MatchError::Underflow)?;
        match elim {
            Eliminator::Var(x, k) => {
                bindings.push((x.clone(), v));
                cursor = Cursor::Cont(k);
            }
            Eliminator::Record(fields, k) => {
                let RawValue::Record(_) = &*v.raw else {
                    return Err(MatchError::NotARecord(v.raw.kind()));
                };
                for y in fields.iter().rev() {
                    let u = v
                        .raw
                        .field(y)
                        .ok_or_else(|| MatchError::MissingField(y.to_string()))?;
                    stack.push(u.clone());
                }
                consumed.push(v.addr);
                cursor = Cursor::Cont(k);
            }
            Eliminator::Constr(branches) => {
                let RawValue::Constr(c, args) = &*v.raw else {
                    return Err(MatchError::NotAConstructor(v.raw.kind()));
                };
                let k = branches
                    .get(c)
                    .ok_or_else(|| MatchError::NoBranch(c.to_string()))?;
                stack.extend(args.iter().rev().cloned());
                consumed.push(v.addr);
                cursor = Cursor::Cont(k);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::name;

    fn at(raw: RawValue, a: u32) -> Value {
        Value::new(raw, Address(a))
    }

    fn int(n: i64, a: u32) -> Value {
        at(RawValue::Int(n), a)
    }

    #[test]
    fn done_on_empty_stack() {
        let k = Continuation::term(Expr::Int(1));
        let m = match_stack(vec![], &k).unwrap();
        assert!(m.bindings.is_empty());
        assert!(m.consumed.is_empty());
        assert_eq!(m.branch, &Expr::Int(1));
    }

    #[test]
    fn constructor_then_two_vars() {
        let nil = at(RawValue::Constr(name("Nil"), vec![]), 2);
        let cons = at(RawValue::Constr(name("Cons"), vec![int(1, 1), nil]), 0);
        let body = Expr::var("e");
        let k = Continuation::elim(Eliminator::constr([(
            "Cons",
            Continuation::elim(Eliminator::var(
                "x",
                Continuation::elim(Eliminator::var("y", Continuation::term(body.clone()))),
            )),
        )]));
        let m = match_stack(vec![cons], &k).unwrap();
        assert_eq!(m.branch, &body);
        assert_eq!(m.consumed, vec![Address(0)]);
        let names: Vec<_> = m
            .bindings
            .iter()
            .map(|(n, v)| (n.to_string(), v.addr))
            .collect();
        assert_eq!(
            names,
            vec![("x".into(), Address(1)), ("y".into(), Address(2))]
        );
    }

    #[test]
    fn record_subset() {
        let rec = at(
            RawValue::Record(vec![(name("x"), int(5, 1)), (name("y"), int(6, 2))]),
            0,
        );
        let k = Continuation::elim(Eliminator::record(
            &["y"],
            Continuation::elim(Eliminator::var("z", Continuation::term(Expr::var("z")))),
        ));
        let m = match_stack(vec![rec.clone()], &k).unwrap();
        assert_eq!(m.consumed, vec![Address(0)]);
        assert_eq!(m.bindings.len(), 1);
        assert_eq!(&*m.bindings[0].0, "z");
        assert_eq!(m.bindings[0].1.addr, Address(2));

        let missing = Continuation::elim(Eliminator::record(
            &["w"],
            Continuation::elim(Eliminator::var("z", Continuation::term(Expr::var("z")))),
        ));
        assert_eq!(
            match_stack(vec![rec], &missing).unwrap_err(),
            MatchError::MissingField("w".into())
        );
    }

    #[test]
    fn failures() {
        let nil = at(RawValue::Constr(name("Nil"), vec![]), 0);
        let only_cons = Continuation::elim(Eliminator::constr([(
            "Cons",
            Continuation::term(Expr::Int(0)),
        )]));
        assert_eq!(
            match_stack(vec![nil.clone()], &only_cons).unwrap_err(),
            MatchError::NoBranch("Nil".into())
        );
        let term = Continuation::term(Expr::Int(0));
        assert_eq!(
            match_stack(vec![nil], &term).unwrap_err(),
            MatchError::Leftover(1)
        );
        assert_eq!(
            match_stack(vec![], &only_cons).unwrap_err(),
            MatchError::Underflow
        );
        assert_eq!(
            match_stack(vec![int(1, 0)], &only_cons).unwrap_err(),
            MatchError::NotAConstructor("int")
        );
    }
}
