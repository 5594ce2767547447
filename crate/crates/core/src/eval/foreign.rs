//! Foreign functions and the built-in primitive set.
//!
//! Every primitive allocates one fresh vertex for its result, with an in-edge
//! from the root address of each argument. Nested structure inside arguments
//! is not consulted.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::Label;
use crate::lang::{name, Address, ForeignSig, Name, RawValue, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForeignError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{function}: expected {expected}, found {found}")]
    TypeMismatch {
        function: String,
        expected: &'static str,
        found: String,
    },
    #[error("{0}: integer overflow")]
    Overflow(String),
    #[error("unknown foreign function {0}")]
    Unknown(String),
    #[error("{function} expects {expected} arguments, got {found}")]
    Arity {
        function: String,
        expected: usize,
        found: usize,
    },
}

/// Fresh-vertex allocation, as seen by a foreign function.
pub trait Alloc {
    /// Allocates a fresh address depending on `deps` (duplicate-free).
    fn alloc(&mut self, label: Label, deps: &[Address]) -> Address;
}

pub type ForeignFn = dyn Fn(&[Value], &mut dyn Alloc) -> Result<Value, ForeignError> + Send + Sync;

#[derive(Clone)]
pub struct ForeignImpl {
    pub name: Name,
    pub arity: usize,
    pub apply: Arc<ForeignFn>,
}

impl fmt::Debug for ForeignImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ForeignImpl({}/{})", self.name, self.arity)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ForeignRegistry {
    impls: BTreeMap<Name, ForeignImpl>,
}

impl ForeignRegistry {
    pub fn empty() -> Self {
        ForeignRegistry::default()
    }

    /// plus, minus, times, div, mod, pow, eq, lt, leq, gt, geq, and, or, not,
    /// concat, intToFloat.
    pub fn primitives() -> Self {
        let mut r = ForeignRegistry::empty();
        for op in [
            Arith::Plus,
            Arith::Minus,
            Arith::Times,
            Arith::Div,
            Arith::Mod,
            Arith::Pow,
        ] {
            r.register_fn(op.name(), 2, move |args, alloc| arith(op, args, alloc));
        }
        for op in [Cmp::Eq, Cmp::Lt, Cmp::Leq, Cmp::Gt, Cmp::Geq] {
            r.register_fn(op.name(), 2, move |args, alloc| compare(op, args, alloc));
        }
        r.register_fn("and", 2, |args, alloc| {
            let (a, b) = (boolean("and", &args[0])?, boolean("and", &args[1])?);
            Ok(bool_result(a && b, args, alloc))
        });
        r.register_fn("or", 2, |args, alloc| {
            let (a, b) = (boolean("or", &args[0])?, boolean("or", &args[1])?);
            Ok(bool_result(a || b, args, alloc))
        });
        r.register_fn("not", 1, |args, alloc| {
            let a = boolean("not", &args[0])?;
            Ok(bool_result(!a, args, alloc))
        });
        r.register_fn("concat", 2, |args, alloc| {
            match (&*args[0].raw, &*args[1].raw) {
                (RawValue::Str(a), RawValue::Str(b)) => {
                    let s: Arc<str> = Arc::from(format!("{a}{b}"));
                    Ok(result(RawValue::Str(s), args, alloc))
                }
                (RawValue::Str(_), other) | (other, _) => Err(mismatch("concat", "string", other)),
            }
        });
        r.register_fn("intToFloat", 1, |args, alloc| match &*args[0].raw {
            RawValue::Int(n) => Ok(result(RawValue::Float(*n as f64), args, alloc)),
            RawValue::Float(x) => Ok(result(RawValue::Float(*x), args, alloc)),
            other => Err(mismatch("intToFloat", "number", other)),
        });
        r
    }

    pub fn register(&mut self, imp: ForeignImpl) {
        self.impls.insert(imp.name.clone(), imp);
    }

    pub fn register_fn(
        &mut self,
        f: &str,
        arity: usize,
        apply: impl Fn(&[Value], &mut dyn Alloc) -> Result<Value, ForeignError> + Send + Sync + 'static,
    ) {
        self.register(ForeignImpl {
            name: name(f),
            arity,
            apply: Arc::new(apply),
        });
    }

    pub fn get(&self, f: &str) -> Option<&ForeignImpl> {
        self.impls.get(f)
    }

    pub fn signature(&self) -> ForeignSig {
        let mut sig = ForeignSig::default();
        for imp in self.impls.values() {
            sig.insert(&imp.name, imp.arity);
        }
        sig
    }

    pub fn iter(&self) -> impl Iterator<Item = &ForeignImpl> {
        self.impls.values()
    }

    /// Applies `f`, checking the registry and the arity first.
    pub fn apply(
        &self,
        f: &str,
        args: &[Value],
        alloc: &mut dyn Alloc,
    ) -> Result<Value, ForeignError> {
        let imp = self
            .get(f)
            .ok_or_else(|| ForeignError::Unknown(f.to_string()))?;
        if imp.arity != args.len() {
            return Err(ForeignError::Arity {
                function: f.to_string(),
                expected: imp.arity,
                found: args.len(),
            });
        }
        (imp.apply)(args, alloc)
    }
}

/// Distinct root addresses of `args`, in argument order.
pub fn root_addresses(args: &[Value]) -> Vec<Address> {
    let mut deps: Vec<Address> = Vec::with_capacity(args.len());
    for a in args {
        if !deps.contains(&a.addr) {
            deps.push(a.addr);
        }
    }
    deps
}

/// Allocates `raw` with in-edges from every argument root.
pub fn result(raw: RawValue, args: &[Value], alloc: &mut dyn Alloc) -> Value {
    let addr = alloc.alloc(Label::of(&raw), &root_addresses(args));
    Value::new(raw, addr)
}

fn bool_result(b: bool, args: &[Value], alloc: &mut dyn Alloc) -> Value {
    let c = if b { "True" } else { "False" };
    result(RawValue::Constr(name(c), vec![]), args, alloc)
}

fn mismatch(function: &str, expected: &'static str, found: &RawValue) -> ForeignError {
    ForeignError::TypeMismatch {
        function: function.to_string(),
        expected,
        found: found.kind().to_string(),
    }
}

fn boolean(function: &str, v: &Value) -> Result<bool, ForeignError> {
    match &*v.raw {
        RawValue::Constr(c, args) if args.is_empty() && &**c == "True" => Ok(true),
        RawValue::Constr(c, args) if args.is_empty() && &**c == "False" => Ok(false),
        other => Err(mismatch(function, "boolean", other)),
    }
}

#[derive(Clone, Copy)]
enum Arith {
    Plus,
    Minus,
    Times,
    Div,
    Mod,
    Pow,
}

impl Arith {
    fn name(self) -> &'static str {
        match self {
            Arith::Plus => "plus",
            Arith::Minus => "minus",
            Arith::Times => "times",
            Arith::Div => "div",
            Arith::Mod => "mod",
            Arith::Pow => "pow",
        }
    }
}

enum Num {
    Int(i64),
    Float(f64),
}

fn number(function: &str, v: &Value) -> Result<Num, ForeignError> {
    match &*v.raw {
        RawValue::Int(n) => Ok(Num::Int(*n)),
        RawValue::Float(x) => Ok(Num::Float(*x)),
        other => Err(mismatch(function, "number", other)),
    }
}

fn as_float(n: &Num) -> f64 {
    match *n {
        Num::Int(i) => i as f64,
        Num::Float(x) => x,
    }
}

/// Integer arguments stay integral (`div` truncates); any float promotes.
fn arith(op: Arith, args: &[Value], alloc: &mut dyn Alloc) -> Result<Value, ForeignError> {
    let f = op.name();
    let (a, b) = (number(f, &args[0])?, number(f, &args[1])?);
    let overflow = || ForeignError::Overflow(f.to_string());
    let raw = match (&a, &b) {
        (Num::Int(x), Num::Int(y)) => {
            let (x, y) = (*x, *y);
            match op {
                Arith::Plus => RawValue::Int(x.checked_add(y).ok_or_else(overflow)?),
                Arith::Minus => RawValue::Int(x.checked_sub(y).ok_or_else(overflow)?),
                Arith::Times => RawValue::Int(x.checked_mul(y).ok_or_else(overflow)?),
                Arith::Div if y == 0 => return Err(ForeignError::DivisionByZero),
                Arith::Div => RawValue::Int(x.checked_div(y).ok_or_else(overflow)?),
                Arith::Mod if y == 0 => return Err(ForeignError::DivisionByZero),
                Arith::Mod => RawValue::Int(x.checked_rem_euclid(y).ok_or_else(overflow)?),
                Arith::Pow if y < 0 => RawValue::Float((x as f64).powf(y as f64)),
                Arith::Pow => {
                    let e = u32::try_from(y).map_err(|_| overflow())?;
                    RawValue::Int(x.checked_pow(e).ok_or_else(overflow)?)
                }
            }
        }
        _ => {
            let (x, y) = (as_float(&a), as_float(&b));
            match op {
                Arith::Plus => RawValue::Float(x + y),
                Arith::Minus => RawValue::Float(x - y),
                Arith::Times => RawValue::Float(x * y),
                Arith::Div if y == 0.0 => return Err(ForeignError::DivisionByZero),
                Arith::Div => RawValue::Float(x / y),
                Arith::Mod => {
                    return Err(ForeignError::TypeMismatch {
                        function: f.to_string(),
                        expected: "integers",
                        found: "float".into(),
                    })
                }
                Arith::Pow => RawValue::Float(x.powf(y)),
            }
        }
    };
    Ok(result(raw, args, alloc))
}

#[derive(Clone, Copy)]
enum Cmp {
    Eq,
    Lt,
    Leq,
    Gt,
    Geq,
}

impl Cmp {
    fn name(self) -> &'static str {
        match self {
            Cmp::Eq => "eq",
            Cmp::Lt => "lt",
            Cmp::Leq => "leq",
            Cmp::Gt => "gt",
            Cmp::Geq => "geq",
        }
    }
}

fn compare(op: Cmp, args: &[Value], alloc: &mut dyn Alloc) -> Result<Value, ForeignError> {
    use std::cmp::Ordering;
    let f = op.name();
    let ord: Option<Ordering> = match (&*args[0].raw, &*args[1].raw) {
        (RawValue::Int(a), RawValue::Int(b)) => Some(a.cmp(b)),
        (RawValue::Int(_) | RawValue::Float(_), RawValue::Int(_) | RawValue::Float(_)) => {
            let (a, b) = (
                as_float(&number(f, &args[0])?),
                as_float(&number(f, &args[1])?),
            );
            a.partial_cmp(&b)
        }
        (RawValue::Str(a), RawValue::Str(b)) => Some(a.cmp(b)),
        (RawValue::Constr(c, xs), RawValue::Constr(d, ys))
            if matches!(op, Cmp::Eq) && xs.is_empty() && ys.is_empty() =>
        {
            Some(if c == d {
                Ordering::Equal
            } else {
                Ordering::Less
            })
        }
        (a, _) => return Err(mismatch(f, "comparable scalars", a)),
    };
    let b = match (op, ord) {
        (_, None) => false,
        (Cmp::Eq, Some(o)) => o == Ordering::Equal,
        (Cmp::Lt, Some(o)) => o == Ordering::Less,
        (Cmp::Leq, Some(o)) => o != Ordering::Greater,
        (Cmp::Gt, Some(o)) => o == Ordering::Greater,
        (Cmp::Geq, Some(o)) => o != Ordering::Less,
    };
    Ok(bool_result(b, args, alloc))
}
