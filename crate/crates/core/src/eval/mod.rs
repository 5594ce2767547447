//! Big-step evaluation that records a dependence graph as it goes.
//!
//! Every value the evaluator constructs gets a fresh address, with in-edges
//! from the addresses the construction depended on. The set of those
//! addresses is threaded through evaluation as the *demand*.

pub mod foreign;
pub mod matching;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::DepGraph;
use crate::lang::{
    name, Address, Closure, Eliminator, Env, Expr, Name, RawValue, RecDefs, Span, Value,
};
use foreign::{Alloc, ForeignError, ForeignRegistry};
use matching::{match_elim, MatchError};

/// What a vertex was allocated for.
#[derive(Clone, Debug, PartialEq)]
pub enum Label {
    Int(i64),
    Float(f64),
    Str(Arc<str>),
    Constr(Name),
    Record(Vec<Name>),
    Closure,
}

impl Label {
    pub fn of(raw: &RawValue) -> Label {
        match raw {
            RawValue::Int(n) => Label::Int(*n),
            RawValue::Float(x) => Label::Float(*x),
            RawValue::Str(s) => Label::Str(s.clone()),
            RawValue::Constr(c, _) => Label::Constr(c.clone()),
            RawValue::Record(fields) => {
                Label::Record(fields.iter().map(|(n, _)| n.clone()).collect())
            }
            RawValue::Closure(_) => Label::Closure,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Label::Int(n) => Some(n as f64),
            Label::Float(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_f64().is_some()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "{n}"),
            Label::Float(x) if x.fract() == 0.0 && x.is_finite() => write!(f, "{x:.1}"),
            Label::Float(x) => write!(f, "{x}"),
            Label::Str(s) => write!(f, "{s:?}"),
            Label::Constr(c) => write!(f, "{c}"),
            Label::Record(fields) => {
                write!(f, "{{")?;
                for (i, n) in fields.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, "}}")
            }
            Label::Closure => write!(f, "<fun>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("cannot apply a {0}")]
    NotAFunction(&'static str),
    #[error("cannot project field {field} from a {found}")]
    NotARecord { field: String, found: &'static str },
    #[error("record has no field {0}")]
    MissingField(String),
    #[error("match failure: {0}")]
    Match(#[from] MatchError),
    #[error(transparent)]
    Foreign(#[from] ForeignError),
    #[error("step limit of {0} exceeded")]
    StepLimit(u64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Option<Span>,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{s}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl<E: Into<EvalErrorKind>> From<E> for EvalError {
    fn from(e: E) -> Self {
        EvalError {
            kind: e.into(),
            span: None,
        }
    }
}

/// Evaluator state: the graph built so far and a label per address.
pub struct Machine<'r> {
    graph: DepGraph,
    labels: Vec<Label>,
    foreign: &'r ForeignRegistry,
    no_defs: Arc<RecDefs>,
    steps: u64,
    step_limit: Option<u64>,
}

impl Alloc for Machine<'_> {
    fn alloc(&mut self, label: Label, deps: &[Address]) -> Address {
        let a = Address::from_index(self.labels.len());
        self.labels.push(label);
        self.graph.extend_star(a, deps);
        a
    }
}

impl<'r> Machine<'r> {
    pub fn new(foreign: &'r ForeignRegistry) -> Self {
        Machine {
            graph: DepGraph::new(),
            labels: Vec::new(),
            foreign,
            no_defs: Arc::new(RecDefs::new()),
            steps: 0,
            step_limit: None,
        }
    }

    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = Some(limit);
        self
    }

    pub fn graph(&self) -> &DepGraph {
        &self.graph
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn into_parts(self) -> (DepGraph, Vec<Label>) {
        (self.graph, self.labels)
    }

    /// Allocates `raw` at a fresh address depending on `deps`.
    pub fn alloc_value(&mut self, raw: RawValue, deps: &[Address]) -> Value {
        let a = self.alloc(Label::of(&raw), &dedup(deps));
        Value::new(raw, a)
    }

    /// Evaluates `e` in `env` under demand `demand`.
    pub fn eval(&mut self, env: &Env, e: &Expr, demand: &[Address]) -> Result<Value, EvalError> {
        self.tick()?;
        match e {
            Expr::At(span, inner) => self.eval(env, inner, demand).map_err(|mut err| {
                err.span.get_or_insert(*span);
                err
            }),
            Expr::Var(x) => env
                .lookup(x)
                .cloned()
                .ok_or_else(|| EvalErrorKind::Unbound(x.to_string()).into()),
            Expr::Int(n) => Ok(self.alloc_value(RawValue::Int(*n), demand)),
            Expr::Float(x) => Ok(self.alloc_value(RawValue::Float(*x), demand)),
            Expr::Str(s) => Ok(self.alloc_value(RawValue::Str(s.clone()), demand)),
            Expr::Let(x, bound, body) => {
                let v = self.eval(env, bound, demand)?;
                self.eval(&env.extend(x.clone(), v), body, demand)
            }
            Expr::Record(fields) => {
                let mut vs = Vec::with_capacity(fields.len());
                for (n, fe) in fields {
                    vs.push((n.clone(), self.eval(env, fe, demand)?));
                }
                Ok(self.alloc_value(RawValue::Record(vs), demand))
            }
            Expr::Project(re, field) => {
                let r = self.eval(env, re, demand)?;
                match &*r.raw {
                    RawValue::Record(_) => r
                        .raw
                        .field(field)
                        .cloned()
                        .ok_or_else(|| EvalErrorKind::MissingField(field.to_string()).into()),
                    other => Err(EvalErrorKind::NotARecord {
                        field: field.to_string(),
                        found: other.kind(),
                    }
                    .into()),
                }
            }
            Expr::Constr(c, args) => {
                let vs = self.eval_seq(env, args, demand)?;
                Ok(self.alloc_value(RawValue::Constr(c.clone(), vs), demand))
            }
            Expr::Foreign(f, args) => {
                let vs = self.eval_seq(env, args, demand)?;
                let registry = self.foreign;
                Ok(registry.apply(f, &vs, self)?)
            }
            Expr::Function(elim) => {
                let raw = RawValue::Closure(Closure {
                    env: env.clone(),
                    defs: self.no_defs.clone(),
                    elim: elim.clone(),
                });
                Ok(self.alloc_value(raw, demand))
            }
            Expr::LetRec(defs, body) => {
                let env2 = self.close_defs(env, defs, demand);
                self.eval(&env2, body, demand)
            }
            Expr::App(fe, arg) => {
                let fv = self.eval(env, fe, demand)?;
                let RawValue::Closure(c) = &*fv.raw else {
                    return Err(EvalErrorKind::NotAFunction(fv.raw.kind()).into());
                };
                let env2 = self.close_defs(&c.env, &c.defs, &[fv.addr]);
                let av = self.eval(env, arg, demand)?;
                let m = match_elim(vec![av], &c.elim)?;
                let mut body_demand = dedup(&m.consumed);
                if !body_demand.contains(&fv.addr) {
                    body_demand.push(fv.addr);
                }
                let env3 = env2.extend_all(m.bindings);
                self.eval(&env3, m.branch, &body_demand)
            }
        }
    }

    pub fn eval_seq(
        &mut self,
        env: &Env,
        es: &[Expr],
        demand: &[Address],
    ) -> Result<Vec<Value>, EvalError> {
        es.iter().map(|e| self.eval(env, e, demand)).collect()
    }

    /// Binds each recursive definition to a closure over the whole group.
    pub fn close_defs(&mut self, env: &Env, defs: &Arc<RecDefs>, demand: &[Address]) -> Env {
        let mut out = env.clone();
        for (x, elim) in defs.iter() {
            let raw = RawValue::Closure(Closure {
                env: env.clone(),
                defs: defs.clone(),
                elim: elim.clone(),
            });
            let v = self.alloc_value(raw, demand);
            out = out.extend(x.clone(), v);
        }
        out
    }

    /// Applies a closure value to an argument, as `App` does.
    pub fn apply(&mut self, f: &Value, arg: Value) -> Result<Value, EvalError> {
        let RawValue::Closure(c) = &*f.raw else {
            return Err(EvalErrorKind::NotAFunction(f.raw.kind()).into());
        };
        let env2 = self.close_defs(&c.env, &c.defs, &[f.addr]);
        let m = match_elim(vec![arg], &c.elim)?;
        let mut demand = dedup(&m.consumed);
        if !demand.contains(&f.addr) {
            demand.push(f.addr);
        }
        let env3 = env2.extend_all(m.bindings);
        self.eval(&env3, m.branch, &demand)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        match self.step_limit {
            Some(limit) if self.steps > limit => Err(EvalErrorKind::StepLimit(limit).into()),
            _ => Ok(()),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

fn dedup(addrs: &[Address]) -> Vec<Address> {
    let mut out: Vec<Address> = Vec::with_capacity(addrs.len());
    for &a in addrs {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// Stack size for [`with_large_stack`].
pub const EVAL_STACK_BYTES: usize = 512 << 20;

/// Runs `f` on a thread with a deep stack. Evaluation recurses once per
/// nested subterm and once per call.
pub fn with_large_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .name("cognate-eval".into())
            .stack_size(EVAL_STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("spawn evaluation thread")
            .join()
            .unwrap_or_else(|p| std::panic::resume_unwind(p))
    })
}

/// Convenience: evaluates a closed term with the primitive registry.
pub fn eval_closed(e: &Expr) -> Result<(Value, DepGraph, Vec<Label>), EvalError> {
    let reg = ForeignRegistry::primitives();
    let mut m = Machine::new(&reg);
    let v = m.eval(&Env::new(), e, &[])?;
    let (g, labels) = m.into_parts();
    Ok((v, g, labels))
}

/// The eliminator `Cons x xs -> k | Nil -> nil`, used by tests and the prelude.
pub fn list_elim(x: &str, xs: &str, cons: Expr, nil: Expr) -> Eliminator {
    use crate::lang::Continuation as K;
    Eliminator::Constr(
        [
            (
                name("Cons"),
                K::elim(Eliminator::var(
                    x,
                    K::elim(Eliminator::var(xs, K::term(cons))),
                )),
            ),
            (name("Nil"), K::term(nil)),
        ]
        .into_iter()
        .collect(),
    )
}
