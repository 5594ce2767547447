//! Core language: terms, eliminators, addressed values and environments.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::{Selection, Universe};

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A vertex identifier. Unique within one evaluation session.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address(pub u32);

impl Address {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Address {
        Address(u32::try_from(i).expect("address space exhausted"))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Source position, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Constructor arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorSig {
    arities: BTreeMap<Name, usize>,
}

impl ConstructorSig {
    pub fn new<'a>(entries: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        ConstructorSig {
            arities: entries.into_iter().map(|(c, n)| (name(c), n)).collect(),
        }
    }

    pub fn arity(&self, c: &str) -> Option<usize> {
        self.arities.get(c).copied()
    }

    pub fn insert(&mut self, c: &str, arity: usize) {
        self.arities.insert(name(c), arity);
    }
}

impl Default for ConstructorSig {
    /// Lists, booleans, pairs, options, and `NoMatch` for failed clauses.
    fn default() -> Self {
        ConstructorSig::new([
            ("Nil", 0),
            ("Cons", 2),
            ("True", 0),
            ("False", 0),
            ("Pair", 2),
            ("None", 0),
            ("Some", 1),
            ("NoMatch", 0),
        ])
    }
}

/// Foreign-function arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForeignSig {
    arities: BTreeMap<Name, usize>,
}

impl ForeignSig {
    pub fn new<'a>(entries: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        ForeignSig {
            arities: entries.into_iter().map(|(f, n)| (name(f), n)).collect(),
        }
    }

    pub fn arity(&self, f: &str) -> Option<usize> {
        self.arities.get(f).copied()
    }

    pub fn insert(&mut self, f: &str, arity: usize) {
        self.arities.insert(name(f), arity);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.arities.iter().map(|(k, v)| (k, *v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(Name),
    Int(i64),
    Float(f64),
    Str(Arc<str>),
    Let(Name, Box<Expr>, Box<Expr>),
    /// Fields are kept sorted by name.
    Record(Vec<(Name, Expr)>),
    Project(Box<Expr>, Name),
    Constr(Name, Vec<Expr>),
    App(Box<Expr>, Box<Expr>),
    Foreign(Name, Vec<Expr>),
    Function(Arc<Eliminator>),
    LetRec(Arc<RecDefs>, Box<Expr>),
    /// Source location marker; transparent to evaluation.
    At(Span, Box<Expr>),
}

impl Expr {
    pub fn var(x: &str) -> Expr {
        Expr::Var(name(x))
    }

    pub fn string(s: &str) -> Expr {
        Expr::Str(Arc::from(s))
    }

    pub fn let_(x: &str, bound: Expr, body: Expr) -> Expr {
        Expr::Let(name(x), Box::new(bound), Box::new(body))
    }

    /// Builds a record, sorting fields by name.
    pub fn record(fields: impl IntoIterator<Item = (Name, Expr)>) -> Expr {
        let mut fields: Vec<_> = fields.into_iter().collect();
        fields.sort_by(|a, b| a.0.cmp(&b.0));
        Expr::Record(fields)
    }

    pub fn project(e: Expr, field: &str) -> Expr {
        Expr::Project(Box::new(e), name(field))
    }

    pub fn constr(c: &str, args: Vec<Expr>) -> Expr {
        Expr::Constr(name(c), args)
    }

    pub fn app(f: Expr, arg: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(arg))
    }

    pub fn foreign(f: &str, args: Vec<Expr>) -> Expr {
        Expr::Foreign(name(f), args)
    }

    pub fn function(elim: Eliminator) -> Expr {
        Expr::Function(Arc::new(elim))
    }

    pub fn let_rec(defs: RecDefs, body: Expr) -> Expr {
        Expr::LetRec(Arc::new(defs), Box::new(body))
    }

    /// Strips location markers.
    pub fn unlocated(&self) -> &Expr {
        let mut e = self;
        while let Expr::At(_, inner) = e {
            e = inner;
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Continuation {
    Term(Box<Expr>),
    Elim(Box<Eliminator>),
}

impl Continuation {
    pub fn term(e: Expr) -> Continuation {
        Continuation::Term(Box::new(e))
    }

    pub fn elim(s: Eliminator) -> Continuation {
        Continuation::Elim(Box::new(s))
    }
}

/// Trie-shaped deep pattern match.
#[derive(Clone, Debug, PartialEq)]
pub enum Eliminator {
    Var(Name, Continuation),
    Record(Vec<Name>, Continuation),
    Constr(BTreeMap<Name, Continuation>),
}

impl Eliminator {
    pub fn var(x: &str, k: Continuation) -> Eliminator {
        Eliminator::Var(name(x), k)
    }

    pub fn record(fields: &[&str], k: Continuation) -> Eliminator {
        Eliminator::Record(fields.iter().map(|f| name(f)).collect(), k)
    }

    pub fn constr<'a>(branches: impl IntoIterator<Item = (&'a str, Continuation)>) -> Eliminator {
        Eliminator::Constr(branches.into_iter().map(|(c, k)| (name(c), k)).collect())
    }
}

/// Mutually recursive definitions; names are pairwise distinct.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecDefs {
    defs: Vec<(Name, Arc<Eliminator>)>,
}

impl RecDefs {
    pub fn new() -> Self {
        RecDefs::default()
    }

    /// Returns false (and leaves the map unchanged) if `x` is already defined.
    pub fn insert(&mut self, x: Name, elim: Eliminator) -> bool {
        if self.get(&x).is_some() {
            return false;
        }
        self.defs.push((x, Arc::new(elim)));
        true
    }

    pub fn get(&self, x: &str) -> Option<&Arc<Eliminator>> {
        self.defs.iter().find(|(n, _)| &**n == x).map(|(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Arc<Eliminator>)> {
        self.defs.iter().map(|(n, e)| (n, e))
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}

/// A raw value decorated with its address.
#[derive(Clone, Debug)]
pub struct Value {
    pub addr: Address,
    pub raw: Arc<RawValue>,
}

impl Value {
    pub fn new(raw: RawValue, addr: Address) -> Value {
        Value {
            addr,
            raw: Arc::new(raw),
        }
    }
}

#[derive(Clone, Debug)]
pub enum RawValue {
    Int(i64),
    Float(f64),
    Str(Arc<str>),
    /// Fields sorted by name.
    Record(Vec<(Name, Value)>),
    Constr(Name, Vec<Value>),
    Closure(Closure),
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub defs: Arc<RecDefs>,
    pub elim: Arc<Eliminator>,
}

impl RawValue {
    pub fn field(&self, x: &str) -> Option<&Value> {
        match self {
            RawValue::Record(fields) => fields.iter().find(|(n, _)| &**n == x).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RawValue::Int(_) => "int",
            RawValue::Float(_) => "float",
            RawValue::Str(_) => "string",
            RawValue::Record(_) => "record",
            RawValue::Constr(..) => "constructor",
            RawValue::Closure(_) => "closure",
        }
    }
}

/// Persistent environment; lookup finds the most recent binding.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    name: Name,
    value: Value,
    next: Env,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn extend(&self, name: Name, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode {
            name,
            value,
            next: self.clone(),
        })))
    }

    pub fn extend_all(&self, bindings: impl IntoIterator<Item = (Name, Value)>) -> Env {
        bindings
            .into_iter()
            .fold(self.clone(), |env, (n, v)| env.extend(n, v))
    }

    pub fn lookup(&self, x: &str) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if &*node.name == x {
                return Some(&node.value);
            }
            cur = &node.next.0;
        }
        None
    }

    /// Bindings, most recent first (shadowed ones included).
    pub fn bindings(&self) -> impl Iterator<Item = (&Name, &Value)> {
        let mut cur = &self.0;
        std::iter::from_fn(move || {
            let node = cur.as_ref()?;
            cur = &node.next.0;
            Some((&node.name, &node.value))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.bindings().map(|(n, _)| n))
            .finish()
    }
}

/// Address-free, closure-free rendering of a value.
#[derive(Clone, Debug, PartialEq)]
pub enum PlainTerm {
    Int(i64),
    Float(f64),
    Str(String),
    Record(Vec<(String, PlainTerm)>),
    Constr(String, Vec<PlainTerm>),
    Fun,
}

impl PlainTerm {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            PlainTerm::Int(n) => Some(*n as f64),
            PlainTerm::Float(x) => Some(*x),
            _ => None,
        }
    }

    /// Elements of a `Cons`/`Nil` list.
    pub fn as_list(&self) -> Option<Vec<&PlainTerm>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                PlainTerm::Constr(c, args) if c == "Nil" && args.is_empty() => return Some(out),
                PlainTerm::Constr(c, args) if c == "Cons" && args.len() == 2 => {
                    out.push(&args[0]);
                    cur = &args[1];
                }
                _ => return None,
            }
        }
    }
}

pub fn erase(v: &Value) -> PlainTerm {
    match &*v.raw {
        RawValue::Int(n) => PlainTerm::Int(*n),
        RawValue::Float(x) => PlainTerm::Float(*x),
        RawValue::Str(s) => PlainTerm::Str(s.to_string()),
        RawValue::Record(fields) => PlainTerm::Record(
            fields
                .iter()
                .map(|(n, v)| (n.to_string(), erase(v)))
                .collect(),
        ),
        RawValue::Constr(c, args) => {
            PlainTerm::Constr(c.to_string(), args.iter().map(erase).collect())
        }
        RawValue::Closure(_) => PlainTerm::Fun,
    }
}

/// Every address inside `v`, descending into closures' captured values.
pub fn addresses_of(v: &Value) -> Selection {
    let mut out = Selection::empty(Universe::AllVertices);
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        out.insert(v.addr);
        match &*v.raw {
            RawValue::Record(fields) => stack.extend(fields.iter().map(|(_, v)| v)),
            RawValue::Constr(_, args) => stack.extend(args.iter()),
            RawValue::Closure(c) => stack.extend(c.env.bindings().map(|(_, v)| v)),
            _ => {}
        }
    }
    out
}

/// Free variables of `e`, in first-occurrence order.
pub fn free_variables(e: &Expr) -> Vec<Name> {
    let mut out = Vec::new();
    free_expr(e, &mut Vec::new(), &mut out);
    out
}

fn note(x: &Name, bound: &[Name], out: &mut Vec<Name>) {
    if !bound.contains(x) && !out.contains(x) {
        out.push(x.clone());
    }
}

fn free_expr(e: &Expr, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
    match e {
        Expr::Var(x) => note(x, bound, out),
        Expr::Int(_) | Expr::Float(_) | Expr::Str(_) => {}
        Expr::Let(x, a, b) => {
            free_expr(a, bound, out);
            bound.push(x.clone());
            free_expr(b, bound, out);
            bound.pop();
        }
        Expr::Record(fields) => fields.iter().for_each(|(_, e)| free_expr(e, bound, out)),
        Expr::Project(e, _) | Expr::At(_, e) => free_expr(e, bound, out),
        Expr::Constr(_, args) | Expr::Foreign(_, args) => {
            args.iter().for_each(|e| free_expr(e, bound, out))
        }
        Expr::App(a, b) => {
            free_expr(a, bound, out);
            free_expr(b, bound, out);
        }
        Expr::Function(s) => free_elim(s, bound, out),
        Expr::LetRec(defs, body) => {
            let n = bound.len();
            bound.extend(defs.iter().map(|(x, _)| x.clone()));
            for (_, s) in defs.iter() {
                free_elim(s, bound, out);
            }
            free_expr(body, bound, out);
            bound.truncate(n);
        }
    }
}

fn free_cont(k: &Continuation, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
    match k {
        Continuation::Term(e) => free_expr(e, bound, out),
        Continuation::Elim(s) => free_elim(s, bound, out),
    }
}

fn free_elim(s: &Eliminator, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
    match s {
        Eliminator::Var(x, k) => {
            bound.push(x.clone());
            free_cont(k, bound, out);
            bound.pop();
        }
        Eliminator::Record(_, k) => free_cont(k, bound, out),
        Eliminator::Constr(branches) => branches.values().for_each(|k| free_cont(k, bound, out)),
    }
}

/// Problems found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    ConstructorArity {
        constructor: String,
        expected: Option<usize>,
        found: usize,
    },
    ForeignArity {
        function: String,
        expected: Option<usize>,
        found: usize,
    },
    /// An eliminator branch for `constructor` does not consume exactly its arguments.
    EliminatorDepth {
        constructor: String,
        expected: usize,
    },
    DuplicateField(String),
    /// Branches of one eliminator come from several data types (lint only).
    MixedDataTypes(Vec<String>),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ConstructorArity {
                constructor,
                expected: Some(n),
                found,
            } => {
                write!(
                    f,
                    "constructor {constructor} expects {n} arguments, found {found}"
                )
            }
            Diagnostic::ConstructorArity {
                constructor,
                expected: None,
                ..
            } => {
                write!(f, "unknown constructor {constructor}")
            }
            Diagnostic::ForeignArity {
                function,
                expected: Some(n),
                found,
            } => {
                write!(
                    f,
                    "foreign function {function} expects {n} arguments, found {found}"
                )
            }
            Diagnostic::ForeignArity {
                function,
                expected: None,
                ..
            } => {
                write!(f, "unknown foreign function {function}")
            }
            Diagnostic::EliminatorDepth {
                constructor,
                expected,
            } => write!(
                f,
                "eliminator branch for {constructor} must match exactly {expected} arguments"
            ),
            Diagnostic::DuplicateField(x) => write!(f, "duplicate record field {x}"),
            Diagnostic::MixedDataTypes(cs) => {
                write!(
                    f,
                    "eliminator mixes constructors of different types: {}",
                    cs.join(", ")
                )
            }
        }
    }
}

impl Diagnostic {
    pub fn is_lint(&self) -> bool {
        matches!(self, Diagnostic::MixedDataTypes(_))
    }
}

/// Groups of constructors that form one data type, for the mixed-type lint.
const DATA_TYPES: &[&[&str]] = &[
    &["Nil", "Cons"],
    &["True", "False"],
    &["None", "Some"],
    &["Pair"],
    &["NoMatch"],
];

/// Saturation and eliminator-shape checks. Returns every problem found,
/// including lints (see [`Diagnostic::is_lint`]).
pub fn validate(e: &Expr, sig: &ConstructorSig, fsig: &ForeignSig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    validate_expr(e, sig, fsig, &mut out);
    out
}

fn validate_expr(e: &Expr, sig: &ConstructorSig, fsig: &ForeignSig, out: &mut Vec<Diagnostic>) {
    match e {
        Expr::Var(_) | Expr::Int(_) | Expr::Float(_) | Expr::Str(_) => {}
        Expr::Let(_, a, b) | Expr::App(a, b) => {
            validate_expr(a, sig, fsig, out);
            validate_expr(b, sig, fsig, out);
        }
        Expr::Record(fields) => {
            for w in fields.windows(2) {
                if w[0].0 == w[1].0 {
                    out.push(Diagnostic::DuplicateField(w[0].0.to_string()));
                }
            }
            for (_, e) in fields {
                validate_expr(e, sig, fsig, out);
            }
        }
        Expr::Project(e, _) | Expr::At(_, e) => validate_expr(e, sig, fsig, out),
        Expr::Constr(c, args) => {
            let expected = sig.arity(c);
            if expected != Some(args.len()) {
                out.push(Diagnostic::ConstructorArity {
                    constructor: c.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            for a in args {
                validate_expr(a, sig, fsig, out);
            }
        }
        Expr::Foreign(f, args) => {
            let expected = fsig.arity(f);
            if expected != Some(args.len()) {
                out.push(Diagnostic::ForeignArity {
                    function: f.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            for a in args {
                validate_expr(a, sig, fsig, out);
            }
        }
        Expr::Function(elim) => validate_top(elim, sig, fsig, out),
        Expr::LetRec(defs, body) => {
            for (_, elim) in defs.iter() {
                validate_top(elim, sig, fsig, out);
            }
            validate_expr(body, sig, fsig, out);
        }
    }
}

/// `pending` is the number of values on the match stack when this
/// continuation runs. A term continuation is only reachable with an empty stack.
fn validate_cont(
    k: &Continuation,
    pending: usize,
    sig: &ConstructorSig,
    fsig: &ForeignSig,
    out: &mut Vec<Diagnostic>,
) -> bool {
    match k {
        Continuation::Term(e) => {
            validate_expr(e, sig, fsig, out);
            pending == 0
        }
        Continuation::Elim(s) => {
            if pending == 0 {
                return false;
            }
            validate_elim(s, pending, sig, fsig, out)
        }
    }
}

fn validate_top(
    s: &Eliminator,
    sig: &ConstructorSig,
    fsig: &ForeignSig,
    out: &mut Vec<Diagnostic>,
) {
    if !validate_elim(s, 1, sig, fsig, out) {
        out.push(Diagnostic::EliminatorDepth {
            constructor: "<var>".into(),
            expected: 0,
        });
    }
}

fn validate_elim(
    s: &Eliminator,
    pending: usize,
    sig: &ConstructorSig,
    fsig: &ForeignSig,
    out: &mut Vec<Diagnostic>,
) -> bool {
    match s {
        Eliminator::Var(_, k) => validate_cont(k, pending - 1, sig, fsig, out),
        Eliminator::Record(fields, k) => {
            let mut sorted = fields.clone();
            sorted.sort();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    out.push(Diagnostic::DuplicateField(w[0].to_string()));
                }
            }
            if !validate_cont(k, pending - 1 + fields.len(), sig, fsig, out) {
                out.push(Diagnostic::EliminatorDepth {
                    constructor: "<record>".into(),
                    expected: fields.len(),
                });
            }
            true
        }
        Eliminator::Constr(branches) => {
            for (c, k) in branches {
                let Some(arity) = sig.arity(c) else {
                    out.push(Diagnostic::ConstructorArity {
                        constructor: c.to_string(),
                        expected: None,
                        found: 0,
                    });
                    continue;
                };
                if !validate_cont(k, pending - 1 + arity, sig, fsig, out) {
                    out.push(Diagnostic::EliminatorDepth {
                        constructor: c.to_string(),
                        expected: arity,
                    });
                }
            }
            let families: std::collections::BTreeSet<usize> = branches
                .keys()
                .filter_map(|c| DATA_TYPES.iter().position(|ty| ty.contains(&&**c)))
                .collect();
            let unknown_family = branches
                .keys()
                .any(|c| !DATA_TYPES.iter().any(|ty| ty.contains(&&**c)));
            if families.len() > 1 || (unknown_family && !families.is_empty()) {
                out.push(Diagnostic::MixedDataTypes(
                    branches.keys().map(|c| c.to_string()).collect(),
                ));
            }
            true
        }
    }
}

fn write_float(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    let s = format!("{x}");
    if s.contains(['.', 'e', 'E', 'N', 'i']) {
        f.write_str(&s)
    } else {
        write!(f, "{s}.0")
    }
}

impl fmt::Display for PlainTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlainTerm::Int(n) => write!(f, "{n}"),
            PlainTerm::Float(x) => write_float(f, *x),
            PlainTerm::Str(s) => write!(f, "{s:?}"),
            PlainTerm::Fun => f.write_str("<fun>"),
            PlainTerm::Record(fields) => {
                f.write_str("{")?;
                for (i, (n, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n}: {v}")?;
                }
                f.write_str("}")
            }
            PlainTerm::Constr(c, args) => {
                if let Some(items) = self.as_list() {
                    f.write_str("[")?;
                    for (i, v) in items.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{v}")?;
                    }
                    return f.write_str("]");
                }
                f.write_str(c)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, v) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{v}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

// Canonical debug form for core terms: one s-expression per node.

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(x) => f.write_str(x),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Float(x) => write_float(f, *x),
            Expr::Str(s) => write!(f, "{s:?}"),
            Expr::Let(x, a, b) => write!(f, "(let {x} {a} {b})"),
            Expr::Record(fields) => {
                f.write_str("(record")?;
                for (n, e) in fields {
                    write!(f, " ({n} {e})")?;
                }
                f.write_str(")")
            }
            Expr::Project(e, x) => write!(f, "(proj {e} {x})"),
            Expr::Constr(c, args) => {
                if args.is_empty() {
                    return f.write_str(c);
                }
                write!(f, "({c}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Expr::App(a, b) => write!(f, "(app {a} {b})"),
            Expr::Foreign(name, args) => {
                write!(f, "(foreign {name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Expr::Function(s) => write!(f, "(fun {s})"),
            Expr::LetRec(defs, body) => {
                f.write_str("(letrec (")?;
                for (i, (n, s)) in defs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({n} {s})")?;
                }
                write!(f, ") {body})")
            }
            Expr::At(_, e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Display for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Continuation::Term(e) => write!(f, "{e}"),
            Continuation::Elim(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for Eliminator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eliminator::Var(x, k) => write!(f, "(elim-var {x} {k})"),
            Eliminator::Record(fields, k) => {
                f.write_str("(elim-record (")?;
                for (i, x) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(x)?;
                }
                write!(f, ") {k})")
            }
            Eliminator::Constr(branches) => {
                f.write_str("(elim-constr")?;
                for (c, k) in branches {
                    write!(f, " ({c} {k})")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_at(n: i64, a: u32) -> Value {
        Value::new(RawValue::Int(n), Address(a))
    }

    fn cons_example() -> Value {
        let nil = Value::new(RawValue::Constr(name("Nil"), vec![]), Address(2));
        Value::new(
            RawValue::Constr(name("Cons"), vec![int_at(1, 1), nil]),
            Address(0),
        )
    }

    fn sel(ids: &[u32]) -> Selection {
        ids.iter().map(|&i| Address(i)).collect()
    }

    #[test]
    fn validate_saturation() {
        let sig = ConstructorSig::default();
        let fsig = ForeignSig::new([("plus", 2)]);
        let ok = Expr::constr("Cons", vec![Expr::Int(1), Expr::constr("Nil", vec![])]);
        assert!(validate(&ok, &sig, &fsig).is_empty());
        let short = Expr::constr("Cons", vec![Expr::Int(1)]);
        assert_eq!(
            validate(&short, &sig, &fsig),
            vec![Diagnostic::ConstructorArity {
                constructor: "Cons".into(),
                expected: Some(2),
                found: 1
            }]
        );
        let plus3 = Expr::foreign("plus", vec![Expr::Int(1), Expr::Int(2), Expr::Int(3)]);
        assert_eq!(validate(&plus3, &sig, &fsig).len(), 1);
        // idempotent and pure
        assert_eq!(validate(&plus3, &sig, &fsig), validate(&plus3, &sig, &fsig));
    }

    #[test]
    fn validate_eliminator_depth() {
        let sig = ConstructorSig::default();
        let fsig = ForeignSig::default();
        let good = Expr::function(Eliminator::constr([
            (
                "Cons",
                Continuation::elim(Eliminator::var(
                    "x",
                    Continuation::elim(Eliminator::var("xs", Continuation::term(Expr::var("x")))),
                )),
            ),
            ("Nil", Continuation::term(Expr::Int(0))),
        ]));
        assert!(validate(&good, &sig, &fsig).is_empty());
        let bad = Expr::function(Eliminator::constr([(
            "Cons",
            Continuation::elim(Eliminator::var("x", Continuation::term(Expr::var("x")))),
        )]));
        assert_eq!(
            validate(&bad, &sig, &fsig),
            vec![Diagnostic::EliminatorDepth {
                constructor: "Cons".into(),
                expected: 2
            }]
        );
        let mixed = Expr::function(Eliminator::constr([
            ("Nil", Continuation::term(Expr::Int(0))),
            ("True", Continuation::term(Expr::Int(1))),
        ]));
        let diags = validate(&mixed, &sig, &fsig);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].is_lint());
    }

    #[test]
    fn erase_examples() {
        assert_eq!(erase(&int_at(5, 3)), PlainTerm::Int(5));
        assert_eq!(cons_example().raw.kind(), "constructor");
        assert_eq!(erase(&cons_example()).to_string(), "[1]");
        let clo = Value::new(
            RawValue::Closure(Closure {
                env: Env::new(),
                defs: Arc::new(RecDefs::new()),
                elim: Arc::new(Eliminator::var("x", Continuation::term(Expr::var("x")))),
            }),
            Address(9),
        );
        assert_eq!(erase(&clo), PlainTerm::Fun);
        assert_eq!(erase(&clo).to_string(), "<fun>");
    }

    #[test]
    fn addresses_of_examples() {
        assert_eq!(addresses_of(&int_at(5, 3)), sel(&[3]));
        assert_eq!(addresses_of(&cons_example()), sel(&[0, 1, 2]));
        let rec = Value::new(
            RawValue::Record(vec![(name("x"), int_at(5, 1))]),
            Address(0),
        );
        assert_eq!(addresses_of(&rec), sel(&[0, 1]));
    }

    #[test]
    fn closure_addresses_include_captured_values() {
        let env = Env::new().extend(name("y"), int_at(4, 7));
        let clo = Value::new(
            RawValue::Closure(Closure {
                env,
                defs: Arc::new(RecDefs::new()),
                elim: Arc::new(Eliminator::var("x", Continuation::term(Expr::var("y")))),
            }),
            Address(8),
        );
        assert_eq!(addresses_of(&clo), sel(&[7, 8]));
    }

    #[test]
    fn env_shadowing() {
        let env = Env::new()
            .extend(name("x"), int_at(1, 0))
            .extend(name("x"), int_at(2, 1));
        assert_eq!(env.lookup("x").unwrap().addr, Address(1));
        assert!(env.lookup("y").is_none());
    }

    #[test]
    fn canonical_forms() {
        let e = Expr::let_(
            "x",
            Expr::Float(2.0),
            Expr::record([(name("b"), Expr::var("x")), (name("a"), Expr::string("s"))]),
        );
        assert_eq!(e.to_string(), "(let x 2.0 (record (a \"s\") (b x)))");
        let f = Expr::function(Eliminator::record(
            &["y"],
            Continuation::elim(Eliminator::var("z", Continuation::term(Expr::var("z")))),
        ));
        assert_eq!(f.to_string(), "(fun (elim-record (y) (elim-var z z)))");
        let p = PlainTerm::Record(vec![
            (
                "a".into(),
                PlainTerm::Constr(
                    "Pair".into(),
                    vec![PlainTerm::Int(1), PlainTerm::Float(0.5)],
                ),
            ),
            ("b".into(), PlainTerm::Constr("True".into(), vec![])),
        ]);
        assert_eq!(p.to_string(), "{a: Pair(1, 0.5), b: True}");
    }

    #[test]
    fn rec_defs_reject_duplicates() {
        let mut defs = RecDefs::new();
        let s = Eliminator::var("x", Continuation::term(Expr::var("x")));
        assert!(defs.insert(name("f"), s.clone()));
        assert!(!defs.insert(name("f"), s));
        assert_eq!(defs.len(), 1);
    }
}
