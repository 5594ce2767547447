//! Running a whole program against its datasets.
//!
//! Every node of every dataset gets an address before evaluation starts:
//! first the cells (primitive values and nullary constructors other than
//! `Nil`) in path order, then the enclosing records and list cells. The
//! evaluator's counter continues from there.
//!
//! Paths name parts of a value: `data[2].co2e` is a field of the third
//! element, `data[2..]` the list cell holding it, and `.0`, `.1` the
//! arguments of any other constructor.

pub mod dataset;
pub mod view;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::eval::foreign::ForeignRegistry;
use crate::eval::{EvalError, Label, Machine};
use crate::graph::{DepGraph, LabelledGraph, Selection, Universe};
use crate::lang::{
    erase, free_variables, name, validate, Address, ConstructorSig, Continuation, Diagnostic,
    Eliminator, Env, Expr, PlainTerm, RawValue, Value,
};
use crate::query::{QueryError, QueryOp, Restriction};
use crate::surface::{self, SurfaceError};

pub use dataset::{Dataset, DatasetError};
pub use view::{View, ViewNode};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("no dataset supplied for `{0}`")]
    MissingDataset(String),
    #[error("dataset `{0}` is not declared by the program")]
    UndeclaredDataset(String),
    #[error("dataset `{0}` contains a function")]
    FunctionInDataset(String),
    #[error("invalid program: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// One node of a value, as recorded in a path map.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEntry {
    pub path: String,
    pub address: Address,
    /// Primitive values and nullary constructors other than `Nil`.
    pub cell: bool,
    pub label: String,
}

/// A two-way map between paths and addresses.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathMap {
    entries: Vec<PathEntry>,
    by_path: BTreeMap<String, usize>,
    by_address: BTreeMap<Address, usize>,
}

impl PathMap {
    pub fn push(&mut self, entry: PathEntry) {
        let i = self.entries.len();
        self.by_path.entry(entry.path.clone()).or_insert(i);
        self.by_address.entry(entry.address).or_insert(i);
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[PathEntry] {
        &self.entries
    }

    pub fn resolve(&self, path: &str) -> Option<&PathEntry> {
        self.by_path.get(path).map(|&i| &self.entries[i])
    }

    /// The first path recorded for `a`.
    pub fn path_of(&self, a: Address) -> Option<&PathEntry> {
        self.by_address.get(&a).map(|&i| &self.entries[i])
    }

    pub fn cells(&self, universe: Universe) -> Selection {
        Selection::from_addresses(
            universe,
            self.entries.iter().filter(|e| e.cell).map(|e| e.address),
        )
    }

    /// One entry per line: address, `cell` or `node`, path, label.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let kind = if e.cell { "cell" } else { "node" };
            s.push_str(&format!(
                "{}\t{kind}\t{}\t{}\n",
                e.address.0, e.path, e.label
            ));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PathMap, String> {
        let mut m = PathMap::default();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(4, '\t');
            let bad = || format!("line {}: expected `address kind path label`", n + 1);
            let address = parts
                .next()
                .and_then(|a| a.parse::<u32>().ok())
                .ok_or_else(bad)?;
            let cell = match parts.next() {
                Some("cell") => true,
                Some("node") => false,
                _ => return Err(bad()),
            };
            let path = parts.next().ok_or_else(bad)?.to_string();
            let label = parts.next().unwrap_or("").to_string();
            m.push(PathEntry {
                path,
                address: Address(address),
                cell,
                label,
            });
        }
        Ok(m)
    }
}

/// The outcome of running a program.
#[derive(Debug)]
pub struct Session {
    pub result: Value,
    pub graph: DepGraph,
    pub labels: Vec<Label>,
    pub inputs: PathMap,
    pub outputs: PathMap,
    /// Number of addresses taken by datasets.
    pub dataset_nodes: usize,
    pub dataset_values: Vec<(String, Value)>,
}

impl Session {
    pub fn plain(&self) -> PlainTerm {
        erase(&self.result)
    }

    pub fn input_cells(&self) -> Selection {
        self.inputs.cells(Universe::Sources)
    }

    pub fn output_cells(&self) -> Selection {
        self.outputs.cells(Universe::Sinks)
    }

    /// Presentation universes: dataset cells and output cells.
    pub fn restriction(&self) -> Restriction {
        Restriction::new(self.input_cells(), self.output_cells())
    }

    pub fn query(
        &self,
        op: QueryOp,
        selection: &Selection,
        restricted: bool,
    ) -> Result<Selection, QueryError> {
        if restricted {
            op.run_restricted(&self.graph, selection, &self.restriction())
        } else {
            op.run(&self.graph, selection)
        }
    }

    /// Numeric vertices with the edges between them, labelled by value
    /// rounded to `decimals` places. Also returns each vertex's address.
    pub fn numeric_subgraph(&self, decimals: usize) -> (LabelledGraph, Vec<Address>) {
        let addrs: Vec<Address> = self
            .graph
            .vertices()
            .filter(|a| self.labels[a.index()].is_numeric())
            .collect();
        let index: BTreeMap<Address, usize> =
            addrs.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let labels = addrs
            .iter()
            .map(|a| {
                let x = self.labels[a.index()].as_f64().expect("numeric label");
                format!("{x:.decimals$}")
            })
            .collect();
        let edges = self
            .graph
            .edges()
            .filter_map(|(a, b)| Some((*index.get(&a)?, *index.get(&b)?)));
        (LabelledGraph::new(labels, edges), addrs)
    }

    pub fn label(&self, a: Address) -> Option<&Label> {
        self.labels.get(a.index())
    }

    pub fn view(&self) -> View {
        view::build(self)
    }
}

/// Parses, desugars and runs surface source. Every declared dataset must be
/// supplied, and every supplied dataset declared; addresses follow the order
/// of declaration.
pub fn run_source(
    src: &str,
    datasets: &[Dataset],
    registry: &ForeignRegistry,
) -> Result<Session, RunError> {
    run_source_with(src, datasets, registry, None)
}

pub fn run_source_with(
    src: &str,
    datasets: &[Dataset],
    registry: &ForeignRegistry,
    step_limit: Option<u64>,
) -> Result<Session, RunError> {
    let program = surface::parse(src)?;
    let mut ordered = Vec::with_capacity(datasets.len());
    for d in program.datasets() {
        match datasets.iter().find(|ds| *ds.name == *d) {
            Some(ds) => ordered.push(ds.clone()),
            None => return Err(RunError::MissingDataset(d.to_string())),
        }
    }
    if let Some(extra) = datasets
        .iter()
        .find(|ds| !ordered.iter().any(|o| o.name == ds.name))
    {
        return Err(RunError::UndeclaredDataset(extra.name.clone()));
    }
    let core = surface::desugar(&program, &ConstructorSig::default())?;
    run_with(&core, &ordered, registry, step_limit)
}

/// Evaluates a core program with datasets and foreign wrappers in scope.
pub fn run(
    program: &Expr,
    datasets: &[Dataset],
    registry: &ForeignRegistry,
) -> Result<Session, RunError> {
    run_with(program, datasets, registry, None)
}

pub fn run_with(
    program: &Expr,
    datasets: &[Dataset],
    registry: &ForeignRegistry,
    step_limit: Option<u64>,
) -> Result<Session, RunError> {
    let problems: Vec<Diagnostic> =
        validate(program, &ConstructorSig::default(), &registry.signature())
            .into_iter()
            .filter(|d| !d.is_lint())
            .collect();
    if !problems.is_empty() {
        return Err(RunError::Invalid(problems));
    }
    for ds in datasets {
        if contains_fun(&ds.value) {
            return Err(RunError::FunctionInDataset(ds.name.clone()));
        }
    }
    crate::eval::with_large_stack(|| run_inner(program, datasets, registry, step_limit))
}

fn contains_fun(t: &PlainTerm) -> bool {
    match t {
        PlainTerm::Fun => true,
        PlainTerm::Record(fs) => fs.iter().any(|(_, v)| contains_fun(v)),
        PlainTerm::Constr(_, args) => args.iter().any(contains_fun),
        _ => false,
    }
}

fn run_inner(
    program: &Expr,
    datasets: &[Dataset],
    registry: &ForeignRegistry,
    step_limit: Option<u64>,
) -> Result<Session, RunError> {
    let mut m = Machine::new(registry);
    if let Some(limit) = step_limit {
        m = m.with_step_limit(limit);
    }
    let mut inputs = PathMap::default();
    let mut cells = Vec::new();
    for ds in datasets {
        alloc_cells(&mut m, &ds.value, &mut cells);
    }
    let mut cells = cells.into_iter();
    let mut env = Env::new();
    let mut dataset_values = Vec::new();
    for ds in datasets {
        let v = build(&mut m, &ds.value, &mut cells, &ds.name, &mut inputs);
        env = env.extend(name(&ds.name), v.clone());
        dataset_values.push((ds.name.clone(), v));
    }
    let dataset_nodes = m.labels().len();

    // Foreign functions used as values get curried wrappers.
    for x in free_variables(program) {
        if env.lookup(&x).is_some() {
            continue;
        }
        if let Some(imp) = registry.get(&x) {
            let w = m.eval(&Env::new(), &wrapper(&x, imp.arity), &[])?;
            env = env.extend(x.clone(), w);
        }
    }

    let result = m.eval(&env, program, &[])?;
    let (graph, labels) = m.into_parts();
    let mut outputs = PathMap::default();
    record_paths(&result, "out", &labels, &mut outputs);
    Ok(Session {
        result,
        graph,
        labels,
        inputs,
        outputs,
        dataset_nodes,
        dataset_values,
    })
}

/// `fun x1 -> .. -> fun xn -> f(x1, .., xn)`
pub fn wrapper(f: &str, arity: usize) -> Expr {
    let params: Vec<String> = (1..=arity).map(|i| format!("$x{i}")).collect();
    let mut body = Expr::foreign(f, params.iter().map(|p| Expr::var(p)).collect());
    for p in params.iter().rev() {
        body = Expr::function(Eliminator::var(p, Continuation::term(body)));
    }
    body
}

fn is_cell(t: &PlainTerm) -> bool {
    match t {
        PlainTerm::Int(_) | PlainTerm::Float(_) | PlainTerm::Str(_) => true,
        PlainTerm::Constr(c, args) => args.is_empty() && c != "Nil",
        _ => false,
    }
}

fn leaf_raw(t: &PlainTerm) -> RawValue {
    match t {
        PlainTerm::Int(n) => RawValue::Int(*n),
        PlainTerm::Float(x) => RawValue::Float(*x),
        PlainTerm::Str(s) => RawValue::Str(s.as_str().into()),
        PlainTerm::Constr(c, _) => RawValue::Constr(name(c), vec![]),
        _ => unreachable!("not a cell"),
    }
}

fn alloc_cells(m: &mut Machine<'_>, t: &PlainTerm, out: &mut Vec<Value>) {
    if is_cell(t) {
        out.push(m.alloc_value(leaf_raw(t), &[]));
        return;
    }
    match t {
        PlainTerm::Record(fs) => fs.iter().for_each(|(_, v)| alloc_cells(m, v, out)),
        PlainTerm::Constr(_, args) => args.iter().for_each(|v| alloc_cells(m, v, out)),
        _ => {}
    }
}

fn entry(path: &str, v: &Value, cell: bool, m: &Machine<'_>) -> PathEntry {
    PathEntry {
        path: path.to_string(),
        address: v.addr,
        cell,
        label: m.labels()[v.addr.index()].to_string(),
    }
}

fn build(
    m: &mut Machine<'_>,
    t: &PlainTerm,
    cells: &mut impl Iterator<Item = Value>,
    path: &str,
    map: &mut PathMap,
) -> Value {
    if is_cell(t) {
        let v = cells.next().expect("cell allocated in the first pass");
        map.push(entry(path, &v, true, m));
        return v;
    }
    if let Some(items) = t.as_list() {
        let built: Vec<Value> = items
            .iter()
            .enumerate()
            .map(|(i, x)| build(m, x, cells, &format!("{path}[{i}]"), map))
            .collect();
        let n = built.len();
        let mut tail = m.alloc_value(RawValue::Constr(name("Nil"), vec![]), &[]);
        map.push(entry(&format!("{path}[{n}..]"), &tail, false, m));
        for (i, x) in built.into_iter().enumerate().rev() {
            tail = m.alloc_value(RawValue::Constr(name("Cons"), vec![x, tail]), &[]);
            map.push(entry(&format!("{path}[{i}..]"), &tail, false, m));
        }
        return tail;
    }
    let v = match t {
        PlainTerm::Record(fs) => {
            let fields = fs
                .iter()
                .map(|(n, x)| (name(n), build(m, x, cells, &format!("{path}.{n}"), map)))
                .collect();
            m.alloc_value(RawValue::Record(fields), &[])
        }
        PlainTerm::Constr(c, args) => {
            let args = args
                .iter()
                .enumerate()
                .map(|(i, x)| build(m, x, cells, &format!("{path}.{i}"), map))
                .collect();
            m.alloc_value(RawValue::Constr(name(c), args), &[])
        }
        _ => unreachable!("cells handled above"),
    };
    map.push(entry(path, &v, false, m));
    v
}

fn record_paths(v: &Value, path: &str, labels: &[Label], map: &mut PathMap) {
    fn push(map: &mut PathMap, labels: &[Label], path: &str, v: &Value, cell: bool) {
        map.push(PathEntry {
            path: path.to_string(),
            address: v.addr,
            cell,
            label: labels[v.addr.index()].to_string(),
        })
    }
    match &*v.raw {
        RawValue::Int(_) | RawValue::Float(_) | RawValue::Str(_) => {
            push(map, labels, path, v, true)
        }
        RawValue::Closure(_) => push(map, labels, path, v, false),
        RawValue::Record(fs) => {
            push(map, labels, path, v, false);
            for (n, x) in fs {
                record_paths(x, &format!("{path}.{n}"), labels, map);
            }
        }
        RawValue::Constr(c, _) if c.as_ref() == "Cons" || c.as_ref() == "Nil" => {
            let mut cur = v;
            let mut i = 0;
            loop {
                match &*cur.raw {
                    RawValue::Constr(c, args) if c.as_ref() == "Cons" && args.len() == 2 => {
                        push(map, labels, &format!("{path}[{i}..]"), cur, false);
                        record_paths(&args[0], &format!("{path}[{i}]"), labels, map);
                        cur = &args[1];
                        i += 1;
                    }
                    RawValue::Constr(c, args) if c.as_ref() == "Nil" && args.is_empty() => {
                        push(map, labels, &format!("{path}[{i}..]"), cur, false);
                        break;
                    }
                    _ => {
                        // An improper list: the tail is some other value.
                        record_paths(cur, &format!("{path}[{i}..]"), labels, map);
                        break;
                    }
                }
            }
        }
        RawValue::Constr(_, args) => {
            push(map, labels, path, v, args.is_empty());
            for (i, x) in args.iter().enumerate() {
                record_paths(x, &format!("{path}.{i}"), labels, map);
            }
        }
    }
}

impl fmt::Display for PathEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}", self.address, self.path, self.label)
    }
}
