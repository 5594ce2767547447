//! The benchmark harness.
//!
//! For each suite entry the harness times evaluation with graph
//! construction, `demands` of one output, and `demandedBy` of one input both
//! directly and as the dual of `suffices`. Timings cover the pure call only.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use cognate::eval::foreign::ForeignRegistry;
use cognate::lang::ConstructorSig;
use cognate::query::{demanded_by, demanded_by_via_suffices, demands};
use cognate::session::{self, Dataset, Session};
use cognate::{surface, Address, Expr, Selection, Universe};

use crate::generate::Source;
use crate::Failure;

pub const DEFAULT_RUNS: usize = 10;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(rename = "entry")]
    pub entries: Vec<Entry>,
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

/// One program, its datasets and the pinned selections.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub program: PathBuf,
    /// Path of the input cell for `demandedBy`.
    pub input: String,
    /// Path of the output cell for `demands`.
    pub output: String,
    #[serde(default)]
    pub datasets: BTreeMap<String, Source>,
}

impl Suite {
    pub fn load(path: &Path) -> Result<(Suite, PathBuf), Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::missing(format!("{}: {e}", path.display())))?;
        let suite: Suite = toml::from_str(&text)
            .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok((suite, base))
    }
}

/// Response-time bands, by mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Instantaneous,
    Uninterrupted,
    Attention,
    Over,
}

impl Category {
    pub fn of(mean_ms: f64) -> Category {
        if mean_ms < 100.0 {
            Category::Instantaneous
        } else if mean_ms < 1000.0 {
            Category::Uninterrupted
        } else if mean_ms < 10000.0 {
            Category::Attention
        } else {
            Category::Over
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Instantaneous => "instantaneous",
            Category::Uninterrupted => "uninterrupted",
            Category::Attention => "attention",
            Category::Over => "over",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub runs: usize,
    pub mean_ms: f64,
    /// Sample standard deviation; zero for a single run.
    pub stddev_ms: f64,
    pub category: Category,
}

impl Stats {
    pub fn from_samples(ms: &[f64]) -> Stats {
        let n = ms.len();
        let mean = if n == 0 {
            0.0
        } else {
            ms.iter().sum::<f64>() / n as f64
        };
        let var = if n < 2 {
            0.0
        } else {
            ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        };
        Stats {
            runs: n,
            mean_ms: mean,
            stddev_ms: var.max(0.0).sqrt(),
            category: Category::of(mean),
        }
    }
}

fn time<T>(runs: usize, mut f: impl FnMut() -> T) -> (Stats, T) {
    let mut samples = Vec::with_capacity(runs);
    let mut last = None;
    for _ in 0..runs.max(1) {
        let start = Instant::now();
        let out = f();
        samples.push(start.elapsed().as_secs_f64() * 1000.0);
        last = Some(out);
    }
    (
        Stats::from_samples(&samples),
        last.expect("at least one run"),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Measured {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub eval: Stats,
    pub demands: Stats,
    pub demanded_by: Stats,
    pub demanded_by_dual: Stats,
    /// Mean of direct `demandedBy` over mean of the dual route.
    pub speedup: f64,
    /// Whether the two `demandedBy` routes gave the same answer.
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Measured(Measured),
    Failed { name: String, error: String },
}

impl Outcome {
    pub fn name(&self) -> &str {
        match self {
            Outcome::Measured(m) => &m.name,
            Outcome::Failed { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub runs: usize,
    pub entries: Vec<Outcome>,
}

impl BenchReport {
    pub fn measured(&self) -> impl Iterator<Item = &Measured> {
        self.entries.iter().filter_map(|o| match o {
            Outcome::Measured(m) => Some(m),
            Outcome::Failed { .. } => None,
        })
    }

    /// Entries where direct `demandedBy` was no slower than the dual route.
    pub fn direct_wins(&self) -> usize {
        self.measured()
            .filter(|m| m.demanded_by.mean_ms <= m.demanded_by_dual.mean_ms)
            .count()
    }
}

fn cell(s: &Session, path: &str) -> Result<Address, String> {
    let map = if path.starts_with("out") {
        &s.outputs
    } else {
        &s.inputs
    };
    match map.resolve(path) {
        Some(e) if e.cell => Ok(e.address),
        Some(_) => Err(format!("`{path}` is not a cell")),
        None => Err(format!("path `{path}` does not resolve")),
    }
}

fn compile(path: &Path) -> Result<(Expr, Vec<String>), String> {
    let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let program = surface::parse(&src).map_err(|e| e.to_string())?;
    let names = program.datasets().iter().map(|n| n.to_string()).collect();
    let core = surface::desugar(&program, &ConstructorSig::default()).map_err(|e| e.to_string())?;
    Ok((core, names))
}

fn measure(entry: &Entry, base: &Path, runs: usize) -> Result<Measured, String> {
    let registry = ForeignRegistry::primitives();
    let (core, names) = compile(&base.join(&entry.program))?;
    let datasets = names
        .iter()
        .map(|n| match entry.datasets.get(n) {
            Some(src) => src.dataset(n, base).map_err(|e| e.to_string()),
            None => Err(format!("no dataset configured for `{n}`")),
        })
        .collect::<Result<Vec<Dataset>, String>>()?;

    let (eval, session) = time(runs, || session::run(&core, &datasets, &registry));
    let session = session.map_err(|e| e.to_string())?;
    let g = &session.graph;
    let x = Selection::from_addresses(Universe::Sources, [cell(&session, &entry.input)?]);
    let y = Selection::from_addresses(Universe::Sinks, [cell(&session, &entry.output)?]);

    let (dem, r) = time(runs, || demands(g, &y));
    r.map_err(|e| e.to_string())?;
    let (direct, a) = time(runs, || demanded_by(g.view(), &x));
    let (dual, b) = time(runs, || demanded_by_via_suffices(g, &x));
    let a = a.map_err(|e| e.to_string())?;
    let b = b.map_err(|e| e.to_string())?;
    Ok(Measured {
        name: entry.name.clone(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        eval,
        demands: dem,
        demanded_by: direct,
        demanded_by_dual: dual,
        speedup: if dual.mean_ms > 0.0 {
            direct.mean_ms / dual.mean_ms
        } else {
            f64::NAN
        },
        agree: a == b,
    })
}

/// Runs every entry in turn; failures are recorded, not fatal.
pub fn run_suite(suite: &Suite, base: &Path, runs: Option<usize>) -> BenchReport {
    let runs = runs.unwrap_or(suite.runs).max(1);
    let entries = suite
        .entries
        .iter()
        .map(|e| match measure(e, base, runs) {
            Ok(m) => Outcome::Measured(m),
            Err(error) => Outcome::Failed {
                name: e.name.clone(),
                error,
            },
        })
        .collect();
    BenchReport { runs, entries }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>8} {:>8}  {:<10} {:>10} {:>9}  category",
            "benchmark", "vertices", "edges", "measure", "mean ms", "stddev"
        )?;
        for o in &self.entries {
            let m = match o {
                Outcome::Measured(m) => m,
                Outcome::Failed { name, error } => {
                    writeln!(f, "{name:<12} FAILED: {error}")?;
                    continue;
                }
            };
            let rows = [
                ("eval", m.eval),
                ("demands", m.demands),
                ("demBy", m.demanded_by),
                ("demBy-suff", m.demanded_by_dual),
            ];
            for (i, (what, s)) in rows.iter().enumerate() {
                let (name, v, e) = if i == 0 {
                    (m.name.clone(), m.vertices.to_string(), m.edges.to_string())
                } else {
                    Default::default()
                };
                writeln!(
                    f,
                    "{name:<12} {v:>8} {e:>8}  {what:<10} {:>10.3} {:>9.3}  {}",
                    s.mean_ms, s.stddev_ms, s.category
                )?;
            }
            writeln!(
                f,
                "{:<12} {:>8} {:>8}  {:<10} {:>10.3}{}",
                "",
                "",
                "",
                "speedup",
                m.speedup,
                if m.agree { "" } else { "  (answers differ)" }
            )?;
        }
        write!(
            f,
            "{} runs each; direct demBy no slower on {} of {} entries",
            self.runs,
            self.direct_wins(),
            self.entries.len()
        )
    }
}
