//! Sessions saved to disk.
//!
//! A session directory holds `result.txt`, `graph.edges` (with one
//! `# address label` comment per vertex), `inputs.map`, `outputs.map` and a
//! `meta` file of `key=value` lines starting with `format`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cognate::query::{QueryOp, Restriction};
use cognate::session::{PathEntry, PathMap, Session};
use cognate::{Address, DepGraph, Selection, Universe};

use crate::Failure;

pub const FORMAT: u32 = 1;

/// What a session directory holds.
#[derive(Debug, Clone)]
pub struct Stored {
    pub result: String,
    pub graph: DepGraph,
    pub labels: BTreeMap<Address, String>,
    pub inputs: PathMap,
    pub outputs: PathMap,
    pub meta: BTreeMap<String, String>,
}

pub fn save(dir: &Path, program: &str, s: &Session) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::error(format!("{}: {e}", dir.display())))?;
    let mut edges = String::new();
    for a in s.graph.vertices() {
        let label = s.labels[a.index()].to_string().replace('\n', " ");
        edges.push_str(&format!("# {} {label}\n", a.0));
    }
    edges.push_str(&s.graph.to_edge_list());
    let meta = format!(
        "format={FORMAT}\nprogram={program}\nvertices={}\nedges={}\ndataset_nodes={}\n",
        s.graph.vertex_count(),
        s.graph.edge_count(),
        s.dataset_nodes
    );
    let files = [
        ("result.txt", format!("{}\n", s.plain())),
        ("graph.edges", edges),
        ("inputs.map", s.inputs.to_text()),
        ("outputs.map", s.outputs.to_text()),
        ("meta", meta),
    ];
    for (name, text) in files {
        fs::write(dir.join(name), text)
            .map_err(|e| Failure::error(format!("{}: {e}", dir.join(name).display())))?;
    }
    Ok(())
}

fn read(dir: &Path, name: &str) -> Result<String, Failure> {
    let p = dir.join(name);
    fs::read_to_string(&p).map_err(|e| Failure::missing(format!("{}: {e}", p.display())))
}

pub fn load(dir: &Path) -> Result<Stored, Failure> {
    let meta: BTreeMap<String, String> = read(dir, "meta")?
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    match meta.get("format").map(|f| f.parse::<u32>()) {
        Some(Ok(FORMAT)) => {}
        Some(Ok(v)) => {
            return Err(Failure::error(format!(
                "session format {v} is not supported (expected {FORMAT})"
            )))
        }
        _ => return Err(Failure::error("meta: missing or malformed `format`")),
    }
    let edges = read(dir, "graph.edges")?;
    let graph = DepGraph::from_edge_list(&edges)
        .map_err(|e| Failure::error(format!("graph.edges: {e}")))?;
    let labels = edges
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| {
            let (a, label) = l.split_once(' ').unwrap_or((l, ""));
            Some((Address(a.parse().ok()?), label.to_string()))
        })
        .collect();
    let map = |name: &str| -> Result<PathMap, Failure> {
        PathMap::from_text(&read(dir, name)?).map_err(|e| Failure::error(format!("{name}: {e}")))
    };
    Ok(Stored {
        result: read(dir, "result.txt")?.trim_end().to_string(),
        graph,
        labels,
        inputs: map("inputs.map")?,
        outputs: map("outputs.map")?,
        meta,
    })
}

/// Which presentation universes a query result is filtered by.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Restrict {
    #[default]
    Both,
    Inputs,
    Outputs,
    None,
}

impl Stored {
    pub fn restriction(&self, r: Restrict) -> Restriction {
        let inputs = || Some(self.inputs.cells(Universe::Sources));
        let outputs = || Some(self.outputs.cells(Universe::Sinks));
        match r {
            Restrict::Both => Restriction {
                inputs: inputs(),
                outputs: outputs(),
            },
            Restrict::Inputs => Restriction {
                inputs: inputs(),
                outputs: None,
            },
            Restrict::Outputs => Restriction {
                inputs: None,
                outputs: outputs(),
            },
            Restrict::None => Restriction::none(),
        }
    }

    pub fn label(&self, a: Address) -> &str {
        self.labels.get(&a).map(String::as_str).unwrap_or("")
    }

    /// The path of `a` in whichever map knows it.
    pub fn path(&self, a: Address) -> Option<&PathEntry> {
        self.inputs.path_of(a).or_else(|| self.outputs.path_of(a))
    }

    pub fn query(
        &self,
        op: QueryOp,
        sel: &Selection,
        restrict: Restrict,
    ) -> Result<Selection, Failure> {
        op.run_restricted(&self.graph, sel, &self.restriction(restrict))
            .map_err(Failure::error)
    }

    /// One line per address: address, path (or `-`), label.
    pub fn listing(&self, sel: &Selection) -> String {
        let mut out = String::new();
        for a in sel.iter() {
            let path = self.path(a).map(|e| e.path.as_str()).unwrap_or("-");
            out.push_str(&format!("{}\t{path}\t{}\n", a.0, self.label(a)));
        }
        out
    }
}
