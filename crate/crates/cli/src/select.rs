//! Selection specs: dataset paths (`data[3].co2e`), output paths (`out[1]`)
//! or raw vertex ids (`17` or `#17`).
//!
//! A path naming a record or list cell stands for every cell beneath it.

use cognate::session::PathMap;
use cognate::{Address, Selection, Universe};

use crate::store::Stored;
use crate::Failure;

fn under(map: &PathMap, path: &str) -> Vec<Address> {
    match map.resolve(path) {
        Some(e) if e.cell => vec![e.address],
        Some(_) => map
            .entries()
            .iter()
            .filter(|e| e.cell)
            .filter(|e| {
                e.path
                    .strip_prefix(path)
                    .is_some_and(|rest| rest.starts_with('.') || rest.starts_with('['))
            })
            .map(|e| e.address)
            .collect(),
        None => Vec::new(),
    }
}

/// Resolves one spec to the addresses it names.
pub fn resolve_one(s: &Stored, spec: &str) -> Result<Vec<Address>, Failure> {
    let raw = spec.strip_prefix('#').unwrap_or(spec);
    if let Ok(n) = raw.parse::<u32>() {
        return Ok(vec![Address(n)]);
    }
    let map = if spec == "out" || spec.starts_with("out[") || spec.starts_with("out.") {
        &s.outputs
    } else {
        &s.inputs
    };
    if map.resolve(spec).is_none() {
        return Err(Failure::error(format!("path `{spec}` does not resolve")));
    }
    Ok(under(map, spec))
}

/// Resolves specs, which may also be comma separated, into a selection.
pub fn resolve(s: &Stored, specs: &[String], universe: Universe) -> Result<Selection, Failure> {
    let mut sel = Selection::empty(universe);
    for spec in specs.iter().flat_map(|x| x.split(',')).map(str::trim) {
        if spec.is_empty() {
            continue;
        }
        for a in resolve_one(s, spec)? {
            if !s.graph.contains_vertex(a) {
                return Err(Failure::error(format!("{spec}: no vertex {}", a.0)));
            }
            sel.insert(a);
        }
    }
    Ok(sel)
}
