//! Datasets: CSV tables and JSON documents, read into plain values.

use std::path::Path;

use thiserror::Error;

use crate::lang::PlainTerm;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported dataset format {0:?}; expected .csv or .json")]
    Format(String),
    #[error("json number {0} is out of range")]
    Number(String),
}

/// A named input to a program.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub value: PlainTerm,
}

impl Dataset {
    pub fn new(name: impl Into<String>, value: PlainTerm) -> Self {
        Dataset {
            name: name.into(),
            value,
        }
    }

    /// Reads a file, choosing the format by extension.
    pub fn load(name: impl Into<String>, path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("")
            .to_ascii_lowercase();
        let value = match ext.as_str() {
            "csv" => parse_csv(&text)?,
            "json" => parse_json(&text)?,
            other => return Err(DatasetError::Format(other.to_string())),
        };
        Ok(Dataset::new(name, value))
    }
}

pub fn list(items: Vec<PlainTerm>) -> PlainTerm {
    items
        .into_iter()
        .rev()
        .fold(PlainTerm::Constr("Nil".into(), vec![]), |tail, x| {
            PlainTerm::Constr("Cons".into(), vec![x, tail])
        })
}

pub fn record(mut fields: Vec<(String, PlainTerm)>) -> PlainTerm {
    fields.sort_by(|a, b| a.0.cmp(&b.0));
    PlainTerm::Record(fields)
}

fn cell(s: &str) -> PlainTerm {
    let t = s.trim();
    if let Ok(n) = t.parse::<i64>() {
        PlainTerm::Int(n)
    } else if let Ok(x) = t.parse::<f64>() {
        PlainTerm::Float(x)
    } else {
        PlainTerm::Str(s.to_string())
    }
}

/// A header row names the fields; each further row becomes a record.
pub fn parse_csv(text: &str) -> Result<PlainTerm, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::Headers)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row?;
        let fields = headers
            .iter()
            .zip(row.iter())
            .map(|(h, v)| (h.clone(), cell(v)))
            .collect();
        rows.push(record(fields));
    }
    Ok(list(rows))
}

/// Arrays become lists, objects records, booleans `True`/`False` and
/// `null` becomes `None`.
pub fn parse_json(text: &str) -> Result<PlainTerm, DatasetError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    from_json(&v)
}

fn from_json(v: &serde_json::Value) -> Result<PlainTerm, DatasetError> {
    use serde_json::Value as J;
    Ok(match v {
        J::Null => PlainTerm::Constr("None".into(), vec![]),
        J::Bool(b) => PlainTerm::Constr(if *b { "True" } else { "False" }.into(), vec![]),
        J::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => PlainTerm::Int(i),
            (None, Some(x)) => PlainTerm::Float(x),
            _ => return Err(DatasetError::Number(n.to_string())),
        },
        J::String(s) => PlainTerm::Str(s.clone()),
        J::Array(items) => list(items.iter().map(from_json).collect::<Result<_, _>>()?),
        J::Object(map) => record(
            map.iter()
                .map(|(k, v)| Ok((k.clone(), from_json(v)?)))
                .collect::<Result<_, DatasetError>>()?,
        ),
    })
}
