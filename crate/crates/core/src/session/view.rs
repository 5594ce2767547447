//! A renderable description of a session: one table per tabular dataset and
//! charts read off the result.
//!
//! A result record with a `points` field is a line chart, `bars` a bar chart
//! and `scatter` a scatter plot; an optional `caption` string titles it. Each
//! entry of `points` or `scatter` is a number or an `{x, y}` record; each
//! entry of `bars` is an `{x, y}` record. A list of such records gives
//! several charts, and a bare list of numbers is an untitled line chart.
//! Anything else is shown as text.

use serde::Serialize;

use super::Session;
use crate::lang::{RawValue, Value};

/// One displayed value and the address it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Datum {
    pub value: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub address: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub x: Datum,
    pub y: Datum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ViewNode {
    Table {
        name: String,
        columns: Vec<String>,
        rows: Vec<Vec<Datum>>,
    },
    LineChart {
        caption: Option<String>,
        points: Vec<Point>,
    },
    BarChart {
        caption: Option<String>,
        bars: Vec<Point>,
    },
    ScatterPlot {
        caption: Option<String>,
        points: Vec<Point>,
    },
    Text {
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct View {
    pub nodes: Vec<ViewNode>,
}

fn list(v: &Value) -> Option<Vec<&Value>> {
    let mut out = Vec::new();
    let mut cur = v;
    loop {
        match &*cur.raw {
            RawValue::Constr(c, args) if c.as_ref() == "Cons" && args.len() == 2 => {
                out.push(&args[0]);
                cur = &args[1];
            }
            RawValue::Constr(c, args) if c.as_ref() == "Nil" && args.is_empty() => {
                return Some(out)
            }
            _ => return None,
        }
    }
}

fn field<'v>(v: &'v Value, name: &str) -> Option<&'v Value> {
    match &*v.raw {
        RawValue::Record(fs) => fs.iter().find(|(n, _)| n.as_ref() == name).map(|(_, x)| x),
        _ => None,
    }
}

fn datum(v: &Value) -> Option<Datum> {
    let value = match &*v.raw {
        RawValue::Int(n) => serde_json::json!(n),
        RawValue::Float(x) => serde_json::json!(x),
        RawValue::Str(s) => serde_json::json!(s.as_ref()),
        RawValue::Constr(c, args) if args.is_empty() => serde_json::json!(c.as_ref()),
        _ => return None,
    };
    Some(Datum {
        value,
        address: Some(v.addr.0),
    })
}

fn index(i: usize) -> Datum {
    Datum {
        value: serde_json::json!(i),
        address: None,
    }
}

fn point(i: usize, v: &Value, implicit_x: bool) -> Option<Point> {
    if implicit_x {
        if let Some(y) = datum(v) {
            return Some(Point { x: index(i), y });
        }
    }
    Some(Point {
        x: datum(field(v, "x")?)?,
        y: datum(field(v, "y")?)?,
    })
}

fn points(v: &Value, implicit_x: bool) -> Option<Vec<Point>> {
    list(v)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| point(i, p, implicit_x))
        .collect()
}

fn chart(v: &Value) -> Option<ViewNode> {
    let caption = field(v, "caption").and_then(|c| match &*c.raw {
        RawValue::Str(s) => Some(s.to_string()),
        _ => None,
    });
    if let Some(ps) = field(v, "points") {
        return Some(ViewNode::LineChart {
            caption,
            points: points(ps, true)?,
        });
    }
    if let Some(ps) = field(v, "bars") {
        return Some(ViewNode::BarChart {
            caption,
            bars: points(ps, false)?,
        });
    }
    if let Some(ps) = field(v, "scatter") {
        return Some(ViewNode::ScatterPlot {
            caption,
            points: points(ps, true)?,
        });
    }
    None
}

fn charts(v: &Value) -> Option<Vec<ViewNode>> {
    if let Some(c) = chart(v) {
        return Some(vec![c]);
    }
    let items = list(v)?;
    if let Some(ps) = points(v, true) {
        if items
            .iter()
            .all(|x| matches!(&*x.raw, RawValue::Int(_) | RawValue::Float(_)))
        {
            return Some(vec![ViewNode::LineChart {
                caption: None,
                points: ps,
            }]);
        }
    }
    items.into_iter().map(chart).collect()
}

fn table(name: &str, v: &Value) -> Option<ViewNode> {
    let rows = list(v)?;
    let mut columns: Vec<String> = Vec::new();
    for r in &rows {
        let RawValue::Record(fs) = &*r.raw else {
            return None;
        };
        for (n, _) in fs {
            if !columns.iter().any(|c| c == n.as_ref()) {
                columns.push(n.to_string());
            }
        }
    }
    let rows = rows
        .iter()
        .map(|r| {
            columns
                .iter()
                .map(|c| {
                    field(r, c).and_then(datum).unwrap_or(Datum {
                        value: serde_json::Value::Null,
                        address: None,
                    })
                })
                .collect()
        })
        .collect();
    Some(ViewNode::Table {
        name: name.to_string(),
        columns,
        rows,
    })
}

pub(super) fn build(s: &Session) -> View {
    let mut nodes: Vec<ViewNode> = s
        .dataset_values
        .iter()
        .filter_map(|(name, v)| table(name, v))
        .collect();
    match charts(&s.result) {
        Some(cs) => nodes.extend(cs),
        None => nodes.push(ViewNode::Text {
            text: s.plain().to_string(),
        }),
    }
    View { nodes }
}
