//! Queries relating inputs and outputs through a dependence graph.
//!
//! The four basic operators are `demanded_by` (outputs using some input),
//! `demands` (inputs some output uses), and their De Morgan duals `suffices`
//! and `only_needed_for`. Each has a direct graph algorithm and an
//! alternative obtained by dualising another; both are exposed so they can
//! be compared.

pub mod algo;
pub mod relation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DepGraph, GraphError, GraphView, Relation, Selection, Universe};
use crate::lang::Address;

pub use algo::{demanded_by, suffices, suffices_checked, Step};
pub use relation::{
    check_conjugate, check_galois, de_morgan_dual, dual_image, dual_preimage, image, preimage,
    SelectionFn,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("address {address} is not in the {expected:?} universe")]
    Universe {
        address: Address,
        expected: Universe,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("exhaustive check needs 2^{bits} cases, over the budget of {budget}")]
    Budget { bits: usize, budget: u64 },
    #[error("partial-slice invariant broken at step {step}: {clause}")]
    Invariant { step: usize, clause: &'static str },
}

/// Universe errors from the opposite graph name the original's universe.
fn flipped(e: QueryError) -> QueryError {
    match e {
        QueryError::Universe {
            address,
            expected: Universe::Sources,
        } => QueryError::Universe {
            address,
            expected: Universe::Sinks,
        },
        e => e,
    }
}

/// Inputs used by some output in `y`.
pub fn demands(g: &DepGraph, y: &Selection) -> Result<Selection, QueryError> {
    Ok(demanded_by(g.opposite_view(), y)
        .map_err(flipped)?
        .with_universe(Universe::Sources))
}

/// Inputs used only by outputs in `y`.
pub fn only_needed_for(g: &DepGraph, y: &Selection) -> Result<Selection, QueryError> {
    Ok(suffices(g.opposite_view(), y)
        .map_err(flipped)?
        .with_universe(Universe::Sources))
}

/// Inputs sharing an output with some input in `x`.
pub fn linked_inputs(g: &DepGraph, x: &Selection) -> Result<Selection, QueryError> {
    demands(g, &demanded_by(g.view(), x)?)
}

/// Outputs sharing an input with some output in `y`.
pub fn linked_outputs(g: &DepGraph, y: &Selection) -> Result<Selection, QueryError> {
    demanded_by(g.view(), &demands(g, y)?)
}

/// `not . f . not` over the sources and sinks of a view, computed directly.
fn dual_over(
    g: GraphView<'_>,
    x: &Selection,
    f: impl Fn(GraphView<'_>, &Selection) -> Result<Selection, QueryError>,
) -> Result<Selection, QueryError> {
    algo::require_sources(g, x)?;
    let rest = g.sources().difference(x);
    Ok(g.sinks().difference(&f(g, &rest)?))
}

/// `demanded_by` as the dual of `suffices`.
pub fn demanded_by_via_suffices(g: &DepGraph, x: &Selection) -> Result<Selection, QueryError> {
    dual_over(g.view(), x, suffices)
}

/// `demands` as the dual of `suffices` on the opposite graph.
pub fn demands_via_suffices(g: &DepGraph, y: &Selection) -> Result<Selection, QueryError> {
    Ok(dual_over(g.opposite_view(), y, suffices)
        .map_err(flipped)?
        .with_universe(Universe::Sources))
}

/// `suffices` as the dual of `demanded_by`.
pub fn suffices_via_demanded_by(g: &DepGraph, x: &Selection) -> Result<Selection, QueryError> {
    dual_over(g.view(), x, demanded_by)
}

/// `only_needed_for` as the dual of `demanded_by` on the opposite graph.
pub fn only_needed_for_via_demanded_by(
    g: &DepGraph,
    y: &Selection,
) -> Result<Selection, QueryError> {
    Ok(dual_over(g.opposite_view(), y, demanded_by)
        .map_err(flipped)?
        .with_universe(Universe::Sources))
}

/// The operators a client can ask for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum QueryOp {
    Demands,
    DemandedBy,
    Suffices,
    DualPreimage,
    LinkedInputs,
    LinkedOutputs,
}

impl QueryOp {
    pub const ALL: [QueryOp; 6] = [
        QueryOp::Demands,
        QueryOp::DemandedBy,
        QueryOp::Suffices,
        QueryOp::DualPreimage,
        QueryOp::LinkedInputs,
        QueryOp::LinkedOutputs,
    ];

    /// Universe the selection must come from.
    pub fn domain(self) -> Universe {
        match self {
            QueryOp::DemandedBy | QueryOp::Suffices | QueryOp::LinkedInputs => Universe::Sources,
            QueryOp::Demands | QueryOp::DualPreimage | QueryOp::LinkedOutputs => Universe::Sinks,
        }
    }

    /// Universe the answer lives in.
    pub fn codomain(self) -> Universe {
        match self {
            QueryOp::DemandedBy | QueryOp::Suffices | QueryOp::LinkedOutputs => Universe::Sinks,
            QueryOp::Demands | QueryOp::DualPreimage | QueryOp::LinkedInputs => Universe::Sources,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QueryOp::Demands => "demands",
            QueryOp::DemandedBy => "demandedBy",
            QueryOp::Suffices => "suffices",
            QueryOp::DualPreimage => "dualPreimage",
            QueryOp::LinkedInputs => "linkedInputs",
            QueryOp::LinkedOutputs => "linkedOutputs",
        }
    }

    /// Runs the direct algorithm for this operator.
    pub fn run(self, g: &DepGraph, s: &Selection) -> Result<Selection, QueryError> {
        self.run_restricted(g, s, &Restriction::none())
    }

    /// Runs the operator, keeping only addresses in the restriction's
    /// universes, including at the intermediate step of the linked operators.
    pub fn run_restricted(
        self,
        g: &DepGraph,
        s: &Selection,
        r: &Restriction,
    ) -> Result<Selection, QueryError> {
        match self {
            QueryOp::DemandedBy => Ok(r.outputs(demanded_by(g.view(), s)?)),
            QueryOp::Suffices => Ok(r.outputs(suffices(g.view(), s)?)),
            QueryOp::Demands => Ok(r.inputs(demands(g, s)?)),
            QueryOp::DualPreimage => Ok(r.inputs(only_needed_for(g, s)?)),
            QueryOp::LinkedInputs => {
                let mid = r.outputs(demanded_by(g.view(), s)?);
                Ok(r.inputs(demands(g, &mid)?))
            }
            QueryOp::LinkedOutputs => {
                let mid = r.inputs(demands(g, s)?);
                Ok(r.outputs(demanded_by(g.view(), &mid)?))
            }
        }
    }
}

impl fmt::Display for QueryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QueryOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QueryOp::ALL
            .into_iter()
            .find(|op| {
                op.name().eq_ignore_ascii_case(s)
                    || op.name().to_lowercase() == s.replace(['-', '_'], "")
            })
            .ok_or_else(|| {
                let names: Vec<_> = QueryOp::ALL.iter().map(|op| op.name()).collect();
                format!("unknown query {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Optional presentation universes for inputs and outputs.
#[derive(Debug, Clone, Default)]
pub struct Restriction {
    pub inputs: Option<Selection>,
    pub outputs: Option<Selection>,
}

impl Restriction {
    pub fn none() -> Self {
        Restriction::default()
    }

    pub fn new(inputs: Selection, outputs: Selection) -> Self {
        Restriction {
            inputs: Some(inputs),
            outputs: Some(outputs),
        }
    }

    fn inputs(&self, s: Selection) -> Selection {
        match &self.inputs {
            Some(u) => s.intersection(u),
            None => s,
        }
    }

    fn outputs(&self, s: Selection) -> Selection {
        match &self.outputs {
            Some(u) => s.intersection(u),
            None => s,
        }
    }
}

/// Reference implementation through the explicit IO relation.
pub fn oracle_query(op: QueryOp, io: &Relation, s: &Selection) -> Result<Selection, QueryError> {
    match op {
        QueryOp::DemandedBy => image(io, s),
        QueryOp::Demands => preimage(io, s),
        QueryOp::Suffices => dual_image(io, s),
        QueryOp::DualPreimage => dual_preimage(io, s),
        QueryOp::LinkedInputs => preimage(io, &image(io, s)?),
        QueryOp::LinkedOutputs => image(io, &preimage(io, s)?),
    }
}

/// [`oracle_query`], building the IO relation first.
pub fn oracle_query_graph(
    op: QueryOp,
    g: &DepGraph,
    s: &Selection,
) -> Result<Selection, QueryError> {
    oracle_query(op, &g.io_relation()?, s)
}
