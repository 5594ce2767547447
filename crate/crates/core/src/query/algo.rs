//! The two graph-slicing algorithms.
//!
//! Both grow a slice `H` of the graph outward from a set of sources. The
//! rule-based formulation picks vertices nondeterministically; here the
//! choice is FIFO.

use std::collections::{HashMap, VecDeque};

use crate::graph::{GraphView, Selection, Universe};
use crate::lang::Address;

use super::QueryError;

/// Checks `x` lies within the sources of `g`.
pub fn require_sources(g: GraphView<'_>, x: &Selection) -> Result<(), QueryError> {
    match x.iter().find(|&a| !g.is_source(a)) {
        Some(a) => Err(QueryError::Universe {
            address: a,
            expected: Universe::Sources,
        }),
        None => Ok(()),
    }
}

/// Outputs that depend on some vertex in `x`.
pub fn demanded_by(g: GraphView<'_>, x: &Selection) -> Result<Selection, QueryError> {
    Ok(demanded_by_slice(g, x, false)?.0)
}

/// As [`demanded_by`], also returning the edges of the final slice when
/// `keep_slice` is set.
pub fn demanded_by_slice(
    g: GraphView<'_>,
    x: &Selection,
    keep_slice: bool,
) -> Result<(Selection, Vec<(Address, Address)>), QueryError> {
    require_sources(g, x)?;
    let mut in_h = Selection::empty(Universe::AllVertices);
    let mut frontier: VecDeque<Address> = VecDeque::new();
    for a in x.iter() {
        in_h.insert(a);
        frontier.push_back(a);
    }
    let mut sinks = Selection::empty(Universe::Sinks);
    let mut slice = Vec::new();
    // Each frontier vertex is a sink of H; moving all its out-edges at once
    // either leaves it a sink of G as well, or makes it internal to H.
    while let Some(a) = frontier.pop_front() {
        let succ = g.successors(a);
        if succ.is_empty() {
            sinks.insert(a);
            continue;
        }
        for &b in succ {
            if keep_slice {
                slice.push((a, b));
            }
            if in_h.insert(b) {
                frontier.push_back(b);
            }
        }
    }
    Ok((sinks, slice))
}

/// Outputs computable from `x` alone: those with no ancestor among the
/// other sources.
pub fn suffices(g: GraphView<'_>, x: &Selection) -> Result<Selection, QueryError> {
    Ok(run_suffices(g, x, &mut NoObserver)?.0)
}

/// As [`suffices`], also returning the vertices of the final slice.
pub fn suffices_slice(
    g: GraphView<'_>,
    x: &Selection,
) -> Result<(Selection, Selection), QueryError> {
    run_suffices(g, x, &mut NoObserver)
}

/// One application of a rewriting rule of the suffices algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// All out-edges of a slice vertex moved into the pending graph.
    Pending(Address),
    /// A vertex with no remaining in-edges joins the slice.
    Extend(Address),
}

/// Where an edge of the original graph currently lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Slice,
    Pending,
    Rest,
}

trait Observer {
    fn active(&self) -> bool;
    fn step(&mut self, state: &SliceState<'_>, step: Step) -> Result<(), QueryError>;
}

struct NoObserver;

impl Observer for NoObserver {
    fn active(&self) -> bool {
        false
    }
    fn step(&mut self, _: &SliceState<'_>, _: Step) -> Result<(), QueryError> {
        Ok(())
    }
}

/// Snapshot of the `(H, P, G)` triple, tracked only under observation.
pub struct SliceState<'s> {
    pub graph: GraphView<'s>,
    pub x: &'s Selection,
    pub in_h: &'s Selection,
    pub in_p: &'s Selection,
    pub parts: &'s HashMap<(Address, Address), Part>,
}

fn run_suffices(
    g: GraphView<'_>,
    x: &Selection,
    obs: &mut dyn Observer,
) -> Result<(Selection, Selection), QueryError> {
    require_sources(g, x)?;
    let track = obs.active();
    let mut remaining: Vec<u32> = vec![0; g.bound()];
    let mut in_h = Selection::empty(Universe::AllVertices);
    let mut in_p = Selection::empty(Universe::AllVertices);
    let mut parts: HashMap<(Address, Address), Part> = HashMap::new();
    if track {
        for v in g.vertices() {
            for &w in g.successors(v) {
                parts.insert((v, w), Part::Rest);
            }
        }
    }
    let mut queue: VecDeque<Address> = VecDeque::new();
    for a in x.iter() {
        in_h.insert(a);
        queue.push_back(a);
    }
    let mut ready = Vec::new();
    while let Some(a) = queue.pop_front() {
        let succ = g.successors(a);
        if succ.is_empty() {
            continue;
        }
        for &b in succ {
            let r = &mut remaining[b.index()];
            if *r == 0 && !in_p.contains(b) {
                *r = g.predecessors(b).len() as u32;
            }
            *r -= 1;
            in_p.insert(b);
            if track {
                parts.insert((a, b), Part::Pending);
            }
            if *r == 0 {
                ready.push(b);
            }
        }
        in_p.insert(a);
        if track {
            obs.step(
                &SliceState {
                    graph: g,
                    x,
                    in_h: &in_h,
                    in_p: &in_p,
                    parts: &parts,
                },
                Step::Pending(a),
            )?;
        }
        for b in ready.drain(..) {
            in_h.insert(b);
            queue.push_back(b);
            if track {
                for &p in g.predecessors(b) {
                    parts.insert((p, b), Part::Slice);
                }
                obs.step(
                    &SliceState {
                        graph: g,
                        x,
                        in_h: &in_h,
                        in_p: &in_p,
                        parts: &parts,
                    },
                    Step::Extend(b),
                )?;
            }
        }
    }
    let mut out = Selection::empty(Universe::Sinks);
    for a in in_h.iter().filter(|&a| g.successors(a).is_empty()) {
        out.insert(a);
    }
    Ok((out, in_h))
}

/// Runs suffices, checking the partial-slice invariant after every rule
/// application and the termination condition at the end. Returns the
/// answer and the sequence of rule applications.
pub fn suffices_checked(
    g: GraphView<'_>,
    x: &Selection,
) -> Result<(Selection, Vec<Step>), QueryError> {
    let mut checker = Checker { trace: Vec::new() };
    let (out, _) = run_suffices(g, x, &mut checker)?;
    Ok((out, checker.trace))
}

struct Checker {
    trace: Vec<Step>,
}

impl Observer for Checker {
    fn active(&self) -> bool {
        true
    }

    fn step(&mut self, state: &SliceState<'_>, step: Step) -> Result<(), QueryError> {
        self.trace.push(step);
        check_partial_slice(state).map_err(|clause| QueryError::Invariant {
            step: self.trace.len(),
            clause,
        })
    }
}

/// The partial-slice conditions on `(H, P, G)` relative to the original
/// graph `G0`:
///
/// * every edge of `G0` lies in exactly one of `H`, `P`, `G`;
/// * no edge of `P` or `G` targets a vertex of `H`;
/// * the sources of `H` are exactly the starting selection;
/// * no other source of `G0` reaches a vertex of `H`;
/// * `sources(G) \ (sinks(P) \ sources(P)) = V(H) + (sources(G0) \ sources(H))`.
pub fn check_partial_slice(s: &SliceState<'_>) -> Result<(), &'static str> {
    let g = s.graph;
    let mut h_in = vec![0usize; g.bound()];
    let mut p_in = vec![0usize; g.bound()];
    let mut p_out = vec![0usize; g.bound()];
    let mut g_in = vec![0usize; g.bound()];
    let mut total = 0;
    for v in g.vertices() {
        for &w in g.successors(v) {
            total += 1;
            let part = *s.parts.get(&(v, w)).ok_or("edge partition")?;
            match part {
                Part::Slice => {
                    if !(s.in_h.contains(v) && s.in_h.contains(w)) {
                        return Err("slice edge endpoints");
                    }
                    h_in[w.index()] += 1;
                }
                Part::Pending | Part::Rest => {
                    if s.in_h.contains(w) {
                        return Err("edge into slice");
                    }
                    if part == Part::Pending {
                        p_in[w.index()] += 1;
                        p_out[v.index()] += 1;
                    } else {
                        g_in[w.index()] += 1;
                    }
                }
            }
        }
    }
    if total != s.parts.len() {
        return Err("edge partition");
    }
    for a in s.in_h.iter() {
        if (h_in[a.index()] == 0) != s.x.contains(a) {
            return Err("slice sources");
        }
    }
    // No source outside the selection reaches the slice.
    let mut seen = s.in_h.clone();
    let mut stack = s.in_h.to_vec();
    while let Some(b) = stack.pop() {
        for &a in g.predecessors(b) {
            if seen.insert(a) {
                stack.push(a);
            }
        }
        if g.predecessors(b).is_empty() && !s.x.contains(b) {
            return Err("outside source reaches slice");
        }
    }
    for v in g.vertices() {
        let i = v.index();
        let source_of_rest = g_in[i] == 0;
        let in_p = s.in_p.contains(v);
        let pending_only_sink = in_p && p_in[i] > 0 && p_out[i] == 0;
        let lhs = source_of_rest && !pending_only_sink;
        let rhs = s.in_h.contains(v) || (g.predecessors(v).is_empty() && !s.x.contains(v));
        if lhs != rhs {
            return Err("rest sources");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DepGraph;

    fn a(i: u32) -> Address {
        Address(i)
    }

    fn sel(xs: &[u32]) -> Selection {
        xs.iter().map(|&i| a(i)).collect()
    }

    fn graph(n: u32, edges: &[(u32, u32)]) -> DepGraph {
        DepGraph::from_parts((0..n).map(a), edges.iter().map(|&(x, y)| (a(x), a(y))))
    }

    #[test]
    fn demanded_by_chain_and_empty() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(demanded_by(g.view(), &sel(&[0])).unwrap(), sel(&[2]));
        assert!(demanded_by(g.view(), &sel(&[])).unwrap().is_empty());
        assert!(matches!(
            demanded_by(g.view(), &sel(&[1])),
            Err(QueryError::Universe { .. })
        ));
        let (_, slice) = demanded_by_slice(g.view(), &sel(&[0]), true).unwrap();
        assert_eq!(slice, vec![(a(0), a(1)), (a(1), a(2))]);
    }

    #[test]
    fn suffices_needs_every_ancestor() {
        // 0 -> 2 <- 1, 1 -> 3
        let g = graph(4, &[(0, 2), (1, 2), (1, 3)]);
        assert!(suffices(g.view(), &sel(&[0])).unwrap().is_empty());
        assert_eq!(suffices(g.view(), &sel(&[1])).unwrap(), sel(&[3]));
        assert_eq!(suffices(g.view(), &sel(&[0, 1])).unwrap(), sel(&[2, 3]));
        let (_, slice) = suffices_slice(g.view(), &sel(&[1])).unwrap();
        assert_eq!(slice, sel(&[1, 3]));
    }

    #[test]
    fn isolated_vertex_is_its_own_answer() {
        let g = graph(2, &[]);
        assert_eq!(demanded_by(g.view(), &sel(&[0])).unwrap(), sel(&[0]));
        assert_eq!(suffices(g.view(), &sel(&[1])).unwrap(), sel(&[1]));
    }

    #[test]
    fn checked_run_on_diamond() {
        let g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let (out, trace) = suffices_checked(g.view(), &sel(&[0])).unwrap();
        assert_eq!(out, sel(&[3]));
        assert_eq!(
            trace,
            vec![
                Step::Pending(a(0)),
                Step::Extend(a(1)),
                Step::Extend(a(2)),
                Step::Pending(a(1)),
                Step::Pending(a(2)),
                Step::Extend(a(3))
            ]
        );
    }

    #[test]
    fn checker_rejects_edge_into_slice() {
        let g = graph(2, &[(0, 1)]);
        let parts: HashMap<_, _> = [((a(0), a(1)), Part::Rest)].into_iter().collect();
        let x = sel(&[0]);
        let in_h = sel(&[0, 1]);
        let in_p = sel(&[]);
        let s = SliceState {
            graph: g.view(),
            x: &x,
            in_h: &in_h,
            in_p: &in_p,
            parts: &parts,
        };
        assert_eq!(check_partial_slice(&s), Err("edge into slice"));
    }

    #[test]
    fn opposite_view_runs_backwards() {
        let g = graph(3, &[(0, 2), (1, 2)]);
        assert_eq!(
            demanded_by(g.opposite_view(), &sel(&[2])).unwrap(),
            sel(&[0, 1])
        );
        assert!(suffices(g.opposite_view(), &sel(&[2])).unwrap() == sel(&[0, 1]));
    }
}
