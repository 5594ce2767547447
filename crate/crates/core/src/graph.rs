//! Dynamic dependence graphs.
//!
//! A [`DepGraph`] is a directed acyclic graph over [`Address`]es. An edge
//! `(a, b)` records that the value at `b` was computed using the value at `a`.
//! Both adjacency directions are stored so that the opposite graph is a free
//! [`GraphView`] rather than a copy.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::lang::Address;

pub mod iso;

pub use iso::LabelledGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("in-star target {0} is already a member of its source set")]
    DegenerateStar(Address),
    #[error("edge ({0}, {1}) occurs in both operands of a disjoint union")]
    NotDisjoint(Address, Address),
    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(Address, Address),
    #[error("graph has a cycle through vertex {0}")]
    Cycle(Address),
    #[error("selection contains {0}, which is outside its universe")]
    Universe(Address),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Which Boolean algebra a [`Selection`] claims to live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Universe {
    Sources,
    Sinks,
    #[default]
    AllVertices,
}

/// A set of addresses: an element of a powerset Boolean algebra.
///
/// Equality compares members only; the universe tag is descriptive.
#[derive(Clone, Default)]
pub struct Selection {
    bits: FixedBitSet,
    universe: Universe,
}

impl Selection {
    pub fn empty(universe: Universe) -> Self {
        Selection {
            bits: FixedBitSet::new(),
            universe,
        }
    }

    pub fn from_addresses<I: IntoIterator<Item = Address>>(universe: Universe, addrs: I) -> Self {
        let mut s = Selection::empty(universe);
        for a in addrs {
            s.insert(a);
        }
        s
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn with_universe(mut self, universe: Universe) -> Self {
        self.universe = universe;
        self
    }

    pub fn insert(&mut self, a: Address) -> bool {
        let i = a.index();
        if i >= self.bits.len() {
            self.bits.grow((i + 1).max(self.bits.len() * 2));
        }
        !self.bits.put(i)
    }

    pub fn remove(&mut self, a: Address) {
        if a.index() < self.bits.len() {
            self.bits.set(a.index(), false);
        }
    }

    pub fn contains(&self, a: Address) -> bool {
        self.bits.contains(a.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Address> + '_ {
        self.bits.ones().map(Address::from_index)
    }

    pub fn to_vec(&self) -> Vec<Address> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Selection) -> Selection {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Selection {
            bits,
            universe: self.universe,
        }
    }

    pub fn intersection(&self, other: &Selection) -> Selection {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Selection {
            bits,
            universe: self.universe,
        }
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Selection) -> Selection {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Selection {
            bits,
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &Selection) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Selection) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// First member not contained in `universe`, if any.
    pub fn first_outside(&self, universe: &Selection) -> Option<Address> {
        self.iter().find(|a| !universe.contains(*a))
    }
}

impl PartialEq for Selection {
    fn eq(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits) && other.bits.is_subset(&self.bits)
    }
}

impl Eq for Selection {}

impl fmt::Debug for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

impl FromIterator<Address> for Selection {
    fn from_iter<T: IntoIterator<Item = Address>>(iter: T) -> Self {
        Selection::from_addresses(Universe::AllVertices, iter)
    }
}

/// A relation between two explicitly given universes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    left: Selection,
    right: Selection,
    pairs: BTreeSet<(Address, Address)>,
}

impl Relation {
    pub fn new(
        left: Selection,
        right: Selection,
        pairs: impl IntoIterator<Item = (Address, Address)>,
    ) -> Result<Self, GraphError> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(a, b) in &pairs {
            if !left.contains(a) {
                return Err(GraphError::Universe(a));
            }
            if !right.contains(b) {
                return Err(GraphError::Universe(b));
            }
        }
        Ok(Relation { left, right, pairs })
    }

    pub fn left(&self) -> &Selection {
        &self.left
    }

    pub fn right(&self) -> &Selection {
        &self.right
    }

    pub fn contains(&self, a: Address, b: Address) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Address, Address)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn converse(&self) -> Relation {
        Relation {
            left: self.right.clone(),
            right: self.left.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }
}

/// An immutable-after-construction DAG with forward and backward adjacency.
#[derive(Clone, Default)]
pub struct DepGraph {
    present: FixedBitSet,
    vertex_count: usize,
    edge_count: usize,
    succ: Vec<Vec<Address>>,
    pred: Vec<Vec<Address>>,
}

impl DepGraph {
    pub fn new() -> Self {
        DepGraph::default()
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = Address>,
        edges: impl IntoIterator<Item = (Address, Address)>,
    ) -> Self {
        let mut g = DepGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// One past the largest address slot in use.
    pub fn bound(&self) -> usize {
        self.succ.len()
    }

    fn reserve_slot(&mut self, a: Address) {
        let i = a.index();
        if i >= self.succ.len() {
            self.succ.resize_with(i + 1, Vec::new);
            self.pred.resize_with(i + 1, Vec::new);
            if i >= self.present.len() {
                self.present.grow((i + 1).max(self.present.len() * 2));
            }
        }
    }

    pub fn add_vertex(&mut self, a: Address) -> bool {
        self.reserve_slot(a);
        let fresh = !self.present.put(a.index());
        if fresh {
            self.vertex_count += 1;
        }
        fresh
    }

    /// Adds an edge (and its endpoints). Returns false if it was already present.
    pub fn add_edge(&mut self, a: Address, b: Address) -> bool {
        self.add_vertex(a);
        self.add_vertex(b);
        if self.succ[a.index()].contains(&b) {
            return false;
        }
        self.succ[a.index()].push(b);
        self.pred[b.index()].push(a);
        self.edge_count += 1;
        true
    }

    /// Adds `in_star(deps, alpha)` for a vertex `alpha` not yet in the graph.
    ///
    /// `deps` must be duplicate-free and already present. This is the only way
    /// evaluation grows a graph, so every new edge targets a fresh vertex.
    pub fn extend_star(&mut self, alpha: Address, deps: &[Address]) {
        debug_assert!(!self.contains_vertex(alpha), "address {alpha} is not fresh");
        self.add_vertex(alpha);
        for &d in deps {
            debug_assert!(self.contains_vertex(d), "dependency {d} is not a vertex");
            self.succ[d.index()].push(alpha);
        }
        self.pred[alpha.index()].extend_from_slice(deps);
        self.edge_count += deps.len();
    }

    pub fn contains_vertex(&self, a: Address) -> bool {
        self.present.contains(a.index())
    }

    pub fn contains_edge(&self, a: Address, b: Address) -> bool {
        self.contains_vertex(a) && self.succ[a.index()].contains(&b)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = Address> + '_ {
        self.present.ones().map(Address::from_index)
    }

    pub fn vertex_set(&self) -> Selection {
        Selection {
            bits: self.present.clone(),
            universe: Universe::AllVertices,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Address, Address)> + '_ {
        self.vertices()
            .flat_map(move |a| self.succ[a.index()].iter().map(move |&b| (a, b)))
    }

    pub fn successors(&self, a: Address) -> &[Address] {
        self.succ.get(a.index()).map_or(&[], Vec::as_slice)
    }

    pub fn predecessors(&self, a: Address) -> &[Address] {
        self.pred.get(a.index()).map_or(&[], Vec::as_slice)
    }

    pub fn out_edges(&self, a: Address) -> BTreeSet<(Address, Address)> {
        self.successors(a).iter().map(|&b| (a, b)).collect()
    }

    pub fn in_edges(&self, a: Address) -> BTreeSet<(Address, Address)> {
        self.predecessors(a).iter().map(|&b| (b, a)).collect()
    }

    /// The star graph `({alpha} ⊎ V, V × {alpha})`.
    pub fn in_star(deps: &Selection, alpha: Address) -> Result<DepGraph, GraphError> {
        if deps.contains(alpha) {
            return Err(GraphError::DegenerateStar(alpha));
        }
        let mut g = DepGraph::new();
        for d in deps.iter() {
            g.add_vertex(d);
        }
        g.add_vertex(alpha);
        for d in deps.iter() {
            g.add_edge(d, alpha);
        }
        Ok(g)
    }

    pub fn union(&self, other: &DepGraph) -> DepGraph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for (a, b) in other.edges() {
            g.add_edge(a, b);
        }
        g
    }

    /// Union whose operands must not share an edge.
    pub fn disjoint_union(&self, other: &DepGraph) -> Result<DepGraph, GraphError> {
        if let Some((a, b)) = other.edges().find(|&(a, b)| self.contains_edge(a, b)) {
            return Err(GraphError::NotDisjoint(a, b));
        }
        Ok(self.union(other))
    }

    pub fn sources(&self) -> Selection {
        self.view().sources()
    }

    pub fn sinks(&self) -> Selection {
        self.view().sinks()
    }

    /// A materialised copy of the opposite graph. See [`DepGraph::opposite_view`]
    /// for the constant-time alternative.
    pub fn opposite(&self) -> DepGraph {
        DepGraph {
            present: self.present.clone(),
            vertex_count: self.vertex_count,
            edge_count: self.edge_count,
            succ: self.pred.clone(),
            pred: self.succ.clone(),
        }
    }

    pub fn view(&self) -> GraphView<'_> {
        GraphView {
            graph: self,
            reversed: false,
        }
    }

    pub fn opposite_view(&self) -> GraphView<'_> {
        GraphView {
            graph: self,
            reversed: true,
        }
    }

    /// Deletes edges, keeping every vertex.
    pub fn remove_edges<'e>(
        &self,
        edges: impl IntoIterator<Item = &'e (Address, Address)>,
    ) -> Result<DepGraph, GraphError> {
        let mut g = self.clone();
        for &(a, b) in edges {
            let Some(i) = g
                .succ
                .get(a.index())
                .and_then(|s| s.iter().position(|&x| x == b))
            else {
                return Err(GraphError::MissingEdge(a, b));
            };
            g.succ[a.index()].swap_remove(i);
            let j = g.pred[b.index()]
                .iter()
                .position(|&x| x == a)
                .expect("transpose invariant");
            g.pred[b.index()].swap_remove(j);
            g.edge_count -= 1;
        }
        Ok(g)
    }

    /// `forward` and `backward` adjacency are exact transposes.
    pub fn check_transpose(&self) -> bool {
        let forward: BTreeSet<_> = self.edges().collect();
        let backward: BTreeSet<_> = self
            .vertices()
            .flat_map(|b| self.pred[b.index()].iter().map(move |&a| (a, b)))
            .collect();
        forward == backward
            && forward.len() == self.edge_count
            && forward
                .iter()
                .all(|&(a, b)| self.contains_vertex(a) && self.contains_vertex(b))
    }

    /// Kahn's algorithm; fails on the first vertex found on a cycle.
    pub fn topological_order(&self) -> Result<Vec<Address>, GraphError> {
        let mut indegree: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut queue: Vec<Address> = self
            .vertices()
            .filter(|a| indegree[a.index()] == 0)
            .collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(a) = queue.pop() {
            order.push(a);
            for &b in &self.succ[a.index()] {
                indegree[b.index()] -= 1;
                if indegree[b.index()] == 0 {
                    queue.push(b);
                }
            }
        }
        if order.len() != self.vertex_count {
            let stuck = self
                .vertices()
                .find(|a| indegree[a.index()] > 0)
                .expect("cycle vertex");
            return Err(GraphError::Cycle(stuck));
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Reflexive-transitive closure of the edge relation.
    pub fn reachability(&self) -> Result<Relation, GraphError> {
        let order = self.topological_order()?;
        let mut reach: Vec<FixedBitSet> = vec![FixedBitSet::new(); self.bound()];
        for &a in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(self.bound());
            set.insert(a.index());
            for &b in &self.succ[a.index()] {
                set.union_with(&reach[b.index()]);
            }
            reach[a.index()] = set;
        }
        let all = self.vertex_set();
        let pairs = self
            .vertices()
            .flat_map(|a| {
                reach[a.index()]
                    .ones()
                    .map(move |b| (a, Address::from_index(b)))
            })
            .collect::<Vec<_>>();
        Relation::new(all.clone(), all, pairs)
    }

    /// Reachability restricted to `sources × sinks`.
    pub fn io_relation(&self) -> Result<Relation, GraphError> {
        let reach = self.reachability()?;
        let sources = self.sources();
        let sinks = self.sinks();
        let pairs = reach
            .pairs()
            .filter(|&(a, b)| sources.contains(a) && sinks.contains(b))
            .collect::<Vec<_>>();
        Relation::new(sources, sinks, pairs)
    }

    /// Edge-list text form: a `vertices:` header followed by one `src dst` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::from("vertices:");
        for v in self.vertices() {
            out.push(' ');
            out.push_str(&v.0.to_string());
        }
        out.push('\n');
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        for (a, b) in edges {
            out.push_str(&format!("{} {}\n", a.0, b.0));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<DepGraph, GraphError> {
        let parse_addr = |tok: &str, line: usize| {
            tok.parse::<u32>()
                .map(Address)
                .map_err(|_| GraphError::Parse {
                    line,
                    message: format!("bad vertex id `{tok}`"),
                })
        };
        let mut g = DepGraph::new();
        let mut saw_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if let Some(rest) = l.strip_prefix("vertices:") {
                if saw_header {
                    return Err(GraphError::Parse {
                        line,
                        message: "duplicate header".into(),
                    });
                }
                saw_header = true;
                for tok in rest.split_whitespace() {
                    g.add_vertex(parse_addr(tok, line)?);
                }
                continue;
            }
            if !saw_header {
                return Err(GraphError::Parse {
                    line,
                    message: "missing `vertices:` header".into(),
                });
            }
            let mut toks = l.split_whitespace();
            let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(GraphError::Parse {
                    line,
                    message: "expected `<src> <dst>`".into(),
                });
            };
            let (a, b) = (parse_addr(a, line)?, parse_addr(b, line)?);
            if !g.contains_vertex(a) || !g.contains_vertex(b) {
                return Err(GraphError::Parse {
                    line,
                    message: "edge endpoint not in header".into(),
                });
            }
            g.add_edge(a, b);
        }
        if !saw_header {
            return Err(GraphError::Parse {
                line: 0,
                message: "missing `vertices:` header".into(),
            });
        }
        Ok(g)
    }

    /// Graphviz rendering; `label` supplies optional vertex captions.
    pub fn to_dot(&self, label: impl Fn(Address) -> Option<String>) -> String {
        let mut out = String::from("digraph dependence {\n  rankdir=BT;\n");
        for v in self.vertices() {
            match label(v) {
                Some(l) => out.push_str(&format!(
                    "  n{} [label=\"{}\\n#{}\"];\n",
                    v.0,
                    l.replace('\\', "\\\\").replace('"', "\\\""),
                    v.0
                )),
                None => out.push_str(&format!("  n{} [label=\"#{}\"];\n", v.0, v.0)),
            }
        }
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        for (a, b) in edges {
            out.push_str(&format!("  n{} -> n{};\n", a.0, b.0));
        }
        out.push_str("}\n");
        out
    }
}

impl PartialEq for DepGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edge_count == other.edge_count
            && self.vertices().all(|v| other.contains_vertex(v))
            && self.edges().all(|(a, b)| other.contains_edge(a, b))
    }
}

impl Eq for DepGraph {}

impl fmt::Debug for DepGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut edges: Vec<_> = self.edges().map(|(a, b)| (a.0, b.0)).collect();
        edges.sort_unstable();
        f.debug_struct("DepGraph")
            .field(
                "vertices",
                &self.vertices().map(|a| a.0).collect::<Vec<_>>(),
            )
            .field("edges", &edges)
            .finish()
    }
}

/// A borrowed graph, possibly seen through its converse. Flipping is O(1).
#[derive(Clone, Copy)]
pub struct GraphView<'g> {
    graph: &'g DepGraph,
    reversed: bool,
}

impl<'g> GraphView<'g> {
    pub fn graph(&self) -> &'g DepGraph {
        self.graph
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn opposite(self) -> GraphView<'g> {
        GraphView {
            graph: self.graph,
            reversed: !self.reversed,
        }
    }

    pub fn bound(&self) -> usize {
        self.graph.bound()
    }

    pub fn contains_vertex(&self, a: Address) -> bool {
        self.graph.contains_vertex(a)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Address> + 'g {
        self.graph.vertices()
    }

    pub fn successors(&self, a: Address) -> &'g [Address] {
        if self.reversed {
            self.graph.predecessors(a)
        } else {
            self.graph.successors(a)
        }
    }

    pub fn predecessors(&self, a: Address) -> &'g [Address] {
        if self.reversed {
            self.graph.successors(a)
        } else {
            self.graph.predecessors(a)
        }
    }

    pub fn is_source(&self, a: Address) -> bool {
        self.contains_vertex(a) && self.predecessors(a).is_empty()
    }

    pub fn is_sink(&self, a: Address) -> bool {
        self.contains_vertex(a) && self.successors(a).is_empty()
    }

    pub fn sources(&self) -> Selection {
        let mut s = Selection::empty(Universe::Sources);
        for v in self.vertices().filter(|&v| self.predecessors(v).is_empty()) {
            s.insert(v);
        }
        s
    }

    pub fn sinks(&self) -> Selection {
        let mut s = Selection::empty(Universe::Sinks);
        for v in self.vertices().filter(|&v| self.successors(v).is_empty()) {
            s.insert(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32) -> Address {
        Address(i)
    }

    fn sel(ids: &[u32]) -> Selection {
        ids.iter().map(|&i| a(i)).collect()
    }

    #[test]
    fn in_star_unfolds() {
        let g = DepGraph::in_star(&sel(&[1, 2]), a(0)).unwrap();
        assert_eq!(
            g,
            DepGraph::from_parts([a(0), a(1), a(2)], [(a(1), a(0)), (a(2), a(0))])
        );
        let lone = DepGraph::in_star(&sel(&[]), a(7)).unwrap();
        assert_eq!(lone.vertex_count(), 1);
        assert_eq!(lone.edge_count(), 0);
        assert_eq!(
            DepGraph::in_star(&sel(&[3]), a(3)),
            Err(GraphError::DegenerateStar(a(3)))
        );
    }

    #[test]
    fn unions() {
        let g = DepGraph::from_parts([a(0), a(1)], [(a(0), a(1))]);
        assert_eq!(g.union(&DepGraph::new()), g);
        let u = DepGraph::from_parts([a(0)], [])
            .disjoint_union(&DepGraph::from_parts([a(1)], []))
            .unwrap();
        assert_eq!(u, DepGraph::from_parts([a(0), a(1)], []));
        assert_eq!(
            g.disjoint_union(&g),
            Err(GraphError::NotDisjoint(a(0), a(1)))
        );
    }

    #[test]
    fn empty_graph_has_no_sources_or_sinks() {
        let g = DepGraph::new();
        assert!(g.sources().is_empty());
        assert!(g.sinks().is_empty());
    }

    #[test]
    fn opposite_is_an_involution() {
        let g = DepGraph::from_parts([], [(a(0), a(1)), (a(1), a(2)), (a(0), a(2))]);
        assert_eq!(g.opposite().opposite(), g);
        assert_eq!(g.opposite().sources(), g.sinks());
        assert_eq!(g.opposite_view().sources(), g.sinks());
        let single = DepGraph::from_parts([], [(a(4), a(5))]);
        assert_eq!(single.opposite(), DepGraph::from_parts([], [(a(5), a(4))]));
        assert!(g.opposite().check_transpose());
    }

    #[test]
    fn remove_edges_keeps_vertices() {
        let g = DepGraph::from_parts([], [(a(0), a(1)), (a(1), a(2))]);
        assert_eq!(g.remove_edges(&[]).unwrap(), g);
        let bare = g.remove_edges(&[(a(0), a(1)), (a(1), a(2))]).unwrap();
        assert_eq!(bare.vertex_count(), 3);
        assert_eq!(bare.sources(), bare.vertex_set());
        assert_eq!(bare.sinks(), bare.vertex_set());
        assert!(bare.check_transpose());
        assert_eq!(
            g.remove_edges(&[(a(2), a(0))]),
            Err(GraphError::MissingEdge(a(2), a(0)))
        );
    }

    #[test]
    fn cycles_are_rejected() {
        let g = DepGraph::from_parts([], [(a(0), a(1)), (a(1), a(0))]);
        assert!(matches!(g.reachability(), Err(GraphError::Cycle(_))));
    }

    #[test]
    fn chain_io_relation() {
        let g = DepGraph::from_parts([], [(a(0), a(1)), (a(1), a(2))]);
        let io = g.io_relation().unwrap();
        assert_eq!(io.pairs().collect::<Vec<_>>(), vec![(a(0), a(2))]);
        let reach = g.reachability().unwrap();
        assert!(g.vertices().all(|v| reach.contains(v, v)));
    }

    #[test]
    fn isolated_vertex_is_source_and_sink() {
        let g = DepGraph::from_parts([a(3)], []);
        assert!(g.sources().contains(a(3)));
        assert!(g.sinks().contains(a(3)));
        assert!(g.io_relation().unwrap().contains(a(3), a(3)));
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(DepGraph::from_edge_list("0 1\n").is_err());
        assert!(DepGraph::from_edge_list("vertices: 0\n0 1\n").is_err());
        assert!(DepGraph::from_edge_list("vertices: 0 x\n").is_err());
        let g = DepGraph::from_edge_list("# comment\nvertices: 0 1 5\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.contains_edge(a(0), a(1)));
    }

    #[test]
    fn dot_mentions_every_edge() {
        let g = DepGraph::from_parts([], [(a(0), a(1))]);
        let dot = g.to_dot(|v| (v == a(0)).then(|| "x\"y".to_string()));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("x\\\"y"));
    }
}
