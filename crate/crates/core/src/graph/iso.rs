//! Isomorphism of small vertex-labelled graphs.

use std::collections::{BTreeMap, BTreeSet};

/// A graph on vertices `0..labels.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelledGraph {
    pub labels: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl LabelledGraph {
    pub fn new(labels: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        LabelledGraph {
            labels,
            edges: edges.into_iter().collect(),
        }
    }

    fn degrees(&self) -> Vec<(usize, usize)> {
        let mut d = vec![(0, 0); self.labels.len()];
        for &(a, b) in &self.edges {
            d[a].1 += 1;
            d[b].0 += 1;
        }
        d
    }

    /// A label- and edge-preserving bijection onto `other`, if one exists.
    /// Backtracking search; candidates are pruned by label and degree.
    pub fn isomorphism(&self, other: &LabelledGraph) -> Option<Vec<usize>> {
        let n = self.labels.len();
        if n != other.labels.len() || self.edges.len() != other.edges.len() {
            return None;
        }
        let (da, db) = (self.degrees(), other.degrees());
        let key = |g: &LabelledGraph, d: &[(usize, usize)], v: usize| (g.labels[v].clone(), d[v]);
        let mut classes: BTreeMap<(String, (usize, usize)), Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            classes.entry(key(other, &db, v)).or_default().push(v);
        }
        let candidates: Vec<Vec<usize>> = (0..n)
            .map(|v| classes.get(&key(self, &da, v)).cloned().unwrap_or_default())
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            return None;
        }
        // Most constrained vertices first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| candidates[v].len());
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.extend(other, &order, 0, &candidates, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &LabelledGraph) -> bool {
        self.isomorphism(other).is_some()
    }

    fn extend(
        &self,
        other: &LabelledGraph,
        order: &[usize],
        k: usize,
        candidates: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&v) = order.get(k) else {
            return true;
        };
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            let consistent = order[..k].iter().all(|&u| {
                self.edges.contains(&(u, v)) == other.edges.contains(&(map[u], w))
                    && self.edges.contains(&(v, u)) == other.edges.contains(&(w, map[u]))
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(other, order, k + 1, candidates, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(labels: &[&str], edges: &[(usize, usize)]) -> LabelledGraph {
        LabelledGraph::new(
            labels.iter().map(|s| s.to_string()).collect(),
            edges.iter().copied(),
        )
    }

    #[test]
    fn relabelling_is_found() {
        let a = g(&["x", "x", "y"], &[(0, 2), (1, 2)]);
        let b = g(&["y", "x", "x"], &[(1, 0), (2, 0)]);
        assert!(a.is_isomorphic(&b));
        let map = a.isomorphism(&b).unwrap();
        assert_eq!(map[2], 0);
    }

    #[test]
    fn structure_matters() {
        let a = g(&["x", "x", "y", "y"], &[(0, 2), (1, 3)]);
        let b = g(&["x", "x", "y", "y"], &[(0, 2), (0, 3)]);
        assert!(!a.is_isomorphic(&b));
        let c = g(&["x", "x", "z", "y"], &[(0, 2), (1, 3)]);
        assert!(!a.is_isomorphic(&c));
    }
}
