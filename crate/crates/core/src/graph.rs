//! Weighted simple undirected graphs and vertex subsets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph with strictly positive vertex weights.
///
/// Vertices are `0..n`. Edges are stored normalized as `(u, v)` with
/// `u < v`, in the order they were supplied; that order is the row order of
/// the relaxed LP.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    weights: Vec<f64>,
    edges: Vec<(usize, usize)>,
    /// Sorted `(neighbor, edge index)` per vertex.
    adj: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| a.to_bits() == b.to_bits())
            && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidGraph(format!(
                "vertex {i} has nonpositive weight {w}"
            )));
        }
        let mut seen = HashMap::new();
        let mut list = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, list.len()).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({},{})",
                    key.0, key.1
                )));
            }
            adj[key.0].push((key.1, list.len()));
            adj[key.1].push((key.0, list.len()));
            list.push(key);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(WeightedGraph {
            weights,
            edges: list,
            adj,
        })
    }

    /// Graph with every weight equal to one.
    pub fn unit(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(vec![1.0; n], edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::unit(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::unit(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::unit(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    /// Neighbors of `v` together with the index of the connecting edge.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n() || v >= self.n() {
            return None;
        }
        let nbrs = &self.adj[u];
        nbrs.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| nbrs[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True when every weight is exactly one.
    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Subgraph on `vertices` (relabelled `0..k` in the given order) keeping
    /// only the listed original edge indices whose endpoints both survive.
    pub fn subgraph(&self, vertices: &[usize], edge_ids: impl IntoIterator<Item = usize>) -> Self {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let weights = vertices.iter().map(|&v| self.weights[v]).collect();
        let edges: Vec<_> = edge_ids
            .into_iter()
            .map(|e| self.edges[e])
            .filter(|&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|(u, v)| (local[u], local[v]))
            .collect();
        WeightedGraph::new(weights, edges).expect("subgraph of a valid graph is valid")
    }

    /// Induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        self.subgraph(vertices, 0..self.m())
    }
}

/// Subset of vertices of a particular graph together with its total weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
    weight: f64,
}

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet {
            members: Vec::new(),
            weight: 0.0,
        }
    }

    /// Builds the set from arbitrary (possibly repeated) members; panics on
    /// an out-of-range vertex.
    pub fn from_members(graph: &WeightedGraph, members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let weight = members.iter().map(|&v| graph.weight(v)).sum();
        VertexSet { members, weight }
    }

    pub fn from_mask(graph: &WeightedGraph, mask: &[bool]) -> Self {
        Self::from_members(
            graph,
            mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}

/// True iff no edge of `graph` has both endpoints in `set`.
pub fn is_independent_set(graph: &WeightedGraph, set: &VertexSet) -> bool {
    let mask = set.mask(graph.n());
    graph.edges().iter().all(|&(u, v)| !(mask[u] && mask[v]))
}

/// Connected components as sorted vertex lists, ordered by smallest member.
pub fn connected_components(graph: &WeightedGraph) -> Vec<Vec<usize>> {
    components_with(graph.n(), |v, out| out.extend(graph.neighbors(v)))
}

/// Components of `0..n` under an arbitrary neighbor function.
pub(crate) fn components_with(
    n: usize,
    mut neighbors: impl FnMut(usize, &mut Vec<usize>),
) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut buf = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut comp = vec![start];
        label[start] = id;
        stack.push(start);
        while let Some(v) = stack.pop() {
            buf.clear();
            neighbors(v, &mut buf);
            for &u in &buf {
                if label[u] == usize::MAX {
                    label[u] = id;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
