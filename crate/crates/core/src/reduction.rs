//! Reduced graph built from the tight edges of the current LP solution.

use serde::{Deserialize, Serialize};

use crate::graph::{components_with, WeightedGraph};
use crate::lp::{tight_edges_by, RlpSolution, Tightness};

/// Edges of the parent graph whose LP duals are positive, and the clusters
/// they induce on the vertices that take part in sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedGraph {
    /// `(parent edge index, π)` in parent edge order.
    pub kept_edges: Vec<(usize, f64)>,
    /// Vertices eligible for sampling, ascending.
    pub members: Vec<usize>,
    /// Partition of `members`, each sorted, ordered by smallest vertex.
    pub clusters: Vec<Vec<usize>>,
    parent_n: usize,
    parent_m: usize,
}

impl ReducedGraph {
    pub fn edge_ratio(&self) -> f64 {
        if self.parent_m == 0 {
            0.0
        } else {
            self.kept_edges.len() as f64 / self.parent_m as f64
        }
    }

    pub fn max_cluster_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph of `parent` on `cluster` (relabelled in cluster order) with
    /// only kept edges, plus the dual of each local edge.
    pub fn cluster_graph(&self, parent: &WeightedGraph, cluster: &[usize]) -> (WeightedGraph, Vec<f64>) {
        let mut local = vec![usize::MAX; parent.n()];
        for (i, &v) in cluster.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut duals = Vec::new();
        for &(e, pi) in &self.kept_edges {
            let (u, v) = parent.edges()[e];
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
                duals.push(pi);
            }
        }
        let weights = cluster.iter().map(|&v| parent.weight(v)).collect();
        let g = WeightedGraph::new(weights, edges).expect("cluster of a valid graph");
        (g, duals)
    }

    fn recluster(&mut self, parent_edges: &[(usize, usize)]) {
        let mut adj = vec![Vec::new(); self.parent_n];
        for &(e, _) in &self.kept_edges {
            let (u, v) = parent_edges[e];
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut is_member = vec![false; self.parent_n];
        for &v in &self.members {
            is_member[v] = true;
        }
        self.clusters = components_with(self.parent_n, |v, out| out.extend(&adj[v]))
            .into_iter()
            .filter(|c| is_member[c[0]])
            .collect();
    }
}

/// Keeps the edges with `π > tol_dual`. Vertices touching a kept edge, and
/// isolated vertices with `x_i > tol_dual`, form the sampling members.
pub fn build_reduced(graph: &WeightedGraph, solution: &RlpSolution, tol_dual: f64) -> ReducedGraph {
    build_reduced_by(graph, solution, tol_dual, Tightness::Dual)
}

pub fn build_reduced_by(
    graph: &WeightedGraph,
    solution: &RlpSolution,
    tol_dual: f64,
    rule: Tightness,
) -> ReducedGraph {
    let kept: Vec<(usize, f64)> = tight_edges_by(solution, graph, tol_dual, rule)
        .into_iter()
        .map(|e| (e, solution.edge_duals[e]))
        .collect();
    let mut member = vec![false; graph.n()];
    for &(e, _) in &kept {
        let (u, v) = graph.edges()[e];
        member[u] = true;
        member[v] = true;
    }
    for (v, &xv) in solution.x.iter().enumerate() {
        if xv > tol_dual {
            member[v] = true;
        }
    }
    let mut r = ReducedGraph {
        kept_edges: kept,
        members: (0..graph.n()).filter(|&v| member[v]).collect(),
        clusters: Vec::new(),
        parent_n: graph.n(),
        parent_m: graph.m(),
    };
    r.recluster(graph.edges());
    r
}

/// Deletes the smallest-dual edge inside an oversized cluster (ties broken
/// by the edge's `(u, v)`) until no cluster exceeds `max_size`.
pub fn partition_oversized(graph: &WeightedGraph, reduced: &ReducedGraph, max_size: usize) -> ReducedGraph {
    let max_size = max_size.max(1);
    let mut r = reduced.clone();
    let mut cluster_of = vec![usize::MAX; graph.n()];
    loop {
        let oversized: Vec<usize> = (0..r.clusters.len())
            .filter(|&c| r.clusters[c].len() > max_size)
            .collect();
        if oversized.is_empty() {
            return r;
        }
        cluster_of.fill(usize::MAX);
        for &c in &oversized {
            for &v in &r.clusters[c] {
                cluster_of[v] = c;
            }
        }
        let victim = r
            .kept_edges
            .iter()
            .enumerate()
            .filter(|(_, &(e, _))| cluster_of[graph.edges()[e].0] != usize::MAX)
            .min_by(|(_, &(ea, pa)), (_, &(eb, pb))| {
                pa.total_cmp(&pb).then(graph.edges()[ea].cmp(&graph.edges()[eb]))
            })
            .map(|(i, _)| i)
            .expect("an oversized cluster has at least one edge");
        r.kept_edges.remove(victim);
        r.recluster(graph.edges());
    }
}
