use crate::graph::{VertexSet, WeightedGraph};

/// Drops conflicting vertices, lightest first (ties: larger id first), until
/// the set is independent.
pub fn repair_conflicts(graph: &WeightedGraph, candidate: &VertexSet) -> VertexSet {
    let mut inside = candidate.mask(graph.n());
    let mut order: Vec<usize> = candidate.members().to_vec();
    order.sort_by(|&a, &b| graph.weight(a).total_cmp(&graph.weight(b)).then(b.cmp(&a)));
    // Removals only shrink conflicts, so when `v` comes up with a remaining
    // conflict it is the lightest conflicting vertex left.
    for v in order {
        if graph.neighbors(v).any(|u| inside[u]) {
            inside[v] = false;
        }
    }
    VertexSet::from_mask(graph, &inside)
}

/// Conflict repair followed by greedy insertion of the heaviest free vertex
/// (ties: smaller id) until the set is maximal.
pub fn maximalize(graph: &WeightedGraph, candidate: &VertexSet) -> VertexSet {
    let repaired = repair_conflicts(graph, candidate);
    let mut inside = repaired.mask(graph.n());
    let mut order: Vec<usize> = (0..graph.n()).collect();
    order.sort_by(|&a, &b| graph.weight(b).total_cmp(&graph.weight(a)).then(a.cmp(&b)));
    for v in order {
        if !inside[v] && !graph.neighbors(v).any(|u| inside[u]) {
            inside[v] = true;
        }
    }
    VertexSet::from_mask(graph, &inside)
}
