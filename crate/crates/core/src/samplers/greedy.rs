use rand::Rng;

use crate::graph::{VertexSet, WeightedGraph};
use crate::rng::stream_rng;

/// Weighted random greedy: each shot draws eligible vertices without
/// replacement with probability proportional to their weight, inserts the
/// draw and retires its neighbors, until nothing is eligible. Every output is
/// a maximal independent set.
pub fn greedy_sample(graph: &WeightedGraph, shots: usize, seed: u64) -> Vec<VertexSet> {
    (0..shots)
        .map(|shot| {
            let mut rng = stream_rng(seed, shot as u64);
            greedy_shot(graph, &mut rng)
        })
        .collect()
}

fn greedy_shot(graph: &WeightedGraph, rng: &mut impl Rng) -> VertexSet {
    let n = graph.n();
    let mut eligible = vec![true; n];
    let mut remaining_weight = graph.total_weight();
    let mut left = n;
    let mut chosen = Vec::new();
    while left > 0 {
        let target = rng.gen::<f64>() * remaining_weight;
        let mut acc = 0.0;
        let mut pick = None;
        for v in (0..n).filter(|&v| eligible[v]) {
            acc += graph.weight(v);
            pick = Some(v);
            if acc > target {
                break;
            }
        }
        let v = pick.expect("at least one eligible vertex");
        chosen.push(v);
        for u in std::iter::once(v).chain(graph.neighbors(v)) {
            if eligible[u] {
                eligible[u] = false;
                remaining_weight -= graph.weight(u);
                left -= 1;
            }
        }
        if left > 0 {
            // Resum to keep the running total free of cancellation drift.
            remaining_weight = (0..n).filter(|&u| eligible[u]).map(|u| graph.weight(u)).sum();
        }
    }
    VertexSet::from_members(graph, chosen)
}
