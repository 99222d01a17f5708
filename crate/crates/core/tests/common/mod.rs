#![allow(dead_code)]

use lpquts_core::generate::gen_erdos_renyi;
use lpquts_core::samplers::{greedy_sample, occupations};
use lpquts_core::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected ER graph with n in `n_range` and p in [0.25, 0.6).
pub fn random_instance(seed: u64, n_range: std::ops::RangeInclusive<usize>, weighted: bool) -> WeightedGraph {
    let mut r = rng(seed ^ 0x5eed);
    let n = r.gen_range(n_range);
    let p = r.gen_range(0.25..0.6);
    gen_erdos_renyi(n, p, weighted, seed).unwrap()
}

/// Uniform x clipped edge by edge so that `x_u + x_v <= 1`.
pub fn random_feasible_x(g: &WeightedGraph, seed: u64) -> Vec<f64> {
    let mut r = rng(seed ^ 0xf00d);
    let mut x: Vec<f64> = (0..g.n()).map(|_| r.gen_range(0.0..1.0)).collect();
    for &(u, v) in g.edges() {
        if x[u] + x[v] > 1.0 {
            x[v] = 1.0 - x[u];
        }
    }
    x
}

/// Occupations of 100 greedy shots.
pub fn sample_occupations(g: &WeightedGraph, seed: u64) -> Vec<f64> {
    occupations(g.n(), &greedy_sample(g, 100, seed))
}

/// Every independent set as a bitmask (n <= 20).
pub fn independent_sets(g: &WeightedGraph) -> Vec<u32> {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&m| g.edges().iter().all(|&(u, v)| m >> u & 1 == 0 || m >> v & 1 == 0))
        .collect()
}

pub fn brute_force_mwis(g: &WeightedGraph) -> f64 {
    independent_sets(g)
        .into_iter()
        .map(|m| (0..g.n()).filter(|&v| m >> v & 1 == 1).map(|v| g.weight(v)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// True when the graph has no K4 minor (equivalently no K4 subdivision):
/// repeatedly delete vertices of degree <= 1 and suppress vertices of degree
/// 2; the graph is K4-minor-free iff this empties it.
pub fn k4_subdivision_free(g: &WeightedGraph) -> bool {
    use std::collections::BTreeSet;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n()];
    for &(u, v) in g.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    loop {
        let Some(&v) = alive.iter().find(|&&v| adj[v].len() <= 2) else {
            return alive.is_empty();
        };
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj[v].clear();
        alive.remove(&v);
    }
}
