use rand::Rng;

use super::{repair_conflicts, SamplerConfig};
use crate::graph::{VertexSet, WeightedGraph};
use crate::rng::stream_rng;

/// QUBO penalty per conflicting edge; exceeds any `w̄_i + w̄_j <= 2`.
const PENALTY: f64 = 2.0;

/// `E(n) = -Σ w̄_i n_i + 2 Σ_{(i,j)∈E} n_i n_j` with `w̄_i = w_i / max_j w_j`.
pub fn qubo_energy(graph: &WeightedGraph, occupied: &[bool]) -> f64 {
    let wmax = max_weight(graph);
    let linear: f64 = (0..graph.n())
        .filter(|&i| occupied[i])
        .map(|i| -graph.weight(i) / wmax)
        .sum();
    let conflicts = graph
        .edges()
        .iter()
        .filter(|&&(u, v)| occupied[u] && occupied[v])
        .count();
    linear + PENALTY * conflicts as f64
}

fn max_weight(graph: &WeightedGraph) -> f64 {
    graph.weights().iter().copied().fold(0.0, f64::max)
}

/// Single-flip Metropolis on the QUBO with `β` interpolated geometrically
/// from `sa_beta_initial` to `sa_beta_final` over `sa_sweeps` sweeps. Each
/// final state is made independent by [`repair_conflicts`].
pub fn sa_sample(graph: &WeightedGraph, config: &SamplerConfig) -> Vec<VertexSet> {
    let n = graph.n();
    let wmax = max_weight(graph);
    let wbar: Vec<f64> = graph.weights().iter().map(|w| w / wmax).collect();
    let sweeps = config.sa_sweeps.max(1);
    let betas: Vec<f64> = (0..sweeps)
        .map(|s| {
            let t = if sweeps == 1 { 1.0 } else { s as f64 / (sweeps - 1) as f64 };
            config.sa_beta_initial * (config.sa_beta_final / config.sa_beta_initial).powf(t)
        })
        .collect();

    (0..config.shots)
        .map(|shot| {
            let mut rng = stream_rng(config.seed, shot as u64);
            let mut occ: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let mut busy: Vec<u32> = (0..n)
                .map(|i| graph.neighbors(i).filter(|&j| occ[j]).count() as u32)
                .collect();
            for &beta in &betas {
                for i in 0..n {
                    let delta = if occ[i] {
                        wbar[i] - PENALTY * busy[i] as f64
                    } else {
                        -wbar[i] + PENALTY * busy[i] as f64
                    };
                    if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                        occ[i] = !occ[i];
                        for j in graph.neighbors(i) {
                            if occ[i] {
                                busy[j] += 1;
                            } else {
                                busy[j] -= 1;
                            }
                        }
                    }
                }
            }
            repair_conflicts(graph, &VertexSet::from_mask(graph, &occ))
        })
        .collect()
}
