//! The cutting-plane loop: RLP → reduced graph → cluster sampling → lifted
//! samples → sample-informed odd-cycle cuts, plus the exact oracle, metrics
//! and the benchmark harness.

pub mod bench;
mod config;
mod exact;
mod metrics;

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::lp::{build_rlp, solve_lp};
use crate::reduction::{build_reduced_by, partition_oversized, ReducedGraph};
use crate::rng::mix_seed;
use crate::rydberg::rydberg_sample;
use crate::samplers::{greedy_sample, lift_samples, sa_sample, SamplerKind};
use crate::separation::{alpha_schedule_from, OddCycle};

pub use config::{EngineConfig, CONFIG_KEYS, DEFAULT_MAX_SUBGRAPH};
pub use exact::{exact_mwis, exact_mwis_with, ExactOptions, ExactSolution, EXACT_GUARD, EXACT_HARD_LIMIT};
pub use metrics::{approximation_ratio, optimality_gap, stt, stt_from_probability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    Patience,
    MaxIterations,
    NoViolatedCuts,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::Patience => "patience",
            Termination::MaxIterations => "max_iterations",
            Termination::NoViolatedCuts => "no_violated_cuts",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based.
    pub index: usize,
    /// Best RLP objective so far.
    pub upper_bound: f64,
    /// This iteration's RLP objective.
    pub rlp_objective: f64,
    /// Best independent-set weight so far.
    pub lower_bound: f64,
    pub rlp_integral: bool,
    pub cuts_added: usize,
    pub cut_pool: usize,
    /// α at which the cuts were found.
    pub alpha: Option<f64>,
    pub reduced_edge_ratio: f64,
    pub cluster_sizes: Vec<usize>,
    /// Sampler that served each cluster.
    pub cluster_samplers: Vec<SamplerKind>,
    pub shots: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: Vec<IterationRecord>,
    pub best_set: VertexSet,
    pub converged: bool,
    pub termination: Termination,
    pub sampler: SamplerKind,
    pub cuts: Vec<OddCycle>,
    /// Lifted samples drawn over the whole run.
    pub shots_used: usize,
    /// Weight of every lifted sample, in draw order.
    pub sample_costs: Vec<f64>,
    /// Primal solution of the last RLP.
    pub final_x: Vec<f64>,
}

impl SolveReport {
    pub fn upper_bound(&self) -> f64 {
        self.iterations.last().map_or(f64::INFINITY, |r| r.upper_bound)
    }

    pub fn lower_bound(&self) -> f64 {
        self.best_set.weight()
    }

    pub fn iterations_used(&self) -> usize {
        self.iterations.len()
    }

    pub fn total_cuts(&self) -> usize {
        self.cuts.len()
    }
}

/// Runs the hybrid cutting-plane loop on `graph`.
pub fn lp_quts(graph: &WeightedGraph, config: &EngineConfig) -> Result<SolveReport> {
    config.validate()?;
    let cap = config.max_subgraph_for(graph.n());
    let alpha0 = if config.sample_informed { 1.0 } else { 0.0 };

    let mut cuts: Vec<OddCycle> = Vec::new();
    let mut pool: HashSet<OddCycle> = HashSet::new();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut best = VertexSet::empty();
    let mut upper = f64::INFINITY;
    let mut stale = 0;
    let mut sample_costs = Vec::new();
    let mut termination = Termination::MaxIterations;
    let mut final_x = Vec::new();

    for it in 1..=config.max_iterations {
        let started = Instant::now();
        let sol = solve_lp(&build_rlp(graph, &cuts)?)?;
        let integral = sol.is_integral(config.tol_lp);

        let reduced = build_reduced_by(graph, &sol, config.tol_dual, config.tightness);
        let reduced = partition_oversized(graph, &reduced, cap);
        let shots = config.shots_at(it).max(1);
        let iter_seed = mix_seed(config.seed, it as u64);
        let sampled: Vec<(Vec<VertexSet>, SamplerKind)> = reduced
            .clusters
            .par_iter()
            .enumerate()
            .map(|(c, cluster)| {
                sample_cluster(graph, &reduced, cluster, config, shots, mix_seed(iter_seed, c as u64))
            })
            .collect::<Result<_>>()?;
        let (cluster_samples, cluster_samplers): (Vec<_>, Vec<_>) = sampled.into_iter().unzip();
        let lifted = lift_samples(graph, &cluster_samples, shots)?;
        sample_costs.extend(lifted.costs());

        let mut improved = false;
        if sol.objective < upper - config.tol_lp {
            improved = true;
        }
        upper = upper.min(sol.objective);
        let mut candidates: Vec<&VertexSet> = lifted.samples.iter().collect();
        let rounded;
        if integral {
            rounded = VertexSet::from_members(graph, (0..graph.n()).filter(|&v| sol.x[v] > 0.5));
            candidates.push(&rounded);
        }
        for s in candidates {
            if s.weight() > best.weight() + config.tol_lp || (best.is_empty() && !s.is_empty()) {
                best = s.clone();
                improved = true;
            }
        }

        let mut record = IterationRecord {
            index: it,
            upper_bound: upper,
            rlp_objective: sol.objective,
            lower_bound: best.weight(),
            rlp_integral: integral,
            cuts_added: 0,
            cut_pool: cuts.len(),
            alpha: None,
            reduced_edge_ratio: reduced.edge_ratio(),
            cluster_sizes: reduced.clusters.iter().map(Vec::len).collect(),
            cluster_samplers,
            shots,
            wall_ms: 0.0,
        };
        final_x = sol.x.clone();

        if upper - best.weight() <= config.tol_lp {
            termination = Termination::Converged;
            record.wall_ms = started.elapsed().as_secs_f64() * 1e3;
            records.push(record);
            break;
        }

        let found = alpha_schedule_from(
            graph,
            &sol.x,
            &lifted.occupations,
            alpha0,
            config.alpha_steps,
            config.tol_violation,
        )?;
        let mut added = 0;
        for c in found.cycles {
            if pool.insert(c.clone()) {
                cuts.push(c);
                added += 1;
            }
        }
        record.cuts_added = added;
        record.cut_pool = cuts.len();
        record.alpha = found.alpha;
        record.wall_ms = started.elapsed().as_secs_f64() * 1e3;
        records.push(record);

        if added == 0 && integral {
            termination = Termination::NoViolatedCuts;
            break;
        }
        stale = if improved { 0 } else { stale + 1 };
        if stale >= config.patience {
            termination = Termination::Patience;
            break;
        }
    }

    let converged = termination == Termination::Converged;
    Ok(SolveReport {
        shots_used: sample_costs.len(),
        iterations: records,
        best_set: best,
        converged,
        termination,
        sampler: config.sampler,
        cuts,
        sample_costs,
        final_x,
    })
}

/// Samples one cluster and maps the sets back to original vertex ids.
fn sample_cluster(
    graph: &WeightedGraph,
    reduced: &ReducedGraph,
    cluster: &[usize],
    config: &EngineConfig,
    shots: usize,
    seed: u64,
) -> Result<(Vec<VertexSet>, SamplerKind)> {
    let (local, duals) = reduced.cluster_graph(graph, cluster);
    let kind = match config.sampler {
        SamplerKind::Rydberg if cluster.len() > config.quantum_cap => SamplerKind::Sa,
        k => k,
    };
    let sets = match kind {
        SamplerKind::Greedy => greedy_sample(&local, shots, seed),
        SamplerKind::Sa => sa_sample(&local, &config.sampler_config(shots, seed)),
        SamplerKind::Rydberg => rydberg_sample(&local, &duals, shots, seed, &config.rydberg)?,
    };
    if sets.len() != shots {
        return Err(Error::ShotMismatch {
            expected: shots,
            found: sets.len(),
        });
    }
    let mapped = sets
        .into_iter()
        .map(|s| VertexSet::from_members(graph, s.members().iter().map(|&i| cluster[i])))
        .collect();
    Ok((mapped, kind))
}
