//! Independent-set samplers and the post-processing that lifts cluster
//! samples back to the full graph.

mod anneal;
mod greedy;
mod postprocess;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_independent_set, VertexSet, WeightedGraph};

pub use anneal::{qubo_energy, sa_sample};
pub use greedy::greedy_sample;
pub use postprocess::{maximalize, repair_conflicts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Greedy,
    Sa,
    Rydberg,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [SamplerKind::Greedy, SamplerKind::Sa, SamplerKind::Rydberg];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Greedy => "greedy",
            SamplerKind::Sa => "sa",
            SamplerKind::Rydberg => "rydberg",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown sampler {s:?}; expected one of greedy, sa, rydberg"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub shots: usize,
    pub seed: u64,
    /// Full Metropolis sweeps per shot.
    pub sa_sweeps: usize,
    pub sa_beta_initial: f64,
    pub sa_beta_final: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            kind: SamplerKind::Sa,
            shots: 100,
            seed: 0,
            sa_sweeps: 100,
            sa_beta_initial: 0.01,
            sa_beta_final: 100.0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidParameter("shots must be at least 1".into()));
        }
        if self.sa_sweeps == 0 {
            return Err(Error::InvalidParameter("sa_sweeps must be at least 1".into()));
        }
        if !(self.sa_beta_initial > 0.0 && self.sa_beta_initial < self.sa_beta_final) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < sa_beta_initial < sa_beta_final, got {} and {}",
                self.sa_beta_initial, self.sa_beta_final
            )));
        }
        Ok(())
    }
}

/// Independent sets of the original graph plus per-vertex occupation means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<VertexSet>,
    pub occupations: Vec<f64>,
}

impl SampleSet {
    pub fn new(n: usize, samples: Vec<VertexSet>) -> Self {
        let occupations = occupations(n, &samples);
        SampleSet {
            samples,
            occupations,
        }
    }

    /// All-zero occupations and no samples.
    pub fn empty(n: usize) -> Self {
        SampleSet {
            samples: Vec::new(),
            occupations: vec![0.0; n],
        }
    }

    pub fn shots(&self) -> usize {
        self.samples.len()
    }

    pub fn best(&self) -> Option<&VertexSet> {
        self.samples
            .iter()
            .reduce(|best, s| if s.weight() > best.weight() { s } else { best })
    }

    pub fn costs(&self) -> Vec<f64> {
        self.samples.iter().map(VertexSet::weight).collect()
    }

    pub fn all_independent(&self, graph: &WeightedGraph) -> bool {
        self.samples.iter().all(|s| is_independent_set(graph, s))
    }
}

/// Mean membership of each vertex over `samples` (all zeros if empty).
pub fn occupations(n: usize, samples: &[VertexSet]) -> Vec<f64> {
    let mut occ = vec![0.0; n];
    if samples.is_empty() {
        return occ;
    }
    for s in samples {
        for &v in s.members() {
            occ[v] += 1.0;
        }
    }
    let k = samples.len() as f64;
    occ.iter_mut().for_each(|o| *o /= k);
    occ
}

/// Shot `k` of the result is `maximalize(∪_c cluster_samples[c][k])`.
///
/// Samples must already be expressed in original vertex ids. With no clusters
/// every shot is `maximalize(∅)`.
pub fn lift_samples(graph: &WeightedGraph, cluster_samples: &[Vec<VertexSet>], shots: usize) -> Result<SampleSet> {
    if let Some(bad) = cluster_samples.iter().find(|c| c.len() != shots) {
        return Err(Error::ShotMismatch {
            expected: shots,
            found: bad.len(),
        });
    }
    let samples = (0..shots)
        .map(|k| {
            let union = cluster_samples
                .iter()
                .flat_map(|c| c[k].members().iter().copied());
            maximalize(graph, &VertexSet::from_members(graph, union))
        })
        .collect();
    Ok(SampleSet::new(graph.n(), samples))
}
