use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{Tightness, TOL_DUAL, TOL_LP};
use crate::rydberg::{RydbergParams, ATOM_CAP};
use crate::samplers::{SamplerConfig, SamplerKind};
use crate::separation::{DEFAULT_ALPHA_STEPS, TOL_VIOLATION};

/// Classical cluster size cap; the default `max_subgraph` is `min(N, this)`.
pub const DEFAULT_MAX_SUBGRAPH: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub max_iterations: usize,
    pub patience: usize,
    /// Shots per iteration.
    pub shots: usize,
    pub alpha_steps: usize,
    /// When false the separation runs at `α = 0` only.
    pub sample_informed: bool,
    pub sampler: SamplerKind,
    /// `None` means `min(N, 40)`.
    pub max_subgraph: Option<usize>,
    /// Clusters above this size use SA when the sampler is `rydberg`.
    pub quantum_cap: usize,
    pub tol_lp: f64,
    pub tol_dual: f64,
    pub tol_violation: f64,
    pub tightness: Tightness,
    pub seed: u64,
    pub sa_sweeps: usize,
    pub sa_beta_initial: f64,
    pub sa_beta_final: f64,
    /// Per-iteration shot multiplier; 1 keeps the budget flat.
    pub shot_growth: f64,
    pub rydberg: RydbergParams,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let sampler = SamplerConfig::default();
        EngineConfig {
            max_iterations: 20,
            patience: 4,
            shots: 100,
            alpha_steps: DEFAULT_ALPHA_STEPS,
            sample_informed: true,
            sampler: SamplerKind::Sa,
            max_subgraph: None,
            quantum_cap: ATOM_CAP,
            tol_lp: TOL_LP,
            tol_dual: TOL_DUAL,
            tol_violation: TOL_VIOLATION,
            tightness: Tightness::Dual,
            seed: 0,
            sa_sweeps: sampler.sa_sweeps,
            sa_beta_initial: sampler.sa_beta_initial,
            sa_beta_final: sampler.sa_beta_final,
            shot_growth: 1.0,
            rydberg: RydbergParams::default(),
        }
    }
}

/// Keys accepted by [`EngineConfig::set`].
pub const CONFIG_KEYS: &[&str] = &[
    "max_iterations",
    "patience",
    "shots",
    "alpha_steps",
    "sample_informed",
    "sampler",
    "max_subgraph",
    "quantum_cap",
    "tol_lp",
    "tol_dual",
    "tol_violation",
    "tightness",
    "seed",
    "sa_sweeps",
    "sa_beta_initial",
    "sa_beta_final",
    "shot_growth",
    "rydberg_duration",
    "rydberg_dt",
    "rydberg_c6",
];

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        for (name, v) in [
            ("max_iterations", self.max_iterations),
            ("patience", self.patience),
            ("shots", self.shots),
            ("alpha_steps", self.alpha_steps),
            ("quantum_cap", self.quantum_cap),
        ] {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if self.patience > self.max_iterations {
            return bad(format!(
                "patience {} exceeds max_iterations {}",
                self.patience, self.max_iterations
            ));
        }
        if self.max_subgraph == Some(0) {
            return bad("max_subgraph must be at least 1".into());
        }
        if self.quantum_cap > ATOM_CAP {
            return bad(format!("quantum_cap {} exceeds the emulator limit {ATOM_CAP}", self.quantum_cap));
        }
        for (name, v) in [
            ("tol_lp", self.tol_lp),
            ("tol_dual", self.tol_dual),
            ("tol_violation", self.tol_violation),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if !(self.shot_growth >= 1.0 && self.shot_growth.is_finite()) {
            return bad(format!("shot_growth must be >= 1, got {}", self.shot_growth));
        }
        if !(self.rydberg.dt > 0.0 && self.rydberg.duration > 0.0 && self.rydberg.c6 > 0.0) {
            return bad("rydberg duration, dt and c6 must be positive".into());
        }
        self.sampler_config(1, 0).validate()
    }

    /// Effective cluster cap for an `n`-vertex graph.
    pub fn max_subgraph_for(&self, n: usize) -> usize {
        self.max_subgraph.unwrap_or(DEFAULT_MAX_SUBGRAPH.min(n)).max(1)
    }

    /// Shots for 1-based iteration `it`.
    pub fn shots_at(&self, it: usize) -> usize {
        if self.shot_growth == 1.0 {
            self.shots
        } else {
            (self.shots as f64 * self.shot_growth.powi(it as i32 - 1)).round() as usize
        }
    }

    pub fn sampler_config(&self, shots: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            kind: self.sampler,
            shots,
            seed,
            sa_sweeps: self.sa_sweeps,
            sa_beta_initial: self.sa_beta_initial,
            sa_beta_final: self.sa_beta_final,
        }
    }

    /// Sets one field from its textual `key=value` form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad value {value:?} for {key}")))
        }
        match key {
            "max_iterations" => self.max_iterations = parse(key, value)?,
            "patience" => self.patience = parse(key, value)?,
            "shots" => self.shots = parse(key, value)?,
            "alpha_steps" => self.alpha_steps = parse(key, value)?,
            "sample_informed" => self.sample_informed = parse(key, value)?,
            "sampler" => self.sampler = value.parse()?,
            "max_subgraph" => {
                self.max_subgraph = match value {
                    "auto" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "quantum_cap" => self.quantum_cap = parse(key, value)?,
            "tol_lp" => self.tol_lp = parse(key, value)?,
            "tol_dual" => self.tol_dual = parse(key, value)?,
            "tol_violation" => self.tol_violation = parse(key, value)?,
            "tightness" => {
                self.tightness = match value {
                    "dual" => Tightness::Dual,
                    "primal" => Tightness::Primal,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "bad tightness {value:?}; expected dual or primal"
                        )))
                    }
                }
            }
            "seed" => self.seed = parse(key, value)?,
            "sa_sweeps" => self.sa_sweeps = parse(key, value)?,
            "sa_beta_initial" => self.sa_beta_initial = parse(key, value)?,
            "sa_beta_final" => self.sa_beta_final = parse(key, value)?,
            "shot_growth" => self.shot_growth = parse(key, value)?,
            "rydberg_duration" => self.rydberg.duration = parse(key, value)?,
            "rydberg_dt" => self.rydberg.dt = parse(key, value)?,
            "rydberg_c6" => self.rydberg.c6 = parse(key, value)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown config key {key:?}; known keys: {}",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }
}
