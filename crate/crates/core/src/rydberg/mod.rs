//! Exact state-vector emulation of a small Rydberg atom array used as an
//! independent-set sampler.
//!
//! Units: time in μs, frequencies in rad/μs, distances in μm, `C6` in
//! rad·μs⁻¹·μm⁶. Basis index bit `i` set means atom `i` is in the Rydberg
//! state.

mod evolve;
mod layout;
mod pulse;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{VertexSet, WeightedGraph};

pub use evolve::{evolve, evolve_from, measure, Bitstring, QuantumState};
pub use layout::{choose_blockade, edge_agreement, layout, Blockade, LayoutParams, Register};
pub use pulse::{build_pulse, manifest, PiecewiseLinear, Pulse};

/// `2π × 137 GHz·μm⁶` expressed in rad·μs⁻¹·μm⁶.
pub const C6_DEFAULT: f64 = 2.0 * PI * 137e3;
/// Largest atom count the state-vector emulator accepts.
pub const ATOM_CAP: usize = 14;
pub const DEFAULT_DURATION: f64 = 4.0;
pub const DEFAULT_DT: f64 = 1e-3;

/// Everything needed to turn a weighted cluster into measured samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RydbergParams {
    pub c6: f64,
    pub duration: f64,
    pub dt: f64,
    pub layout: LayoutParams,
}

impl Default for RydbergParams {
    fn default() -> Self {
        RydbergParams {
            c6: C6_DEFAULT,
            duration: DEFAULT_DURATION,
            dt: DEFAULT_DT,
            layout: LayoutParams::default(),
        }
    }
}

/// Lays out the cluster, runs the ramp pulse and measures `shots`
/// bitstrings, returned as vertex sets of `cluster` (not necessarily
/// independent).
pub fn rydberg_sample(
    cluster: &WeightedGraph,
    edge_duals: &[f64],
    shots: usize,
    seed: u64,
    params: &RydbergParams,
) -> Result<Vec<VertexSet>> {
    let register = layout(cluster, edge_duals, seed, &params.layout);
    let blockade = choose_blockade(&register, cluster, params.c6);
    let pulse = build_pulse(cluster.weights(), params.duration, blockade.omega_max, params.c6);
    let state = evolve(&register, &pulse, params.dt)?;
    Ok(measure(&state, shots, seed)
        .into_iter()
        .map(|b| VertexSet::from_members(cluster, b.ones()))
        .collect())
}
