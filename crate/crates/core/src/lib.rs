//! Cutting-plane solver for the maximum weighted independent set problem.
//!
//! Each iteration solves the relaxed linear program over the current cut
//! pool, keeps only the edges whose duals are positive, samples independent
//! sets on the resulting clusters, lifts them back to the full graph and
//! uses the sample statistics to pick violated odd-cycle inequalities.
//!
//! The samplers are pluggable: weighted greedy, simulated annealing on a
//! QUBO, and an exact state-vector emulator of a Rydberg atom array for
//! clusters of up to 14 atoms.

pub mod cli;
pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lp;
pub mod reduction;
pub mod rng;
pub mod rydberg;
pub mod samplers;
pub mod separation;

pub use engine::{
    approximation_ratio, exact_mwis, lp_quts, optimality_gap, stt, EngineConfig, SolveReport,
    Termination,
};
pub use error::{Error, Result};
pub use graph::{VertexSet, WeightedGraph};
pub use lp::{build_rlp, solve_lp, LinearProgram, RlpSolution};
pub use separation::OddCycle;
