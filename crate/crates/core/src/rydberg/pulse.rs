use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Register;

/// Piecewise-linear control, constant outside its first/last point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    /// `(t, value)` with nondecreasing `t`.
    pub points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 <= w[1].0));
        PiecewiseLinear { points }
    }

    pub fn constant(duration: f64, value: f64) -> Self {
        PiecewiseLinear::new(vec![(0.0, value), (duration, value)])
    }

    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.points;
        match p.len() {
            0 => 0.0,
            1 => p[0].1,
            _ => {
                if t <= p[0].0 {
                    return p[0].1;
                }
                let k = p.partition_point(|&(ti, _)| ti <= t);
                if k >= p.len() {
                    return p[p.len() - 1].1;
                }
                let (t0, v0) = p[k - 1];
                let (t1, v1) = p[k];
                if t1 == t0 {
                    v1
                } else {
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }

    /// Times where the slope may change.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }
}

/// Global Rabi drive `Ω(t)` and per-atom detunings `δ_i(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub duration: f64,
    pub omega: PiecewiseLinear,
    pub detunings: Vec<PiecewiseLinear>,
    pub c6: f64,
}

impl Pulse {
    pub fn atoms(&self) -> usize {
        self.detunings.len()
    }
}

/// Fraction of the duration spent ramping `Ω` up (and again down).
pub const RAMP_FRACTION: f64 = 0.15;

/// `Ω` ramps `0 → Ω_max` over the first 15% of `T`, holds, and ramps back to 0
/// over the last 15%. Each `δ_i` sweeps linearly from `-Ω_max` to
/// `Ω_max · w_i / max(w)`.
pub fn build_pulse(weights: &[f64], duration: f64, omega_max: f64, c6: f64) -> Pulse {
    let t = duration;
    let omega = PiecewiseLinear::new(vec![
        (0.0, 0.0),
        (RAMP_FRACTION * t, omega_max),
        ((1.0 - RAMP_FRACTION) * t, omega_max),
        (t, 0.0),
    ]);
    let w_max = weights.iter().copied().fold(0.0, f64::max);
    let delta0 = omega_max;
    let detunings = weights
        .iter()
        .map(|&w| PiecewiseLinear::new(vec![(0.0, -delta0), (t, delta0 * w / w_max)]))
        .collect();
    Pulse {
        duration,
        omega,
        detunings,
        c6,
    }
}

/// Line-oriented dump of a register and pulse, suitable for handing to other
/// tooling.
pub fn manifest(register: &Register, pulse: &Pulse) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "atoms {}", register.len());
    for (i, (p, v)) in register.positions.iter().zip(&register.vertices).enumerate() {
        let _ = writeln!(out, "atom {i} vertex {v} x {:?} y {:?}", p[0], p[1]);
    }
    let _ = writeln!(out, "duration {:?}", pulse.duration);
    let _ = writeln!(out, "c6 {:?}", pulse.c6);
    let _ = writeln!(out, "omega{}", points(&pulse.omega));
    for (i, d) in pulse.detunings.iter().enumerate() {
        let _ = writeln!(out, "detuning {i}{}", points(d));
    }
    out
}

fn points(f: &PiecewiseLinear) -> String {
    f.points.iter().map(|(t, v)| format!(" {t:?}:{v:?}")).collect()
}
