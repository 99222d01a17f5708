use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use super::{Pulse, Register, ATOM_CAP};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Amplitudes over the `2^n` occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// All atoms in the ground state.
    pub fn ground(n: usize) -> Result<Self> {
        QuantumState::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap(n)?;
        if index >> n != 0 {
            return Err(Error::InvalidParameter(format!("basis index {index} needs more than {n} atoms")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { n, amplitudes })
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_cap(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n} atoms",
                amplitudes.len()
            )));
        }
        Ok(QuantumState { n, amplitudes })
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > ATOM_CAP {
        Err(Error::TooLarge { n, limit: ATOM_CAP })
    } else {
        Ok(())
    }
}

/// One measured occupation pattern. Displayed with atom 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    pub bits: u32,
    pub n: usize,
}

impl Bitstring {
    pub fn get(&self, atom: usize) -> bool {
        self.bits >> atom & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.get(i))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

// Fourth-order triple-jump weights.
const W1: f64 = 1.0 / (2.0 - 1.259_921_049_894_873_2);
const W0: f64 = -1.259_921_049_894_873_2 / (2.0 - 1.259_921_049_894_873_2);

/// Evolves `|0…0⟩` under
/// `H(t) = Σ Ω/2 σx_i − Σ δ_i n_i + Σ_{i<j} C6/r_ij⁶ n_i n_j`.
///
/// Each time step of length `h ≤ dt` applies three Strang-split substeps with
/// the controls frozen at each substep's midpoint. The step grid is aligned to
/// the controls' breakpoints.
pub fn evolve(register: &Register, pulse: &Pulse, dt: f64) -> Result<QuantumState> {
    let state = QuantumState::ground(register.len())?;
    evolve_from(state, register, pulse, dt)
}

pub fn evolve_from(mut state: QuantumState, register: &Register, pulse: &Pulse, dt: f64) -> Result<QuantumState> {
    let n = register.len();
    if state.n != n || pulse.atoms() != n {
        return Err(Error::InvalidParameter(format!(
            "register has {n} atoms, state {} and pulse {}",
            state.n,
            pulse.atoms()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    if !(pulse.duration >= 0.0 && pulse.duration.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad pulse duration {}", pulse.duration)));
    }
    let interaction = interaction_energies(register, pulse.c6);
    let mut sim = Stepper {
        n,
        psi: &mut state.amplitudes,
        interaction: &interaction,
        pending_a: 0.0,
        pending_b: vec![0.0; n],
        field: vec![0.0; 1 << n],
        delta: vec![0.0; n],
    };

    let mut cuts: Vec<f64> = pulse
        .omega
        .breakpoints()
        .chain(pulse.detunings.iter().flat_map(|d| d.breakpoints()))
        .filter(|&t| t > 0.0 && t < pulse.duration)
        .collect();
    cuts.push(0.0);
    cuts.push(pulse.duration);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    for seg in cuts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let steps = ((b - a) / dt - 1e-9).ceil().max(1.0) as usize;
        let h = (b - a) / steps as f64;
        for k in 0..steps {
            let t0 = a + k as f64 * h;
            let mut t = t0;
            for w in [W1, W0, W1] {
                sim.strang(pulse, t, w * h);
                t += w * h;
            }
        }
    }
    sim.flush();
    Ok(state)
}

/// `V_s = Σ_{i<j} C6/r⁶ n_i n_j` for every basis state.
fn interaction_energies(register: &Register, c6: f64) -> Vec<f64> {
    let n = register.len();
    let mut u = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = c6 / register.distance(i, j).powi(6);
            u[i][j] = v;
            u[j][i] = v;
        }
    }
    let mut out = vec![0.0; 1 << n];
    for s in 1usize..1 << n {
        let i = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let mut e = out[rest];
        let mut r = rest;
        while r != 0 {
            e += u[i][r.trailing_zeros() as usize];
            r &= r - 1;
        }
        out[s] = e;
    }
    out
}

struct Stepper<'a> {
    n: usize,
    psi: &'a mut [Complex64],
    interaction: &'a [f64],
    // Accumulated diagonal propagator exp(-i (A·V_s - Σ B_i n_i)).
    pending_a: f64,
    pending_b: Vec<f64>,
    field: Vec<f64>,
    delta: Vec<f64>,
}

impl Stepper<'_> {
    fn strang(&mut self, pulse: &Pulse, t0: f64, h: f64) {
        let tm = t0 + 0.5 * h;
        let omega = pulse.omega.eval(tm);
        for (d, f) in self.delta.iter_mut().zip(&pulse.detunings) {
            *d = f.eval(tm);
        }
        self.queue_diagonal(0.5 * h);
        self.flush();
        self.mix(0.5 * omega * h);
        self.queue_diagonal(0.5 * h);
    }

    fn queue_diagonal(&mut self, tau: f64) {
        self.pending_a += tau;
        for (b, d) in self.pending_b.iter_mut().zip(&self.delta) {
            *b += tau * d;
        }
    }

    fn flush(&mut self) {
        if self.pending_a == 0.0 && self.pending_b.iter().all(|&b| b == 0.0) {
            return;
        }
        let a = self.pending_a;
        self.field[0] = 0.0;
        for s in 1usize..1 << self.n {
            self.field[s] = self.field[s & (s - 1)] + self.pending_b[s.trailing_zeros() as usize];
        }
        for ((amp, &v), &f) in self.psi.iter_mut().zip(self.interaction).zip(&self.field) {
            let phase = -(a * v - f);
            *amp *= Complex64::from_polar(1.0, phase);
        }
        self.pending_a = 0.0;
        self.pending_b.fill(0.0);
    }

    /// `exp(-i θ σx)` on every atom.
    fn mix(&mut self, theta: f64) {
        if theta == 0.0 {
            return;
        }
        let (s, c) = theta.sin_cos();
        let ms = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let bit = 1usize << q;
            for block in self.psi.chunks_exact_mut(bit << 1) {
                let (lo, hi) = block.split_at_mut(bit);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * ms;
                    *b = x * ms + y * c;
                }
            }
        }
    }
}

/// Draws `shots` bitstrings from `|ψ|²` with a seeded stream.
pub fn measure(state: &QuantumState, shots: usize, seed: u64) -> Vec<Bitstring> {
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let mut rng = stream_rng(seed, 0x3ea5);
    (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let idx = cumulative
                .partition_point(|&c| c <= u)
                .min(cumulative.len() - 1);
            Bitstring {
                bits: idx as u32,
                n: state.n,
            }
        })
        .collect()
}
