use std::f64::consts::PI;

use lpquts_core::rydberg::{
    build_pulse, choose_blockade, evolve, layout, measure, LayoutParams, PiecewiseLinear, Pulse, QuantumState, Register,
    C6_DEFAULT, DEFAULT_DT, DEFAULT_DURATION,
};
use lpquts_core::WeightedGraph;
use num_complex::Complex64;

type Matrix = Vec<Vec<Complex64>>;

fn zero(d: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); d]; d]
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut c = zero(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// `exp(A)` by scaling, a 30-term Taylor series and repeated squaring.
fn expm(a: &Matrix) -> Matrix {
    let d = a.len();
    let norm = a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 2f64.powi(-(squarings as i32));
    let scaled: Matrix = a.iter().map(|r| r.iter().map(|z| z * scale).collect()).collect();
    let mut result = zero(d);
    let mut term = zero(d);
    for i in 0..d {
        result[i][i] = Complex64::new(1.0, 0.0);
        term[i][i] = Complex64::new(1.0, 0.0);
    }
    for k in 1..=30 {
        term = matmul(&term, &scaled);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z /= k as f64;
            }
        }
        for i in 0..d {
            for j in 0..d {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Dense `H = Σ Ω/2 σx_i − Σ δ_i n_i + Σ C6/r⁶ n_i n_j`, bit `i` = atom `i`.
fn hamiltonian(reg: &Register, omega: f64, deltas: &[f64], c6: f64) -> Matrix {
    let n = reg.len();
    let d = 1 << n;
    let mut h = zero(d);
    for s in 0..d {
        let mut diag = 0.0;
        for i in 0..n {
            if s >> i & 1 == 1 {
                diag -= deltas[i];
                for j in i + 1..n {
                    if s >> j & 1 == 1 {
                        diag += c6 / reg.distance(i, j).powi(6);
                    }
                }
            }
            h[s ^ (1 << i)][s] += Complex64::new(omega / 2.0, 0.0);
        }
        h[s][s] += Complex64::new(diag, 0.0);
    }
    h
}

/// `exp(−iHt)|0…0⟩` probabilities for a constant Hamiltonian.
fn oracle_probabilities(h: &Matrix, t: f64) -> Vec<f64> {
    let a: Matrix = h.iter().map(|r| r.iter().map(|z| z * Complex64::new(0.0, -t)).collect()).collect();
    expm(&a).iter().map(|r| r[0].norm_sqr()).collect()
}

fn constant_pulse(t: f64, omega: f64, deltas: &[f64], c6: f64) -> Pulse {
    Pulse {
        duration: t,
        omega: PiecewiseLinear::constant(t, omega),
        detunings: deltas.iter().map(|&d| PiecewiseLinear::constant(t, d)).collect(),
        c6,
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn single_atom_rabi_oscillation() {
    let reg = Register::new(vec![[0.0, 0.0]]);
    for omega in [2.0 * PI * 0.5, 2.0 * PI, 2.0 * PI * 2.0] {
        for t in [0.1, 0.25, 0.37, 0.5, 1.0, 1.3, 2.0, 4.0] {
            let s = evolve(&reg, &constant_pulse(t, omega, &[0.0], C6_DEFAULT), DEFAULT_DT).unwrap();
            let expected = (omega * t / 2.0).sin().powi(2);
            let p1 = s.probabilities()[1];
            assert!((p1 - expected).abs() < 1e-6, "Ω {omega} t {t}: {p1} vs {expected}");
        }
    }
}

#[test]
fn detuned_atom_matches_dense_oracle() {
    let reg = Register::new(vec![[0.0, 0.0]]);
    let (omega, delta, t) = (2.0 * PI, 3.7, 1.9);
    let s = evolve(&reg, &constant_pulse(t, omega, &[delta], C6_DEFAULT), DEFAULT_DT).unwrap();
    let oracle = oracle_probabilities(&hamiltonian(&reg, omega, &[delta], C6_DEFAULT), t);
    assert!(max_diff(&s.probabilities(), &oracle) < 1e-6);
}

#[test]
fn blockaded_pair_never_doubly_excites() {
    let omega = 2.0 * PI;
    // C6/r⁶ = 60·Ω.
    let r = (C6_DEFAULT / (60.0 * omega)).powf(1.0 / 6.0);
    let reg = Register::new(vec![[0.0, 0.0], [r, 0.0]]);
    let h = hamiltonian(&reg, omega, &[0.0, 0.0], C6_DEFAULT);
    for k in 1..=40 {
        let t = 0.1 * k as f64;
        let s = evolve(&reg, &constant_pulse(t, omega, &[0.0, 0.0], C6_DEFAULT), DEFAULT_DT).unwrap();
        let p = s.probabilities();
        let oracle = oracle_probabilities(&h, t);
        assert!(oracle[3] < 0.01, "oracle t {t}: {}", oracle[3]);
        assert!(p[3] < 0.01, "t {t}: P(11) = {}", p[3]);
        assert!(max_diff(&p, &oracle) < 1e-5, "t {t}: {:?} vs {oracle:?}", p);
    }
    // The stiff interaction dominates the splitting error; a finer step
    // closes in on the oracle at fourth order.
    let t = 3.0;
    let fine = evolve(&reg, &constant_pulse(t, omega, &[0.0, 0.0], C6_DEFAULT), DEFAULT_DT / 4.0).unwrap();
    assert!(max_diff(&fine.probabilities(), &oracle_probabilities(&h, t)) < 1e-7);
    let s = evolve(&reg, &constant_pulse(4.0, omega, &[0.0, 0.0], C6_DEFAULT), DEFAULT_DT).unwrap();
    let shots = measure(&s, 10_000, 5);
    let both = shots.iter().filter(|b| b.to_string() == "11").count();
    assert!((both as f64) < 0.02 * 10_000.0);
}

#[test]
fn distant_atoms_factorize() {
    let omega = 2.0 * PI * 1.3;
    let deltas = [1.1, -2.4];
    let t = 2.7;
    let pair = Register::new(vec![[0.0, 0.0], [1e3, 0.0]]);
    let joint = evolve(&pair, &constant_pulse(t, omega, &deltas, C6_DEFAULT), DEFAULT_DT)
        .unwrap()
        .probabilities();
    let single = |d: f64| {
        let reg = Register::new(vec![[0.0, 0.0]]);
        evolve(&reg, &constant_pulse(t, omega, &[d], C6_DEFAULT), DEFAULT_DT).unwrap().probabilities()
    };
    let (a, b) = (single(deltas[0]), single(deltas[1]));
    for s in 0..4 {
        let product = a[s & 1] * b[s >> 1 & 1];
        assert!((joint[s] - product).abs() < 1e-6, "outcome {s}: {} vs {product}", joint[s]);
    }
}

fn c5_setup() -> (Register, Pulse) {
    let c5 = WeightedGraph::cycle(5).unwrap();
    let reg = layout(&c5, &[0.5; 5], 0, &LayoutParams::default());
    let blockade = choose_blockade(&reg, &c5, C6_DEFAULT);
    assert_eq!(blockade.agreement, blockade.pairs);
    let pulse = build_pulse(c5.weights(), DEFAULT_DURATION, blockade.omega_max, C6_DEFAULT);
    (reg, pulse)
}

#[test]
fn full_pulse_norm_and_step_convergence() {
    let (reg, pulse) = c5_setup();
    let coarse = evolve(&reg, &pulse, DEFAULT_DT).unwrap();
    assert!((coarse.norm() - 1.0).abs() <= 1e-8, "norm drift {}", (coarse.norm() - 1.0).abs());
    let fine = evolve(&reg, &pulse, DEFAULT_DT / 2.0).unwrap();
    let d = max_diff(&coarse.probabilities(), &fine.probabilities());
    assert!(d <= 1e-6, "halving dt moved probabilities by {d}");
}

#[test]
fn time_dependent_pulse_matches_dense_stepping() {
    let g = WeightedGraph::new(vec![1.0, 0.6, 0.8], [(0, 1), (1, 2)]).unwrap();
    let reg = layout(&g, &[0.5, 0.5], 3, &LayoutParams::default());
    let blockade = choose_blockade(&reg, &g, C6_DEFAULT);
    let pulse = build_pulse(g.weights(), 1.0, blockade.omega_max, C6_DEFAULT);
    let got = evolve(&reg, &pulse, DEFAULT_DT).unwrap().probabilities();

    // Midpoint-frozen dense propagators on a much finer grid.
    let steps = 4000;
    let h = pulse.duration / steps as f64;
    let mut psi = vec![Complex64::new(0.0, 0.0); 8];
    psi[0] = Complex64::new(1.0, 0.0);
    for k in 0..steps {
        let t = (k as f64 + 0.5) * h;
        let deltas: Vec<f64> = pulse.detunings.iter().map(|d| d.eval(t)).collect();
        let ham = hamiltonian(&reg, pulse.omega.eval(t), &deltas, C6_DEFAULT);
        let a: Matrix = ham.iter().map(|r| r.iter().map(|z| z * Complex64::new(0.0, -h)).collect()).collect();
        let u = expm(&a);
        psi = (0..8).map(|i| (0..8).map(|j| u[i][j] * psi[j]).sum()).collect();
    }
    let oracle: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    assert!(max_diff(&got, &oracle) < 1e-5, "{got:?} vs {oracle:?}");
}

#[test]
fn c5_independent_sets_dominate_the_outcomes() {
    let (reg, pulse) = c5_setup();
    let p = evolve(&reg, &pulse, DEFAULT_DT).unwrap().probabilities();
    let mis: Vec<usize> = (0usize..32)
        .filter(|&m| m.count_ones() == 2 && (0..5).all(|i| !(m >> i & 1 == 1 && m >> ((i + 1) % 5) & 1 == 1)))
        .collect();
    assert_eq!(mis.len(), 5);
    let mut order: Vec<usize> = (0..32).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    let mut top: Vec<usize> = order[..5].to_vec();
    top.sort_unstable();
    assert_eq!(top, mis, "probabilities {p:?}");
    let combined: f64 = mis.iter().map(|&m| p[m]).sum();
    let rest_best: f64 = order[5..10].iter().map(|&m| p[m]).sum();
    assert!(combined > rest_best);
}

#[test]
fn relabeling_atoms_permutes_probabilities() {
    let reg = Register::new(vec![[0.0, 0.0], [6.0, 0.0], [3.0, 5.0], [9.0, 4.0]]);
    let weights = [1.0, 0.3, 0.7, 0.5];
    let pulse = build_pulse(&weights, 2.0, 2.0 * PI * 2.0, C6_DEFAULT);
    let base = evolve(&reg, &pulse, DEFAULT_DT).unwrap().probabilities();

    let perm = [2usize, 0, 3, 1];
    let reg2 = Register::new(perm.iter().map(|&i| reg.positions[i]).collect());
    let w2: Vec<f64> = perm.iter().map(|&i| weights[i]).collect();
    let pulse2 = build_pulse(&w2, 2.0, 2.0 * PI * 2.0, C6_DEFAULT);
    let permuted = evolve(&reg2, &pulse2, DEFAULT_DT).unwrap().probabilities();
    for s in 0..16usize {
        let mut old = 0;
        for (j, &i) in perm.iter().enumerate() {
            if s >> j & 1 == 1 {
                old |= 1 << i;
            }
        }
        assert!((permuted[s] - base[old]).abs() < 1e-10, "outcome {s}");
    }
}

#[test]
fn uniform_state_measurement_statistics() {
    let half = Complex64::new(0.5, 0.0);
    let s = QuantumState::from_amplitudes(2, vec![half; 4]).unwrap();
    let shots = measure(&s, 100_000, 17);
    let sigma = (100_000.0f64 * 0.25 * 0.75).sqrt();
    for pattern in ["00", "10", "01", "11"] {
        let c = shots.iter().filter(|b| b.to_string() == pattern).count() as f64;
        assert!((c - 25_000.0).abs() <= 3.0 * sigma, "{pattern}: {c}");
    }
    assert_eq!(shots, measure(&s, 100_000, 17));
}

#[test]
fn rejects_bad_inputs() {
    let reg = Register::new(vec![[0.0, 0.0]]);
    let p = constant_pulse(1.0, 1.0, &[0.0], C6_DEFAULT);
    assert!(evolve(&reg, &p, 0.0).is_err());
    assert!(evolve(&reg, &p, -1e-3).is_err());
    let wide = Register::new((0..15).map(|i| [i as f64 * 10.0, 0.0]).collect());
    let p15 = constant_pulse(1.0, 1.0, &[0.0; 15], C6_DEFAULT);
    assert!(evolve(&wide, &p15, DEFAULT_DT).is_err());
    let two = Register::new(vec![[0.0, 0.0], [1.0, 0.0]]);
    assert!(evolve(&two, &p, DEFAULT_DT).is_err());
}
