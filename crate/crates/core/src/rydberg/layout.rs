use rand::Rng;
use serde::{Deserialize, Serialize};

use super::C6_DEFAULT;
use crate::graph::WeightedGraph;
use crate::rng::stream_rng;

/// Atom positions (μm) and the cluster vertex each atom encodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub positions: Vec<[f64; 2]>,
    pub vertices: Vec<usize>,
}

impl Register {
    pub fn new(positions: Vec<[f64; 2]>) -> Self {
        let vertices = (0..positions.len()).collect();
        Register { positions, vertices }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.positions[i], self.positions[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    /// Blockade radius the layout is scaled against (μm).
    pub blockade_radius: f64,
    pub iterations: usize,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            // radius at which C6/r^6 equals a 2π·1 MHz drive
            blockade_radius: (C6_DEFAULT / (2.0 * std::f64::consts::PI)).powf(1.0 / 6.0),
            iterations: 500,
        }
    }
}

const EDGE_FRACTION: f64 = 0.8;
const NON_EDGE_FRACTION: f64 = 1.2;

/// Fruchterman-Reingold layout with each spring scaled by its edge dual
/// (normalized to mean 1), rescaled so the median edge is `0.8·R_b`, then
/// nudged so non-adjacent atoms sit at least `1.2·R_b` apart where possible.
pub fn layout(graph: &WeightedGraph, edge_duals: &[f64], seed: u64, params: &LayoutParams) -> Register {
    let n = graph.n();
    if n == 1 {
        return Register::new(vec![[0.0, 0.0]]);
    }
    let mean = edge_duals.iter().sum::<f64>() / edge_duals.len().max(1) as f64;
    let spring: Vec<f64> = edge_duals
        .iter()
        .map(|&p| if mean > 0.0 { p / mean } else { 1.0 })
        .collect();

    let mut rng = stream_rng(seed, 0x1a70);
    let mut pos: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
    let k = (1.0 / n as f64).sqrt();
    let iterations = params.iterations.max(1);
    let mut disp = vec![[0.0f64; 2]; n];
    for it in 0..iterations {
        let temp = 0.1 * (1.0 - it as f64 / iterations as f64) + 1e-4;
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy, d) = separation(pos[i], pos[j], i, j);
                let f = k * k / d;
                disp[i][0] += dx / d * f;
                disp[i][1] += dy / d * f;
                disp[j][0] -= dx / d * f;
                disp[j][1] -= dy / d * f;
            }
        }
        for (e, &(i, j)) in graph.edges().iter().enumerate() {
            let (dx, dy, d) = separation(pos[i], pos[j], i, j);
            let f = spring[e] * d * d / k;
            disp[i][0] -= dx / d * f;
            disp[i][1] -= dy / d * f;
            disp[j][0] += dx / d * f;
            disp[j][1] += dy / d * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let step = len.min(temp);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
    }

    let r_b = params.blockade_radius;
    let mut reg = Register::new(pos);
    rescale(&mut reg, graph, r_b);
    let adjacent = |i: usize, j: usize| graph.has_edge(i, j);
    for _ in 0..20 {
        let mut moved = false;
        for _ in 0..50 {
            let mut any = false;
            for i in 0..n {
                for j in i + 1..n {
                    if adjacent(i, j) {
                        continue;
                    }
                    let (dx, dy, d) = separation(reg.positions[i], reg.positions[j], i, j);
                    let want = NON_EDGE_FRACTION * r_b * 1.001;
                    if d < want {
                        let push = (want - d) / 2.0;
                        reg.positions[i][0] += dx / d * push;
                        reg.positions[i][1] += dy / d * push;
                        reg.positions[j][0] -= dx / d * push;
                        reg.positions[j][1] -= dy / d * push;
                        any = true;
                    }
                }
            }
            moved |= any;
            if !any {
                break;
            }
        }
        rescale(&mut reg, graph, r_b);
        if !moved {
            break;
        }
    }
    // Center on the origin.
    let cx = reg.positions.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = reg.positions.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    for p in &mut reg.positions {
        p[0] -= cx;
        p[1] -= cy;
    }
    reg
}

/// `(dx, dy, d)` from `b` to `a`, with a deterministic tiny offset for
/// coincident points.
fn separation(a: [f64; 2], b: [f64; 2], i: usize, j: usize) -> (f64, f64, f64) {
    let (mut dx, mut dy) = (a[0] - b[0], a[1] - b[1]);
    let mut d = dx.hypot(dy);
    if d < 1e-9 {
        let angle = (i * 31 + j * 17) as f64;
        dx = 1e-9 * angle.cos();
        dy = 1e-9 * angle.sin();
        d = 1e-9;
    }
    (dx, dy, d)
}

/// Scales about the centroid so the median edge length is `0.8·R_b` (or the
/// closest pair `1.2·R_b` apart when there are no edges).
fn rescale(reg: &mut Register, graph: &WeightedGraph, r_b: f64) {
    let n = reg.len();
    let (current, target) = if graph.m() > 0 {
        let mut lens: Vec<f64> = graph.edges().iter().map(|&(i, j)| reg.distance(i, j)).collect();
        lens.sort_by(f64::total_cmp);
        let mid = lens.len() / 2;
        let median = if lens.len() % 2 == 1 {
            lens[mid]
        } else {
            0.5 * (lens[mid - 1] + lens[mid])
        };
        (median, EDGE_FRACTION * r_b)
    } else {
        let mut min = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                min = min.min(reg.distance(i, j));
            }
        }
        (min, 1.5 * r_b)
    };
    if !(current > 0.0 && current.is_finite()) {
        return;
    }
    let s = target / current;
    let cx = reg.positions.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = reg.positions.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    for p in &mut reg.positions {
        p[0] = cx + (p[0] - cx) * s;
        p[1] = cy + (p[1] - cy) * s;
    }
}

/// Chosen blockade radius and the matching drive amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Blockade {
    pub radius: f64,
    pub omega_max: f64,
    /// Pairs whose adjacency the radius reproduces.
    pub agreement: usize,
    pub pairs: usize,
}

/// Pairs `(i, j)` whose "within `radius`" status matches adjacency in `graph`.
pub fn edge_agreement(register: &Register, graph: &WeightedGraph, radius: f64) -> usize {
    let n = register.len();
    let mut ok = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (register.distance(i, j) < radius) == graph.has_edge(i, j) {
                ok += 1;
            }
        }
    }
    ok
}

/// Picks `R_b` maximizing [`edge_agreement`]: among the open intervals between
/// consecutive pair distances, the one with the most agreeing pairs (ties:
/// the widest, then the smallest) and returns its midpoint. The unbounded last
/// interval is capped at 1.5 times the largest distance. `Ω_max = C6 / R_b⁶`.
pub fn choose_blockade(register: &Register, graph: &WeightedGraph, c6: f64) -> Blockade {
    let n = register.len();
    let mut pairs: Vec<(f64, bool)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((register.distance(i, j), graph.has_edge(i, j)));
        }
    }
    if pairs.is_empty() {
        // a lone atom: any radius works, keep the reference scale
        let radius = LayoutParams::default().blockade_radius;
        return Blockade {
            radius,
            omega_max: c6 / radius.powi(6),
            agreement: 0,
            pairs: 0,
        };
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total = pairs.len();
    let non_edges = pairs.iter().filter(|p| !p.1).count();
    // Below the first distance every edge disagrees and every non-edge agrees.
    let mut agree = non_edges;
    let mut lo = 0.0;
    let mut best = (agree, pairs[0].0 - lo, 0.5 * (lo + pairs[0].0));
    let mut k = 0;
    while k < total {
        let d = pairs[k].0;
        while k < total && pairs[k].0 == d {
            if pairs[k].1 {
                agree += 1;
            } else {
                agree -= 1;
            }
            k += 1;
        }
        lo = d;
        let hi = if k < total { pairs[k].0 } else { 1.5 * d };
        let cand = (agree, hi - lo, 0.5 * (lo + hi));
        if cand.0 > best.0 || (cand.0 == best.0 && cand.1 > best.1 + 1e-12) {
            best = cand;
        }
    }
    let radius = best.2;
    Blockade {
        radius,
        omega_max: c6 / radius.powi(6),
        agreement: best.0,
        pairs: total,
    }
}
