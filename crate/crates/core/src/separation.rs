//! Sample-informed odd-cycle separation.
//!
//! A cycle `C` is scored by
//!
//! ```text
//! eps_rlp(C) = Σ_{i∈C} x_i      - (|C| - 1)/2
//! eps_s(C)   = Σ_{i∈C} <n_i>    - (|C| - 1)/2
//! eps_a(C)   = eps_rlp(C) + α·eps_s(C)
//! ```
//!
//! and only cycles with `eps_rlp > tol_violation` are returned. The search
//! runs Dijkstra from `v'` to `v''` in the bipartite double cover of the graph
//! with edge costs `z(i,j) = (1 - x_i - x_j) + α(1 - <n_i> - <n_j>)`. Every
//! `v' -> v''` path projects to a closed walk of odd length through `v`, and
//! for a simple cycle the walk weight is `W = (1 + α) - 2·eps_a`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lp::TOL_LP;

pub const TOL_VIOLATION: f64 = 1e-6;

/// Default number of α decrements between 1 and 0.
pub const DEFAULT_ALPHA_STEPS: usize = 10;

/// Simple odd cycle, stored in canonical orientation: rotated to start at
/// its smallest vertex, with the smaller of the two neighbors of that vertex
/// second.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OddCycle {
    vertices: Vec<usize>,
    pub eps_rlp: f64,
    pub eps_s: f64,
    /// Weight of the cycle under the edge costs it was found with, if it came
    /// from the shortest-path search.
    pub walk_weight: Option<f64>,
}

impl PartialEq for OddCycle {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for OddCycle {}

impl std::hash::Hash for OddCycle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl OddCycle {
    /// Unscored cycle; `vertices` is taken in cyclic order.
    pub fn new(vertices: Vec<usize>) -> Self {
        OddCycle {
            vertices: canonical(vertices),
            eps_rlp: 0.0,
            eps_s: 0.0,
            walk_weight: None,
        }
    }

    /// Cycle scored against LP values and sample occupations.
    pub fn scored(vertices: Vec<usize>, x: &[f64], occupations: &[f64]) -> Self {
        let mut c = Self::new(vertices);
        c.rescore(x, occupations);
        c
    }

    pub fn rescore(&mut self, x: &[f64], occupations: &[f64]) {
        self.eps_rlp = self.violation(x);
        self.eps_s = self.violation(occupations);
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Right-hand side `(|C| - 1)/2` of the cycle inequality.
    pub fn rhs(&self) -> usize {
        (self.vertices.len() - 1) / 2
    }

    /// `Σ_{i∈C} values_i - (|C| - 1)/2`.
    pub fn violation(&self, values: &[f64]) -> f64 {
        self.vertices.iter().map(|&v| values[v]).sum::<f64>() - self.rhs() as f64
    }

    pub fn eps_alpha(&self, alpha: f64) -> f64 {
        self.eps_rlp + alpha * self.eps_s
    }

    /// Checks odd length ≥ 3, no repeated vertex and consecutive adjacency.
    pub fn is_valid_in(&self, graph: &WeightedGraph) -> bool {
        let k = self.vertices.len();
        if k < 3 || k % 2 == 0 {
            return false;
        }
        let distinct: HashSet<_> = self.vertices.iter().collect();
        distinct.len() == k
            && self.vertices.iter().all(|&v| v < graph.n())
            && (0..k).all(|i| graph.has_edge(self.vertices[i], self.vertices[(i + 1) % k]))
    }
}

fn canonical(mut c: Vec<usize>) -> Vec<usize> {
    if c.is_empty() {
        return c;
    }
    let start = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
    c.rotate_left(start);
    if c.len() > 2 && c[c.len() - 1] < c[1] {
        c[1..].reverse();
    }
    c
}

/// Inputs of one separation call.
#[derive(Debug, Clone, Copy)]
pub struct SeparationInput<'a> {
    pub graph: &'a WeightedGraph,
    pub x: &'a [f64],
    pub occupations: &'a [f64],
    pub alpha: f64,
}

impl<'a> SeparationInput<'a> {
    pub fn new(graph: &'a WeightedGraph, x: &'a [f64], occupations: &'a [f64], alpha: f64) -> Self {
        SeparationInput {
            graph,
            x,
            occupations,
            alpha,
        }
    }
}

/// `z(i,j) = (1 - x_i - x_j) + α(1 - <n_i> - <n_j>)` per edge, with values in
/// `[-TOL_LP, 0)` clamped to zero.
pub fn edge_costs(input: &SeparationInput<'_>) -> Result<Vec<f64>> {
    let (x, occ) = (input.x, input.occupations);
    input
        .graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let z = (1.0 - x[u] - x[v]) + input.alpha * (1.0 - occ[u] - occ[v]);
            if z < -TOL_LP {
                Err(Error::NegativeEdgeCost { u, v, cost: z })
            } else {
                Ok(z.max(0.0))
            }
        })
        .collect()
}

/// One shortest-path search per vertex in the double cover; returns the
/// distinct violated cycles sorted by decreasing `eps_a`.
pub fn find_violated_cycles(input: &SeparationInput<'_>) -> Result<Vec<OddCycle>> {
    find_violated_cycles_with(input, TOL_VIOLATION)
}

pub fn find_violated_cycles_with(input: &SeparationInput<'_>, tol_violation: f64) -> Result<Vec<OddCycle>> {
    let graph = input.graph;
    let z = edge_costs(input)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut search = DoubleCoverSearch::new(graph.n());
    for v in 0..graph.n() {
        let Some(walk) = search.shortest_odd_walk(graph, &z, v) else {
            continue;
        };
        let cycle = simple_odd_cycle(walk);
        let mut c = OddCycle::scored(cycle, input.x, input.occupations);
        if c.eps_rlp <= tol_violation || !seen.insert(c.vertices.clone()) {
            continue;
        }
        c.walk_weight = Some(cycle_weight(graph, &z, &c.vertices));
        out.push(c);
    }
    sort_by_score(&mut out, input.alpha);
    Ok(out)
}

fn sort_by_score(cycles: &mut [OddCycle], alpha: f64) {
    cycles.sort_by(|a, b| {
        b.eps_alpha(alpha)
            .total_cmp(&a.eps_alpha(alpha))
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
}

fn cycle_weight(graph: &WeightedGraph, z: &[f64], cycle: &[usize]) -> f64 {
    let k = cycle.len();
    (0..k)
        .map(|i| {
            let e = graph
                .edge_index(cycle[i], cycle[(i + 1) % k])
                .expect("cycle edges exist");
            z[e]
        })
        .sum()
}

/// Result of the α schedule.
#[derive(Debug, Clone)]
pub struct ScheduleOutcome {
    pub cycles: Vec<OddCycle>,
    /// α at which cycles were found, if any.
    pub alpha: Option<f64>,
    /// Number of separation calls made.
    pub rounds: usize,
}

/// Runs the separation at `α = 1, 1 - 1/n_steps, ..., 0` and stops at the
/// first α that yields any violated cycle.
pub fn alpha_schedule(
    graph: &WeightedGraph,
    x: &[f64],
    occupations: &[f64],
    n_steps: usize,
) -> Result<ScheduleOutcome> {
    alpha_schedule_from(graph, x, occupations, 1.0, n_steps, TOL_VIOLATION)
}

/// Same as [`alpha_schedule`] starting from `alpha0`; `alpha0 = 0` gives the
/// classical separation.
pub fn alpha_schedule_from(
    graph: &WeightedGraph,
    x: &[f64],
    occupations: &[f64],
    alpha0: f64,
    n_steps: usize,
    tol_violation: f64,
) -> Result<ScheduleOutcome> {
    let n_steps = n_steps.max(1);
    let steps = if alpha0 > 0.0 { n_steps } else { 0 };
    for k in 0..=steps {
        // Integer stepping so that α = 0 is always reached exactly.
        let alpha = if steps == 0 {
            0.0
        } else {
            alpha0 * (steps - k) as f64 / steps as f64
        };
        let input = SeparationInput::new(graph, x, occupations, alpha);
        let cycles = find_violated_cycles_with(&input, tol_violation)?;
        if !cycles.is_empty() {
            return Ok(ScheduleOutcome {
                cycles,
                alpha: Some(alpha),
                rounds: k + 1,
            });
        }
    }
    Ok(ScheduleOutcome {
        cycles: Vec::new(),
        alpha: None,
        rounds: steps + 1,
    })
}

/// Largest vertex count accepted by [`brute_force_separation`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Exhaustive search over all simple odd cycles: the violated cycle with the
/// largest `eps_a`, ties broken by shorter length and then vertex list.
pub fn brute_force_separation(
    graph: &WeightedGraph,
    x: &[f64],
    occupations: &[f64],
    alpha: f64,
) -> Result<Option<OddCycle>> {
    let mut best: Option<OddCycle> = None;
    for_each_odd_cycle(graph, |cycle| {
        let c = OddCycle::scored(cycle.to_vec(), x, occupations);
        if c.eps_rlp <= TOL_VIOLATION {
            return;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                let (ea, eb) = (c.eps_alpha(alpha), b.eps_alpha(alpha));
                if (ea - eb).abs() > 1e-12 {
                    ea > eb
                } else {
                    (c.len(), &c.vertices) < (b.len(), &b.vertices)
                }
            }
        };
        if better {
            best = Some(c);
        }
    })?;
    Ok(best)
}

/// Calls `f` once per simple odd cycle (in canonical orientation).
pub fn for_each_odd_cycle(graph: &WeightedGraph, mut f: impl FnMut(&[usize])) -> Result<()> {
    if graph.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n: graph.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let n = graph.n();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.clear();
        path.push(s);
        on_path[s] = true;
        extend(graph, s, &mut path, &mut on_path, &mut f);
        on_path[s] = false;
    }
    Ok(())
}

fn extend(
    graph: &WeightedGraph,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    f: &mut impl FnMut(&[usize]),
) {
    let last = *path.last().unwrap();
    for u in graph.neighbors(last) {
        if u == start && path.len() >= 3 && path.len() % 2 == 1 && path[1] < last {
            f(path);
        }
        if u > start && !on_path[u] {
            path.push(u);
            on_path[u] = true;
            extend(graph, start, path, on_path, f);
            on_path[u] = false;
            path.pop();
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable Dijkstra buffers over the double cover, node `2v + side`.
struct DoubleCoverSearch {
    dist: Vec<f64>,
    pred: Vec<usize>,
    done: Vec<bool>,
    heap: BinaryHeap<Entry>,
}

impl DoubleCoverSearch {
    fn new(n: usize) -> Self {
        DoubleCoverSearch {
            dist: vec![f64::INFINITY; 2 * n],
            pred: vec![usize::MAX; 2 * n],
            done: vec![false; 2 * n],
            heap: BinaryHeap::new(),
        }
    }

    /// Shortest `v' -> v''` path projected to the closed walk
    /// `[v, w_1, ..., w_{L-1}]` of odd length `L` (the return to `v` implied).
    fn shortest_odd_walk(&mut self, graph: &WeightedGraph, z: &[f64], v: usize) -> Option<Vec<usize>> {
        self.dist.fill(f64::INFINITY);
        self.pred.fill(usize::MAX);
        self.done.fill(false);
        self.heap.clear();
        let (source, target) = (2 * v, 2 * v + 1);
        self.dist[source] = 0.0;
        self.heap.push(Entry { dist: 0.0, node: source });
        while let Some(Entry { dist, node }) = self.heap.pop() {
            if self.done[node] {
                continue;
            }
            self.done[node] = true;
            if node == target {
                break;
            }
            let (u, side) = (node / 2, node % 2);
            for &(w, e) in graph.incident(u) {
                let next = 2 * w + (1 - side);
                let nd = dist + z[e];
                if nd < self.dist[next] {
                    self.dist[next] = nd;
                    self.pred[next] = node;
                    self.heap.push(Entry { dist: nd, node: next });
                }
            }
        }
        if !self.done[target] {
            return None;
        }
        let mut walk = Vec::new();
        let mut node = self.pred[target];
        while node != source {
            walk.push(node / 2);
            node = self.pred[node];
        }
        walk.push(v);
        walk.reverse();
        Some(walk)
    }
}

/// Reduces a closed walk of odd length to a simple odd cycle by splitting at
/// repeated vertices and keeping an odd part. With nonnegative edge costs the
/// result weighs no more than the walk.
pub fn simple_odd_cycle(mut walk: Vec<usize>) -> Vec<usize> {
    debug_assert!(walk.len() % 2 == 1);
    loop {
        let mut first_seen = std::collections::HashMap::new();
        let mut split = None;
        for (j, &v) in walk.iter().enumerate() {
            if let Some(&i) = first_seen.get(&v) {
                split = Some((i, j));
                break;
            }
            first_seen.insert(v, j);
        }
        let Some((i, j)) = split else {
            return walk;
        };
        // walk = A + [v .. ) + B where walk[i] == walk[j] == v
        let inner: Vec<usize> = walk[i..j].to_vec();
        if inner.len() % 2 == 1 {
            walk = inner;
        } else {
            let mut outer: Vec<usize> = walk[j..].to_vec();
            outer.extend_from_slice(&walk[..i]);
            walk = outer;
        }
    }
}
