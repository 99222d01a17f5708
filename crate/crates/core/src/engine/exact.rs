//! Exact MWIS by branch and bound over 128-bit vertex masks.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::lp::{build_rlp, solve_lp, TOL_LP};

pub const EXACT_GUARD: usize = 60;
/// Widest graph the mask representation can hold.
pub const EXACT_HARD_LIMIT: usize = 128;
/// Subproblems at least this large also get the LP bound.
const LP_BOUND_MIN: usize = 10;
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    pub max_n: usize,
    pub time_budget: Option<Duration>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            max_n: EXACT_GUARD,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub set: VertexSet,
    pub value: f64,
    pub nodes: u64,
}

pub fn exact_mwis(graph: &WeightedGraph) -> Result<ExactSolution> {
    exact_mwis_with(graph, &ExactOptions::default())
}

/// Branch and bound: forced inclusions (isolated or locally dominant
/// vertices), a weighted clique-cover bound, the LP bound on larger
/// subproblems, and branching on a fractional LP vertex (include removes its
/// closed neighborhood, exclude removes the vertex). Independent components
/// are solved separately.
pub fn exact_mwis_with(graph: &WeightedGraph, options: &ExactOptions) -> Result<ExactSolution> {
    let n = graph.n();
    let limit = options.max_n.min(EXACT_HARD_LIMIT);
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let mut adj = vec![0u128; n];
    for &(u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut search = Search {
        graph,
        adj,
        w: graph.weights().to_vec(),
        nodes: 0,
        started: Instant::now(),
        budget: options.time_budget,
    };
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mask = search.solve(all)?;
    let set = VertexSet::from_members(graph, bits(mask));
    Ok(ExactSolution {
        value: set.weight(),
        set,
        nodes: search.nodes,
    })
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

struct Search<'a> {
    graph: &'a WeightedGraph,
    adj: Vec<u128>,
    w: Vec<f64>,
    nodes: u64,
    started: Instant,
    budget: Option<Duration>,
}

impl Search<'_> {
    fn weight(&self, m: u128) -> f64 {
        bits(m).map(|v| self.w[v]).sum()
    }

    /// Optimal vertex mask of the subgraph induced by `p`.
    fn solve(&mut self, p: u128) -> Result<u128> {
        self.check_budget()?;
        let (taken, rest) = self.reduce(p);
        let mut mask = taken;
        for comp in self.components(rest) {
            let mut best = self.greedy(comp);
            self.branch(comp, 0, 0.0, &mut best)?;
            mask |= best.1;
        }
        Ok(mask)
    }

    /// Takes vertices that some optimum contains: isolated ones, and ones at
    /// least as heavy as their remaining neighborhood.
    fn reduce(&self, mut p: u128) -> (u128, u128) {
        let mut taken = 0u128;
        loop {
            let mut changed = false;
            for v in bits(p) {
                if p >> v & 1 == 0 {
                    continue;
                }
                let nb = self.adj[v] & p;
                if nb == 0 || self.w[v] >= self.weight(nb) {
                    taken |= 1 << v;
                    p &= !(nb | 1 << v);
                    changed = true;
                }
            }
            if !changed {
                return (taken, p);
            }
        }
    }

    fn components(&self, p: u128) -> Vec<u128> {
        let mut out = Vec::new();
        let mut left = p;
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                next &= left & !comp;
                comp |= next;
                frontier = next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    /// Heaviest-first maximal independent set inside `p`.
    fn greedy(&self, mut p: u128) -> (f64, u128) {
        let mut m = 0;
        while p != 0 {
            let v = bits(p)
                .max_by(|&a, &b| self.w[a].total_cmp(&self.w[b]).then(b.cmp(&a)))
                .expect("nonempty");
            m |= 1 << v;
            p &= !(self.adj[v] | 1 << v);
        }
        (self.weight(m), m)
    }

    /// Sum over a greedy clique partition of each clique's heaviest weight.
    fn clique_cover_bound(&self, p: u128) -> f64 {
        let mut order: Vec<usize> = bits(p).collect();
        order.sort_by(|&a, &b| self.w[b].total_cmp(&self.w[a]).then(a.cmp(&b)));
        let mut cliques: Vec<u128> = Vec::new();
        let mut bound = 0.0;
        for v in order {
            match cliques.iter_mut().find(|c| **c & !self.adj[v] == 0) {
                Some(c) => *c |= 1 << v,
                None => {
                    cliques.push(1 << v);
                    bound += self.w[v];
                }
            }
        }
        bound
    }

    fn check_budget(&self) -> Result<()> {
        if let Some(b) = self.budget {
            if self.nodes % 256 <= 1 && self.started.elapsed() > b {
                return Err(Error::TimeBudget(b.as_secs_f64()));
            }
        }
        Ok(())
    }

    fn branch(&mut self, p: u128, cur: u128, cur_w: f64, best: &mut (f64, u128)) -> Result<()> {
        self.nodes += 1;
        self.check_budget()?;
        let (taken, p) = self.reduce(p);
        let cur = cur | taken;
        let cur_w = cur_w + self.weight(taken);
        if p == 0 {
            if cur_w > best.0 + EPS {
                *best = (cur_w, cur);
            }
            return Ok(());
        }
        if cur_w + self.clique_cover_bound(p) <= best.0 + EPS {
            return Ok(());
        }
        let size = p.count_ones() as usize;
        let mut pivot = None;
        if size >= LP_BOUND_MIN {
            let verts: Vec<usize> = bits(p).collect();
            let sub = self.graph.induced(&verts);
            let sol = solve_lp(&build_rlp(&sub, &[])?)?;
            if cur_w + sol.objective <= best.0 + EPS {
                return Ok(());
            }
            if sol.is_integral(TOL_LP) {
                let m = verts
                    .iter()
                    .zip(&sol.x)
                    .filter(|(_, &x)| x > 0.5)
                    .fold(0u128, |m, (&v, _)| m | 1 << v);
                let w = cur_w + self.weight(m);
                if w > best.0 + EPS {
                    *best = (w, cur | m);
                }
                return Ok(());
            }
            pivot = verts
                .iter()
                .zip(&sol.x)
                .filter(|(_, &x)| x > TOL_LP && x < 1.0 - TOL_LP)
                .max_by(|(&a, _), (&b, _)| self.branch_key(a, p).total_cmp(&self.branch_key(b, p)).then(b.cmp(&a)))
                .map(|(&v, _)| v);
        }
        let v = pivot.unwrap_or_else(|| {
            bits(p)
                .max_by(|&a, &b| self.branch_key(a, p).total_cmp(&self.branch_key(b, p)).then(b.cmp(&a)))
                .expect("nonempty")
        });
        let bit = 1u128 << v;
        // Split into components again after either move.
        let inc = p & !(self.adj[v] | bit);
        let exc = p & !bit;
        self.branch_split(inc, cur | bit, cur_w + self.w[v], best)?;
        self.branch_split(exc, cur, cur_w, best)
    }

    fn branch_key(&self, v: usize, p: u128) -> f64 {
        (self.adj[v] & p).count_ones() as f64 + self.w[v] * 1e-3
    }

    fn branch_split(&mut self, p: u128, cur: u128, cur_w: f64, best: &mut (f64, u128)) -> Result<()> {
        let comps = self.components(p);
        if comps.len() <= 1 {
            return self.branch(p, cur, cur_w, best);
        }
        // Bound before solving components exactly.
        let ub: f64 = comps.iter().map(|&c| self.clique_cover_bound(c)).sum();
        if cur_w + ub <= best.0 + EPS {
            return Ok(());
        }
        let mut w = cur_w;
        let mut m = cur;
        for c in comps {
            let mut local = self.greedy(c);
            self.branch(c, 0, 0.0, &mut local)?;
            w += local.0;
            m |= local.1;
        }
        if w > best.0 + EPS {
            *best = (w, m);
        }
        Ok(())
    }
}
