//! Random instance generators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, WeightedGraph};
use crate::rng::stream_rng;

/// Redraws allowed before [`gen_erdos_renyi`] gives up on connectivity.
pub const MAX_REDRAWS: usize = 1000;

/// Connected G(n, p) graph, obtained by rejection: topology and weights are
/// redrawn together until the graph is connected.
///
/// Weighted instances draw `w_i ~ U(0, 1)` with exact zeros redrawn; unweighted
/// ones use `w_i = 1`.
pub fn gen_erdos_renyi(n: usize, p: f64, weighted: bool, seed: u64) -> Result<WeightedGraph> {
    gen_erdos_renyi_with_limit(n, p, weighted, seed, MAX_REDRAWS)
}

pub fn gen_erdos_renyi_with_limit(
    n: usize,
    p: f64,
    weighted: bool,
    seed: u64,
    max_redraws: usize,
) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
    }
    let mut rng = stream_rng(seed, 0);
    for _ in 0..max_redraws.max(1) {
        let weights = (0..n)
            .map(|_| {
                if weighted {
                    loop {
                        let w: f64 = rng.gen();
                        if w > 0.0 {
                            break w;
                        }
                    }
                } else {
                    1.0
                }
            })
            .collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = WeightedGraph::new(weights, edges)?;
        if connected_components(&g).len() == 1 {
            return Ok(g);
        }
    }
    Err(Error::Disconnected {
        n,
        p,
        attempts: max_redraws.max(1),
    })
}

/// Node of a two-terminal series-parallel composition tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Composition {
    Edge(usize, usize),
    Series(Box<Composition>, Box<Composition>),
    Parallel(Box<Composition>, Box<Composition>),
}

impl Composition {
    /// Leaf edges in left-to-right order.
    pub fn leaves(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                Composition::Edge(u, v) => out.push((*u, *v)),
                Composition::Series(a, b) | Composition::Parallel(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Terminals `(source, sink)` of the two-terminal graph this node builds.
    /// Returns `None` if a series node does not share a middle terminal or a
    /// parallel node's children disagree on terminals.
    pub fn terminals(&self) -> Option<(usize, usize)> {
        match self {
            Composition::Edge(u, v) => Some((*u, *v)),
            Composition::Series(a, b) => {
                let (s1, t1) = a.terminals()?;
                let (s2, t2) = b.terminals()?;
                (t1 == s2).then_some((s1, t2))
            }
            Composition::Parallel(a, b) => {
                let ta = a.terminals()?;
                (b.terminals()? == ta).then_some(ta)
            }
        }
    }
}

/// Series-parallel graph together with the composition tree that certifies it.
#[derive(Debug, Clone)]
pub struct SeriesParallel {
    pub graph: WeightedGraph,
    pub composition: Composition,
}

/// Unit-weight series-parallel graph with exactly `max(target_n, 2)` vertices.
pub fn gen_series_parallel(target_n: usize, seed: u64) -> Result<WeightedGraph> {
    Ok(series_parallel_composition(target_n, seed)?.graph)
}

/// Grows a series-parallel graph from a single edge. Each step picks a
/// uniformly random current edge `(u, v)` and, with equal probability,
/// subdivides it (series) or adds a new path `u - w - v` alongside it
/// (parallel). Both steps add one vertex and keep the graph simple.
pub fn series_parallel_composition(target_n: usize, seed: u64) -> Result<SeriesParallel> {
    if target_n < 2 {
        return Err(Error::InvalidParameter(format!(
            "series-parallel graphs need at least 2 vertices, got {target_n}"
        )));
    }
    let mut rng = stream_rng(seed, 1);
    // Arena of tree nodes; `leaf_of[e]` is the arena index of edge e's leaf.
    let mut arena = vec![Node::Edge(0, 1)];
    let mut edges = vec![(0usize, 1usize)];
    let mut leaf_of = vec![0usize];
    let mut n = 2;
    while n < target_n {
        let e = rng.gen_range(0..edges.len());
        let (u, v) = edges[e];
        let w = n;
        n += 1;
        let left = arena.len();
        arena.push(Node::Edge(u, w));
        arena.push(Node::Edge(w, v));
        let path = arena.len();
        arena.push(Node::Series(left, left + 1));
        if rng.gen_bool(0.5) {
            // series: edge e becomes u-w, a new edge w-v is appended
            arena[leaf_of[e]] = Node::Ref(path);
            edges[e] = (u, w);
            leaf_of[e] = left;
            edges.push((w, v));
            leaf_of.push(left + 1);
        } else {
            let keep = arena.len();
            arena.push(Node::Edge(u, v));
            let par = arena.len();
            arena.push(Node::Parallel(keep, path));
            arena[leaf_of[e]] = Node::Ref(par);
            leaf_of[e] = keep;
            edges.push((u, w));
            leaf_of.push(left);
            edges.push((w, v));
            leaf_of.push(left + 1);
        }
    }
    let graph = WeightedGraph::unit(n, edges)?;
    Ok(SeriesParallel {
        graph,
        composition: build_tree(&arena, 0),
    })
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Edge(usize, usize),
    Series(usize, usize),
    Parallel(usize, usize),
    Ref(usize),
}

fn build_tree(arena: &[Node], mut idx: usize) -> Composition {
    loop {
        match arena[idx] {
            Node::Ref(next) => idx = next,
            Node::Edge(u, v) => return Composition::Edge(u, v),
            Node::Series(a, b) => {
                return Composition::Series(
                    Box::new(build_tree(arena, a)),
                    Box::new(build_tree(arena, b)),
                )
            }
            Node::Parallel(a, b) => {
                return Composition::Parallel(
                    Box::new(build_tree(arena, a)),
                    Box::new(build_tree(arena, b)),
                )
            }
        }
    }
}
