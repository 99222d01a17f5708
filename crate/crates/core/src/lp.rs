//! Relaxed LP of the independent-set polytope and a bounded-variable primal
//! simplex that returns row duals.
//!
//! The model is always `max c·x  s.t.  A x <= b,  0 <= x <= 1` with `b >= 0`,
//! so the all-slack basis at `x = 0` is a feasible starting point and no
//! phase one is needed.
//!
//! The solver keeps a compact tableau with one row per basic variable and
//! one column per nonbasic variable (`m x n`, where `n` is the number of
//! vertices). Most basic variables are slacks, so refactorization only has to
//! invert the small square block formed by the basic structural variables and
//! the rows whose slacks are nonbasic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::separation::OddCycle;

pub const TOL_LP: f64 = 1e-9;
pub const TOL_DUAL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    /// Index into the graph's edge list.
    Edge(usize),
    /// Index into the cut list passed to [`build_rlp`].
    Cut(usize),
}

/// Sparse row `Σ coeff·x_var <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
    pub kind: RowKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn edge_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.kind, RowKind::Edge(_)))
            .count()
    }

    pub fn cut_rows(&self) -> usize {
        self.rows.len() - self.edge_rows()
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// One variable per vertex, one row per edge (input order), then one row per
/// cut (insertion order).
pub fn build_rlp(graph: &WeightedGraph, cuts: &[OddCycle]) -> Result<LinearProgram> {
    let mut rows: Vec<Row> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| Row {
            coeffs: vec![(u, 1.0), (v, 1.0)],
            rhs: 1.0,
            kind: RowKind::Edge(e),
        })
        .collect();
    for (c, cut) in cuts.iter().enumerate() {
        if let Some(&v) = cut.vertices().iter().find(|&&v| v >= graph.n()) {
            return Err(Error::CutOutOfRange { vertex: v, n: graph.n() });
        }
        rows.push(Row {
            coeffs: cut.vertices().iter().map(|&v| (v, 1.0)).collect(),
            rhs: ((cut.len() - 1) / 2) as f64,
            kind: RowKind::Cut(c),
        });
    }
    Ok(LinearProgram {
        objective: graph.weights().to_vec(),
        rows,
    })
}

/// Optimal basic solution of the relaxed LP with its duals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// `π` per edge row, in edge order.
    pub edge_duals: Vec<f64>,
    /// `μ` per cut row, in cut order.
    pub cycle_duals: Vec<f64>,
    /// Duals of the `x_i <= 1` bounds.
    pub bound_duals: Vec<f64>,
    pub optimal: bool,
    pub pivots: usize,
}

impl RlpSolution {
    /// Dual objective `Σ b·y + Σ u` of the bounded LP.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let rows: f64 = self
            .row_duals()
            .zip(&lp.rows)
            .map(|(y, r)| y * r.rhs)
            .sum();
        rows + self.bound_duals.iter().sum::<f64>()
    }

    /// Row duals in LP row order (edges, then cuts).
    pub fn row_duals(&self) -> impl Iterator<Item = f64> + '_ {
        self.edge_duals.iter().chain(&self.cycle_duals).copied()
    }

    /// True when every `x_i` is within `tol` of 0 or 1.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.x.iter().all(|&v| v <= tol || v >= 1.0 - tol)
    }
}

/// How an edge is classified as tight for the reduced graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tightness {
    /// `π_ij > tol_dual`.
    #[default]
    Dual,
    /// `x_i + x_j >= 1 - tol_dual`.
    Primal,
}

/// Edge indices whose dual exceeds `tol_dual`.
pub fn tight_edges(solution: &RlpSolution, graph: &WeightedGraph, tol_dual: f64) -> Vec<usize> {
    tight_edges_by(solution, graph, tol_dual, Tightness::Dual)
}

pub fn tight_edges_by(
    solution: &RlpSolution,
    graph: &WeightedGraph,
    tol_dual: f64,
    rule: Tightness,
) -> Vec<usize> {
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|&(e, &(u, v))| match rule {
            Tightness::Dual => solution.edge_duals[e] > tol_dual,
            Tightness::Primal => solution.x[u] + solution.x[v] >= 1.0 - tol_dual,
        })
        .map(|(e, _)| e)
        .collect()
}

/// Solves the LP with a bounded-variable primal simplex (Dantzig pricing,
/// Bland's rule after `10·rows·cols` pivots).
pub fn solve_lp(lp: &LinearProgram) -> Result<RlpSolution> {
    let mut s = Simplex::new(lp)?;
    s.run()?;
    Ok(s.solution(lp))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Pos {
    Basic(usize),
    Nonbasic(usize),
}

struct Simplex {
    n: usize,
    m: usize,
    c: Vec<f64>,
    b: Vec<f64>,
    /// Dense constraint matrix, row-major `m x n`.
    a: Vec<f64>,
    /// Basic variable of each tableau row.
    basis: Vec<usize>,
    /// Nonbasic variable of each tableau column.
    nonbasic: Vec<usize>,
    pos: Vec<Pos>,
    at_upper: Vec<bool>,
    value: Vec<f64>,
    /// `x_B[r] = const - Σ_k tab[r*n + k] · x_N[k]`.
    tab: Vec<f64>,
    /// Reduced costs: `z = const + Σ_k d[k] · x_N[k]`.
    d: Vec<f64>,
    pivots: usize,
    since_refactor: usize,
}

impl Simplex {
    fn new(lp: &LinearProgram) -> Result<Self> {
        let n = lp.num_vars();
        let m = lp.rows.len();
        let mut a = vec![0.0; m * n];
        let mut b = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            if !(row.rhs >= 0.0) {
                return Err(Error::LpInternal(format!(
                    "row {i} has negative right-hand side {}",
                    row.rhs
                )));
            }
            for &(j, coef) in &row.coeffs {
                if j >= n {
                    return Err(Error::LpInternal(format!("row {i} references variable {j}")));
                }
                a[i * n + j] += coef;
            }
            b.push(row.rhs);
        }
        let mut value = vec![0.0; n + m];
        value[n..].copy_from_slice(&b);
        Ok(Simplex {
            n,
            m,
            c: lp.objective.clone(),
            b,
            tab: a.clone(),
            a,
            basis: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            pos: (0..n)
                .map(Pos::Nonbasic)
                .chain((0..m).map(Pos::Basic))
                .collect(),
            at_upper: vec![false; n + m],
            value,
            d: lp.objective.clone(),
            pivots: 0,
            since_refactor: 0,
        })
    }

    fn upper(&self, var: usize) -> f64 {
        if var < self.n {
            1.0
        } else {
            f64::INFINITY
        }
    }

    fn run(&mut self) -> Result<()> {
        let bland_after = 10 * self.m.max(1) * (self.n + self.m).max(1);
        let hard_limit = 5 * bland_after + 10_000;
        loop {
            if self.pivots > hard_limit {
                return Err(Error::IterationLimit(hard_limit));
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let bland = self.pivots >= bland_after;
            let Some((k, dir)) = self.price(bland) else {
                // Confirm optimality on a fresh factorization before stopping.
                if self.since_refactor == 0 {
                    return Ok(());
                }
                self.refactor()?;
                if self.price(bland).is_none() {
                    return Ok(());
                }
                continue;
            };
            self.step(k, dir, bland)?;
        }
    }

    /// Entering column and direction (+1 increase, -1 decrease).
    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for k in 0..self.n {
            let var = self.nonbasic[k];
            let dk = self.d[k];
            let (score, dir) = if !self.at_upper[var] && dk > TOL_LP {
                (dk, 1.0)
            } else if self.at_upper[var] && dk < -TOL_LP {
                (-dk, -1.0)
            } else {
                continue;
            };
            let better = match best {
                None => true,
                Some((bk, bscore, _)) => {
                    if bland {
                        var < self.nonbasic[bk]
                    } else {
                        score > bscore
                    }
                }
            };
            if better {
                best = Some((k, score, dir));
            }
        }
        best.map(|(k, _, dir)| (k, dir))
    }

    fn step(&mut self, k: usize, dir: f64, bland: bool) -> Result<()> {
        let n = self.n;
        let entering = self.nonbasic[k];
        let mut theta = self.upper(entering);
        let mut leave: Option<(usize, bool)> = None;
        let mut leave_rate = 0.0;
        for r in 0..self.m {
            let rate = -dir * self.tab[r * n + k];
            if rate.abs() <= PIVOT_TOL {
                continue;
            }
            let var = self.basis[r];
            let val = self.value[var];
            let (limit, to_upper) = if rate < 0.0 {
                (val.max(0.0) / -rate, false)
            } else {
                let ub = self.upper(var);
                if ub.is_infinite() {
                    continue;
                }
                ((ub - val).max(0.0) / rate, true)
            };
            // Ties with the entering bound flip are resolved in favor of the flip.
            let replace = if limit < theta - 1e-12 {
                true
            } else if limit <= theta + 1e-12 {
                match leave {
                    None => false,
                    Some((lr, _)) if bland => var < self.basis[lr],
                    Some(_) => rate.abs() > leave_rate,
                }
            } else {
                false
            };
            if replace {
                theta = theta.min(limit);
                leave = Some((r, to_upper));
                leave_rate = rate.abs();
            }
        }
        if theta.is_infinite() {
            return Err(Error::LpInternal("LP is unbounded".into()));
        }

        self.value[entering] += dir * theta;
        for r in 0..self.m {
            let rate = -dir * self.tab[r * n + k];
            if rate != 0.0 {
                let var = self.basis[r];
                self.value[var] += rate * theta;
            }
        }

        let Some((r, to_upper)) = leave else {
            // bound flip
            self.at_upper[entering] = dir > 0.0;
            self.value[entering] = if dir > 0.0 { 1.0 } else { 0.0 };
            return Ok(());
        };

        let leaving = self.basis[r];
        self.value[leaving] = if to_upper { self.upper(leaving) } else { 0.0 };
        self.at_upper[leaving] = to_upper;
        self.at_upper[entering] = false;
        self.pivot(r, k);
        self.basis[r] = entering;
        self.nonbasic[k] = leaving;
        self.pos[entering] = Pos::Basic(r);
        self.pos[leaving] = Pos::Nonbasic(k);
        self.pivots += 1;
        self.since_refactor += 1;
        Ok(())
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let n = self.n;
        let p = self.tab[r * n + k];
        {
            let row = &mut self.tab[r * n..(r + 1) * n];
            for (j, v) in row.iter_mut().enumerate() {
                if j != k {
                    *v /= p;
                }
            }
            row[k] = 1.0 / p;
        }
        let pivot_row: Vec<f64> = self.tab[r * n..(r + 1) * n].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.tab[i * n + k];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.tab[i * n..(i + 1) * n];
            for j in 0..n {
                if j != k {
                    row[j] -= f * pivot_row[j];
                }
            }
            row[k] = -f / p;
        }
        let dk = self.d[k];
        for j in 0..n {
            if j != k {
                self.d[j] -= dk * pivot_row[j];
            }
        }
        self.d[k] = -dk / p;
    }

    /// Rebuilds the tableau, reduced costs and basic values from the
    /// original data and the current basis.
    fn refactor(&mut self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        self.since_refactor = 0;
        let basic_structs: Vec<usize> = (0..n).filter(|&j| matches!(self.pos[j], Pos::Basic(_))).collect();
        let core_rows: Vec<usize> = (0..m)
            .filter(|&i| matches!(self.pos[n + i], Pos::Nonbasic(_)))
            .collect();
        let kdim = basic_structs.len();
        if core_rows.len() != kdim {
            return Err(Error::LpInternal("basis dimension mismatch".into()));
        }
        // M = A[R, S]^{-1}
        let mut core = vec![0.0; kdim * kdim];
        for (a, &i) in core_rows.iter().enumerate() {
            for (bcol, &j) in basic_structs.iter().enumerate() {
                core[a * kdim + bcol] = self.a[i * n + j];
            }
        }
        let minv = invert(&core, kdim)
            .ok_or_else(|| Error::LpInternal("singular basis".into()))?;
        let mut slot_of_struct = vec![usize::MAX; n];
        for (s, &j) in basic_structs.iter().enumerate() {
            slot_of_struct[j] = s;
        }
        let mut slot_of_row = vec![usize::MAX; m];
        for (s, &i) in core_rows.iter().enumerate() {
            slot_of_row[i] = s;
        }

        // Per nonbasic column: coefficients of x_S, i.e. g = M · (column in R).
        let mut g = vec![0.0; kdim];
        for k in 0..n {
            let var = self.nonbasic[k];
            if var < n {
                for a in 0..kdim {
                    g[a] = core_rows
                        .iter()
                        .enumerate()
                        .map(|(c, &i)| minv[a * kdim + c] * self.a[i * n + var])
                        .sum();
                }
            } else {
                let c = slot_of_row[var - n];
                for a in 0..kdim {
                    g[a] = minv[a * kdim + c];
                }
            }
            for r in 0..m {
                let bvar = self.basis[r];
                let coef = if bvar < n {
                    g[slot_of_struct[bvar]]
                } else {
                    let i = bvar - n;
                    let direct = if var < n { self.a[i * n + var] } else { 0.0 };
                    let via: f64 = basic_structs
                        .iter()
                        .enumerate()
                        .map(|(s, &j)| self.a[i * n + j] * g[s])
                        .sum();
                    direct - via
                };
                self.tab[r * n + k] = coef;
            }
            let cn = if var < n { self.c[var] } else { 0.0 };
            self.d[k] = cn
                - basic_structs
                    .iter()
                    .enumerate()
                    .map(|(s, &j)| self.c[j] * g[s])
                    .sum::<f64>();
        }

        // Basic values from the nonbasic ones.
        for k in 0..n {
            let var = self.nonbasic[k];
            self.value[var] = if self.at_upper[var] { self.upper(var) } else { 0.0 };
        }
        let mut rhs = vec![0.0; kdim];
        for (s, &i) in core_rows.iter().enumerate() {
            let nonbasic_part: f64 = (0..n)
                .filter(|&j| slot_of_struct[j] == usize::MAX)
                .map(|j| self.a[i * n + j] * self.value[j])
                .sum();
            rhs[s] = self.b[i] - nonbasic_part - self.value[n + i];
        }
        for (s, &j) in basic_structs.iter().enumerate() {
            self.value[j] = (0..kdim).map(|c| minv[s * kdim + c] * rhs[c]).sum();
        }
        for i in 0..m {
            if matches!(self.pos[n + i], Pos::Basic(_)) {
                let act: f64 = (0..n).map(|j| self.a[i * n + j] * self.value[j]).sum();
                self.value[n + i] = self.b[i] - act;
            }
        }
        Ok(())
    }

    fn solution(&self, lp: &LinearProgram) -> RlpSolution {
        let n = self.n;
        let x: Vec<f64> = (0..n).map(|j| self.value[j].clamp(0.0, 1.0)).collect();
        let mut row_duals = vec![0.0; self.m];
        let mut bound_duals = vec![0.0; n];
        for k in 0..n {
            let var = self.nonbasic[k];
            if var >= n {
                row_duals[var - n] = (-self.d[k]).max(0.0);
            } else if self.at_upper[var] {
                bound_duals[var] = self.d[k].max(0.0);
            }
        }
        let mut edge_duals = Vec::new();
        let mut cycle_duals = Vec::new();
        for (row, y) in lp.rows.iter().zip(row_duals) {
            match row.kind {
                RowKind::Edge(_) => edge_duals.push(y),
                RowKind::Cut(_) => cycle_duals.push(y),
            }
        }
        let objective = x.iter().zip(&self.c).map(|(x, c)| x * c).sum();
        RlpSolution {
            x,
            objective,
            edge_duals,
            cycle_duals,
            bound_duals,
            optimal: true,
            pivots: self.pivots,
        }
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert(a: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&x, &y| m[x * k + col].abs().total_cmp(&m[y * k + col].abs()))?;
        if m[piv * k + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for j in 0..k {
                m.swap(piv * k + j, col * k + j);
                inv.swap(piv * k + j, col * k + j);
            }
        }
        let p = m[col * k + col];
        for j in 0..k {
            m[col * k + j] /= p;
            inv[col * k + j] /= p;
        }
        for i in 0..k {
            if i == col {
                continue;
            }
            let f = m[i * k + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..k {
                m[i * k + j] -= f * m[col * k + j];
                inv[i * k + j] -= f * inv[col * k + j];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(g: &WeightedGraph, cuts: &[OddCycle]) -> RlpSolution {
        solve_lp(&build_rlp(g, cuts).unwrap()).unwrap()
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn structure_of_rows() {
        let k3 = WeightedGraph::complete(3).unwrap();
        let lp = build_rlp(&k3, &[]).unwrap();
        assert_eq!((lp.num_vars(), lp.edge_rows(), lp.cut_rows()), (3, 3, 0));
        let tri = OddCycle::new(vec![0, 1, 2]);
        let lp = build_rlp(&k3, &[tri]).unwrap();
        let cut = lp.rows.last().unwrap();
        assert_eq!(cut.coeffs, vec![(0, 1.0), (1, 1.0), (2, 1.0)]);
        assert_eq!(cut.rhs, 1.0);

        let c5 = WeightedGraph::cycle(5).unwrap();
        let lp = build_rlp(&c5, &[OddCycle::new(vec![0, 1, 2, 3, 4])]).unwrap();
        assert_eq!(lp.rows.last().unwrap().rhs, 2.0);

        let bad = OddCycle::new(vec![0, 1, 7]);
        assert!(matches!(
            build_rlp(&k3, &[bad]),
            Err(Error::CutOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn single_vertex() {
        let g = WeightedGraph::new(vec![0.7], []).unwrap();
        let s = solve(&g, &[]);
        assert_eq!(s.x, vec![1.0]);
        assert_close(s.objective, 0.7);
        assert_close(s.bound_duals[0], 0.7);
    }

    #[test]
    fn triangle_half_integral() {
        let k3 = WeightedGraph::complete(3).unwrap();
        let s = solve(&k3, &[]);
        assert_close(s.objective, 1.5);
        for &v in &s.x {
            assert_close(v, 0.5);
        }
        for &p in &s.edge_duals {
            assert_close(p, 0.5);
        }
        assert_eq!(tight_edges(&s, &k3, TOL_DUAL), vec![0, 1, 2]);
    }

    #[test]
    fn path_is_integral() {
        let p3 = WeightedGraph::path(3).unwrap();
        let s = solve(&p3, &[]);
        assert_close(s.objective, 2.0);
        assert_eq!(s.x, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn triangle_cut_closes_gap() {
        let k3 = WeightedGraph::complete(3).unwrap();
        let s = solve(&k3, &[OddCycle::new(vec![0, 1, 2])]);
        assert_close(s.objective, 1.0);
        assert!(s.is_integral(1e-9));
        assert_close(s.cycle_duals[0], 1.0);
    }

    #[test]
    fn skewed_triangle_drops_slack_edge() {
        let g = WeightedGraph::new(vec![1.0, 0.1, 0.1], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = solve(&g, &[]);
        assert_close(s.objective, 1.0);
        assert_eq!(s.x, vec![1.0, 0.0, 0.0]);
        let tight = tight_edges(&s, &g, TOL_DUAL);
        assert!(!tight.contains(&1), "slack edge {{1,2}} kept: {tight:?}");
    }

    #[test]
    fn edgeless_has_no_tight_edges() {
        let g = WeightedGraph::unit(4, []).unwrap();
        let s = solve(&g, &[]);
        assert!(tight_edges(&s, &g, TOL_DUAL).is_empty());
        assert_close(s.objective, 4.0);
    }

    #[test]
    fn primal_tightness_rule() {
        let g = WeightedGraph::new(vec![1.0, 0.1, 0.1], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = solve(&g, &[]);
        assert_eq!(tight_edges_by(&s, &g, TOL_DUAL, Tightness::Primal), vec![0, 2]);
    }

    #[test]
    fn refactor_preserves_state() {
        let g = crate::generate::gen_erdos_renyi(20, 0.3, true, 4).unwrap();
        let lp = build_rlp(&g, &[]).unwrap();
        let mut s = Simplex::new(&lp).unwrap();
        for _ in 0..5 {
            let Some((k, dir)) = s.price(false) else { break };
            s.step(k, dir, false).unwrap();
        }
        let (tab, d, val) = (s.tab.clone(), s.d.clone(), s.value.clone());
        s.refactor().unwrap();
        for (a, b) in tab.iter().zip(&s.tab).chain(d.iter().zip(&s.d)).chain(val.iter().zip(&s.value)) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_rhs_is_internal_error() {
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![Row {
                coeffs: vec![(0, 1.0)],
                rhs: -1.0,
                kind: RowKind::Edge(0),
            }],
        };
        assert!(matches!(solve_lp(&lp), Err(Error::LpInternal(_))));
    }
}
