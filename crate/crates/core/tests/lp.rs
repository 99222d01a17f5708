mod common;

use common::{brute_force_mwis, random_instance};
use lpquts_core::lp::{build_rlp, solve_lp, tight_edges, LinearProgram, RlpSolution, TOL_LP};
use lpquts_core::separation::{find_violated_cycles, SeparationInput};
use lpquts_core::{exact_mwis, OddCycle, WeightedGraph};

const TOL: f64 = 1e-9;

/// Strong duality, dual feasibility and complementary slackness.
fn check_optimality(lp: &LinearProgram, s: &RlpSolution) {
    let n = lp.num_vars();
    assert!(s.optimal);
    let dual = s.dual_objective(lp);
    assert!((dual - s.objective).abs() <= TOL, "primal {} dual {}", s.objective, dual);
    let y: Vec<f64> = s.row_duals().collect();
    assert_eq!(y.len(), lp.rows.len());
    let mut column = vec![0.0; n];
    for (r, row) in lp.rows.iter().enumerate() {
        assert!(y[r] >= 0.0);
        let activity = lp.row_activity(r, &s.x);
        assert!(activity <= row.rhs + TOL, "row {r} violated");
        assert!(y[r] * (row.rhs - activity) <= TOL, "row {r}: dual {} slack {}", y[r], row.rhs - activity);
        for &(j, a) in &row.coeffs {
            column[j] += a * y[r];
        }
    }
    for j in 0..n {
        let u = s.bound_duals[j];
        assert!(u >= 0.0);
        assert!((0.0..=1.0).contains(&s.x[j]));
        let reduced = column[j] + u - lp.objective[j];
        assert!(reduced >= -TOL, "var {j} dual infeasible by {reduced}");
        assert!(s.x[j] * reduced <= TOL, "var {j}: x {} reduced {}", s.x[j], reduced);
        assert!(u * (1.0 - s.x[j]) <= TOL);
    }
}

/// Best objective over the half-integral points of the edge polytope.
fn half_integral_optimum(g: &WeightedGraph) -> f64 {
    let n = g.n();
    let mut best = 0.0f64;
    let mut digits = vec![0u8; n];
    loop {
        let x = |v: usize| digits[v] as f64 / 2.0;
        if g.edges().iter().all(|&(u, v)| x(u) + x(v) <= 1.0) {
            best = best.max((0..n).map(|v| g.weight(v) * x(v)).sum());
        }
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        digits[i] += 1;
    }
}

#[test]
fn strong_duality_half_integrality_and_upper_bound() {
    for seed in 0..200 {
        let g = random_instance(seed, 2..=25, seed % 3 != 0);
        let lp = build_rlp(&g, &[]).unwrap();
        let s = solve_lp(&lp).unwrap();
        check_optimality(&lp, &s);
        for &v in &s.x {
            let d = (2.0 * v - (2.0 * v).round()).abs();
            assert!(d <= 2.0 * TOL_LP, "seed {seed}: x = {v} is not half-integral");
        }
        let exact = exact_mwis(&g).unwrap().value;
        assert!(s.objective >= exact - TOL, "seed {seed}: RLP {} < exact {exact}", s.objective);
        if g.n() <= 8 {
            let oracle = half_integral_optimum(&g);
            assert!((oracle - s.objective).abs() <= TOL, "seed {seed}: oracle {oracle} vs {}", s.objective);
        }
    }
}

#[test]
fn cuts_tighten_monotonically_and_stay_valid() {
    for seed in 0..40 {
        let g = random_instance(seed, 6..=14, true);
        let exact = exact_mwis(&g).unwrap().value;
        let occ = vec![0.0; g.n()];
        let mut cuts: Vec<OddCycle> = Vec::new();
        let mut prev = f64::INFINITY;
        for _ in 0..8 {
            let lp = build_rlp(&g, &cuts).unwrap();
            let s = solve_lp(&lp).unwrap();
            check_optimality(&lp, &s);
            assert_eq!(s.cycle_duals.len(), cuts.len());
            assert!(s.objective <= prev + TOL);
            assert!(s.objective >= exact - TOL);
            prev = s.objective;
            let found = find_violated_cycles(&SeparationInput::new(&g, &s.x, &occ, 0.0)).unwrap();
            if found.is_empty() {
                break;
            }
            cuts.extend(found);
        }
    }
}

#[test]
fn small_fixtures() {
    let k3 = WeightedGraph::complete(3).unwrap();
    let s = solve_lp(&build_rlp(&k3, &[]).unwrap()).unwrap();
    assert!((s.objective - 1.5).abs() < TOL);
    assert_eq!(tight_edges(&s, &k3, 1e-7), vec![0, 1, 2]);
    let s = solve_lp(&build_rlp(&k3, &[OddCycle::new(vec![0, 1, 2])]).unwrap()).unwrap();
    assert!((s.objective - 1.0).abs() < TOL);

    let heavy = WeightedGraph::new(vec![1.0, 0.1, 0.1], [(0, 1), (1, 2), (0, 2)]).unwrap();
    let s = solve_lp(&build_rlp(&heavy, &[]).unwrap()).unwrap();
    assert!((s.objective - 1.0).abs() < TOL);
    let e12 = heavy.edge_index(1, 2).unwrap();
    assert!(!tight_edges(&s, &heavy, 1e-7).contains(&e12));

    let c5 = WeightedGraph::cycle(5).unwrap();
    let s = solve_lp(&build_rlp(&c5, &[]).unwrap()).unwrap();
    assert!((s.objective - 2.5).abs() < TOL);
    assert!((brute_force_mwis(&c5) - 2.0).abs() < TOL);
}

#[test]
fn rejects_out_of_range_cut() {
    let c5 = WeightedGraph::cycle(5).unwrap();
    assert!(build_rlp(&c5, &[OddCycle::new(vec![0, 1, 7])]).is_err());
}
