mod common;

use common::random_instance;
use lpquts_core::generate::gen_erdos_renyi;
use lpquts_core::graph::is_independent_set;
use lpquts_core::lp::{build_rlp, solve_lp};
use lpquts_core::reduction::{build_reduced, partition_oversized};
use lpquts_core::samplers::{
    greedy_sample, lift_samples, maximalize, repair_conflicts, sa_sample, SampleSet, SamplerConfig,
};
use lpquts_core::{lp_quts, EngineConfig, VertexSet, WeightedGraph};

#[test]
fn final_reduced_edge_ratio_is_below_one() {
    for n in [30, 50] {
        for p in [0.2, 0.5, 0.8] {
            for seed in 0..10 {
                let g = gen_erdos_renyi(n, p, seed % 2 == 1, seed).unwrap();
                let cfg = EngineConfig { seed, ..EngineConfig::default() };
                let r = lp_quts(&g, &cfg).unwrap();
                let last = r.iterations.last().unwrap();
                assert!(last.reduced_edge_ratio < 1.0, "n {n} p {p} seed {seed}: {}", last.reduced_edge_ratio);
                assert!(r.iterations.iter().all(|it| it.reduced_edge_ratio <= 1.0));
            }
        }
    }
}

#[test]
fn partition_respects_cap_and_is_deterministic() {
    for seed in 0..30 {
        let g = random_instance(seed, 10..=40, true);
        let sol = solve_lp(&build_rlp(&g, &[]).unwrap()).unwrap();
        let reduced = build_reduced(&g, &sol, 1e-7);
        assert!(reduced.kept_edges.len() <= g.m());
        assert_eq!(reduced, build_reduced(&g, &sol, 1e-7));
        for cap in [1, 2, 3, 5, 8] {
            let split = partition_oversized(&g, &reduced, cap);
            assert!(split.max_cluster_size() <= cap, "cap {cap}");
            assert_eq!(split, partition_oversized(&g, &reduced, cap));
            let mut seen = vec![false; g.n()];
            for c in &split.clusters {
                for &v in c {
                    assert!(!seen[v], "vertex {v} in two clusters");
                    seen[v] = true;
                }
            }
        }
    }
}

fn check_samples(g: &WeightedGraph, samples: &[VertexSet]) {
    let set = SampleSet::new(g.n(), samples.to_vec());
    assert!(set.all_independent(g));
    assert!(set.occupations.iter().all(|o| (0.0..=1.0).contains(o)));
    for s in samples {
        assert!(is_independent_set(g, s));
        let again = maximalize(g, s);
        assert_eq!(&again, s, "sampler output should already be maximal");
    }
}

#[test]
fn sampler_invariants() {
    for seed in 0..20 {
        let g = random_instance(seed, 5..=30, seed % 2 == 0);
        let greedy = greedy_sample(&g, 50, seed);
        assert_eq!(greedy.len(), 50);
        check_samples(&g, &greedy);
        assert_eq!(greedy, greedy_sample(&g, 50, seed));

        let cfg = SamplerConfig { shots: 20, seed, ..SamplerConfig::default() };
        let sa = sa_sample(&g, &cfg);
        assert_eq!(sa.len(), 20);
        for s in &sa {
            assert!(is_independent_set(&g, s));
        }
        assert_eq!(sa, sa_sample(&g, &cfg));
    }
}

#[test]
fn maximalize_is_idempotent_and_never_loses_weight() {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for seed in 0..50 {
        let g = random_instance(seed, 5..=25, true);
        for _ in 0..10 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let raw = VertexSet::from_members(&g, (0..g.n()).filter(|&v| state >> (v % 64) & 1 == 1));
            let repaired = repair_conflicts(&g, &raw);
            assert!(is_independent_set(&g, &repaired));
            let m = maximalize(&g, &raw);
            assert!(is_independent_set(&g, &m));
            assert!(m.weight() >= repaired.weight() - 1e-12);
            assert_eq!(maximalize(&g, &m), m);
        }
    }
}

#[test]
fn lifting_aligns_shots_and_checks_counts() {
    let g = WeightedGraph::path(6).unwrap();
    let a = greedy_sample(&g.induced(&[0, 1, 2]), 5, 1);
    let b = greedy_sample(&g.induced(&[3, 4, 5]), 5, 2);
    let up = |s: &[VertexSet], off: usize| -> Vec<VertexSet> {
        s.iter()
            .map(|x| VertexSet::from_members(&g, x.members().iter().map(|&v| v + off)))
            .collect()
    };
    let lifted = lift_samples(&g, &[up(&a, 0), up(&b, 3)], 5).unwrap();
    assert_eq!(lifted.shots(), 5);
    for (k, s) in lifted.samples.iter().enumerate() {
        assert!(is_independent_set(&g, s));
        // Only the cross-cluster edge 2-3 can force a vertex out.
        let picked = a[k].members().iter().copied().chain(b[k].members().iter().map(|&v| v + 3));
        for v in picked.filter(|&v| v != 2 && v != 3) {
            assert!(s.contains(v), "shot {k} lost vertex {v}");
        }
    }
    assert!(lift_samples(&g, &[up(&a, 0), up(&b[..4], 3)], 5).is_err());
}
