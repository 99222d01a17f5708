mod common;

use std::collections::BTreeSet;

use common::k4_subdivision_free;
use lpquts_core::generate::{gen_erdos_renyi, gen_series_parallel, gen_erdos_renyi_with_limit};
use lpquts_core::graph::connected_components;
use lpquts_core::io::{graph_to_string, parse_graph, read_graph, write_graph};
use lpquts_core::{Error, WeightedGraph};
use proptest::prelude::*;

#[test]
fn series_parallel_graphs_have_no_k4_subdivision() {
    assert!(k4_subdivision_free(&gen_series_parallel(20, 11).unwrap()));
    for seed in 0..100 {
        for n in [5, 10, 20, 40, 60] {
            let g = gen_series_parallel(n, seed).unwrap();
            assert!(g.n() >= n);
            assert!(g.is_unit_weighted());
            assert_eq!(connected_components(&g).len(), 1);
            assert!(k4_subdivision_free(&g), "n {n} seed {seed}");
        }
    }
    // The oracle does see K4 subdivisions.
    assert!(!k4_subdivision_free(&WeightedGraph::complete(4).unwrap()));
    let sub = WeightedGraph::unit(5, [(0, 1), (0, 2), (0, 4), (4, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(!k4_subdivision_free(&sub));
}

#[test]
fn erdos_renyi_edge_statistics() {
    let counts: Vec<f64> = (0..1000)
        .map(|s| {
            let g = gen_erdos_renyi(30, 0.2, true, s).unwrap();
            assert_eq!(connected_components(&g).len(), 1);
            g.m() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let sd = (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64).sqrt();
    // Binomial(435, 0.2): mean 87, sd 8.34; conditioning on connectivity
    // shifts it up only slightly.
    assert!((mean - 87.0).abs() < 3.0, "mean {mean}");
    assert!((sd - 8.34).abs() < 1.5, "sd {sd}");
    let g7 = gen_erdos_renyi(30, 0.2, true, 7).unwrap().m() as f64;
    assert!((g7 - mean).abs() <= 3.0 * sd);
    assert!((g7 - 87.0).abs() <= 3.0 * 8.34);
}

#[test]
fn erdos_renyi_trivial_cases_and_errors() {
    let g = gen_erdos_renyi(1, 0.5, false, 3).unwrap();
    assert_eq!((g.n(), g.m()), (1, 0));
    let g = gen_erdos_renyi(2, 1.0, false, 3).unwrap();
    assert_eq!(g.edges(), &[(0, 1)]);
    assert!(matches!(gen_erdos_renyi_with_limit(40, 0.01, false, 1, 5), Err(Error::Disconnected { .. })));
    assert!(gen_erdos_renyi(5, 0.0, false, 1).is_err());
    assert!(gen_erdos_renyi(0, 0.5, false, 1).is_err());
}

#[test]
fn malformed_files_report_line_numbers() {
    let cases = [
        ("2 1\n0 1\n1 1\n1 1\n", 4),
        ("# c\n2 1\n0 1\n1 0.0\n0 1\n", 4),
        ("2 1\n0 1\n1 1\n0 5\n", 4),
        ("x\n", 1),
        ("2 2\n0 1\n1 1\n0 1\n0 1\n", 5),
    ];
    for (text, line) in cases {
        match parse_graph(text, "g.txt") {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..30).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(1e-9f64..1e3, n),
            prop::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(move |(w, keep)| {
                let mut edges = BTreeSet::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if keep[k] {
                            edges.insert((u, v));
                        }
                        k += 1;
                    }
                }
                WeightedGraph::new(w, edges).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn file_round_trip_is_exact(g in arb_graph()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        write_graph(&g, &path).unwrap();
        let back = read_graph(&path).unwrap();
        prop_assert_eq!(&back, &g);
        for (a, b) in back.weights().iter().zip(g.weights()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(parse_graph(&graph_to_string(&g), "mem").unwrap(), g);
    }
}
