use std::collections::BTreeSet;

use contour_hcp_core::canon::canonical_form;
use contour_hcp_core::generate::{generate, GenError, GenMode, GenSpec};
use contour_hcp_core::Graph;

fn exhaustive(n: usize, cubic: bool) -> Vec<Graph> {
    generate(&GenSpec {
        n,
        mode: GenMode::Exhaustive,
        cubic,
    })
    .unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Isomorphism by trying every relabelling.
fn isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.node_count();
    if n != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut p: Vec<usize> = (1..=n).collect();
    loop {
        if a.edges().iter().all(|e| b.has_edge(p[e.0 - 1], p[e.1 - 1])) {
            return true;
        }
        if !next_permutation(&mut p) {
            return false;
        }
    }
}

#[test]
fn cubic_class_counts() {
    let counts: Vec<usize> = [4, 6, 8, 10, 12].iter().map(|&n| exhaustive(n, true).len()).collect();
    assert_eq!(counts, [1, 2, 5, 19, 85]);
}

#[test]
fn small_classes_are_pairwise_non_isomorphic() {
    for (n, cubic) in [(6, true), (8, true), (4, false), (5, false), (6, false)] {
        let gs = exhaustive(n, cubic);
        for (i, a) in gs.iter().enumerate() {
            assert!(a.is_connected());
            for b in &gs[i + 1..] {
                assert!(!isomorphic(a, b), "n={n} duplicates");
            }
        }
    }
}

#[test]
fn random_samples_land_in_the_exhaustive_lists() {
    for (n, cubic) in [(8, true), (10, true), (12, true), (7, false)] {
        let known: BTreeSet<_> = exhaustive(n, cubic).iter().map(canonical_form).collect();
        let sample = generate(&GenSpec {
            n,
            mode: GenMode::Random { count: 200, seed: 11 },
            cubic,
        })
        .unwrap();
        for g in &sample {
            assert!(known.contains(&canonical_form(g)), "n={n} sample missing");
        }
    }
}

#[test]
fn generated_graphs_are_valid() {
    for g in exhaustive(7, false).iter().chain(exhaustive(10, true).iter()) {
        assert!(g.is_connected());
        assert!(g.nodes().all(|v| (2..=3).contains(&g.degree(v))));
    }
    let cubic = exhaustive(10, true);
    assert!(cubic.iter().all(Graph::is_cubic));
}

#[test]
fn random_mode_is_seeded() {
    let spec = GenSpec {
        n: 14,
        mode: GenMode::Random { count: 100, seed: 7 },
        cubic: false,
    };
    let a = generate(&spec).unwrap();
    let b = generate(&spec).unwrap();
    assert_eq!(a.len(), 100);
    assert!(a.iter().zip(&b).all(|(x, y)| x.edges() == y.edges()));
    let other = generate(&GenSpec {
        mode: GenMode::Random { count: 100, seed: 8 },
        ..spec
    })
    .unwrap();
    assert!(a.iter().zip(&other).any(|(x, y)| x.edges() != y.edges()));
}

#[test]
fn infeasible_specs() {
    for (n, cubic) in [(7, true), (3, false), (2, true)] {
        let spec = GenSpec {
            n,
            mode: GenMode::Exhaustive,
            cubic,
        };
        assert_eq!(generate(&spec).unwrap_err(), GenError::InfeasibleSpec { n, cubic });
    }
}
