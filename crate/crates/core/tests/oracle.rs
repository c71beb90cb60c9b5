use contour_hcp_core::fixtures;
use contour_hcp_core::generate::{generate, GenMode, GenSpec};
use contour_hcp_core::oracle::{find_hamiltonian, DEFAULT_BUDGET};
use contour_hcp_core::Graph;

/// Tries every cyclic order that starts at node 1.
fn naive_hamiltonian(g: &Graph) -> bool {
    fn go(g: &Graph, path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = g.node_count();
        if path.len() == n {
            return g.has_edge(path[n - 1], path[0]);
        }
        for v in 2..=n {
            if used[v - 1] {
                continue;
            }
            used[v - 1] = true;
            path.push(v);
            // the edge check happens only at the end: no pruning at all
            let ok = go(g, path, used)
                && (1..path.len()).all(|i| g.has_edge(path[i - 1], path[i]));
            path.pop();
            used[v - 1] = false;
            if ok {
                return true;
            }
        }
        false
    }
    let mut used = vec![false; g.node_count()];
    used[0] = true;
    go(g, &mut vec![1], &mut used)
}

fn all_small() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 4..=8 {
        for cubic in [true, false] {
            let spec = GenSpec {
                n,
                mode: GenMode::Exhaustive,
                cubic,
            };
            if let Ok(gs) = generate(&spec) {
                out.extend(gs);
            }
        }
    }
    out
}

#[test]
fn agrees_with_naive_search_up_to_8_nodes() {
    let graphs = all_small();
    assert!(graphs.len() > 50);
    for g in &graphs {
        let fast = find_hamiltonian(g, DEFAULT_BUDGET).unwrap();
        if let Some(c) = &fast {
            assert!(c.is_valid_for(g), "{c}");
        }
        assert_eq!(fast.is_some(), naive_hamiltonian(g), "{:?}", g.edges());
    }
}

#[test]
fn known_graphs() {
    assert!(find_hamiltonian(&fixtures::petersen(), DEFAULT_BUDGET).unwrap().is_none());
    assert!(!naive_hamiltonian(&fixtures::petersen()));
    for g in [fixtures::k4(), fixtures::prism(3), fixtures::prism(4), fixtures::prism(5), fixtures::prism(6)] {
        let c = find_hamiltonian(&g, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(c.is_valid_for(&g));
    }
}

#[test]
fn g25_is_hamiltonian() {
    let g = fixtures::g25();
    let c = find_hamiltonian(&g, DEFAULT_BUDGET).unwrap().unwrap();
    assert!(c.is_valid_for(&g));
    assert_eq!(c.order[0], 1);
}

#[test]
fn certificates_validate_on_random_graphs() {
    for n in [14, 18, 24] {
        let spec = GenSpec {
            n,
            mode: GenMode::Random { count: 30, seed: 3 },
            cubic: false,
        };
        for g in generate(&spec).unwrap() {
            if let Some(c) = find_hamiltonian(&g, DEFAULT_BUDGET).unwrap() {
                assert!(c.is_valid_for(&g));
            }
        }
    }
}
