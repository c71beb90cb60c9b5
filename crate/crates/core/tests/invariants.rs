mod common;

use std::sync::Arc;

use contour_hcp_core::canon::canonical_form;
use contour_hcp_core::oracle::{find_hamiltonian, CycleCertificate, DEFAULT_BUDGET};
use contour_hcp_core::pipeline::{run, Outcome};
use contour_hcp_core::{BasicObject, Graph, GraphError, ObjectPair};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_from(seed: u64, n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::random_graph(&mut rng, n, false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_contour_gives_a_valid_object(seed in any::<u64>(), n in 4usize..20) {
        let g = Arc::new(graph_from(seed, n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(&mut rng);
        let o = BasicObject::from_contour(g.clone(), order.clone()).unwrap();
        common::check_object(&o, &g).map_err(TestCaseError::fail)?;
        let h = o.health();
        prop_assert_eq!(h.window_count, o.window_pairs().len());
        prop_assert!(h.free_edges.iter().all(|e| !o.is_window_node(e.0) && !o.is_window_node(e.1)));
        // rotation and reversal keep the key
        let mut rot = order.clone();
        rot.rotate_left(seed as usize % n);
        rot.reverse();
        let o2 = BasicObject::from_contour(g, rot).unwrap();
        prop_assert_eq!(o.canonical_key(), o2.canonical_key());
    }

    #[test]
    fn tokens_round_trip(seed in any::<u64>(), n in 4usize..16) {
        let g = Arc::new(graph_from(seed, n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(&mut rng);
        let o = BasicObject::from_contour(g.clone(), order).unwrap();
        let back = BasicObject::from_tokens(g.clone(), g, &o.to_string()).unwrap();
        prop_assert_eq!(o, back);
    }

    #[test]
    fn canonical_form_ignores_labels(seed in any::<u64>(), n in 4usize..14) {
        let g = graph_from(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let mut p: Vec<usize> = (1..=n).collect();
        p.shuffle(&mut rng);
        let h = Graph::new(n, g.edges().iter().map(|e| (p[e.0 - 1], p[e.1 - 1]))).unwrap();
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn contraction_keeps_hamiltonicity(seed in any::<u64>(), n in 5usize..16) {
        let g = graph_from(seed, n);
        match g.contract_degree2_chains() {
            Err(GraphError::PureCycle) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
            Ok((r, map)) => {
                prop_assert!(r.node_count() <= n);
                // adjacent degree-2 nodes survive only as a pair hanging off
                // one node
                for e in r.edges() {
                    if r.degree(e.0) == 2 && r.degree(e.1) == 2 {
                        let shared = r.neighbors(e.0).iter().any(|w| r.neighbors(e.1).contains(w));
                        prop_assert!(shared, "{:?}", r.edges());
                    }
                }
                let orig = find_hamiltonian(&g, DEFAULT_BUDGET).unwrap();
                let red = find_hamiltonian(&r, DEFAULT_BUDGET).unwrap();
                prop_assert_eq!(orig.is_some(), red.is_some());
                if let Some(c) = red {
                    let lifted = CycleCertificate { order: map.lift_cycle(&g, &c.order) };
                    prop_assert!(lifted.is_valid_for(&g));
                }
            }
        }
    }

    #[test]
    fn pipeline_results_are_structured(seed in any::<u64>(), n in 4usize..17) {
        let g = graph_from(seed, n);
        let a = run(&g, seed);
        let b = run(&g, seed);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.trace, &b.trace);
                match a.outcome {
                    Outcome::ShortCircuit { certificate, .. } => {
                        let c = CycleCertificate { order: certificate };
                        prop_assert!(c.is_valid_for(&g));
                    }
                    Outcome::Decided { pair, verdict, .. } => {
                        let again = ObjectPair::new(pair.first.clone(), pair.second.clone());
                        prop_assert!(again.is_ok());
                        prop_assert!(pair.first.interior_edges().is_disjoint(&pair.second.interior_edges()));
                        prop_assert!(verdict.choices_tried >= 1);
                    }
                }
            }
            (Err(a), Err(b)) => {
                prop_assert_eq!(&a.trace, &b.trace);
                prop_assert_eq!(a.code(), b.code());
            }
            _ => prop_assert!(false, "runs differ"),
        }
    }
}
