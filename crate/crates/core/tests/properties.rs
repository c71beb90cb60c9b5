mod common;

use std::sync::Arc;

use contour_hcp_core::decision::{parameters, union_check};
use contour_hcp_core::generate::{generate, GenMode, GenSpec};
use contour_hcp_core::pipeline::{run, Outcome};
use contour_hcp_core::weighting::{correct, interior_sum2, select_single, PolarityChoice, WeightModel};
use contour_hcp_core::{BasicObject, Graph, ObjectPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cubic_classes() -> Vec<Graph> {
    [4, 6, 8, 10, 12]
        .iter()
        .flat_map(|&n| {
            generate(&GenSpec {
                n,
                mode: GenMode::Exhaustive,
                cubic: true,
            })
            .unwrap()
        })
        .collect()
}

/// Objects met along the way: every first-stage step, the first object and
/// the final second object.
fn produced_objects(g: &Graph) -> (Vec<BasicObject>, Option<ObjectPair>) {
    let (trace, first, pair) = match run(g, 0) {
        Ok(r) => {
            let pair = match r.outcome {
                Outcome::Decided { pair, .. } => Some(pair),
                Outcome::ShortCircuit { .. } => None,
            };
            (r.trace, None, pair)
        }
        Err(e) => (e.trace, e.first, e.pair),
    };
    let graph = Arc::new(g.clone());
    let mut out: Vec<BasicObject> = trace
        .iter()
        .filter(|l| l.starts_with("first ") || l.starts_with("initial "))
        .filter_map(|l| {
            let tokens = match l.split_once(" | ") {
                Some((_, t)) => t,
                None => l.split_once(' ').unwrap().1,
            };
            BasicObject::from_tokens(graph.clone(), graph.clone(), tokens).ok()
        })
        .collect();
    out.extend(first);
    if let Some(p) = &pair {
        out.push(p.first.clone());
        out.push(p.second.clone());
    }
    (out, pair)
}

#[test]
fn window_bound_on_cubic_sweep() {
    let mut checked = 0;
    for g in cubic_classes() {
        let (objs, _) = produced_objects(&g);
        for o in objs {
            let Ok(holds) = o.check_window_bound() else {
                continue;
            };
            checked += 1;
            assert!(
                holds,
                "{} segments on {} nodes: {o}\ngraph {:?}",
                o.health().segment_count,
                o.len(),
                g.edges()
            );
        }
    }
    assert!(checked > 100, "only {checked} objects checked");
}

#[test]
fn weighting_invariants_on_cubic_sweep() {
    let mut pairs = 0;
    let mut corrected = 0;
    for g in cubic_classes() {
        let (_, Some(pair)) = produced_objects(&g) else {
            continue;
        };
        pairs += 1;
        let model = WeightModel::new(&pair);
        let total = model.choice_count().unwrap().min(256);
        let k = model.groups().len();
        let common = pair.common_contour_edges();
        for i in 0..total {
            let (w1, w2) = model.assign(&PolarityChoice::nth(i, k));
            for w in [&w1, &w2] {
                assert!(w.is_complete());
                assert!(w.signs().iter().all(|&s| s == 1 || s == -1));
            }
            for e in &common {
                assert_eq!(w1.pair_weight2(e.0, e.1), w2.pair_weight2(e.0, e.1));
            }
            if !model.conflicts().is_empty() {
                continue;
            }
            assert_eq!(interior_sum2(&pair.first, &w1), 0);
            assert_eq!(interior_sum2(&pair.second, &w2), 0);
            let (Ok(c1), Ok(c2)) = (
                correct(&pair.first, &w1, model.common_nodes()),
                correct(&pair.second, &w2, model.common_nodes()),
            ) else {
                continue;
            };
            corrected += 1;
            assert_eq!(interior_sum2(&pair.first, &c1), 0);
            assert_eq!(interior_sum2(&pair.second, &c2), 0);
            for e in &common {
                assert_eq!(c1.pair_weight2(e.0, e.1), c2.pair_weight2(e.0, e.1));
            }
            // union sums are sums of the two weightings, pair by pair
            let u = union_check(&pair, &c1, &c2);
            let (a, b) = (parameters(&pair.first, &c1), parameters(&pair.first, &c2));
            assert_eq!(u.union_contour_sums.0, a.l + b.l);
            assert_eq!(u.union_window_sums.0, a.s + b.s);
        }
    }
    assert!(pairs > 20 && corrected > 20, "{pairs} pairs, {corrected} corrected");
}

#[test]
fn correction_zeroes_interior_sums() {
    // arbitrary signs, not just model-derived ones
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hits = 0;
    for g in cubic_classes().iter().filter(|g| g.node_count() >= 10) {
        let (_, Some(pair)) = produced_objects(g) else {
            continue;
        };
        let none = Default::default();
        for _ in 0..20 {
            let signs: Vec<i8> = (0..g.node_count()).map(|_| if rng.gen() { 1 } else { -1 }).collect();
            let w = contour_hcp_core::NodeWeighting::from_signs(signs);
            if let Ok(c) = correct(&pair.second, &w, &none) {
                hits += 1;
                assert_eq!(interior_sum2(&pair.second, &c), 0);
            }
        }
    }
    assert!(hits > 50);
}

#[test]
fn select_single_postconditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut odd, mut even) = (0, 0);
    for i in 0..200 {
        let n = 5 + i % 12;
        let obj = common::random_object(&mut rng, n);
        let p = rng.gen_range(0..n);
        let (m, x) = obj.pair_at(p);
        let w = select_single(&obj, (m, x)).unwrap();
        assert!(w.is_complete());
        for q in 0..n {
            let (u, v) = obj.pair_at(q);
            let want = if n % 2 == 1 && q == p { -1 } else { 0 };
            assert_eq!(w.pair_weight2(u, v), 2 * want, "n={n} pair {u}-{v} in {obj}");
        }
        if n % 2 == 1 {
            odd += 1;
        } else {
            even += 1;
        }
    }
    assert!(odd >= 50 && even >= 50);
}

#[test]
fn select_single_rejects_a_non_contour_pair() {
    let g = Arc::new(contour_hcp_core::fixtures::prism(3));
    let obj = BasicObject::initial(g, Some(&[1, 2, 3, 6, 5, 4])).unwrap();
    assert!(select_single(&obj, (1, 5)).is_err());
}
