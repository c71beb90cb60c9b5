//! Contour and window sums and the verdict built on them.

use alloc::vec::Vec;

use crate::construction::ObjectPair;
use crate::object::BasicObject;
use crate::weighting::{correct, NodeWeighting, PolarityChoice, WeightModel, WeightingError};

/// Sums in doubled units: `l` over contour edges, `s` over windows,
/// `h = l + s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Params {
    pub l: i32,
    pub s: i32,
    pub h: i32,
}

pub fn parameters(obj: &BasicObject, w: &NodeWeighting) -> Params {
    let (mut l, mut s) = (0, 0);
    for i in 0..obj.len() {
        let (u, v) = obj.pair_at(i);
        let x = w.pair_weight2(u, v);
        if obj.window_flags()[i] {
            s += x;
        } else {
            l += x;
        }
    }
    Params { l, s, h: l + s }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub first: Params,
    pub second: Params,
    pub hamiltonian_claimed: bool,
    /// Choice that equalized both sums, if any; otherwise the closest miss.
    pub choice: Option<PolarityChoice>,
    pub weights: Option<(NodeWeighting, NodeWeighting)>,
    pub choices_tried: u64,
    /// Choices where correction had no eligible node.
    pub choices_failed: u64,
    /// Choices with exactly one of the two equalities.
    pub one_equality_choices: u64,
    pub free_groups: usize,
    pub conflict_edges: usize,
    pub propagations: usize,
}

/// Precomputed structure of one object for fast evaluation of many choices.
struct Prepared {
    interior: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize, bool)>,
    /// Nodes that correction may flip, ascending.
    eligible: Vec<usize>,
}

impl Prepared {
    fn new(obj: &BasicObject, common: &alloc::collections::BTreeSet<usize>) -> Self {
        Prepared {
            interior: obj.interior_edges().iter().map(|e| (e.0 - 1, e.1 - 1)).collect(),
            pairs: (0..obj.len())
                .map(|i| {
                    let (u, v) = obj.pair_at(i);
                    (u - 1, v - 1, obj.window_flags()[i])
                })
                .collect(),
            eligible: (1..=obj.len())
                .filter(|&v| {
                    !obj.is_window_node(v) && !common.contains(&v) && obj.graph().degree(v) == 3
                })
                .map(|v| v - 1)
                .collect(),
        }
    }

    /// Same result as `correct` followed by `parameters`, in place.
    fn evaluate(&self, w: &mut [i8]) -> Result<Params, WeightingError> {
        let g2: i32 = self.interior.iter().map(|&(u, v)| (w[u] + w[v]) as i32).sum();
        let gamma = g2 / 2;
        if gamma != 0 {
            let sign: i8 = if gamma > 0 { 1 } else { -1 };
            let needed = gamma.unsigned_abs() as usize;
            let mut flipped = 0;
            for &v in &self.eligible {
                if flipped == needed {
                    break;
                }
                if w[v] == sign {
                    w[v] = -sign;
                    flipped += 1;
                }
            }
            if flipped < needed {
                return Err(WeightingError::NoEligibleNode {
                    needed,
                    available: flipped,
                });
            }
        }
        let (mut l, mut s) = (0, 0);
        for &(u, v, win) in &self.pairs {
            let x = (w[u] + w[v]) as i32;
            if win {
                s += x;
            } else {
                l += x;
            }
        }
        Ok(Params { l, s, h: l + s })
    }
}

/// Try every sign choice; the first that gives equal contour sums and equal
/// window sums is the witness.
pub fn decide(pair: &ObjectPair) -> Result<Verdict, WeightingError> {
    let model = WeightModel::new(pair);
    let total = model.choice_count()?;
    let k = model.groups().len();
    let common = model.common_nodes();
    let prep = [Prepared::new(&pair.first, common), Prepared::new(&pair.second, common)];
    let mut best: Option<(u32, u64, Params, Params)> = None;
    let mut failed = 0;
    let mut one_eq = 0;
    let mut last_err = None;
    let mut tried = 0;
    let mut witness = false;
    for i in 0..total {
        tried += 1;
        let choice = PolarityChoice::nth(i, k);
        let (w1, w2) = model.assign(&choice);
        let (mut a, mut b) = (w1.signs().to_vec(), w2.signs().to_vec());
        let res = prep[0]
            .evaluate(&mut a)
            .and_then(|p1| prep[1].evaluate(&mut b).map(|p2| (p1, p2)));
        let (p1, p2) = match res {
            Ok(x) => x,
            Err(e) => {
                failed += 1;
                last_err = Some(e);
                continue;
            }
        };
        let (el, es) = (p1.l == p2.l, p1.s == p2.s);
        if el != es {
            one_eq += 1;
        }
        let miss = p1.l.abs_diff(p2.l) + p1.s.abs_diff(p2.s);
        if best.as_ref().is_none_or(|b| miss < b.0) {
            best = Some((miss, i, p1, p2));
        }
        if el && es {
            witness = true;
            break;
        }
    }
    let Some((_, index, p1, p2)) = best else {
        return Err(last_err.expect("at least one choice is tried"));
    };
    let choice = PolarityChoice::nth(index, k);
    let (w1, w2) = model.assign(&choice);
    let w1 = correct(&pair.first, &w1, common)?;
    let w2 = correct(&pair.second, &w2, common)?;
    debug_assert_eq!(parameters(&pair.first, &w1), p1);
    debug_assert_eq!(parameters(&pair.second, &w2), p2);
    Ok(Verdict {
        first: p1,
        second: p2,
        hamiltonian_claimed: witness,
        choice: Some(choice),
        weights: Some((w1, w2)),
        choices_tried: tried,
        choices_failed: failed,
        one_equality_choices: one_eq,
        free_groups: k,
        conflict_edges: model.conflicts().len(),
        propagations: model.propagations,
    })
}

/// Sums over the union objects, where each pair weighs the sum of its two
/// weightings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnionCheck {
    pub union_contour_sums: (i32, i32),
    pub union_window_sums: (i32, i32),
    pub union_interior_sums: (i32, i32),
    pub equalities_preserved: bool,
}

fn union_sums(obj: &BasicObject, w1: &NodeWeighting, w2: &NodeWeighting) -> (i32, i32, i32) {
    let (mut l, mut s) = (0, 0);
    for i in 0..obj.len() {
        let (u, v) = obj.pair_at(i);
        let x = w1.pair_weight2(u, v) + w2.pair_weight2(u, v);
        if obj.window_flags()[i] {
            s += x;
        } else {
            l += x;
        }
    }
    let interior = obj
        .interior_edges()
        .iter()
        .map(|e| w1.pair_weight2(e.0, e.1) + w2.pair_weight2(e.0, e.1))
        .sum();
    (l, s, interior)
}

pub fn union_check(pair: &ObjectPair, w1: &NodeWeighting, w2: &NodeWeighting) -> UnionCheck {
    let p1 = parameters(&pair.first, w1);
    let p2 = parameters(&pair.second, w2);
    let (l1, s1, i1) = union_sums(&pair.first, w1, w2);
    let (l2, s2, i2) = union_sums(&pair.second, w1, w2);
    let before = (p1.l == p2.l, p1.s == p2.s);
    let after = (l1 == l2, s1 == s2);
    UnionCheck {
        union_contour_sums: (l1, l2),
        union_window_sums: (s1, s2),
        union_interior_sums: (i1, i2),
        equalities_preserved: before == after,
    }
}

/// Parameters of every choice, for reports and tests.
pub fn all_parameters(pair: &ObjectPair) -> Result<Vec<(PolarityChoice, Params, Params)>, WeightingError> {
    let model = WeightModel::new(pair);
    let total = model.choice_count()?;
    let k = model.groups().len();
    let mut out = Vec::new();
    for i in 0..total {
        let choice = PolarityChoice::nth(i, k);
        let (w1, w2) = model.assign(&choice);
        let Ok(w1) = correct(&pair.first, &w1, model.common_nodes()) else {
            continue;
        };
        let Ok(w2) = correct(&pair.second, &w2, model.common_nodes()) else {
            continue;
        };
        out.push((choice, parameters(&pair.first, &w1), parameters(&pair.second, &w2)));
    }
    Ok(out)
}
