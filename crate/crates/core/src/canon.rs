//! Canonical labelling by colour refinement and individualisation.
//!
//! Adequate for the small graphs of exhaustive sweeps; no automorphism
//! pruning is attempted.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, Node};

/// Refine `colors` (values `0..k`) until stable. New colours are ranks of
/// (old colour, sorted neighbour colours), so the result is invariant under
/// relabelling.
fn refine(g: &Graph, colors: &mut [usize]) {
    let n = colors.len();
    let mut classes = distinct(colors);
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|i| {
                let mut nb: Vec<usize> = g.neighbors(i + 1).iter().map(|&w| colors[w - 1]).collect();
                nb.sort_unstable();
                (colors[i], nb, i)
            })
            .collect();
        sigs.sort_unstable();
        let mut rank = 0;
        for j in 0..n {
            if j > 0 && (sigs[j].0, &sigs[j].1) != (sigs[j - 1].0, &sigs[j - 1].1) {
                rank += 1;
            }
            colors[sigs[j].2] = rank;
        }
        let now = rank + 1;
        if now == classes {
            return;
        }
        classes = now;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn relabelled_edges(g: &Graph, colors: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (colors[e.0 - 1], colors[e.1 - 1]);
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    out.sort_unstable();
    out
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut Option<(Vec<(usize, usize)>, Vec<usize>)>) {
    let n = colors.len();
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| count[c] > 1) else {
        let form = relabelled_edges(g, &colors);
        if best.as_ref().is_none_or(|b| form < b.0) {
            *best = Some((form, colors));
        }
        return;
    };
    for v in 0..n {
        if colors[v] != target {
            continue;
        }
        // v keeps `target`, the rest of its cell moves up by one
        let mut next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| if c > target || (c == target && i != v) { c + 1 } else { c })
            .collect();
        refine(g, &mut next);
        search(g, next, best);
    }
}

/// Permutation `p` with `p[v - 1]` the canonical label (1-based) of `v`.
pub fn canonical_labelling(g: &Graph) -> Vec<Node> {
    let mut colors: Vec<usize> = (1..=g.node_count()).map(|v| g.degree(v)).collect();
    // degrees as ranks
    let mut ranks: Vec<usize> = colors.clone();
    ranks.sort_unstable();
    ranks.dedup();
    for c in colors.iter_mut() {
        *c = ranks.binary_search(c).unwrap();
    }
    refine(g, &mut colors);
    let mut best = None;
    search(g, colors, &mut best);
    best.map(|b| b.1.into_iter().map(|c| c + 1).collect())
        .unwrap_or_default()
}

/// Sorted edge list under the canonical labelling; equal iff isomorphic.
pub fn canonical_form(g: &Graph) -> Vec<Edge> {
    let p = canonical_labelling(g);
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge::new(p[e.0 - 1], p[e.1 - 1]))
        .collect();
    edges.sort_unstable();
    edges
}

/// `g` relabelled canonically.
pub fn canonical_graph(g: &Graph) -> Graph {
    let edges = canonical_form(g);
    Graph::new(g.node_count(), edges.into_iter().map(|e| (e.0, e.1))).expect("relabelling keeps validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn relabelled_graphs_share_a_form() {
        let g = fixtures::petersen();
        let perm = [3, 7, 1, 10, 2, 5, 9, 4, 6, 8];
        let h = Graph::new(10, g.edges().iter().map(|e| (perm[e.0 - 1], perm[e.1 - 1]))).unwrap();
        assert_eq!(canonical_form(&g), canonical_form(&h));
        assert_ne!(canonical_form(&g), canonical_form(&fixtures::prism(5)));
    }
}
