use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Node;
use crate::object::BasicObject;

/// Remove the contour adjacencies in `removed`, add the pairs in `added`,
/// and walk the result. Returns the new contour and window flags if the
/// result is a single spanning cycle.
///
/// Kept adjacencies keep their window flag. New adjacencies become contour
/// edges when they are working-graph edges and windows otherwise.
pub(crate) fn reconnect(
    obj: &BasicObject,
    removed: &[(Node, Node)],
    added: &[(Node, Node)],
) -> Option<(Vec<Node>, Vec<bool>)> {
    let n = obj.len();
    // Two adjacency slots per node, each (neighbor, flag); flag is None for
    // new pairs.
    let mut adj: Vec<Vec<(Node, Option<bool>)>> = vec![Vec::with_capacity(3); n];
    for i in 0..n {
        let (u, v) = obj.pair_at(i);
        let w = obj.window_flags()[i];
        adj[u - 1].push((v, Some(w)));
        adj[v - 1].push((u, Some(w)));
    }
    for &(u, v) in removed {
        if u == v {
            return None;
        }
        let iu = adj[u - 1].iter().position(|&(x, _)| x == v)?;
        adj[u - 1].swap_remove(iu);
        let iv = adj[v - 1].iter().position(|&(x, _)| x == u)?;
        adj[v - 1].swap_remove(iv);
    }
    for &(u, v) in added {
        if u == v
            || adj[u - 1].iter().any(|&(x, _)| x == v)
            || removed
                .iter()
                .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
        {
            return None;
        }
        adj[u - 1].push((v, None));
        adj[v - 1].push((u, None));
    }
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }

    let start = obj.contour()[0];
    let old_next = obj.next(start);
    // keep the old orientation where possible
    let first = if adj[start - 1][1].0 == old_next { 1 } else { 0 };
    let mut contour = Vec::with_capacity(n);
    let mut windows = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut prev;
    let mut cur = start;
    let mut slot = first;
    for _ in 0..n {
        if visited[cur - 1] {
            return None;
        }
        visited[cur - 1] = true;
        let (next, flag) = adj[cur - 1][slot];
        contour.push(cur);
        windows.push(flag.unwrap_or_else(|| !obj.graph().has_edge(cur, next)));
        prev = cur;
        cur = next;
        slot = if adj[cur - 1][0].0 == prev { 1 } else { 0 };
    }
    if cur != start {
        return None;
    }
    Some((contour, windows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::sync::Arc;

    #[test]
    fn two_opt_reverses_a_run() {
        let g = Arc::new(fixtures::cycle(6));
        let obj = BasicObject::initial(g, Some(&[1, 2, 3, 4, 5, 6])).unwrap();
        let (c, w) = reconnect(&obj, &[(1, 2), (4, 5)], &[(1, 4), (2, 5)]).unwrap();
        assert_eq!(c, [1, 6, 5, 2, 3, 4]);
        assert_eq!(w, [false, false, true, false, false, true]);
    }

    #[test]
    fn split_into_two_cycles_is_rejected() {
        let g = Arc::new(fixtures::cycle(6));
        let obj = BasicObject::initial(g, Some(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert!(reconnect(&obj, &[(1, 2), (4, 5)], &[(1, 5), (2, 4)]).is_none());
    }

    #[test]
    fn removing_a_non_adjacent_pair_fails() {
        let g = Arc::new(fixtures::cycle(6));
        let obj = BasicObject::initial(g, Some(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert!(reconnect(&obj, &[(1, 3)], &[(1, 2)]).is_none());
    }
}
