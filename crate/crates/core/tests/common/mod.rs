#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use contour_hcp_core::generate::{generate, GenMode, GenSpec};
use contour_hcp_core::{BasicObject, Edge, Graph, Node};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_graph(rng: &mut impl Rng, n: usize, cubic: bool) -> Graph {
    let seed = rng.gen();
    let spec = GenSpec {
        n,
        mode: GenMode::Random { count: 1, seed },
        cubic,
    };
    generate(&spec).unwrap().pop().unwrap()
}

/// Depth-first order with shuffled neighbor lists.
pub fn random_dfs(rng: &mut impl Rng, g: &Graph) -> Vec<Node> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![rng.gen_range(1..=n)];
    while let Some(v) = stack.pop() {
        if seen[v - 1] {
            continue;
        }
        seen[v - 1] = true;
        order.push(v);
        let mut nb = g.neighbors(v).to_vec();
        nb.shuffle(rng);
        stack.extend(nb.into_iter().filter(|w| !seen[w - 1]));
    }
    order
}

/// A random-graph object: depth-first contour with a few nodes moved.
pub fn random_object(rng: &mut impl Rng, n: usize) -> BasicObject {
    let cubic = n % 2 == 0 && rng.gen_bool(0.5);
    let g = Arc::new(random_graph(rng, n, cubic));
    let mut order = random_dfs(rng, &g);
    for _ in 0..rng.gen_range(0..=3) {
        let v = order.remove(rng.gen_range(0..n));
        order.insert(rng.gen_range(0..n), v);
    }
    BasicObject::from_contour(g, order).unwrap()
}

/// Independent invariant check; returns a description of the first failure.
pub fn check_object(obj: &BasicObject, g: &Graph) -> Result<(), String> {
    let n = g.node_count();
    let c = obj.contour();
    let w = obj.window_flags();
    if c.len() != n || w.len() != n {
        return Err(format!("length {} for {n} nodes", c.len()));
    }
    let mut sorted = c.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(format!("contour {c:?} is not a permutation"));
    }
    let mut contour = BTreeSet::new();
    for i in 0..n {
        let (u, v) = (c[i], c[(i + 1) % n]);
        if w[i] {
            continue;
        }
        if !g.has_edge(u, v) {
            return Err(format!("contour pair {u}-{v} is neither edge nor window"));
        }
        contour.insert(Edge::new(u, v));
    }
    let interior: BTreeSet<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| !contour.contains(e))
        .collect();
    if interior != obj.interior_edges() {
        return Err(format!("interior mismatch for {obj}"));
    }
    if contour != obj.contour_edges() {
        return Err(format!("contour edge mismatch for {obj}"));
    }
    if contour.len() + interior.len() != g.edge_count() {
        return Err(String::from("edges not conserved"));
    }
    obj.validate().map_err(|e| format!("{e}"))
}

/// Object with a planted case 1.4 pattern: a segment `b l m .. f` whose ends
/// are joined by a link, and an edge from `l` into the other segment.
pub fn planted_14(rng: &mut impl Rng) -> BasicObject {
    loop {
        if let Some(obj) = try_planted_14(rng) {
            return obj;
        }
    }
}

fn try_planted_14(rng: &mut impl Rng) -> Option<BasicObject> {
    let s_len = rng.gen_range(4..=6);
    let t_len = rng.gen_range(6..=10);
    let n = s_len + t_len;
    let mut edges: Vec<(Node, Node)> = Vec::new();
    let mut deg = vec![0usize; n + 1];
    let add = |edges: &mut Vec<(Node, Node)>, deg: &mut Vec<usize>, u: Node, v: Node| {
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
    };
    // S = 1..=s_len, T = s_len+1..=n
    for v in 1..s_len {
        add(&mut edges, &mut deg, v, v + 1);
    }
    add(&mut edges, &mut deg, 1, s_len);
    for v in s_len + 1..n {
        add(&mut edges, &mut deg, v, v + 1);
    }
    let (e, a) = (s_len + 1, n);
    let inner: Vec<Node> = (e + 1..a).collect();
    let s = *inner.choose(rng)?;
    add(&mut edges, &mut deg, 2, s);
    let free = |deg: &Vec<usize>, edges: &Vec<(Node, Node)>, x: Node, y: Node| {
        x != y
            && deg[x] < 3
            && deg[y] < 3
            && !edges.iter().any(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x))
    };
    for end in [e, a] {
        let opts: Vec<Node> = inner
            .iter()
            .copied()
            .filter(|&x| free(&deg, &edges, end, x))
            .collect();
        let x = *opts.choose(rng)?;
        add(&mut edges, &mut deg, end, x);
    }
    for _ in 0..rng.gen_range(0..3) {
        let x = *inner.choose(rng)?;
        let y = *inner.choose(rng)?;
        if free(&deg, &edges, x, y) {
            add(&mut edges, &mut deg, x, y);
        }
    }
    let mut perm: Vec<Node> = (1..=n).collect();
    perm.shuffle(rng);
    let g = Graph::new(n, edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1]))).ok()?;
    let mut contour: Vec<Node> = (1..=n).map(|v| perm[v - 1]).collect();
    let mut windows = vec![false; n];
    windows[s_len - 1] = true;
    windows[n - 1] = true;
    let r = rng.gen_range(0..n);
    contour.rotate_left(r);
    windows.rotate_left(r);
    let g = Arc::new(g);
    BasicObject::with_windows(g.clone(), g, contour, windows).ok()
}
