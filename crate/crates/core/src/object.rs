//! Basic objects: a spanning cyclic contour whose consecutive pairs are graph
//! edges or windows, with every other graph edge in the interior.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Edge, Graph, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectError {
    NotAPermutation,
    /// A non-window consecutive pair is not an edge of the working graph.
    MissingContourEdge(Node, Node),
    LengthMismatch,
    /// Contour text with an unreadable token or a misplaced `W`.
    BadToken,
    /// `check_window_bound` called on an object with links or degenerate
    /// segments.
    PreconditionViolated,
}

impl fmt::Display for ObjectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectError::NotAPermutation => write!(f, "contour is not a permutation of the nodes"),
            ObjectError::MissingContourEdge(u, v) => {
                write!(f, "contour pair {u}-{v} is neither a window nor a graph edge")
            }
            ObjectError::LengthMismatch => write!(f, "window flags do not match contour length"),
            ObjectError::BadToken => write!(f, "unreadable contour token"),
            ObjectError::PreconditionViolated => {
                write!(f, "object has links or degenerate segments")
            }
        }
    }
}

impl core::error::Error for ObjectError {}

/// A contour run between two consecutive windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub endpoints: (Node, Node),
    pub nodes: Vec<Node>,
}

impl Segment {
    pub fn is_degenerate(&self) -> bool {
        self.nodes.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectHealth {
    pub has_links: bool,
    pub links: Vec<Edge>,
    pub degenerate_d3: Vec<Node>,
    pub degenerate_d2: Vec<Node>,
    pub window_count: usize,
    pub free_edges: Vec<Edge>,
    /// Interior edges with at least one window-node endpoint.
    pub window_incident: Vec<Edge>,
    pub segment_count: usize,
}

/// A contour over a working graph.
///
/// `graph` is the graph whose edges are split between contour and interior.
/// While the second object is built it is the input graph minus temporarily
/// removed edges; `full` is always the input graph and supplies the degrees
/// used for the degenerate-segment rules.
#[derive(Clone, Debug)]
pub struct BasicObject {
    graph: Arc<Graph>,
    full: Arc<Graph>,
    contour: Vec<Node>,
    windows: Vec<bool>,
    pos: Vec<usize>,
}

impl PartialEq for BasicObject {
    fn eq(&self, other: &Self) -> bool {
        self.contour == other.contour
            && self.windows == other.windows
            && *self.graph == *other.graph
    }
}

impl Eq for BasicObject {}

impl BasicObject {
    /// Contour from `order` (default: a depth-first order from node 1), with
    /// a window at every consecutive non-edge.
    pub fn initial(graph: Arc<Graph>, order: Option<&[Node]>) -> Result<Self, ObjectError> {
        let contour = match order {
            Some(o) => o.to_vec(),
            None => depth_first_order(&graph, 1),
        };
        Self::from_contour(graph, contour)
    }

    pub fn from_contour(graph: Arc<Graph>, contour: Vec<Node>) -> Result<Self, ObjectError> {
        let n = contour.len();
        let windows = (0..n)
            .map(|i| !graph.has_edge(contour[i], contour[(i + 1) % n]))
            .collect();
        Self::with_windows(graph.clone(), graph, contour, windows)
    }

    /// Explicit window flags. A flagged pair may still be an edge of the
    /// working graph; that edge then counts as interior.
    pub fn with_windows(
        graph: Arc<Graph>,
        full: Arc<Graph>,
        contour: Vec<Node>,
        windows: Vec<bool>,
    ) -> Result<Self, ObjectError> {
        let n = graph.node_count();
        if contour.len() != n {
            return Err(ObjectError::NotAPermutation);
        }
        if windows.len() != n {
            return Err(ObjectError::LengthMismatch);
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in contour.iter().enumerate() {
            if v == 0 || v > n || pos[v - 1] != usize::MAX {
                return Err(ObjectError::NotAPermutation);
            }
            pos[v - 1] = i;
        }
        for i in 0..n {
            let (u, v) = (contour[i], contour[(i + 1) % n]);
            if !windows[i] && !graph.has_edge(u, v) {
                return Err(ObjectError::MissingContourEdge(u, v));
            }
        }
        Ok(BasicObject {
            graph,
            full,
            contour,
            windows,
            pos,
        })
    }

    /// Contour from text such as `2 1 3 W 6 7 W`: node ids in contour order,
    /// `W` marking a window after the preceding node (a trailing `W` closes
    /// the cycle).
    pub fn from_tokens(graph: Arc<Graph>, full: Arc<Graph>, text: &str) -> Result<Self, ObjectError> {
        let (contour, windows) = parse_tokens(text)?;
        Self::with_windows(graph, full, contour, windows)
    }

    /// The same contour and windows over a different working graph.
    pub fn rebase(&self, graph: Arc<Graph>, full: Arc<Graph>) -> Result<Self, ObjectError> {
        Self::with_windows(graph, full, self.contour.clone(), self.windows.clone())
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn full_graph(&self) -> &Arc<Graph> {
        &self.full
    }

    pub fn len(&self) -> usize {
        self.contour.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contour.is_empty()
    }

    pub fn contour(&self) -> &[Node] {
        &self.contour
    }

    /// `window_flags()[i]` is set when the pair at positions `i`, `i + 1`
    /// (cyclically) is a window.
    pub fn window_flags(&self) -> &[bool] {
        &self.windows
    }

    pub fn position(&self, v: Node) -> usize {
        self.pos[v - 1]
    }

    pub fn next(&self, v: Node) -> Node {
        self.contour[(self.pos[v - 1] + 1) % self.len()]
    }

    pub fn prev(&self, v: Node) -> Node {
        let n = self.len();
        self.contour[(self.pos[v - 1] + n - 1) % n]
    }

    pub fn contour_neighbors(&self, v: Node) -> [Node; 2] {
        [self.prev(v), self.next(v)]
    }

    /// Position `i` of the pair `{u, v}` if consecutive on the contour.
    pub fn pair_position(&self, u: Node, v: Node) -> Option<usize> {
        let n = self.len();
        let (pu, pv) = (self.pos[u - 1], self.pos[v - 1]);
        if (pu + 1) % n == pv {
            Some(pu)
        } else if (pv + 1) % n == pu {
            Some(pv)
        } else {
            None
        }
    }

    pub fn is_window(&self, u: Node, v: Node) -> bool {
        self.pair_position(u, v).is_some_and(|i| self.windows[i])
    }

    pub fn is_contour_edge(&self, u: Node, v: Node) -> bool {
        self.pair_position(u, v).is_some_and(|i| !self.windows[i])
    }

    pub fn is_interior(&self, u: Node, v: Node) -> bool {
        self.graph.has_edge(u, v) && !self.is_contour_edge(u, v)
    }

    pub fn pair_at(&self, i: usize) -> (Node, Node) {
        (self.contour[i], self.contour[(i + 1) % self.len()])
    }

    pub fn window_count(&self) -> usize {
        self.windows.iter().filter(|&&w| w).count()
    }

    /// Window pairs in contour order.
    pub fn window_pairs(&self) -> Vec<(Node, Node)> {
        (0..self.len())
            .filter(|&i| self.windows[i])
            .map(|i| self.pair_at(i))
            .collect()
    }

    pub fn is_window_node(&self, v: Node) -> bool {
        let n = self.len();
        let p = self.pos[v - 1];
        self.windows[p] || self.windows[(p + n - 1) % n]
    }

    pub fn window_nodes(&self) -> BTreeSet<Node> {
        self.contour
            .iter()
            .copied()
            .filter(|&v| self.is_window_node(v))
            .collect()
    }

    /// Window partners of `v` (one, or two for a degenerate segment).
    pub fn window_partners(&self, v: Node) -> Vec<Node> {
        let n = self.len();
        let p = self.pos[v - 1];
        let mut out = Vec::new();
        if self.windows[(p + n - 1) % n] {
            out.push(self.prev(v));
        }
        if self.windows[p] {
            out.push(self.next(v));
        }
        out
    }

    pub fn is_degenerate(&self, v: Node) -> bool {
        let n = self.len();
        let p = self.pos[v - 1];
        self.windows[p] && self.windows[(p + n - 1) % n]
    }

    pub fn contour_edges(&self) -> BTreeSet<Edge> {
        (0..self.len())
            .filter(|&i| !self.windows[i])
            .map(|i| {
                let (u, v) = self.pair_at(i);
                Edge::new(u, v)
            })
            .collect()
    }

    pub fn interior_edges(&self) -> BTreeSet<Edge> {
        self.graph
            .edges()
            .iter()
            .copied()
            .filter(|e| !self.is_contour_edge(e.0, e.1))
            .collect()
    }

    /// Interior neighbors of `v` in the working graph.
    pub fn interior_neighbors(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| !self.is_contour_edge(v, w))
    }

    pub fn links(&self) -> Vec<Edge> {
        self.interior_edges()
            .into_iter()
            .filter(|e| self.is_window_node(e.0) && self.is_window_node(e.1))
            .collect()
    }

    pub fn link_count(&self) -> usize {
        self.links().len()
    }

    /// Degenerate segments whose node has degree 3 in the input graph.
    pub fn degenerate_d3(&self) -> Vec<Node> {
        self.contour
            .iter()
            .copied()
            .filter(|&v| self.is_degenerate(v) && self.full.degree(v) == 3)
            .collect()
    }

    pub fn segments(&self) -> Vec<Segment> {
        let n = self.len();
        let Some(first_window) = (0..n).find(|&i| self.windows[i]) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut cur: Vec<Node> = Vec::new();
        for step in 1..=n {
            let i = (first_window + step) % n;
            cur.push(self.contour[i]);
            if self.windows[i] {
                out.push(Segment {
                    endpoints: (cur[0], cur[cur.len() - 1]),
                    nodes: core::mem::take(&mut cur),
                });
            }
        }
        out
    }

    /// Index into `segments()` for every contour position, or `None` when
    /// there are no windows.
    pub fn segment_index(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let first_window = (0..n).find(|&i| self.windows[i])?;
        let mut idx = vec![0; n];
        let mut seg = 0;
        for step in 1..=n {
            let i = (first_window + step) % n;
            idx[i] = seg;
            if self.windows[i] {
                seg += 1;
            }
        }
        Some(idx)
    }

    pub fn health(&self) -> ObjectHealth {
        let window_nodes = self.window_nodes();
        let mut links = Vec::new();
        let mut free_edges = Vec::new();
        let mut window_incident = Vec::new();
        for e in self.interior_edges() {
            let (a, b) = (window_nodes.contains(&e.0), window_nodes.contains(&e.1));
            if a && b {
                links.push(e);
            }
            if a || b {
                window_incident.push(e);
            } else {
                free_edges.push(e);
            }
        }
        let degenerate_d2 = self
            .contour
            .iter()
            .copied()
            .filter(|&v| self.is_degenerate(v) && self.full.degree(v) < 3)
            .collect();
        let window_count = self.window_count();
        ObjectHealth {
            has_links: !links.is_empty(),
            links,
            degenerate_d3: self.degenerate_d3(),
            degenerate_d2,
            window_count,
            free_edges,
            window_incident,
            segment_count: window_count,
        }
    }

    /// Full invariant check.
    pub fn validate(&self) -> Result<(), ObjectError> {
        let n = self.graph.node_count();
        if self.contour.len() != n || self.windows.len() != n {
            return Err(ObjectError::NotAPermutation);
        }
        let mut seen = vec![false; n];
        for &v in &self.contour {
            if v == 0 || v > n || seen[v - 1] {
                return Err(ObjectError::NotAPermutation);
            }
            seen[v - 1] = true;
        }
        for i in 0..n {
            let (u, v) = self.pair_at(i);
            if !self.windows[i] && !self.graph.has_edge(u, v) {
                return Err(ObjectError::MissingContourEdge(u, v));
            }
        }
        Ok(())
    }

    /// Segment count is at most `floor(N / 6)`. Only meaningful for objects
    /// without links and without degenerate segments.
    pub fn check_window_bound(&self) -> Result<bool, ObjectError> {
        let h = self.health();
        if h.has_links || (0..self.len()).any(|i| self.is_degenerate(self.contour[i])) {
            return Err(ObjectError::PreconditionViolated);
        }
        Ok(h.segment_count <= self.len() / 6)
    }

    pub(crate) fn with_new_contour(&self, contour: Vec<Node>, windows: Vec<bool>) -> Self {
        let mut pos = vec![0; contour.len()];
        for (i, &v) in contour.iter().enumerate() {
            pos[v - 1] = i;
        }
        BasicObject {
            graph: self.graph.clone(),
            full: self.full.clone(),
            contour,
            windows,
            pos,
        }
    }

    /// Same contour with the window at position `i` cleared; the pair must
    /// be a working-graph edge.
    pub(crate) fn with_window_closed(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.windows[i] = false;
        out
    }

    /// Canonical key for cycle detection: rotation and direction removed.
    pub fn canonical_key(&self) -> Vec<usize> {
        let n = self.len();
        let start = self.pos[0];
        let forward: Vec<usize> = (0..n)
            .flat_map(|k| {
                let i = (start + k) % n;
                [self.contour[i], self.windows[i] as usize]
            })
            .collect();
        let backward: Vec<usize> = (0..n)
            .flat_map(|k| {
                let i = (start + n - k) % n;
                let w = self.windows[(i + n - 1) % n];
                [self.contour[i], w as usize]
            })
            .collect();
        forward.min(backward)
    }
}

pub fn parse_tokens(text: &str) -> Result<(Vec<Node>, Vec<bool>), ObjectError> {
    let mut contour = Vec::new();
    let mut windows: Vec<bool> = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "W" {
            match windows.last_mut() {
                Some(w) if !*w => *w = true,
                _ => return Err(ObjectError::BadToken),
            }
        } else {
            let v: Node = tok.parse().map_err(|_| ObjectError::BadToken)?;
            contour.push(v);
            windows.push(false);
        }
    }
    Ok((contour, windows))
}

impl fmt::Display for BasicObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.contour.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            if self.windows[i] {
                f.write_str(" W")?;
            }
        }
        Ok(())
    }
}

/// Depth-first preorder from `start`; among unvisited neighbors the one with
/// the fewest unvisited neighbors is taken first (ties: smallest id).
pub fn depth_first_order(graph: &Graph, start: Node) -> Vec<Node> {
    let n = graph.node_count();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![start];
    visited[start - 1] = true;
    order.push(start);
    while let Some(&v) = stack.last() {
        let next = graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !visited[w - 1])
            .min_by_key(|&w| {
                let free = graph
                    .neighbors(w)
                    .iter()
                    .filter(|&&x| !visited[x - 1])
                    .count();
                (free, w)
            });
        match next {
            Some(w) => {
                visited[w - 1] = true;
                order.push(w);
                stack.push(w);
            }
            None => {
                stack.pop();
            }
        }
    }
    order
}
