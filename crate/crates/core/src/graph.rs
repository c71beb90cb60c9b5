//! Problem instances: simple connected graphs with node degrees 2 or 3.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Node ids are 1-based and contiguous.
pub type Node = usize;

/// An undirected edge, always stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub Node, pub Node);

impl Edge {
    pub fn new(u: Node, v: Node) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn contains(&self, v: Node) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(&self, v: Node) -> Node {
        if self.0 == v {
            self.1
        } else {
            assert_eq!(self.1, v, "{v} is not an endpoint of {self}");
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    Empty,
    NodeOutOfRange { node: Node, n: usize },
    SelfLoop(Node),
    DuplicateEdge(Edge),
    DegreeExceeded(Node),
    /// Degree 0 or 1: no Hamiltonian cycle can pass through the node.
    DegreeTooLow(Node),
    Disconnected,
    /// Every node has degree 2, i.e. the graph is a single cycle.
    PureCycle,
    UnknownFixture(String),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Empty => write!(f, "graph has no nodes"),
            GraphError::NodeOutOfRange { node, n } => {
                write!(f, "node {node} outside 1..={n}")
            }
            GraphError::SelfLoop(v) => write!(f, "self-loop at node {v}"),
            GraphError::DuplicateEdge(e) => write!(f, "duplicate edge {e}"),
            GraphError::DegreeExceeded(v) => write!(f, "node {v} has degree above 3"),
            GraphError::DegreeTooLow(v) => write!(f, "node {v} has degree below 2"),
            GraphError::Disconnected => write!(f, "graph is disconnected"),
            GraphError::PureCycle => write!(f, "graph is a single cycle"),
            GraphError::UnknownFixture(name) => write!(f, "unknown fixture `{name}`"),
        }
    }
}

impl core::error::Error for GraphError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Node>>,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds and validates a graph: simple, degrees in {2, 3}, connected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let g = Self::build(n, edges)?;
        for v in g.nodes() {
            match g.degree(v) {
                0 | 1 => return Err(GraphError::DegreeTooLow(v)),
                2 | 3 => {}
                _ => return Err(GraphError::DegreeExceeded(v)),
            }
        }
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Simple-graph checks only; used for working graphs with edges removed.
    fn build<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = Edge::new(u, v);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e));
            }
            adj[u - 1].push(v);
            adj[v - 1].push(u);
            if adj[u - 1].len() > 3 {
                return Err(GraphError::DegreeExceeded(u));
            }
            if adj[v - 1].len() > 3 {
                return Err(GraphError::DegreeExceeded(v));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            adj,
            edges: set.into_iter().collect(),
            labels: None,
        })
    }

    /// The same node set without `removed`; degree and connectivity checks
    /// are skipped since working graphs may contain degree-1 nodes.
    pub fn without_edges(&self, removed: &BTreeSet<Edge>) -> Graph {
        let kept = self
            .edges
            .iter()
            .filter(|e| !removed.contains(e))
            .map(|e| (e.0, e.1));
        let mut g = Self::build(self.n, kept).expect("subgraph of a simple graph is simple");
        g.labels = self.labels.clone();
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + Clone {
        1..=self.n
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Node) -> usize {
        self.adj[v - 1].len()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u != v && u >= 1 && u <= self.n && self.adj[u - 1].contains(&v)
    }

    pub fn is_cubic(&self) -> bool {
        self.nodes().all(|v| self.degree(v) == 3)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([1]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Merges every maximal run of two or more adjacent degree-2 nodes into a
    /// single degree-2 node.
    ///
    /// A run whose two ends attach to the same node cannot shrink below two
    /// nodes without creating a parallel edge, so it is reduced to two.
    pub fn contract_degree2_chains(&self) -> Result<(Graph, ContractionMap), GraphError> {
        if self.nodes().all(|v| self.degree(v) == 2) {
            return Err(GraphError::PureCycle);
        }
        let mut in_run = vec![false; self.n];
        // groups[i] = original nodes that become one reduced node
        let mut groups: Vec<Vec<Node>> = Vec::new();
        for v in self.nodes() {
            if in_run[v - 1] || self.degree(v) != 2 {
                continue;
            }
            let run = self.degree2_run(v);
            if run.len() < 2 {
                continue;
            }
            for &u in &run {
                in_run[u - 1] = true;
            }
            let first = run[0];
            let last = run[run.len() - 1];
            let outside = |x: Node, inner: Option<Node>| {
                self.neighbors(x)
                    .iter()
                    .copied()
                    .find(|&w| Some(w) != inner && self.degree(w) != 2)
                    .expect("run ends attach to a degree-3 node")
            };
            let x = outside(first, run.get(1).copied());
            let y = outside(last, run.get(run.len() - 2).copied());
            if x == y {
                if run.len() > 2 {
                    let (head, tail) = run.split_at(run.len() - 1);
                    groups.push(head.to_vec());
                    groups.push(tail.to_vec());
                }
            } else {
                groups.push(run);
            }
        }
        if groups.iter().all(|g| g.len() == 1) {
            return Ok((self.clone(), ContractionMap::identity(self.n)));
        }

        // Representative = smallest original id of the group; reduced ids
        // follow ascending representative order.
        let mut rep_of = vec![0; self.n];
        for v in self.nodes() {
            rep_of[v - 1] = v;
        }
        for g in &groups {
            let rep = *g.iter().min().unwrap();
            for &u in g {
                rep_of[u - 1] = rep;
            }
        }
        let reps: BTreeSet<Node> = rep_of.iter().copied().collect();
        let new_id: BTreeMap<Node, Node> = reps.iter().enumerate().map(|(i, &r)| (r, i + 1)).collect();
        let original_to_reduced: Vec<Node> = rep_of.iter().map(|r| new_id[r]).collect();

        let mut edges = BTreeSet::new();
        for e in &self.edges {
            let (a, b) = (original_to_reduced[e.0 - 1], original_to_reduced[e.1 - 1]);
            if a != b {
                edges.insert(Edge::new(a, b));
            }
        }
        let mut reduced_chains = BTreeMap::new();
        for g in groups {
            if g.len() > 1 {
                reduced_chains.insert(original_to_reduced[g[0] - 1], g);
            }
        }
        let reduced = Graph::new(reps.len(), edges.into_iter().map(|e| (e.0, e.1)))?;
        Ok((
            reduced,
            ContractionMap {
                original_to_reduced,
                reduced_chains,
            },
        ))
    }

    /// The maximal path of degree-2 nodes through `v`, in path order.
    fn degree2_run(&self, v: Node) -> Vec<Node> {
        let mut run = VecDeque::from([v]);
        let nb = self.neighbors(v);
        for (side, &start) in nb.iter().enumerate() {
            let mut prev = v;
            let mut cur = start;
            while self.degree(cur) == 2 && cur != v {
                if side == 0 {
                    run.push_front(cur);
                } else {
                    if run.contains(&cur) {
                        break;
                    }
                    run.push_back(cur);
                }
                let next = *self.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
                prev = cur;
                cur = next;
            }
        }
        run.into()
    }
}

/// How a contracted graph relates to its original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    /// Indexed by original id - 1.
    pub original_to_reduced: Vec<Node>,
    /// For each merged reduced node, the original run it replaces, in path
    /// order.
    pub reduced_chains: BTreeMap<Node, Vec<Node>>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap {
            original_to_reduced: (1..=n).collect(),
            reduced_chains: BTreeMap::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.reduced_chains.is_empty()
    }

    /// Lifts a Hamiltonian cycle of the reduced graph to one of `original`.
    pub fn lift_cycle(&self, original: &Graph, cycle: &[Node]) -> Vec<Node> {
        let mut singles = BTreeMap::new();
        for (i, &r) in self.original_to_reduced.iter().enumerate() {
            if !self.reduced_chains.contains_key(&r) {
                singles.insert(r, i + 1);
            }
        }
        let mut out: Vec<Node> = Vec::with_capacity(original.node_count());
        let len = cycle.len();
        for (i, &r) in cycle.iter().enumerate() {
            match self.reduced_chains.get(&r) {
                None => out.push(singles[&r]),
                Some(chain) => {
                    let prev = cycle[(i + len - 1) % len];
                    let prev_orig = match self.reduced_chains.get(&prev) {
                        None => singles[&prev],
                        Some(pc) => *out.last().unwrap_or(&pc[pc.len() - 1]),
                    };
                    if original.has_edge(prev_orig, chain[0]) {
                        out.extend(chain.iter().copied());
                    } else {
                        out.extend(chain.iter().rev().copied());
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(Node, Node)]) -> Result<Graph, GraphError> {
        Graph::new(n, edges.iter().copied())
    }

    #[test]
    fn k4_is_cubic() {
        let g = graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert!(g.is_cubic());
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert_eq!(graph(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            graph(3, &[(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(Edge(1, 2)))
        );
        assert_eq!(
            graph(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]),
            Err(GraphError::DegreeExceeded(1))
        );
        assert_eq!(graph(3, &[(1, 2), (2, 3)]), Err(GraphError::DegreeTooLow(1)));
        assert_eq!(
            graph(6, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]),
            Err(GraphError::Disconnected)
        );
        assert_eq!(
            graph(2, &[(1, 3)]),
            Err(GraphError::NodeOutOfRange { node: 3, n: 2 })
        );
    }

    #[test]
    fn pure_cycle_is_reported() {
        let g = graph(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]).unwrap();
        assert_eq!(g.contract_degree2_chains(), Err(GraphError::PureCycle));
    }

    #[test]
    fn adjacent_degree2_nodes_merge() {
        // K4 with edge 1-2 subdivided twice: 1-5-6-2.
        let g = graph(
            6,
            &[(1, 5), (5, 6), (6, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        let (r, map) = g.contract_degree2_chains().unwrap();
        assert_eq!(r.node_count(), 5);
        assert_eq!(map.original_to_reduced[4], map.original_to_reduced[5]);
        assert_eq!(map.reduced_chains.len(), 1);
        let chain = map.reduced_chains.values().next().unwrap();
        assert_eq!(chain, &vec![5, 6]);
        let (again, map2) = r.contract_degree2_chains().unwrap();
        assert_eq!(again, r);
        assert!(map2.is_identity());
        // 1 3 4 2 r is a Hamiltonian cycle of the reduced graph
        let cyc: Vec<Node> = [1, 3, 4, 2, 5].to_vec();
        let lifted = map.lift_cycle(&g, &cyc);
        assert_eq!(lifted.len(), 6);
        for i in 0..6 {
            assert!(g.has_edge(lifted[i], lifted[(i + 1) % 6]), "{lifted:?}");
        }
    }

    #[test]
    fn no_adjacent_degree2_is_fixpoint() {
        let g = graph(5, &[(1, 5), (5, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let (r, map) = g.contract_degree2_chains().unwrap();
        assert_eq!(r, g);
        assert!(map.is_identity());
    }
}
