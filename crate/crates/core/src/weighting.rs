//! Node weights of +-1/2 and the derived edge and window weights.
//!
//! Node weights are stored doubled, as `+1` or `-1`. The doubled weight of a
//! pair is the sum of its two node values, so sums are exact integers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::construction::ObjectPair;
use crate::graph::{Edge, Node};
use crate::object::BasicObject;

/// Largest number of free groups whose sign combinations are enumerated.
pub const MAX_FREE_GROUPS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightingError {
    TargetNotOnContour(Node, Node),
    /// Correction needs `needed` flips but only `available` nodes qualify.
    NoEligibleNode { needed: usize, available: usize },
    TooManyFreeGroups(usize),
}

impl fmt::Display for WeightingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightingError::TargetNotOnContour(u, v) => {
                write!(f, "{u}-{v} is not a consecutive contour pair")
            }
            WeightingError::NoEligibleNode { needed, available } => write!(
                f,
                "correction needs {needed} sign flips but only {available} nodes qualify"
            ),
            WeightingError::TooManyFreeGroups(k) => {
                write!(f, "{k} free groups exceed the cap of {MAX_FREE_GROUPS}")
            }
        }
    }
}

impl core::error::Error for WeightingError {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeWeighting {
    /// Indexed by node - 1; `0` means unassigned.
    half: Vec<i8>,
}

impl NodeWeighting {
    pub fn unassigned(n: usize) -> Self {
        NodeWeighting { half: vec![0; n] }
    }

    pub fn from_signs(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|&s| s == 1 || s == -1 || s == 0));
        NodeWeighting { half: signs }
    }

    pub fn len(&self) -> usize {
        self.half.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half.is_empty()
    }

    /// Doubled weight of `v`: `+1`, `-1`, or `0` when unassigned.
    pub fn get(&self, v: Node) -> i8 {
        self.half[v - 1]
    }

    pub fn set(&mut self, v: Node, sign: i8) {
        assert!(sign == 1 || sign == -1);
        self.half[v - 1] = sign;
    }

    pub fn is_assigned(&self, v: Node) -> bool {
        self.half[v - 1] != 0
    }

    pub fn is_complete(&self) -> bool {
        self.half.iter().all(|&s| s != 0)
    }

    pub fn signs(&self) -> &[i8] {
        &self.half
    }

    /// Weight of the pair `u`-`v` in doubled units: -2, 0 or 2.
    pub fn pair_weight2(&self, u: Node, v: Node) -> i32 {
        self.get(u) as i32 + self.get(v) as i32
    }

    /// Weight of the pair `u`-`v`: -1, 0 or 1.
    pub fn pair_weight(&self, u: Node, v: Node) -> i32 {
        self.pair_weight2(u, v) / 2
    }
}

/// Weighting that makes one contour pair weigh -1 (odd N) or every contour
/// pair weigh 0 (even N).
pub fn select_single(
    obj: &BasicObject,
    target: (Node, Node),
) -> Result<NodeWeighting, WeightingError> {
    let (m, n_) = target;
    let p = obj
        .pair_position(m, n_)
        .ok_or(WeightingError::TargetNotOnContour(m, n_))?;
    let len = obj.len();
    let c = obj.contour();
    // walk from m away from n
    let forward = c[p] == m;
    let at = |k: usize| {
        if forward {
            c[(p + len - k) % len]
        } else {
            c[(p + 1 + k) % len]
        }
    };
    let mut w = NodeWeighting::unassigned(len);
    if len % 2 == 1 {
        w.set(m, -1);
        w.set(n_, -1);
        for k in 1..len - 1 {
            w.set(at(k), if k % 2 == 1 { 1 } else { -1 });
        }
    } else {
        w.set(m, 1);
        for k in 1..len {
            w.set(at(k), if k % 2 == 1 { -1 } else { 1 });
        }
    }
    Ok(w)
}

/// Edges shared by both contours and the edges around them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommonSubgraph {
    pub common_edges: BTreeSet<Edge>,
    /// Non-common graph edges joining two nodes that lie on common edges.
    pub linking_edges: BTreeSet<Edge>,
    /// Per object, interior edges with a window-node endpoint.
    pub window_incident: [BTreeSet<Edge>; 2],
}

impl CommonSubgraph {
    pub fn common_nodes(&self) -> BTreeSet<Node> {
        self.common_edges.iter().flat_map(|e| [e.0, e.1]).collect()
    }
}

pub fn extract_common_subgraph(pair: &ObjectPair) -> CommonSubgraph {
    let common_edges = pair.common_contour_edges();
    let nodes: BTreeSet<Node> = common_edges.iter().flat_map(|e| [e.0, e.1]).collect();
    let linking_edges = pair
        .first
        .graph()
        .edges()
        .iter()
        .copied()
        .filter(|e| !common_edges.contains(e) && nodes.contains(&e.0) && nodes.contains(&e.1))
        .collect();
    let incident = |o: &BasicObject| -> BTreeSet<Edge> {
        o.interior_edges()
            .into_iter()
            .filter(|e| o.is_window_node(e.0) || o.is_window_node(e.1))
            .collect()
    };
    CommonSubgraph {
        common_edges,
        linking_edges,
        window_incident: [incident(&pair.first), incident(&pair.second)],
    }
}

/// A connected piece of the common and linking edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Island {
    pub nodes: Vec<Node>,
    /// Nodes with one island edge (both ends of a path).
    pub endpoints: Vec<Node>,
}

pub fn islands(sub: &CommonSubgraph) -> Vec<Island> {
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for e in sub.common_edges.iter().chain(&sub.linking_edges) {
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        let mut nodes = vec![start];
        let mut i = 0;
        while i < nodes.len() {
            for &w in &adj[&nodes[i]] {
                if seen.insert(w) {
                    nodes.push(w);
                }
            }
            i += 1;
        }
        nodes.sort_unstable();
        let endpoints = nodes.iter().copied().filter(|v| adj[v].len() == 1).collect();
        out.push(Island { nodes, endpoints });
    }
    out
}

/// Set of sign variables that move together. `sign` of the anchor is the
/// group's free choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub anchor: Node,
    /// `None` when the anchor's weight is shared by both objects.
    pub anchor_object: Option<usize>,
    pub has_window_node: bool,
    /// Member variables: node and object (`None` for shared).
    pub members: Vec<(Node, Option<usize>)>,
}

/// One sign per free group: `+1` or `-1` for the anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarityChoice {
    pub index: u64,
    pub signs: Vec<i8>,
}

impl PolarityChoice {
    /// Choice number `index` out of `2^k`; group 0 is the most significant
    /// bit and `+` sorts first.
    pub fn nth(index: u64, k: usize) -> Self {
        let signs = (0..k)
            .map(|j| if (index >> (k - 1 - j)) & 1 == 0 { 1 } else { -1 })
            .collect();
        PolarityChoice { index, signs }
    }
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
    rank: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress from the top down
        for &v in path.iter().rev() {
            let p = self.parent[v];
            if p != root {
                self.parity[v] ^= self.parity[p];
            }
            self.parent[v] = root;
        }
        (root, if x == root { 0 } else { self.parity[x] })
    }

    /// Require `parity(a) ^ parity(b) == want`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, want: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == want;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi;
        self.parity[lo] = pa ^ pb ^ want;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }
}

/// Sign structure of a pair: which node weights are tied together by the
/// requirement that interior edges weigh zero.
#[derive(Clone, Debug)]
pub struct WeightModel {
    n: usize,
    common: CommonSubgraph,
    common_nodes: BTreeSet<Node>,
    groups: Vec<FreeGroup>,
    /// Per object, per node: (group, flip) for that node's weight variable.
    template: [Vec<(usize, bool)>; 2],
    /// Interior edges whose zero-weight requirement contradicts the others.
    conflicts: Vec<(usize, Edge)>,
    /// Number of constraint merges performed.
    pub propagations: usize,
}

impl WeightModel {
    pub fn new(pair: &ObjectPair) -> Self {
        let n = pair.first.len();
        let common = extract_common_subgraph(pair);
        let common_nodes = common.common_nodes();
        let var = |v: Node, o: usize| -> usize {
            if o == 0 || common_nodes.contains(&v) {
                v - 1
            } else {
                n + v - 1
            }
        };
        let objs = [&pair.first, &pair.second];
        let mut uf = ParityUnionFind::new(2 * n);
        let mut conflicts = Vec::new();
        let mut propagations = 0;
        for (o, obj) in objs.iter().enumerate() {
            for e in obj.interior_edges() {
                propagations += 1;
                if !uf.union(var(e.0, o), var(e.1, o), 1) {
                    conflicts.push((o, e));
                }
            }
        }
        // members per root
        let mut members: BTreeMap<usize, Vec<(Node, Option<usize>)>> = BTreeMap::new();
        for v in 1..=n {
            let shared = common_nodes.contains(&v);
            let (root, _) = uf.find(var(v, 0));
            members.entry(root).or_default().push((v, if shared { None } else { Some(0) }));
            if !shared {
                let (root, _) = uf.find(var(v, 1));
                members.entry(root).or_default().push((v, Some(1)));
            }
        }
        let is_window = |v: Node, o: Option<usize>| match o {
            None => objs.iter().any(|x| x.is_window_node(v)),
            Some(o) => objs[o].is_window_node(v),
        };
        let mut raw: Vec<(usize, FreeGroup)> = members
            .into_iter()
            .map(|(root, mut m)| {
                m.sort_unstable();
                let anchor_key = |&(v, o): &(Node, Option<usize>)| (!is_window(v, o), v, o);
                let &(anchor, anchor_object) = m.iter().min_by_key(|x| anchor_key(x)).unwrap();
                let has_window_node = m.iter().any(|&(v, o)| is_window(v, o));
                (
                    root,
                    FreeGroup {
                        anchor,
                        anchor_object,
                        has_window_node,
                        members: m,
                    },
                )
            })
            .collect();
        raw.sort_by_key(|(_, g)| (!g.has_window_node, g.anchor, g.anchor_object));
        let mut template = [vec![(0, false); n], vec![(0, false); n]];
        for (gi, (_, g)) in raw.iter().enumerate() {
            let anchor_var = var(g.anchor, g.anchor_object.unwrap_or(0));
            let (_, pa) = uf.find(anchor_var);
            for &(v, o) in &g.members {
                let objects: &[usize] = match o {
                    None => &[0, 1],
                    Some(0) => &[0],
                    Some(_) => &[1],
                };
                let (_, pv) = uf.find(var(v, o.unwrap_or(0)));
                for &ob in objects {
                    template[ob][v - 1] = (gi, pv != pa);
                }
            }
        }
        WeightModel {
            n,
            common,
            common_nodes,
            groups: raw.into_iter().map(|(_, g)| g).collect(),
            template,
            conflicts,
            propagations,
        }
    }

    pub fn groups(&self) -> &[FreeGroup] {
        &self.groups
    }

    pub fn common(&self) -> &CommonSubgraph {
        &self.common
    }

    pub fn common_nodes(&self) -> &BTreeSet<Node> {
        &self.common_nodes
    }

    pub fn conflicts(&self) -> &[(usize, Edge)] {
        &self.conflicts
    }

    pub fn choice_count(&self) -> Result<u64, WeightingError> {
        let k = self.groups.len();
        if k > MAX_FREE_GROUPS {
            return Err(WeightingError::TooManyFreeGroups(k));
        }
        Ok(1u64 << k)
    }

    /// Weightings of both objects under `choice`.
    pub fn assign(&self, choice: &PolarityChoice) -> (NodeWeighting, NodeWeighting) {
        let make = |o: usize| {
            NodeWeighting::from_signs(
                self.template[o]
                    .iter()
                    .map(|&(g, flip)| {
                        let s = choice.signs[g];
                        if flip {
                            -s
                        } else {
                            s
                        }
                    })
                    .collect(),
            )
        };
        debug_assert_eq!(self.template[0].len(), self.n);
        (make(0), make(1))
    }
}

/// Free groups of the pair in choice order.
pub fn free_groups(pair: &ObjectPair) -> Vec<FreeGroup> {
    WeightModel::new(pair).groups
}

/// All `2^k` sign choices, `+` first, lexicographic.
pub fn enumerate_choices(pair: &ObjectPair) -> Result<Vec<PolarityChoice>, WeightingError> {
    let model = WeightModel::new(pair);
    let total = model.choice_count()?;
    let k = model.groups.len();
    Ok((0..total).map(|i| PolarityChoice::nth(i, k)).collect())
}

pub fn assign_weights(pair: &ObjectPair, choice: &PolarityChoice) -> (NodeWeighting, NodeWeighting) {
    WeightModel::new(pair).assign(choice)
}

/// Doubled sum of interior-edge weights.
pub fn interior_sum2(obj: &BasicObject, w: &NodeWeighting) -> i32 {
    obj.interior_edges()
        .iter()
        .map(|e| w.pair_weight2(e.0, e.1))
        .sum()
}

/// Flip the signs of `|gamma|` eligible nodes so that the interior edges of
/// `obj` sum to zero. Eligible: not a window node, not on a common contour
/// edge, degree 3. Candidates are taken in increasing id.
pub fn correct(
    obj: &BasicObject,
    w: &NodeWeighting,
    common_nodes: &BTreeSet<Node>,
) -> Result<NodeWeighting, WeightingError> {
    let gamma = interior_sum2(obj, w) / 2;
    if gamma == 0 {
        return Ok(w.clone());
    }
    let sign: i8 = if gamma > 0 { 1 } else { -1 };
    let needed = gamma.unsigned_abs() as usize;
    let eligible: Vec<Node> = (1..=obj.len())
        .filter(|&v| {
            !obj.is_window_node(v)
                && !common_nodes.contains(&v)
                && obj.graph().degree(v) == 3
                && w.get(v) == sign
        })
        .collect();
    if eligible.len() < needed {
        return Err(WeightingError::NoEligibleNode {
            needed,
            available: eligible.len(),
        });
    }
    let mut out = w.clone();
    for &v in &eligible[..needed] {
        out.set(v, -sign);
    }
    Ok(out)
}
