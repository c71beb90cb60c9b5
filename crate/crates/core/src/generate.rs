//! Instance generation: exhaustive up to isomorphism, or seeded random.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_form, canonical_graph};
use crate::graph::{Edge, Graph, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub mode: GenMode,
    /// Only 3-regular graphs; otherwise every degree is 2 or 3.
    pub cubic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    /// Odd `n` with 3-regularity, or `n` below 4.
    InfeasibleSpec { n: usize, cubic: bool },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InfeasibleSpec { n, cubic: true } => {
                write!(f, "no 3-regular graph on {n} nodes")
            }
            GenError::InfeasibleSpec { n, cubic: false } => {
                write!(f, "node count {n} is below 4")
            }
        }
    }
}

impl core::error::Error for GenError {}

/// Rejection attempts per random graph before giving up on the degree
/// sequence and drawing a new one.
const ATTEMPTS: usize = 1000;

pub fn generate(spec: &GenSpec) -> Result<Vec<Graph>, GenError> {
    if spec.n < 4 || (spec.cubic && spec.n % 2 == 1) {
        return Err(GenError::InfeasibleSpec {
            n: spec.n,
            cubic: spec.cubic,
        });
    }
    Ok(match spec.mode {
        GenMode::Exhaustive => exhaustive(spec.n, spec.cubic),
        GenMode::Random { count, seed } => random(spec.n, count, seed, spec.cubic),
    })
}

struct Builder {
    n: usize,
    cubic: bool,
    adj: Vec<Vec<Node>>,
    /// Labels `1..touched` have been reached.
    touched: usize,
    out: Vec<Vec<Edge>>,
}

impl Builder {
    fn degree(&self, v: Node) -> usize {
        self.adj[v - 1].len()
    }

    fn connect(&mut self, u: Node, v: Node) {
        self.adj[u - 1].push(v);
        self.adj[v - 1].push(u);
    }

    fn disconnect(&mut self, u: Node, v: Node) {
        self.adj[u - 1].pop();
        self.adj[v - 1].pop();
    }

    /// Complete vertex `i`: every earlier vertex already has its final
    /// degree, later vertices are reached in label order.
    fn step(&mut self, i: Node) {
        if i > self.n {
            if self.touched > self.n {
                let mut edges = Vec::new();
                for u in 1..=self.n {
                    for &v in &self.adj[u - 1] {
                        if u < v {
                            edges.push(Edge(u, v));
                        }
                    }
                }
                self.out.push(edges);
            }
            return;
        }
        if i >= self.touched {
            // not reachable from vertex 1
            return;
        }
        let have = self.degree(i);
        let targets: &[usize] = if self.cubic { &[3] } else { &[2, 3] };
        for &d in targets {
            if d < have {
                continue;
            }
            let need = d - have;
            let old: Vec<Node> = (i + 1..self.touched)
                .filter(|&j| self.degree(j) < 3 && !self.adj[i - 1].contains(&j))
                .collect();
            for fresh in 0..=need {
                let reuse = need - fresh;
                if self.touched + fresh > self.n + 1 || reuse > old.len() {
                    continue;
                }
                let mut pick = Vec::with_capacity(reuse);
                self.choose(i, &old, 0, reuse, fresh, &mut pick);
            }
        }
    }

    fn choose(
        &mut self,
        i: Node,
        old: &[Node],
        from: usize,
        reuse: usize,
        fresh: usize,
        pick: &mut Vec<Node>,
    ) {
        if pick.len() == reuse {
            let start = self.touched;
            for v in start..start + fresh {
                self.connect(i, v);
            }
            for &v in pick.iter() {
                self.connect(i, v);
            }
            self.touched += fresh;
            self.step(i + 1);
            self.touched -= fresh;
            // undo in reverse order of pushes
            for &v in pick.iter().rev() {
                self.disconnect(i, v);
            }
            for v in (start..start + fresh).rev() {
                self.disconnect(i, v);
            }
            return;
        }
        for k in from..old.len() {
            if old.len() - k < reuse - pick.len() {
                break;
            }
            pick.push(old[k]);
            self.choose(i, old, k + 1, reuse, fresh, pick);
            pick.pop();
        }
    }
}

/// Every connected graph on `n` nodes with degrees 3 (or 2 and 3), one per
/// isomorphism class, canonically labelled and sorted.
fn exhaustive(n: usize, cubic: bool) -> Vec<Graph> {
    let mut b = Builder {
        n,
        cubic,
        adj: vec![Vec::new(); n],
        touched: 2,
        out: Vec::new(),
    };
    b.step(1);
    let mut seen = BTreeSet::new();
    let mut graphs = Vec::new();
    for edges in b.out {
        let Ok(g) = Graph::new(n, edges.into_iter().map(|e| (e.0, e.1))) else {
            continue;
        };
        let form = canonical_form(&g);
        if seen.insert(form) {
            graphs.push(canonical_graph(&g));
        }
    }
    graphs.sort_by(|a, b| a.edges().cmp(b.edges()));
    graphs
}

/// Configuration-model sampling with rejection of loops, parallel edges
/// and disconnected results.
fn random(n: usize, count: usize, seed: u64, cubic: bool) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut degrees: Vec<usize> = if cubic {
            vec![3; n]
        } else {
            (0..n).map(|_| rng.gen_range(2..=3)).collect()
        };
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let v = rng.gen_range(0..n);
            degrees[v] = 5 - degrees[v];
        }
        let mut stubs: Vec<Node> = Vec::new();
        for (i, &d) in degrees.iter().enumerate() {
            stubs.extend(core::iter::repeat_n(i + 1, d));
        }
        for _ in 0..ATTEMPTS {
            stubs.shuffle(&mut rng);
            let pairs = stubs.chunks(2).map(|c| (c[0], c[1]));
            if let Ok(g) = Graph::new(n, pairs) {
                out.push(g);
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cubic_counts() {
        for (n, count) in [(4, 1), (6, 2), (8, 5)] {
            let spec = GenSpec {
                n,
                mode: GenMode::Exhaustive,
                cubic: true,
            };
            assert_eq!(generate(&spec).unwrap().len(), count, "n = {n}");
        }
    }

    #[test]
    fn odd_cubic_is_infeasible() {
        let spec = GenSpec {
            n: 7,
            mode: GenMode::Exhaustive,
            cubic: true,
        };
        assert!(generate(&spec).is_err());
    }
}
