//! Exact Hamiltonian cycle search by backtracking.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, Node};

/// A Hamiltonian cycle as a cyclic node order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleCertificate {
    pub order: Vec<Node>,
}

impl CycleCertificate {
    /// Visits every node once and every consecutive pair is an edge.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.node_count();
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v == 0 || v > n || seen[v - 1] {
                return false;
            }
            seen[v - 1] = true;
        }
        (0..n).all(|i| g.has_edge(self.order[i], self.order[(i + 1) % n]))
    }
}

impl fmt::Display for CycleCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    BudgetExhausted { expansions: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExhausted { expansions } => {
                write!(f, "search budget exhausted after {expansions} expansions")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// Default expansion budget; far above what graphs of 24 nodes need.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

struct Search<'a> {
    g: &'a Graph,
    on_path: Vec<bool>,
    path: Vec<Node>,
    expansions: u64,
    budget: u64,
}

impl Search<'_> {
    /// Neighbors of `x` the path can still use to enter or leave it.
    fn available(&self, x: Node, end: Node) -> usize {
        let start = self.path[0];
        self.g
            .neighbors(x)
            .iter()
            .filter(|&&y| !self.on_path[y - 1] || y == end || y == start)
            .count()
    }

    fn extend(&mut self) -> Result<bool, OracleError> {
        let n = self.g.node_count();
        let v = *self.path.last().unwrap();
        if self.path.len() == n {
            return Ok(self.g.has_edge(v, self.path[0]));
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(OracleError::BudgetExhausted {
                expansions: self.expansions,
            });
        }
        for i in 0..self.g.degree(v) {
            let w = self.g.neighbors(v)[i];
            if self.on_path[w - 1] {
                continue;
            }
            self.on_path[w - 1] = true;
            self.path.push(w);
            // v is now inside the path; its other unvisited neighbors lose
            // one way in
            let ok = self.g.neighbors(v).iter().all(|&x| {
                self.on_path[x - 1] || self.available(x, w) >= 2
            });
            if ok && self.extend()? {
                return Ok(true);
            }
            self.path.pop();
            self.on_path[w - 1] = false;
        }
        Ok(false)
    }
}

/// A Hamiltonian cycle of `g`, or `None` if there is none.
pub fn find_hamiltonian(g: &Graph, budget: u64) -> Result<Option<CycleCertificate>, OracleError> {
    let n = g.node_count();
    if n < 3 {
        return Ok(None);
    }
    let mut s = Search {
        g,
        on_path: vec![false; n],
        path: Vec::with_capacity(n),
        expansions: 0,
        budget,
    };
    s.on_path[0] = true;
    s.path.push(1);
    if s.extend()? {
        Ok(Some(CycleCertificate { order: s.path }))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_fixtures() {
        let c = find_hamiltonian(&fixtures::k4(), DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(c.order, [1, 2, 3, 4]);
        assert!(find_hamiltonian(&fixtures::petersen(), DEFAULT_BUDGET)
            .unwrap()
            .is_none());
        for k in 3..=6 {
            let g = fixtures::prism(k);
            let c = find_hamiltonian(&g, DEFAULT_BUDGET).unwrap().unwrap();
            assert!(c.is_valid_for(&g));
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            find_hamiltonian(&fixtures::petersen(), 3),
            Err(OracleError::BudgetExhausted { expansions: 4 })
        );
    }
}
