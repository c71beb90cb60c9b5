//! Built-in graphs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::construction::PieceLayout;
use crate::graph::{Graph, GraphError, Node};

const G25_EDGES: [(Node, Node); 37] = [
    (1, 2),
    (1, 3),
    (3, 4),
    (4, 5),
    (5, 11),
    (11, 12),
    (12, 13),
    (13, 19),
    (19, 20),
    (20, 21),
    (21, 22),
    (22, 23),
    (23, 24),
    (24, 25),
    (14, 15),
    (15, 16),
    (16, 17),
    (17, 18),
    (9, 10),
    (8, 9),
    (7, 8),
    (6, 7),
    (14, 16),
    (13, 14),
    (4, 10),
    (10, 11),
    (1, 6),
    (5, 6),
    (2, 7),
    (2, 3),
    (18, 21),
    (18, 19),
    (20, 25),
    (8, 15),
    (22, 24),
    (17, 23),
    (9, 12),
];

/// The 25-node worked example: 37 edges, node 25 of degree 2.
pub fn g25() -> Graph {
    Graph::new(25, G25_EDGES).expect("fixture is valid")
}

/// Reference first object for `g25`, three windows.
pub const G25_FIRST: &str =
    "2 1 3 4 5 11 12 13 19 20 21 22 23 24 25 W 14 15 16 17 18 W 10 9 8 7 6 W";

/// Preliminary second contour for `G25_FIRST`.
pub const G25_PRELIMINARY: &str =
    "16 14 13 W 4 10 11 W 1 6 5 W 7 2 3 W 21 18 19 W 20 25 W 8 15 W 22 24 W 17 23 W 9 12 W";

/// Second object for `g25` once link elimination is done, over the graph
/// without its temporarily removed edges.
pub const G25_SECOND_LINK_FREE: &str =
    "25 20 21 18 19 13 14 16 15 8 7 2 3 1 6 5 4 10 11 12 9 W 17 23 24 22 W";

/// Finished second object for `g25`, removed edges reinstated.
pub const G25_SECOND: &str =
    "17 23 24 22 W 1 6 5 W 25 20 21 18 19 13 14 16 15 8 7 2 3 4 10 11 12 9 W";

/// Piece order and orientation that reproduces `G25_PRELIMINARY`.
pub fn g25_piece_layout() -> PieceLayout {
    PieceLayout(alloc::vec![16, 4, 1, 7, 21, 20, 8, 22, 17, 9])
}

pub fn k4() -> Graph {
    Graph::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).expect("fixture is valid")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 1..=5 {
        edges.push((i, i % 5 + 1));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 1) % 5 + 6));
    }
    Graph::new(10, edges).expect("fixture is valid")
}

/// Two `k`-cycles joined by a perfect matching.
pub fn prism(k: usize) -> Graph {
    assert!(k >= 3, "prism needs k >= 3");
    let mut edges = Vec::new();
    for i in 1..=k {
        edges.push((i, i % k + 1));
        edges.push((k + i, k + i % k + 1));
        edges.push((i, k + i));
    }
    Graph::new(2 * k, edges).expect("fixture is valid")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs n >= 3");
    Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).expect("fixture is valid")
}

/// Accepts `g25`, `k4`, `petersen`, `prism(k)`, `prismK`, `cycle(n)`.
pub fn by_name(name: &str) -> Result<Graph, GraphError> {
    let unknown = || GraphError::UnknownFixture(String::from(name));
    let param = |prefix: &str| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        let rest = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest);
        rest.parse().ok()
    };
    match name {
        "g25" => Ok(g25()),
        "k4" => Ok(k4()),
        "petersen" => Ok(petersen()),
        _ => {
            if let Some(k) = param("prism") {
                if k >= 3 {
                    return Ok(prism(k));
                }
            } else if let Some(n) = param("cycle") {
                if n >= 3 {
                    return Ok(cycle(n));
                }
            }
            Err(unknown())
        }
    }
}

pub const NAMES: [&str; 5] = ["g25", "k4", "petersen", "prism(k)", "cycle(n)"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g25_shape() {
        let g = g25();
        assert_eq!(g.node_count(), 25);
        assert_eq!(g.edge_count(), 37);
        assert_eq!(g.degree(25), 2);
        assert!((1..25).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn named_fixtures() {
        assert_eq!(by_name("prism(4)").unwrap(), prism(4));
        assert_eq!(by_name("prism5").unwrap(), prism(5));
        assert!(petersen().is_cubic());
        assert!(matches!(by_name("prism(2)"), Err(GraphError::UnknownFixture(_))));
        assert!(matches!(by_name("nope"), Err(GraphError::UnknownFixture(_))));
    }
}
