//! Text formats: edge lists, objects, object pairs and weightings.
//!
//! Edge list:
//!
//! ```text
//! # comment
//! p 4 6
//! e 1 2
//! ...
//! ```
//!
//! Object: a `contour:` line of node ids with `W` after each window pair and
//! an `interior:` line of `u-v` pairs. A pair is two objects after `object 1`
//! and `object 2` lines. A weighting is one `node <id> <+1|-1>` line per node,
//! in doubled units.

use std::fmt::Write as _;
use std::sync::Arc;

use contour_hcp_core::{BasicObject, Edge, Graph, GraphError, NodeWeighting, ObjectPair};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Object(String),
}

fn malformed(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| malformed(line, format!("{what} `{tok}` is not a number")))
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| malformed(1, "missing `p N M` header"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("p") {
        return Err(malformed(hl, "expected `p N M` header"));
    }
    let n = number(hl, it.next(), "node count")?;
    let m = number(hl, it.next(), "edge count")?;
    if it.next().is_some() {
        return Err(malformed(hl, "trailing tokens after header"));
    }
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        if it.next() != Some("e") {
            return Err(malformed(ln, "expected `e u v`"));
        }
        let u = number(ln, it.next(), "endpoint")?;
        let v = number(ln, it.next(), "endpoint")?;
        if it.next().is_some() {
            return Err(malformed(ln, "trailing tokens after edge"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(malformed(
            hl,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Ok(Graph::new(n, edges)?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.node_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {}", e.0, e.1);
    }
    out
}

pub fn write_object(obj: &BasicObject) -> String {
    let interior: Vec<String> = obj.interior_edges().iter().map(Edge::to_string).collect();
    format!("contour: {obj}\ninterior: {}\n", interior.join(" "))
}

/// Reads one object; the interior line must match the contour.
pub fn parse_object(graph: Arc<Graph>, text: &str) -> Result<BasicObject, FormatError> {
    let mut contour = None;
    let mut interior = None;
    for (ln, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("contour:") {
            contour = Some((ln, rest.trim()));
        } else if let Some(rest) = l.strip_prefix("interior:") {
            interior = Some((ln, rest.trim()));
        } else {
            return Err(malformed(ln, "expected `contour:` or `interior:`"));
        }
    }
    let (cl, tokens) = contour.ok_or_else(|| malformed(1, "missing `contour:` line"))?;
    let obj = BasicObject::from_tokens(graph.clone(), graph, tokens)
        .map_err(|e| malformed(cl, e.to_string()))?;
    if let Some((il, list)) = interior {
        let mut listed = std::collections::BTreeSet::new();
        for tok in list.split_whitespace() {
            let (u, v) = tok
                .split_once('-')
                .ok_or_else(|| malformed(il, format!("`{tok}` is not a u-v pair")))?;
            let u = number(il, Some(u), "endpoint")?;
            let v = number(il, Some(v), "endpoint")?;
            listed.insert(Edge::new(u, v));
        }
        if listed != obj.interior_edges() {
            return Err(malformed(il, "interior does not match the contour"));
        }
    }
    Ok(obj)
}

pub fn write_pair(pair: &ObjectPair) -> String {
    format!(
        "object 1\n{}object 2\n{}",
        write_object(&pair.first),
        write_object(&pair.second)
    )
}

pub fn parse_pair(graph: Arc<Graph>, text: &str) -> Result<ObjectPair, FormatError> {
    let mut blocks: [Vec<&str>; 2] = [Vec::new(), Vec::new()];
    let mut current = None;
    for (ln, l) in content_lines(text) {
        match l {
            "object 1" => current = Some(0),
            "object 2" => current = Some(1),
            _ => match current {
                Some(i) => blocks[i].push(l),
                None => return Err(malformed(ln, "expected `object 1`")),
            },
        }
    }
    let first = parse_object(graph.clone(), &blocks[0].join("\n"))?;
    let second = parse_object(graph, &blocks[1].join("\n"))?;
    ObjectPair::new(first, second).map_err(|e| FormatError::Object(e.to_string()))
}

pub fn write_weights(w: &NodeWeighting) -> String {
    let mut out = String::new();
    for (i, &s) in w.signs().iter().enumerate() {
        let _ = writeln!(out, "node {} {}", i + 1, if s > 0 { "+1" } else { "-1" });
    }
    out
}

pub fn parse_weights(text: &str, n: usize) -> Result<NodeWeighting, FormatError> {
    let mut w = NodeWeighting::unassigned(n);
    for (ln, l) in content_lines(text) {
        let mut it = l.split_whitespace();
        if it.next() != Some("node") {
            return Err(malformed(ln, "expected `node <id> <+1|-1>`"));
        }
        let v = number(ln, it.next(), "node id")?;
        if v == 0 || v > n {
            return Err(malformed(ln, format!("node {v} outside 1..={n}")));
        }
        let s = match it.next() {
            Some("+1") => 1,
            Some("-1") => -1,
            _ => return Err(malformed(ln, "sign must be +1 or -1")),
        };
        w.set(v, s);
    }
    if !w.is_complete() {
        return Err(malformed(0, "some nodes have no weight"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use contour_hcp_core::fixtures;

    #[test]
    fn graph_text_round_trips_exactly() {
        let text = write_graph(&fixtures::g25());
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn malformed_lines_carry_their_number() {
        let err = parse_graph("p 4 6\ne 1 2\ne 1 x\n").unwrap_err();
        assert!(matches!(err, FormatError::MalformedLine { line: 3, .. }));
        let err = parse_graph("# only a comment\n").unwrap_err();
        assert!(matches!(err, FormatError::MalformedLine { .. }));
    }

    #[test]
    fn degree_four_is_rejected() {
        let text = "p 5 4\ne 1 2\ne 1 3\ne 1 4\ne 1 5\n";
        assert!(matches!(
            parse_graph(text),
            Err(FormatError::Graph(GraphError::DegreeExceeded(1)))
        ));
    }

    #[test]
    fn weights_round_trip() {
        let w = NodeWeighting::from_signs(vec![1, -1, -1, 1]);
        assert_eq!(parse_weights(&write_weights(&w), 4).unwrap(), w);
    }
}
