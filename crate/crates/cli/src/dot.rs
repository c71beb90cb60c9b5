//! Graphviz output for contours, and a small reader for the subset we emit.
//!
//! Contour edges are solid, windows dashed red, interior edges dotted gray.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use contour_hcp_core::object::parse_tokens;
use contour_hcp_core::{Edge, Graph, Node};
use thiserror::Error;

/// Draws a contour given as tokens (`3 1 W 2 4 W`) over `g`. Pairs of the
/// contour that are not edges of `g` are drawn as windows whatever their
/// flag says.
pub fn contour_dot(g: &Graph, tokens: &str, title: &str) -> Option<String> {
    let (contour, windows) = parse_tokens(tokens).ok()?;
    let n = contour.len();
    if n != g.node_count() {
        return None;
    }
    let mut out = String::new();
    let _ = writeln!(out, "graph contour {{");
    let _ = writeln!(out, "  label=\"{}\";", escape(title));
    let _ = writeln!(out, "  layout=circo;");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for &v in &contour {
        let _ = writeln!(out, "  {v};");
    }
    let mut on_contour = BTreeSet::new();
    for i in 0..n {
        let (u, v) = (contour[i], contour[(i + 1) % n]);
        if windows[i] || !g.has_edge(u, v) {
            let _ = writeln!(out, "  {u} -- {v} [style=dashed, color=red];");
        } else {
            let _ = writeln!(out, "  {u} -- {v} [penwidth=2];");
        }
        on_contour.insert(Edge::new(u, v));
    }
    for e in g.edges() {
        if !on_contour.contains(e) {
            let _ = writeln!(out, "  {} -- {} [style=dotted, color=gray40];", e.0, e.1);
        }
    }
    out.push_str("}\n");
    Some(out)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("dot parse error at byte {at}: {reason}")]
pub struct DotError {
    pub at: usize,
    pub reason: &'static str,
}

/// What the reader recovers from an undirected graph.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub name: Option<String>,
    pub nodes: BTreeSet<String>,
    pub edges: Vec<(String, String, Vec<(String, String)>)>,
}

impl DotGraph {
    /// Edges whose endpoints are numeric ids.
    pub fn numeric_edges(&self) -> Vec<(Node, Node)> {
        self.edges
            .iter()
            .filter_map(|(a, b, _)| Some((a.parse().ok()?, b.parse().ok()?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Sym(char),
    EdgeOp,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, DotError> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if src[i..].starts_with("//") || c == '#' {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
        } else if src[i..].starts_with("/*") {
            let end = src[i + 2..].find("*/").ok_or(DotError {
                at: i,
                reason: "unterminated comment",
            })?;
            i += end + 4;
        } else if src[i..].starts_with("--") {
            out.push((i, Tok::EdgeOp));
            i += 2;
        } else if "{}[]=;,".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else if c == '"' {
            let start = i;
            let mut s = String::new();
            i += 1;
            loop {
                match b.get(i) {
                    None => {
                        return Err(DotError {
                            at: start,
                            reason: "unterminated string",
                        })
                    }
                    Some(b'"') => break,
                    Some(b'\\') if i + 1 < b.len() => {
                        s.push(b[i + 1] as char);
                        i += 2;
                    }
                    Some(&x) => {
                        s.push(x as char);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push((start, Tok::Id(s)));
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.') {
                i += 1;
            }
            if i == start {
                // a lone '-' that is not an edge operator
                return Err(DotError {
                    at: i,
                    reason: "unexpected character",
                });
            }
            out.push((start, Tok::Id(src[start..i].to_string())));
        } else {
            return Err(DotError {
                at: i,
                reason: "unexpected character",
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, reason: &'static str) -> Result<T, DotError> {
        Err(DotError {
            at: self.at(),
            reason,
        })
    }

    fn id(&mut self) -> Result<String, DotError> {
        match self.peek().cloned() {
            Some(Tok::Id(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected an identifier"),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), DotError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail("unexpected token")
        }
    }

    fn attrs(&mut self) -> Result<Vec<(String, String)>, DotError> {
        let mut out = Vec::new();
        while self.peek() == Some(&Tok::Sym('[')) {
            self.pos += 1;
            while self.peek() != Some(&Tok::Sym(']')) {
                let k = self.id()?;
                self.sym('=')?;
                let v = self.id()?;
                out.push((k, v));
                if matches!(self.peek(), Some(Tok::Sym(',' | ';'))) {
                    self.pos += 1;
                }
            }
            self.sym(']')?;
        }
        Ok(out)
    }
}

/// Reads `[strict] graph [id] { stmt* }` with node, edge and attribute
/// statements. Subgraphs and ports are not supported.
pub fn parse_dot(src: &str) -> Result<DotGraph, DotError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    if p.peek() == Some(&Tok::Id("strict".into())) {
        p.pos += 1;
    }
    if p.id()? != "graph" {
        p.pos -= 1;
        return p.fail("expected `graph`");
    }
    let mut g = DotGraph::default();
    if let Some(Tok::Id(_)) = p.peek() {
        g.name = Some(p.id()?);
    }
    p.sym('{')?;
    loop {
        match p.peek() {
            Some(Tok::Sym('}')) => {
                p.pos += 1;
                break;
            }
            Some(Tok::Sym(';')) => p.pos += 1,
            Some(Tok::Id(_)) => {
                let first = p.id()?;
                match p.peek() {
                    Some(Tok::Sym('=')) => {
                        p.pos += 1;
                        p.id()?;
                    }
                    Some(Tok::EdgeOp) => {
                        let mut chain = vec![first];
                        while p.peek() == Some(&Tok::EdgeOp) {
                            p.pos += 1;
                            chain.push(p.id()?);
                        }
                        let attrs = p.attrs()?;
                        for w in chain.windows(2) {
                            g.nodes.insert(w[0].clone());
                            g.nodes.insert(w[1].clone());
                            g.edges.push((w[0].clone(), w[1].clone(), attrs.clone()));
                        }
                    }
                    _ => {
                        p.attrs()?;
                        if !matches!(first.as_str(), "graph" | "node" | "edge") {
                            g.nodes.insert(first);
                        }
                    }
                }
            }
            None => return p.fail("missing `}`"),
            _ => return p.fail("unexpected token"),
        }
    }
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(g)
}
