//! Elementary contour transformations.
//!
//! Every case is a k-opt move: a few contour adjacencies are removed, the
//! same number of new pairs are added, and the move is accepted only when
//! the result is again a single spanning contour. Added pairs that are
//! working-graph edges become contour edges; the others become windows.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Edge, Node};
use crate::object::BasicObject;
use crate::reconnect::reconnect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    /// Link elimination.
    Step1,
    /// Window introduction.
    Step2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    /// Clear a window flag over a pair that is a working-graph edge.
    CloseWindow,
    Case11,
    Case12,
    Case13,
    Case14,
    Case15,
    Case16,
    Case21,
    Case22,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::CloseWindow,
        CaseId::Case11,
        CaseId::Case12,
        CaseId::Case13,
        CaseId::Case14,
        CaseId::Case15,
        CaseId::Case16,
        CaseId::Case21,
        CaseId::Case22,
    ];

    pub fn phase(self) -> Phase {
        match self {
            CaseId::Case21 | CaseId::Case22 => Phase::Step2,
            _ => Phase::Step1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseId::CloseWindow => "close-window",
            CaseId::Case11 => "1.1",
            CaseId::Case12 => "1.2",
            CaseId::Case13 => "1.3",
            CaseId::Case14 => "1.4",
            CaseId::Case15 => "1.5",
            CaseId::Case16 => "1.6",
            CaseId::Case21 => "2.1",
            CaseId::Case22 => "2.2",
        }
    }

    /// Role letters in binding order.
    pub fn roles(self, long_form: bool) -> &'static [char] {
        match self {
            CaseId::CloseWindow => &['u', 'v'],
            CaseId::Case11 => &['a', 'b', 'c', 'd'],
            CaseId::Case12 => &['a', 'b', 'c', 'd', 'e', 'f'],
            CaseId::Case13 => &['a', 'b', 'c', 'd', 'e', 'f', 'l', 'm'],
            CaseId::Case14 => &['a', 'b', 'e', 'f', 'l', 'm', 's', 't'],
            CaseId::Case15 => &['a', 'b', 'c', 'l', 'm', 's', 't'],
            CaseId::Case16 if long_form => &['a', 'b', 'c', 'd', 'e', 'f'],
            CaseId::Case16 => &['a', 'b', 'c', 'd'],
            CaseId::Case21 => &['k', 's', 't', 'm'],
            CaseId::Case22 => &['k', 's', 't', 'm', 'a', 'b'],
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Assignment of nodes to the role letters of a case.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    roles: Vec<(char, Node)>,
}

impl Binding {
    pub fn new(roles: &[(char, Node)]) -> Self {
        Binding {
            roles: roles.to_vec(),
        }
    }

    pub fn get(&self, role: char) -> Option<Node> {
        self.roles.iter().find(|r| r.0 == role).map(|r| r.1)
    }

    pub fn roles(&self) -> &[(char, Node)] {
        &self.roles
    }

    fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.roles.iter().map(|r| r.1)
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (r, v)) in self.roles.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{r}={v}")?;
        }
        Ok(())
    }
}

/// Constraints used while the second object is built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Restrictions {
    /// Contour edges that may not move to the interior.
    pub locked: BTreeSet<Edge>,
    /// Nodes that may not become window nodes.
    pub forbidden: BTreeSet<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseError {
    PatternMismatch(&'static str),
    WouldCreateDegenerateD3(Node),
    RestrictionViolated(&'static str),
    WouldCreateLink,
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseError::PatternMismatch(why) => write!(f, "pattern mismatch: {why}"),
            CaseError::WouldCreateDegenerateD3(v) => {
                write!(f, "move would leave node {v} as a degenerate segment of degree 3")
            }
            CaseError::RestrictionViolated(why) => write!(f, "restriction violated: {why}"),
            CaseError::WouldCreateLink => write!(f, "window introduction would create a link"),
        }
    }
}

impl core::error::Error for CaseError {}

type Pairs = Vec<(Node, Node)>;

fn mismatch<T>(why: &'static str) -> Result<T, CaseError> {
    Err(CaseError::PatternMismatch(why))
}

fn role(b: &Binding, r: char) -> Result<Node, CaseError> {
    b.get(r).ok_or(CaseError::PatternMismatch("missing role"))
}

fn check(cond: bool, why: &'static str) -> Result<(), CaseError> {
    if cond {
        Ok(())
    } else {
        mismatch(why)
    }
}

fn windows_distinct(obj: &BasicObject, pairs: &[(Node, Node)]) -> Result<(), CaseError> {
    let mut seen = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let Some(p) = obj.pair_position(x, y).filter(|&p| obj.window_flags()[p]) else {
            return mismatch("expected a window");
        };
        if seen.contains(&p) {
            return mismatch("windows must be distinct");
        }
        seen.push(p);
    }
    Ok(())
}

/// Segment whose two ends are `b` and `f`.
fn segment_between(obj: &BasicObject, b: Node, f: Node) -> Option<Vec<Node>> {
    if b == f {
        return None;
    }
    obj.segments()
        .into_iter()
        .find(|s| s.endpoints == (b, f) || s.endpoints == (f, b))
        .map(|s| s.nodes)
}

fn is_d3(obj: &BasicObject, v: Node) -> bool {
    obj.is_degenerate(v) && obj.full_graph().degree(v) == 3
}

/// Removed and added pairs for a binding, after checking the pattern.
fn plan(obj: &BasicObject, case: CaseId, b: &Binding) -> Result<(Pairs, Pairs), CaseError> {
    let mut distinct: Vec<Node> = b.nodes().collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != b.roles().len() || distinct.iter().any(|&v| v == 0 || v > obj.len()) {
        return mismatch("roles must be distinct nodes");
    }
    match case {
        CaseId::CloseWindow => mismatch("not a reconnection"),
        CaseId::Case11 | CaseId::Case16 if b.get('e').is_none() => {
            let (a, bb, c, d) = (role(b, 'a')?, role(b, 'b')?, role(b, 'c')?, role(b, 'd')?);
            windows_distinct(obj, &[(a, bb), (c, d)])?;
            check(obj.is_interior(bb, c), "b-c must be interior")?;
            let at_d3 = is_d3(obj, bb) || is_d3(obj, c);
            check(at_d3 == (case == CaseId::Case16), "degenerate link belongs to case 1.6")?;
            Ok((vec_of(&[(a, bb), (c, d)]), vec_of(&[(bb, c), (a, d)])))
        }
        CaseId::Case12 | CaseId::Case16 => {
            let (a, bb, c, d) = (role(b, 'a')?, role(b, 'b')?, role(b, 'c')?, role(b, 'd')?);
            let (e, f) = (role(b, 'e')?, role(b, 'f')?);
            windows_distinct(obj, &[(a, bb), (c, d), (e, f)])?;
            check(obj.is_interior(bb, d), "b-d must be interior")?;
            let at_d3 = is_d3(obj, bb) || is_d3(obj, d);
            check(at_d3 == (case == CaseId::Case16), "degenerate link belongs to case 1.6")?;
            Ok((
                vec_of(&[(a, bb), (c, d), (e, f)]),
                vec_of(&[(bb, d), (a, e), (c, f)]),
            ))
        }
        CaseId::Case11 => mismatch("case 1.1 takes four roles"),
        CaseId::Case13 => {
            let (a, bb, c, d) = (role(b, 'a')?, role(b, 'b')?, role(b, 'c')?, role(b, 'd')?);
            let (e, f, l, m) = (role(b, 'e')?, role(b, 'f')?, role(b, 'l')?, role(b, 'm')?);
            windows_distinct(obj, &[(a, bb), (c, d), (e, f)])?;
            check(obj.is_interior(bb, f), "b-f must be interior")?;
            let seg = segment_between(obj, bb, f).ok_or(CaseError::PatternMismatch(
                "b and f must end the same segment",
            ))?;
            check(seg.contains(&l) && seg.contains(&m), "l and m must lie in the segment")?;
            check(obj.is_contour_edge(l, m), "l-m must be a contour edge")?;
            check(obj.is_interior(l, c), "l-c must be interior")?;
            Ok((
                vec_of(&[(a, bb), (c, d), (e, f), (l, m)]),
                vec_of(&[(bb, f), (l, c), (a, e), (m, d)]),
            ))
        }
        CaseId::Case14 => {
            let (a, bb, e, f) = (role(b, 'a')?, role(b, 'b')?, role(b, 'e')?, role(b, 'f')?);
            let (l, m, s, t) = (role(b, 'l')?, role(b, 'm')?, role(b, 's')?, role(b, 't')?);
            windows_distinct(obj, &[(a, bb), (e, f)])?;
            check(obj.is_interior(bb, f), "b-f must be interior")?;
            let seg = segment_between(obj, bb, f).ok_or(CaseError::PatternMismatch(
                "b and f must end the same segment",
            ))?;
            for &x in &seg {
                for y in obj.interior_neighbors(x) {
                    let bf = Edge::new(x, y) == Edge::new(bb, f);
                    check(
                        bf || !obj.is_window_node(y),
                        "segment must have no other window-node connection",
                    )?;
                }
            }
            check(seg.contains(&l) && seg.contains(&m), "l and m must lie in the segment")?;
            check(!seg.contains(&s), "s must lie outside the segment")?;
            check(obj.is_contour_edge(l, m), "l-m must be a contour edge")?;
            check(obj.is_interior(l, s), "l-s must be interior")?;
            check(obj.is_contour_edge(s, t), "s-t must be a contour edge")?;
            Ok((
                vec_of(&[(a, bb), (e, f), (s, t), (l, m)]),
                vec_of(&[(bb, f), (s, l), (a, t), (e, m)]),
            ))
        }
        CaseId::Case15 => {
            let (a, bb, c) = (role(b, 'a')?, role(b, 'b')?, role(b, 'c')?);
            let (l, m, s, t) = (role(b, 'l')?, role(b, 'm')?, role(b, 's')?, role(b, 't')?);
            windows_distinct(obj, &[(bb, a), (a, c)])?;
            check(is_d3(obj, a), "a must be a degenerate node of degree 3")?;
            check(
                obj.graph().neighbors(a).iter().all(|&x| !obj.is_window_node(x)),
                "neighbors of a must not be window nodes",
            )?;
            check(obj.is_interior(a, l) && obj.is_interior(a, m), "a-l and a-m must be interior")?;
            check(obj.is_contour_edge(l, s), "l-s must be a contour edge")?;
            check(obj.is_contour_edge(m, t), "m-t must be a contour edge")?;
            Ok((
                vec_of(&[(bb, a), (a, c), (l, s), (m, t)]),
                vec_of(&[(a, l), (a, m), (bb, s), (c, t)]),
            ))
        }
        CaseId::Case21 | CaseId::Case22 => {
            let (k, s, t, m) = (role(b, 'k')?, role(b, 's')?, role(b, 't')?, role(b, 'm')?);
            check(obj.is_contour_edge(k, s), "k-s must be a contour edge")?;
            check(obj.is_contour_edge(t, m), "t-m must be a contour edge")?;
            check(obj.is_interior(s, t), "s-t must be interior")?;
            check(
                [k, s, t, m].iter().all(|&v| !obj.is_window_node(v)),
                "k, s, t, m must not be window nodes",
            )?;
            check(
                obj.interior_neighbors(k)
                    .chain(obj.interior_neighbors(m))
                    .all(|y| !obj.is_window_node(y)),
                "interior edges at k and m must be free",
            )?;
            if case == CaseId::Case21 {
                check(!obj.graph().has_edge(k, m), "k-m must not be an edge")?;
                Ok((vec_of(&[(k, s), (t, m)]), vec_of(&[(s, t), (k, m)])))
            } else {
                let (a, bb) = (role(b, 'a')?, role(b, 'b')?);
                windows_distinct(obj, &[(a, bb)])?;
                Ok((
                    vec_of(&[(k, s), (t, m), (a, bb)]),
                    vec_of(&[(s, t), (a, k), (bb, m)]),
                ))
            }
        }
    }
}

fn vec_of(p: &[(Node, Node)]) -> Pairs {
    p.to_vec()
}

/// Apply one case. The binding must match the case's pattern exactly.
pub fn apply_case(
    obj: &BasicObject,
    case: CaseId,
    binding: &Binding,
    restrictions: Option<&Restrictions>,
) -> Result<BasicObject, CaseError> {
    let out = if case == CaseId::CloseWindow {
        let (u, v) = (role(binding, 'u')?, role(binding, 'v')?);
        let Some(p) = obj.pair_position(u, v).filter(|&p| obj.window_flags()[p]) else {
            return mismatch("expected a window");
        };
        check(obj.graph().has_edge(u, v), "window must cover a graph edge")?;
        obj.with_window_closed(p)
    } else {
        let (removed, added) = plan(obj, case, binding)?;
        if let Some(r) = restrictions {
            for &(x, y) in &removed {
                if obj.is_contour_edge(x, y) && r.locked.contains(&Edge::new(x, y)) {
                    return Err(CaseError::RestrictionViolated("locked contour edge would move"));
                }
            }
        }
        let (contour, windows) = reconnect(obj, &removed, &added).ok_or(
            CaseError::PatternMismatch("reconnection does not close a single contour"),
        )?;
        obj.with_new_contour(contour, windows)
    };
    for &v in out.contour() {
        if is_d3(&out, v) && !obj.is_degenerate(v) {
            return Err(CaseError::WouldCreateDegenerateD3(v));
        }
    }
    if let Some(r) = restrictions {
        if r
            .forbidden
            .iter()
            .any(|&v| out.is_window_node(v) && !obj.is_window_node(v))
        {
            return Err(CaseError::RestrictionViolated("forbidden node would become a window node"));
        }
    }
    if case.phase() == Phase::Step2 {
        if out.window_count() != obj.window_count() + 1 {
            return mismatch("move must add exactly one window");
        }
        if out.health().has_links {
            return Err(CaseError::WouldCreateLink);
        }
    }
    Ok(out)
}

/// A matched pattern together with its result.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub case: CaseId,
    pub binding: Binding,
    pub result: BasicObject,
    /// Contour position of the leftmost removed window, or of the leftmost
    /// removed pair if no window is removed.
    pub position: usize,
}

fn leftmost(obj: &BasicObject, case: CaseId, b: &Binding) -> usize {
    if case == CaseId::CloseWindow {
        let (u, v) = (b.get('u').unwrap(), b.get('v').unwrap());
        return obj.pair_position(u, v).unwrap_or(usize::MAX);
    }
    let Ok((removed, _)) = plan(obj, case, b) else {
        return usize::MAX;
    };
    let positions = removed.iter().filter_map(|&(x, y)| obj.pair_position(x, y));
    positions
        .clone()
        .filter(|&p| obj.window_flags()[p])
        .min()
        .or_else(|| positions.min())
        .unwrap_or(usize::MAX)
}

/// Every binding of the phase's cases that applies to `obj`, in scan order:
/// case order, then leftmost involved contour position, then role values.
pub fn find_applicable(
    obj: &BasicObject,
    phase: Phase,
    restrictions: Option<&Restrictions>,
) -> Vec<(CaseId, Binding)> {
    candidates(obj, phase, restrictions)
        .into_iter()
        .map(|c| (c.case, c.binding))
        .collect()
}

pub fn candidates(
    obj: &BasicObject,
    phase: Phase,
    restrictions: Option<&Restrictions>,
) -> Vec<Candidate> {
    let raw = match phase {
        Phase::Step1 => step1_bindings(obj),
        Phase::Step2 => step2_bindings(obj),
    };
    let mut out: Vec<Candidate> = raw
        .into_iter()
        .filter_map(|(case, binding)| {
            let result = apply_case(obj, case, &binding, restrictions).ok()?;
            let position = leftmost(obj, case, &binding);
            Some(Candidate {
                case,
                binding,
                result,
                position,
            })
        })
        .collect();
    out.sort_by(|x, y| {
        (x.case, x.position, &x.binding).cmp(&(y.case, y.position, &y.binding))
    });
    out.dedup_by(|x, y| x.case == y.case && x.binding == y.binding);
    out
}

fn step1_bindings(obj: &BasicObject) -> Vec<(CaseId, Binding)> {
    let mut out = Vec::new();
    let n = obj.len();
    for i in 0..n {
        let (u, v) = obj.pair_at(i);
        if obj.window_flags()[i] && obj.graph().has_edge(u, v) {
            out.push((CaseId::CloseWindow, Binding::new(&[('u', u), ('v', v)])));
        }
    }
    let window_positions: Vec<usize> = (0..n).filter(|&i| obj.window_flags()[i]).collect();
    let links = obj.links();
    let segments = obj.segments();
    for link in &links {
        for (x, y) in [(link.0, link.1), (link.1, link.0)] {
            let d3 = is_d3(obj, x) || is_d3(obj, y);
            let short = if d3 { CaseId::Case16 } else { CaseId::Case11 };
            let long = if d3 { CaseId::Case16 } else { CaseId::Case12 };
            // 1.1 with b = x, c = y; 1.2 with b = x, d = y
            for a in obj.window_partners(x) {
                for d in obj.window_partners(y) {
                    out.push((
                        short,
                        Binding::new(&[('a', a), ('b', x), ('c', y), ('d', d)]),
                    ));
                    for &p in &window_positions {
                        let (e0, f0) = obj.pair_at(p);
                        for (e, f) in [(e0, f0), (f0, e0)] {
                            out.push((
                                long,
                                Binding::new(&[
                                    ('a', a),
                                    ('b', x),
                                    ('c', d),
                                    ('d', y),
                                    ('e', e),
                                    ('f', f),
                                ]),
                            ));
                        }
                    }
                }
            }
            // 1.3 and 1.4 with b = x, f = y ending one segment
            let Some(seg) = segments
                .iter()
                .find(|s| s.endpoints == (x, y) || s.endpoints == (y, x))
            else {
                continue;
            };
            if x == y {
                continue;
            }
            let (Some(&a), Some(&e)) = (
                obj.window_partners(x).first(),
                obj.window_partners(y).first(),
            ) else {
                continue;
            };
            for &l in &seg.nodes {
                for m in obj.contour_neighbors(l) {
                    if !seg.nodes.contains(&m) || !obj.is_contour_edge(l, m) {
                        continue;
                    }
                    for c in obj.interior_neighbors(l) {
                        if obj.is_window_node(c) {
                            for d in obj.window_partners(c) {
                                out.push((
                                    CaseId::Case13,
                                    Binding::new(&[
                                        ('a', a),
                                        ('b', x),
                                        ('c', c),
                                        ('d', d),
                                        ('e', e),
                                        ('f', y),
                                        ('l', l),
                                        ('m', m),
                                    ]),
                                ));
                            }
                        } else if !seg.nodes.contains(&c) {
                            for t in obj.contour_neighbors(c) {
                                out.push((
                                    CaseId::Case14,
                                    Binding::new(&[
                                        ('a', a),
                                        ('b', x),
                                        ('e', e),
                                        ('f', y),
                                        ('l', l),
                                        ('m', m),
                                        ('s', c),
                                        ('t', t),
                                    ]),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    for &a in obj.contour() {
        if !is_d3(obj, a) {
            continue;
        }
        let inner: Vec<Node> = obj.interior_neighbors(a).collect();
        let (p, q) = (obj.prev(a), obj.next(a));
        for (b, c) in [(p, q), (q, p)] {
            for &l in &inner {
                for &m in &inner {
                    if l == m {
                        continue;
                    }
                    for s in obj.contour_neighbors(l) {
                        for t in obj.contour_neighbors(m) {
                            out.push((
                                CaseId::Case15,
                                Binding::new(&[
                                    ('a', a),
                                    ('b', b),
                                    ('c', c),
                                    ('l', l),
                                    ('m', m),
                                    ('s', s),
                                    ('t', t),
                                ]),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

fn step2_bindings(obj: &BasicObject) -> Vec<(CaseId, Binding)> {
    let mut out = Vec::new();
    let n = obj.len();
    let window_positions: Vec<usize> = (0..n).filter(|&i| obj.window_flags()[i]).collect();
    for e in obj.health().free_edges {
        for (s, t) in [(e.0, e.1), (e.1, e.0)] {
            for k in obj.contour_neighbors(s) {
                for m in obj.contour_neighbors(t) {
                    out.push((
                        CaseId::Case21,
                        Binding::new(&[('k', k), ('s', s), ('t', t), ('m', m)]),
                    ));
                    for &p in &window_positions {
                        let (a0, b0) = obj.pair_at(p);
                        for (a, b) in [(a0, b0), (b0, a0)] {
                            out.push((
                                CaseId::Case22,
                                Binding::new(&[
                                    ('k', k),
                                    ('s', s),
                                    ('t', t),
                                    ('m', m),
                                    ('a', a),
                                    ('b', b),
                                ]),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}
