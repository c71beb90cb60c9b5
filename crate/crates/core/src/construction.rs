//! Drivers that build the first object and the second object with a
//! disjoint interior.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cases::{candidates, Binding, CaseId, Phase, Restrictions};
use crate::graph::{Edge, Graph, Node};
use crate::object::{depth_first_order, BasicObject, ObjectError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionError {
    /// More than `8 N^2` case applications in one stage.
    NonTermination { stage: Stage, applications: usize },
    /// A link or degenerate node remains and no move helps.
    ConstructionStuck { stage: Stage, reason: String },
    /// The first object has an empty interior.
    NoInteriorMaterial,
    ChainOverlap(Node),
    UncoveredNode(Node),
    /// No case 1.1/1.2 move frees this forbidden node from its window.
    RestrictionUnsatisfiable(Node),
    DisjointnessViolated(Edge),
    Object(ObjectError),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::NonTermination {
                stage,
                applications,
            } => write!(f, "{stage} stage did not settle after {applications} moves"),
            ConstructionError::ConstructionStuck { stage, reason } => {
                write!(f, "{stage} stage stuck: {reason}")
            }
            ConstructionError::NoInteriorMaterial => write!(f, "first object has no interior"),
            ConstructionError::ChainOverlap(v) => write!(f, "node {v} lies on two pieces"),
            ConstructionError::UncoveredNode(v) => write!(f, "node {v} lies on no piece"),
            ConstructionError::RestrictionUnsatisfiable(v) => {
                write!(f, "forbidden node {v} cannot be moved off its window")
            }
            ConstructionError::DisjointnessViolated(e) => {
                write!(f, "edge {e} is interior in both objects")
            }
            ConstructionError::Object(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConstructionError {}

impl From<ObjectError> for ConstructionError {
    fn from(e: ObjectError) -> Self {
        ConstructionError::Object(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    First,
    Restrict,
    Second,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::First => "first",
            Stage::Restrict => "restrict",
            Stage::Second => "second",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub stage: Stage,
    pub case: CaseId,
    pub binding: Binding,
    pub windows: usize,
    pub links: usize,
    /// Contour tokens after the move.
    pub contour: String,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} windows={} links={} | {}",
            self.stage, self.case, self.binding, self.windows, self.links, self.contour
        )
    }
}

/// Every applied move, with per-phase counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionLog {
    pub steps: Vec<StepRecord>,
    pub step1_applications: usize,
    pub step2_applications: usize,
    pub restriction_applications: usize,
    /// Pattern candidates evaluated across all scans.
    pub candidates_scanned: usize,
}

impl ConstructionLog {
    fn record(&mut self, stage: Stage, case: CaseId, binding: Binding, after: &BasicObject) {
        match (stage, case.phase()) {
            (Stage::Restrict, _) => self.restriction_applications += 1,
            (_, Phase::Step1) => self.step1_applications += 1,
            (_, Phase::Step2) => self.step2_applications += 1,
        }
        self.steps.push(StepRecord {
            stage,
            case,
            binding,
            windows: after.window_count(),
            links: after.link_count(),
            contour: format!("{after}"),
        });
    }
}

/// Second object under construction.
#[derive(Clone, Debug)]
pub struct RestrictedObject {
    pub object: BasicObject,
    /// Interior edges of the first object; they stay on this contour.
    pub locked_contour_edges: BTreeSet<Edge>,
    pub forbidden_window_nodes: BTreeSet<Node>,
    /// Edges left out of the working graph until the end.
    pub removed_interior: BTreeSet<Edge>,
}

impl RestrictedObject {
    pub fn restrictions(&self) -> Restrictions {
        Restrictions {
            locked: self.locked_contour_edges.clone(),
            forbidden: self.forbidden_window_nodes.clone(),
        }
    }
}

/// Two objects over the same graph with disjoint interiors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectPair {
    pub first: BasicObject,
    pub second: BasicObject,
}

impl ObjectPair {
    /// Checks the pair invariants.
    pub fn new(first: BasicObject, second: BasicObject) -> Result<Self, ConstructionError> {
        first.validate()?;
        second.validate()?;
        for (stage, obj) in [(Stage::First, &first), (Stage::Second, &second)] {
            let h = obj.health();
            if let Some(e) = h.links.first() {
                return Err(ConstructionError::ConstructionStuck {
                    stage,
                    reason: format!("link {e} remains"),
                });
            }
            if let Some(v) = h.degenerate_d3.first() {
                return Err(ConstructionError::ConstructionStuck {
                    stage,
                    reason: format!("node {v} is a degenerate segment of degree 3"),
                });
            }
        }
        let i1 = first.interior_edges();
        if let Some(e) = second.interior_edges().intersection(&i1).next() {
            return Err(ConstructionError::DisjointnessViolated(*e));
        }
        Ok(ObjectPair { first, second })
    }

    pub fn common_contour_edges(&self) -> BTreeSet<Edge> {
        self.first
            .contour_edges()
            .intersection(&self.second.contour_edges())
            .copied()
            .collect()
    }
}

/// First object: depth-first initial contour from node `1 + seed % N`, then
/// link elimination and window introduction.
pub fn construct_first(
    g: Arc<Graph>,
    seed: u64,
    log: &mut ConstructionLog,
) -> Result<BasicObject, ConstructionError> {
    let n = g.node_count();
    let start = 1 + (seed % n as u64) as usize;
    let order = depth_first_order(&g, start);
    let obj = BasicObject::initial(g, Some(&order))?;
    let obj = eliminate_links(obj, None, Stage::First, log)?;
    introduce_windows(obj, None, Stage::First, log)
}

fn guard(obj: &BasicObject) -> usize {
    8 * obj.len() * obj.len()
}

fn measure(obj: &BasicObject) -> (usize, usize) {
    let h = obj.health();
    (h.links.len() + h.degenerate_d3.len(), h.window_count)
}

/// Step 1: apply the first move that lowers (links + degenerate, windows);
/// failing that, the first move to a contour not seen before.
pub fn eliminate_links(
    mut obj: BasicObject,
    restrictions: Option<&Restrictions>,
    stage: Stage,
    log: &mut ConstructionLog,
) -> Result<BasicObject, ConstructionError> {
    let limit = guard(&obj);
    let mut seen = BTreeSet::new();
    seen.insert(obj.canonical_key());
    let mut applied = 0;
    loop {
        let current = measure(&obj);
        if current.0 == 0 {
            return Ok(obj);
        }
        let cands = candidates(&obj, Phase::Step1, restrictions);
        log.candidates_scanned += cands.len();
        let pick = cands
            .iter()
            .position(|c| measure(&c.result) < current)
            .or_else(|| {
                cands
                    .iter()
                    .position(|c| !seen.contains(&c.result.canonical_key()))
            });
        let Some(i) = pick else {
            let h = obj.health();
            let reason = match (h.links.first(), h.degenerate_d3.first()) {
                (Some(e), _) => format!("no move removes link {e} in {obj}"),
                (None, Some(v)) => format!("no move removes degenerate node {v} in {obj}"),
                _ => String::from("no move applies"),
            };
            return Err(ConstructionError::ConstructionStuck { stage, reason });
        };
        let c = cands.into_iter().nth(i).unwrap();
        seen.insert(c.result.canonical_key());
        log.record(stage, c.case, c.binding, &c.result);
        obj = c.result;
        applied += 1;
        if applied > limit {
            return Err(ConstructionError::NonTermination {
                stage,
                applications: applied,
            });
        }
    }
}

/// Step 2: apply the first window introduction in scan order, rescan, repeat.
pub fn introduce_windows(
    mut obj: BasicObject,
    restrictions: Option<&Restrictions>,
    stage: Stage,
    log: &mut ConstructionLog,
) -> Result<BasicObject, ConstructionError> {
    let limit = guard(&obj);
    let mut applied = 0;
    loop {
        let cands = candidates(&obj, Phase::Step2, restrictions);
        log.candidates_scanned += cands.len();
        let Some(c) = cands.into_iter().next() else {
            return Ok(obj);
        };
        log.record(stage, c.case, c.binding, &c.result);
        obj = c.result;
        applied += 1;
        if applied > limit {
            return Err(ConstructionError::NonTermination {
                stage,
                applications: applied,
            });
        }
    }
}

/// Explicit piece order for the preliminary second contour: the leading node
/// of each piece, in contour order. Pieces not named follow in default order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PieceLayout(pub Vec<Node>);

/// Interior material of the first object, cut into contour pieces.
fn pieces(first: &BasicObject) -> Result<Vec<Vec<Node>>, ConstructionError> {
    let g = first.graph();
    let mut out: Vec<Vec<Node>> = Vec::new();
    for &v in first.contour() {
        if !first.is_window_node(v) {
            if g.degree(v) == 2 {
                out.push(vec![v]);
            }
            continue;
        }
        let mut inner: Vec<Node> = first.interior_neighbors(v).collect();
        inner.sort_by_key(|&x| first.position(x));
        match inner.as_slice() {
            [x] => out.push(vec![v, *x]),
            [x, y] => out.push(vec![*x, v, *y]),
            _ => {
                return Err(ConstructionError::ConstructionStuck {
                    stage: Stage::Second,
                    reason: format!("window node {v} has {} interior edges", inner.len()),
                })
            }
        }
    }
    for e in first.health().free_edges {
        let (a, b) = if first.position(e.0) < first.position(e.1) {
            (e.0, e.1)
        } else {
            (e.1, e.0)
        };
        out.push(vec![a, b]);
    }
    let mut owner = vec![false; first.len()];
    for p in &out {
        for &v in p {
            if owner[v - 1] {
                return Err(ConstructionError::ChainOverlap(v));
            }
            owner[v - 1] = true;
        }
    }
    if let Some(i) = owner.iter().position(|&o| !o) {
        return Err(ConstructionError::UncoveredNode(i + 1));
    }
    out.sort_by_key(|p| p.iter().map(|&v| first.position(v)).min());
    Ok(out)
}

/// Preliminary second object: the first object's interior edges laid out as
/// contour pieces separated by windows.
pub fn preliminary_second(
    first: &BasicObject,
    layout: Option<&PieceLayout>,
) -> Result<RestrictedObject, ConstructionError> {
    let locked = first.interior_edges();
    if locked.is_empty() {
        return Err(ConstructionError::NoInteriorMaterial);
    }
    let mut rest = pieces(first)?;
    let mut ordered = Vec::with_capacity(rest.len());
    if let Some(PieceLayout(leads)) = layout {
        for &lead in leads {
            let Some(i) = rest.iter().position(|p| p.contains(&lead)) else {
                continue;
            };
            let mut p = rest.remove(i);
            if p[0] != lead {
                p.reverse();
            }
            ordered.push(p);
        }
    }
    ordered.extend(rest);
    let mut contour = Vec::with_capacity(first.len());
    let mut windows = Vec::with_capacity(first.len());
    for p in ordered {
        for (i, &v) in p.iter().enumerate() {
            contour.push(v);
            windows.push(i + 1 == p.len());
        }
    }
    let g = first.graph().clone();
    let object = BasicObject::with_windows(g.clone(), g, contour, windows)?;
    Ok(RestrictedObject {
        object,
        locked_contour_edges: locked,
        forbidden_window_nodes: BTreeSet::new(),
        removed_interior: BTreeSet::new(),
    })
}

/// Edges set aside while the second object is built: contour edges of the
/// first object at its window nodes.
pub fn removed_edges(first: &BasicObject) -> BTreeSet<Edge> {
    first
        .contour_edges()
        .into_iter()
        .filter(|e| first.is_window_node(e.0) || first.is_window_node(e.1))
        .collect()
}

/// Nodes that may not be window nodes of the second object: the far ends of
/// contour edges at degree-2 window nodes, and both contour neighbors of
/// degree-2 nodes without a window.
pub fn forbidden_nodes(first: &BasicObject) -> BTreeSet<Node> {
    let g = first.graph();
    let mut out = BTreeSet::new();
    for &v in first.contour() {
        if g.degree(v) != 2 {
            continue;
        }
        for w in first.contour_neighbors(v) {
            if first.is_contour_edge(v, w) {
                out.insert(w);
            }
        }
    }
    out
}

/// Set edges aside, mark forbidden nodes, and move every forbidden node off
/// its windows with case 1.1/1.2 moves.
pub fn apply_restrictions(
    r: RestrictedObject,
    first: &BasicObject,
    log: &mut ConstructionLog,
) -> Result<RestrictedObject, ConstructionError> {
    let full = first.graph().clone();
    let removed = removed_edges(first);
    let forbidden = forbidden_nodes(first);
    let working = Arc::new(full.without_edges(&removed));
    let mut obj = r.object.rebase(working, full)?;
    let restr = Restrictions {
        locked: r.locked_contour_edges.clone(),
        forbidden: forbidden.clone(),
    };
    let limit = guard(&obj);
    let mut applied = 0;
    loop {
        let blocked: Vec<Node> = forbidden
            .iter()
            .copied()
            .filter(|&v| obj.is_window_node(v))
            .collect();
        let Some(&v) = blocked.first() else {
            break;
        };
        let cands = candidates(&obj, Phase::Step1, Some(&restr));
        log.candidates_scanned += cands.len();
        let pick = cands.into_iter().find(|c| {
            matches!(c.case, CaseId::Case11 | CaseId::Case12 | CaseId::CloseWindow)
                && !c.result.is_window_node(v)
                && forbidden.iter().filter(|&&x| c.result.is_window_node(x)).count()
                    < blocked.len()
        });
        let Some(c) = pick else {
            return Err(ConstructionError::RestrictionUnsatisfiable(v));
        };
        log.record(Stage::Restrict, c.case, c.binding, &c.result);
        obj = c.result;
        applied += 1;
        if applied > limit {
            return Err(ConstructionError::NonTermination {
                stage: Stage::Restrict,
                applications: applied,
            });
        }
    }
    Ok(RestrictedObject {
        object: obj,
        locked_contour_edges: r.locked_contour_edges,
        forbidden_window_nodes: forbidden,
        removed_interior: removed,
    })
}

/// Run both steps under the restrictions, then put the removed edges back.
pub fn complete_second(
    r: RestrictedObject,
    first: &BasicObject,
    log: &mut ConstructionLog,
) -> Result<ObjectPair, ConstructionError> {
    let restr = r.restrictions();
    let obj = eliminate_links(r.object, Some(&restr), Stage::Second, log)?;
    let obj = introduce_windows(obj, Some(&restr), Stage::Second, log)?;
    let second = reinstate(&obj, first.graph().clone())?;
    ObjectPair::new(first.clone(), second)
}

/// The object over the full graph; windows that now cover an edge become
/// contour edges.
pub fn reinstate(obj: &BasicObject, full: Arc<Graph>) -> Result<BasicObject, ConstructionError> {
    let windows: Vec<bool> = (0..obj.len())
        .map(|i| {
            let (u, v) = obj.pair_at(i);
            obj.window_flags()[i] && !full.has_edge(u, v)
        })
        .collect();
    Ok(BasicObject::with_windows(
        full.clone(),
        full,
        obj.contour().to_vec(),
        windows,
    )?)
}

/// Whole construction: first object, then the second.
pub fn construct_pair(
    g: Arc<Graph>,
    seed: u64,
    log: &mut ConstructionLog,
) -> Result<ObjectPair, ConstructionError> {
    let first = construct_first(g, seed, log)?;
    second_for(&first, None, log)
}

/// Second object for a given first object.
pub fn second_for(
    first: &BasicObject,
    layout: Option<&PieceLayout>,
    log: &mut ConstructionLog,
) -> Result<ObjectPair, ConstructionError> {
    let r = preliminary_second(first, layout)?;
    let r = apply_restrictions(r, first, log)?;
    complete_second(r, first, log)
}
