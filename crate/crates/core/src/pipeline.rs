//! Full decision run on one graph, with counters and a replayable trace.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::construction::{
    apply_restrictions, complete_second, eliminate_links, introduce_windows, preliminary_second,
    ConstructionError, ConstructionLog, ObjectPair, PieceLayout, Stage,
};
use crate::decision::{decide, union_check, UnionCheck, Verdict};
use crate::graph::{ContractionMap, Graph, GraphError, Node};
use crate::object::{depth_first_order, BasicObject, ObjectError};
use crate::weighting::WeightingError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShortCircuit {
    /// Every node has degree 2.
    PureCycle,
    /// The first contour has no windows.
    WindowFreeContour,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Hamiltonian without weighting; the certificate is a cycle of the
    /// input graph.
    ShortCircuit {
        reason: ShortCircuit,
        certificate: Vec<Node>,
    },
    Decided {
        pair: ObjectPair,
        verdict: Verdict,
        union: Option<UnionCheck>,
    },
}

impl Outcome {
    pub fn hamiltonian_claimed(&self) -> bool {
        match self {
            Outcome::ShortCircuit { .. } => true,
            Outcome::Decided { verdict, .. } => verdict.hamiltonian_claimed,
        }
    }
}

/// Operation counts per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub step1_applications: usize,
    pub step2_applications: usize,
    pub restriction_applications: usize,
    pub candidates_scanned: usize,
    pub weight_propagations: usize,
    pub choices_tried: u64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    /// Node count after degree-2 chain contraction.
    pub reduced_n: usize,
    pub outcome: Outcome,
    pub counters: Counters,
    /// Window-bound results for the final link-free objects without
    /// degenerate segments, as (object index, segment count, bound holds).
    pub window_bound: Vec<(usize, usize, bool)>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineErrorKind {
    Graph(GraphError),
    Object(ObjectError),
    Construction(ConstructionError),
    Weighting(WeightingError),
}

impl fmt::Display for PipelineErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineErrorKind::Graph(e) => write!(f, "{e}"),
            PipelineErrorKind::Object(e) => write!(f, "{e}"),
            PipelineErrorKind::Construction(e) => write!(f, "{e}"),
            PipelineErrorKind::Weighting(e) => write!(f, "{e}"),
        }
    }
}

/// A failed run, with everything produced before the failure.
#[derive(Clone, Debug)]
pub struct PipelineError {
    pub kind: PipelineErrorKind,
    pub first: Option<BasicObject>,
    pub pair: Option<ObjectPair>,
    pub counters: Counters,
    pub trace: Vec<String>,
}

impl PipelineError {
    /// Short machine-readable name of the failure.
    pub fn code(&self) -> &'static str {
        match &self.kind {
            PipelineErrorKind::Graph(_) => "GraphError",
            PipelineErrorKind::Object(_) => "ObjectError",
            PipelineErrorKind::Construction(e) => match e {
                ConstructionError::NonTermination { .. } => "NonTermination",
                ConstructionError::ConstructionStuck { .. } => "ConstructionStuck",
                ConstructionError::NoInteriorMaterial => "NoInteriorMaterial",
                ConstructionError::ChainOverlap(_) => "ChainOverlap",
                ConstructionError::UncoveredNode(_) => "UncoveredNode",
                ConstructionError::RestrictionUnsatisfiable(_) => "RestrictionUnsatisfiable",
                ConstructionError::DisjointnessViolated(_) => "DisjointnessViolated",
                ConstructionError::Object(_) => "ObjectError",
            },
            PipelineErrorKind::Weighting(e) => match e {
                WeightingError::TargetNotOnContour(..) => "TargetNotOnContour",
                WeightingError::NoEligibleNode { .. } => "NoEligibleNode",
                WeightingError::TooManyFreeGroups(_) => "TooManyFreeGroups",
            },
        }
    }

    /// Failures the method itself produced, as opposed to bad input.
    pub fn is_construction_stuck(&self) -> bool {
        matches!(
            self.kind,
            PipelineErrorKind::Construction(ConstructionError::ConstructionStuck { .. })
        )
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code(), self.kind)
    }
}

impl core::error::Error for PipelineError {}

/// Optional inputs that pin down choices the method leaves open.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Initial contour for the first object instead of a depth-first order.
    pub first_order: Option<Vec<Node>>,
    pub piece_layout: Option<PieceLayout>,
}

struct Run {
    log: ConstructionLog,
    trace: Vec<String>,
    first: Option<BasicObject>,
    pair: Option<ObjectPair>,
    logged: usize,
    propagations: usize,
    choices: u64,
}

impl Run {
    fn flush(&mut self) {
        for s in &self.log.steps[self.logged..] {
            self.trace.push(format!("{s}"));
        }
        self.logged = self.log.steps.len();
    }

    fn counters(&self) -> Counters {
        Counters {
            step1_applications: self.log.step1_applications,
            step2_applications: self.log.step2_applications,
            restriction_applications: self.log.restriction_applications,
            candidates_scanned: self.log.candidates_scanned,
            weight_propagations: self.propagations,
            choices_tried: self.choices,
        }
    }

    fn fail(mut self, kind: PipelineErrorKind) -> PipelineError {
        self.flush();
        self.trace.push(format!("error {kind}"));
        PipelineError {
            counters: self.counters(),
            kind,
            first: self.first,
            pair: self.pair,
            trace: self.trace,
        }
    }
}

pub fn run(g: &Graph, seed: u64) -> Result<Report, PipelineError> {
    run_with(g, seed, &RunOptions::default())
}

pub fn run_with(g: &Graph, seed: u64, opts: &RunOptions) -> Result<Report, PipelineError> {
    let mut r = Run {
        log: ConstructionLog::default(),
        trace: Vec::new(),
        first: None,
        pair: None,
        logged: 0,
        propagations: 0,
        choices: 0,
    };
    r.trace.push(format!("graph n={} m={} seed={seed}", g.node_count(), g.edge_count()));
    let (reduced, map) = match g.contract_degree2_chains() {
        Ok(x) => x,
        Err(GraphError::PureCycle) => {
            let certificate = depth_first_order(g, 1);
            r.trace.push(String::from("short-circuit pure-cycle"));
            return Ok(Report {
                n: g.node_count(),
                m: g.edge_count(),
                reduced_n: g.node_count(),
                outcome: Outcome::ShortCircuit {
                    reason: ShortCircuit::PureCycle,
                    certificate,
                },
                counters: r.counters(),
                window_bound: Vec::new(),
                trace: r.trace,
            });
        }
        Err(e) => return Err(r.fail(PipelineErrorKind::Graph(e))),
    };
    if !map.is_identity() {
        r.trace.push(format!("contracted n={}", reduced.node_count()));
    }
    let reduced = Arc::new(reduced);
    let order = match (&opts.first_order, map.is_identity()) {
        (Some(o), true) => o.clone(),
        _ => {
            let n = reduced.node_count();
            depth_first_order(&reduced, 1 + (seed % n as u64) as usize)
        }
    };
    let initial = match BasicObject::initial(reduced.clone(), Some(&order)) {
        Ok(o) => o,
        Err(e) => return Err(r.fail(PipelineErrorKind::Object(e))),
    };
    r.trace.push(format!("initial {initial}"));

    let first = eliminate_links(initial, None, Stage::First, &mut r.log)
        .and_then(|o| introduce_windows(o, None, Stage::First, &mut r.log));
    r.flush();
    let first = match first {
        Ok(o) => o,
        Err(e) => return Err(r.fail(PipelineErrorKind::Construction(e))),
    };
    r.trace.push(format!("first {first}"));
    r.first = Some(first.clone());

    if first.window_count() == 0 {
        let cycle = map.lift_cycle(g, first.contour());
        r.trace.push(String::from("short-circuit window-free-contour"));
        return Ok(Report {
            n: g.node_count(),
            m: g.edge_count(),
            reduced_n: reduced.node_count(),
            outcome: Outcome::ShortCircuit {
                reason: ShortCircuit::WindowFreeContour,
                certificate: cycle,
            },
            counters: r.counters(),
            window_bound: window_bound(&[&first]),
            trace: r.trace,
        });
    }

    let pair = preliminary_second(&first, opts.piece_layout.as_ref())
        .inspect(|p| r.trace.push(format!("preliminary {}", p.object)))
        .and_then(|p| apply_restrictions(p, &first, &mut r.log))
        .and_then(|p| complete_second(p, &first, &mut r.log));
    r.flush();
    let pair = match pair {
        Ok(p) => p,
        Err(e) => return Err(r.fail(PipelineErrorKind::Construction(e))),
    };
    r.trace.push(format!("second {}", pair.second));
    r.pair = Some(pair.clone());

    let verdict = match decide(&pair) {
        Ok(v) => v,
        Err(e) => return Err(r.fail(PipelineErrorKind::Weighting(e))),
    };
    r.propagations = verdict.propagations;
    r.choices = verdict.choices_tried;
    let union = verdict.weights.as_ref().map(|(w1, w2)| union_check(&pair, w1, w2));
    r.trace.push(format!(
        "verdict claimed={} L1={} S1={} L2={} S2={} groups={} tried={}",
        verdict.hamiltonian_claimed,
        verdict.first.l,
        verdict.first.s,
        verdict.second.l,
        verdict.second.s,
        verdict.free_groups,
        verdict.choices_tried
    ));
    let window_bound = window_bound(&[&pair.first, &pair.second]);
    Ok(Report {
        n: g.node_count(),
        m: g.edge_count(),
        reduced_n: reduced.node_count(),
        outcome: Outcome::Decided {
            pair,
            verdict,
            union,
        },
        counters: r.counters(),
        window_bound,
        trace: r.trace,
    })
}

fn window_bound(objs: &[&BasicObject]) -> Vec<(usize, usize, bool)> {
    objs.iter()
        .enumerate()
        .filter_map(|(i, o)| {
            let holds = o.check_window_bound().ok()?;
            Some((i + 1, o.window_count(), holds))
        })
        .collect()
}

/// Identity contraction map, for callers that skip contraction.
pub fn identity_map(g: &Graph) -> ContractionMap {
    ContractionMap::identity(g.node_count())
}
