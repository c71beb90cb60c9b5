//! Running the decision procedure against the oracle, one graph or many.

use std::fmt::Write as _;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use contour_hcp_core::decision::{parameters, UnionCheck};
use contour_hcp_core::generate::{generate, GenError, GenMode, GenSpec};
use contour_hcp_core::oracle::{find_hamiltonian, OracleError};
use contour_hcp_core::pipeline::{run, Counters, Outcome, PipelineError, Report, ShortCircuit};
use contour_hcp_core::weighting::{correct, PolarityChoice, WeightModel};
use contour_hcp_core::{Graph, ObjectPair};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formats::{self, FormatError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(io_err(path))
}

pub fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

/// Most tried choices listed in a counterexample's `weights.txt`.
pub const MAX_LISTED_CHOICES: u64 = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCounters {
    pub step1_applications: usize,
    pub step2_applications: usize,
    pub restriction_applications: usize,
    pub candidates_scanned: usize,
    pub weight_propagations: usize,
    pub choices_tried: u64,
}

impl From<Counters> for PhaseCounters {
    fn from(c: Counters) -> Self {
        PhaseCounters {
            step1_applications: c.step1_applications,
            step2_applications: c.step2_applications,
            restriction_applications: c.restriction_applications,
            candidates_scanned: c.candidates_scanned,
            weight_propagations: c.weight_propagations,
            choices_tried: c.choices_tried,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionInfo {
    pub contour_sums: (i32, i32),
    pub window_sums: (i32, i32),
    pub interior_sums: (i32, i32),
    pub equalities_preserved: bool,
}

impl From<UnionCheck> for UnionInfo {
    fn from(u: UnionCheck) -> Self {
        UnionInfo {
            contour_sums: u.union_contour_sums,
            window_sums: u.union_window_sums,
            interior_sums: u.union_interior_sums,
            equalities_preserved: u.equalities_preserved,
        }
    }
}

/// Everything known about one run. Sums are in doubled units (a node
/// weighs +1 or -1).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub reduced_n: Option<usize>,
    pub hamiltonian_claimed: Option<bool>,
    pub short_circuit: bool,
    pub short_circuit_reason: Option<String>,
    /// Cycle behind a short circuit.
    pub certificate: Option<Vec<usize>>,
    pub l1: Option<i32>,
    pub s1: Option<i32>,
    pub l2: Option<i32>,
    pub s2: Option<i32>,
    pub choice_index: Option<u64>,
    pub choice_signs: Option<String>,
    pub choices_tried: u64,
    pub choices_failed: u64,
    pub one_equality_choices: u64,
    pub free_groups: Option<usize>,
    pub conflict_edges: Option<usize>,
    pub pair_invariants: Option<bool>,
    pub window_bound: Option<bool>,
    pub union: Option<UnionInfo>,
    pub counters: PhaseCounters,
    pub error: Option<ErrorInfo>,
    pub oracle_hamiltonian: Option<bool>,
    pub oracle_certificate: Option<Vec<usize>>,
    pub oracle_note: Option<String>,
    pub agree: Option<bool>,
    pub wall_time_ms: Option<f64>,
}

fn signs_text(c: &PolarityChoice) -> String {
    c.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

/// Pipeline outcome plus what the oracle says.
pub struct Evaluation {
    pub decision: Decision,
    pub report: Option<Report>,
    pub failure: Option<PipelineError>,
    /// Message of a panic inside the pipeline.
    pub panic: Option<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub seed: u64,
    pub oracle: bool,
    pub budget: u64,
    pub timing: bool,
}

pub fn evaluate(name: &str, g: &Graph, opts: EvalOptions) -> Evaluation {
    let start = Instant::now();
    let mut d = Decision {
        graph: name.to_string(),
        n: g.node_count(),
        m: g.edge_count(),
        seed: opts.seed,
        ..Decision::default()
    };
    let result = catch_unwind(AssertUnwindSafe(|| run(g, opts.seed)));
    let (report, failure, panic) = match result {
        Ok(Ok(r)) => (Some(r), None, None),
        Ok(Err(e)) => (None, Some(e), None),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            (None, None, Some(msg))
        }
    };
    if let Some(r) = &report {
        fill_from_report(&mut d, r);
    }
    if let Some(e) = &failure {
        d.counters = e.counters.into();
        d.error = Some(ErrorInfo {
            code: e.code().into(),
            message: e.kind.to_string(),
        });
    }
    if let Some(p) = &panic {
        d.error = Some(ErrorInfo {
            code: "Panic".into(),
            message: p.clone(),
        });
    }
    if opts.oracle {
        match find_hamiltonian(g, opts.budget) {
            Ok(Some(c)) => {
                d.oracle_hamiltonian = Some(true);
                d.oracle_certificate = Some(c.order);
            }
            Ok(None) => {
                d.oracle_hamiltonian = Some(false);
                d.oracle_note = Some("exhaustive backtracking search found no cycle".into());
            }
            Err(OracleError::BudgetExhausted { expansions }) => {
                d.oracle_note = Some(format!("budget exhausted after {expansions} expansions"));
            }
        }
        if let (Some(claim), Some(truth)) = (d.hamiltonian_claimed, d.oracle_hamiltonian) {
            d.agree = Some(claim == truth);
        }
    }
    if opts.timing {
        d.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1000.0);
    }
    Evaluation {
        decision: d,
        report,
        failure,
        panic,
    }
}

fn fill_from_report(d: &mut Decision, r: &Report) {
    d.reduced_n = Some(r.reduced_n);
    d.counters = r.counters.into();
    d.hamiltonian_claimed = Some(r.outcome.hamiltonian_claimed());
    d.window_bound = if r.window_bound.is_empty() {
        None
    } else {
        Some(r.window_bound.iter().all(|w| w.2))
    };
    match &r.outcome {
        Outcome::ShortCircuit {
            reason,
            certificate,
        } => {
            d.short_circuit = true;
            d.short_circuit_reason = Some(
                match reason {
                    ShortCircuit::PureCycle => "pure-cycle",
                    ShortCircuit::WindowFreeContour => "window-free-contour",
                }
                .into(),
            );
            d.certificate = Some(certificate.clone());
        }
        Outcome::Decided {
            pair,
            verdict,
            union,
        } => {
            d.l1 = Some(verdict.first.l);
            d.s1 = Some(verdict.first.s);
            d.l2 = Some(verdict.second.l);
            d.s2 = Some(verdict.second.s);
            d.choice_index = verdict.choice.as_ref().map(|c| c.index);
            d.choice_signs = verdict.choice.as_ref().map(signs_text);
            d.choices_tried = verdict.choices_tried;
            d.choices_failed = verdict.choices_failed;
            d.one_equality_choices = verdict.one_equality_choices;
            d.free_groups = Some(verdict.free_groups);
            d.conflict_edges = Some(verdict.conflict_edges);
            d.union = union.map(UnionInfo::from);
            d.pair_invariants =
                Some(ObjectPair::new(pair.first.clone(), pair.second.clone()).is_ok());
        }
    }
}

/// Files that make up a stored counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifacts {
    pub graph: String,
    pub objects: String,
    pub weights: String,
    pub verdict: String,
    pub trace: String,
}

pub const ARTIFACT_FILES: [&str; 5] = [
    "graph.txt",
    "objects.txt",
    "weights.txt",
    "verdict.json",
    "trace.log",
];

impl Artifacts {
    pub fn build(g: &Graph, ev: &Evaluation) -> Result<Self, HarnessError> {
        let (trace, pair, first) = match (&ev.report, &ev.failure) {
            (Some(r), _) => {
                let pair = match &r.outcome {
                    Outcome::Decided { pair, .. } => Some(pair),
                    Outcome::ShortCircuit { .. } => None,
                };
                (r.trace.clone(), pair, None)
            }
            (None, Some(e)) => (e.trace.clone(), e.pair.as_ref(), e.first.as_ref()),
            (None, None) => (Vec::new(), None, None),
        };
        let objects = match (pair, first) {
            (Some(p), _) => formats::write_pair(p),
            (None, Some(f)) => format!("object 1\n{}", formats::write_object(f)),
            (None, None) => "# no object was constructed\n".to_string(),
        };
        let weights = match (&ev.report, pair) {
            (Some(r), Some(p)) => weights_listing(p, r),
            _ => "# no weighting was computed\n".to_string(),
        };
        let mut trace_text = trace.join("\n");
        trace_text.push('\n');
        let mut verdict = serde_json::to_string_pretty(&ev.decision)?;
        verdict.push('\n');
        Ok(Artifacts {
            graph: formats::write_graph(g),
            objects,
            weights,
            verdict,
            trace: trace_text,
        })
    }

    fn contents(&self) -> [&str; 5] {
        [
            &self.graph,
            &self.objects,
            &self.weights,
            &self.verdict,
            &self.trace,
        ]
    }

    pub fn save(&self, dir: &Path) -> Result<(), HarnessError> {
        for (name, text) in ARTIFACT_FILES.iter().zip(self.contents()) {
            write(&dir.join(name), text)?;
        }
        Ok(())
    }
}

/// Reported weights in full, then one summary line per tried choice.
fn weights_listing(pair: &ObjectPair, r: &Report) -> String {
    let Outcome::Decided { verdict, .. } = &r.outcome else {
        return String::new();
    };
    let mut out = String::new();
    if let (Some(c), Some((w1, w2))) = (&verdict.choice, &verdict.weights) {
        let _ = writeln!(out, "# reported choice {} {}", c.index, signs_text(c));
        out.push_str("object 1\n");
        out.push_str(&formats::write_weights(w1));
        out.push_str("object 2\n");
        out.push_str(&formats::write_weights(w2));
    }
    let model = WeightModel::new(pair);
    let k = model.groups().len();
    let listed = verdict.choices_tried.min(MAX_LISTED_CHOICES);
    let _ = writeln!(
        out,
        "# tried choices ({listed} of {} listed): index signs L1 S1 L2 S2",
        verdict.choices_tried
    );
    for i in 0..listed {
        let choice = PolarityChoice::nth(i, k);
        let (w1, w2) = model.assign(&choice);
        let common = model.common_nodes();
        match (
            correct(&pair.first, &w1, common),
            correct(&pair.second, &w2, common),
        ) {
            (Ok(a), Ok(b)) => {
                let (p, q) = (parameters(&pair.first, &a), parameters(&pair.second, &b));
                let _ = writeln!(
                    out,
                    "choice {i} {} {} {} {} {}",
                    signs_text(&choice),
                    p.l,
                    p.s,
                    q.l,
                    q.s
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                let _ = writeln!(out, "choice {i} {} failed: {e}", signs_text(&choice));
            }
        }
    }
    out
}

/// Instances of a sweep, from generator flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub ns: Vec<usize>,
    pub exhaustive: bool,
    pub random: Option<usize>,
    pub cubic: bool,
    pub seed: u64,
}

/// Named graphs of a sweep, sorted by id. Odd `n` is skipped for cubic
/// sweeps over several sizes.
pub fn instances(spec: &SweepSpec) -> Result<Vec<(String, Graph)>, HarnessError> {
    if !spec.exhaustive && spec.random.is_none() {
        return Err(HarnessError::Usage(
            "choose --exhaustive, --random <k>, or both".into(),
        ));
    }
    let mut out = Vec::new();
    for &n in &spec.ns {
        if spec.cubic && n % 2 == 1 && spec.ns.len() > 1 {
            continue;
        }
        let kind = if spec.cubic { "cubic" } else { "deg23" };
        if spec.exhaustive {
            let gs = generate(&GenSpec {
                n,
                mode: GenMode::Exhaustive,
                cubic: spec.cubic,
            })?;
            for (i, g) in gs.into_iter().enumerate() {
                out.push((format!("exh-{kind}-n{n:02}-{i:05}"), g));
            }
        }
        if let Some(count) = spec.random {
            let gs = generate(&GenSpec {
                n,
                mode: GenMode::Random {
                    count,
                    seed: spec.seed,
                },
                cubic: spec.cubic,
            })?;
            for (i, g) in gs.into_iter().enumerate() {
                out.push((format!("rnd-{kind}-n{n:02}-s{}-{i:05}", spec.seed), g));
            }
        }
    }
    if out.is_empty() {
        return Err(HarnessError::Usage("the sweep has no instances".into()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// One line of the sweep report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub verdict_claimed: Option<bool>,
    pub short_circuit: bool,
    pub oracle_hamiltonian: Option<bool>,
    pub agree: Option<bool>,
    #[serde(rename = "L1")]
    pub l1: Option<i32>,
    #[serde(rename = "S1")]
    pub s1: Option<i32>,
    #[serde(rename = "L2")]
    pub l2: Option<i32>,
    #[serde(rename = "S2")]
    pub s2: Option<i32>,
    pub choices_tried: u64,
    pub free_groups: Option<usize>,
    pub pair_invariants: Option<bool>,
    pub window_bound: Option<bool>,
    pub union_equalities_preserved: Option<bool>,
    pub phase_op_counters: PhaseCounters,
    pub pipeline_error: Option<ErrorInfo>,
    pub oracle_note: Option<String>,
    /// Directory of the stored counterexample, relative to the report.
    pub counterexample: Option<String>,
    pub wall_time_ms: Option<f64>,
}

impl InstanceRecord {
    fn from_decision(id: &str, d: &Decision) -> Self {
        InstanceRecord {
            graph_id: id.to_string(),
            n: d.n,
            m: d.m,
            verdict_claimed: d.hamiltonian_claimed,
            short_circuit: d.short_circuit,
            oracle_hamiltonian: d.oracle_hamiltonian,
            agree: d.agree,
            l1: d.l1,
            s1: d.s1,
            l2: d.l2,
            s2: d.s2,
            choices_tried: d.choices_tried,
            free_groups: d.free_groups,
            pair_invariants: d.pair_invariants,
            window_bound: d.window_bound,
            union_equalities_preserved: d.union.as_ref().map(|u| u.equalities_preserved),
            phase_op_counters: d.counters,
            pipeline_error: d.error.clone(),
            oracle_note: d.oracle_note.clone(),
            counterexample: None,
            wall_time_ms: d.wall_time_ms,
        }
    }

    /// Panics inside the pipeline and oracle budget exhaustion.
    pub fn is_infrastructure_failure(&self) -> bool {
        self.pipeline_error.as_ref().is_some_and(|e| e.code == "Panic")
            || (self.pipeline_error.is_none() && self.oracle_hamiltonian.is_none())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Runs without a verdict: construction or weighting errors, panics,
    /// oracle budget exhaustion.
    pub pipeline_failures: usize,
    pub infrastructure_failures: usize,
    /// Agreements over decided instances.
    pub agreement_rate: Option<f64>,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// Final objects with more segments than a sixth of the node count.
    pub window_bound_violations: usize,
    pub failures_by_code: std::collections::BTreeMap<String, usize>,
}

impl Aggregate {
    pub fn of(records: &[InstanceRecord]) -> Self {
        let mut a = Aggregate {
            instances: records.len(),
            ..Aggregate::default()
        };
        for r in records {
            match r.agree {
                Some(true) => a.agreements += 1,
                Some(false) => {
                    a.disagreements += 1;
                    if r.verdict_claimed == Some(true) {
                        a.false_positives += 1;
                    } else {
                        a.false_negatives += 1;
                    }
                }
                None => {
                    a.pipeline_failures += 1;
                    let code = r
                        .pipeline_error
                        .as_ref()
                        .map_or("OracleBudgetExhausted", |e| e.code.as_str());
                    *a.failures_by_code.entry(code.to_string()).or_default() += 1;
                }
            }
            if r.window_bound == Some(false) {
                a.window_bound_violations += 1;
            }
            if r.is_infrastructure_failure() {
                a.infrastructure_failures += 1;
            }
        }
        let decided = a.agreements + a.disagreements;
        if decided > 0 {
            a.agreement_rate = Some(a.agreements as f64 / decided as f64);
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub ns: Vec<usize>,
    pub exhaustive: bool,
    pub random: Option<usize>,
    pub cubic: bool,
    pub aggregate: Aggregate,
    pub records: Vec<InstanceRecord>,
}

pub const REPORT_FILE: &str = "report.json";
pub const COUNTEREXAMPLE_DIR: &str = "counterexamples";

/// Run every instance, store each disagreement under
/// `<out>/counterexamples/<graph_id>/`, and write `<out>/report.json`.
pub fn sweep(
    spec: &SweepSpec,
    budget: u64,
    timing: bool,
    out: &Path,
) -> Result<SweepReport, HarnessError> {
    let list = instances(spec)?;
    let opts = EvalOptions {
        seed: spec.seed,
        oracle: true,
        budget,
        timing,
    };
    let results: Vec<(InstanceRecord, Option<Artifacts>)> = list
        .par_iter()
        .map(|(id, g)| {
            let ev = evaluate(id, g, opts);
            let rec = InstanceRecord::from_decision(id, &ev.decision);
            let art = if rec.agree == Some(false) {
                Some(Artifacts::build(g, &ev))
            } else {
                None
            };
            (rec, art)
        })
        .map(|(rec, art)| Ok((rec, art.transpose()?)))
        .collect::<Result<_, HarnessError>>()?;
    let cx_root = out.join(COUNTEREXAMPLE_DIR);
    if cx_root.exists() {
        fs::remove_dir_all(&cx_root).map_err(io_err(&cx_root))?;
    }
    let mut records = Vec::with_capacity(results.len());
    for (mut rec, art) in results {
        if let Some(a) = art {
            a.save(&cx_root.join(&rec.graph_id))?;
            rec.counterexample = Some(format!("{COUNTEREXAMPLE_DIR}/{}", rec.graph_id));
        }
        records.push(rec);
    }
    records.sort_by(|a, b| a.graph_id.cmp(&b.graph_id));
    let report = SweepReport {
        seed: spec.seed,
        ns: spec.ns.clone(),
        exhaustive: spec.exhaustive,
        random: spec.random,
        cubic: spec.cubic,
        aggregate: Aggregate::of(&records),
        records,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write(&out.join(REPORT_FILE), &text)?;
    Ok(report)
}

/// Files of a stored counterexample that differ from a fresh run.
pub fn replay(dir: &Path, budget: u64) -> Result<Vec<&'static str>, HarnessError> {
    let g = formats::parse_graph(&read(&dir.join("graph.txt"))?)?;
    let stored: Decision = serde_json::from_str(&read(&dir.join("verdict.json"))?)?;
    let opts = EvalOptions {
        seed: stored.seed,
        oracle: true,
        budget,
        timing: stored.wall_time_ms.is_some(),
    };
    let ev = evaluate(&stored.graph, &g, opts);
    let mut fresh = Artifacts::build(&g, &ev)?;
    if let Some(t) = stored.wall_time_ms {
        // wall time is the one field that cannot repeat
        let mut d = ev.decision.clone();
        d.wall_time_ms = Some(t);
        fresh.verdict = serde_json::to_string_pretty(&d)? + "\n";
    }
    let mut differ = Vec::new();
    for (name, text) in ARTIFACT_FILES.iter().zip(fresh.contents()) {
        if read(&dir.join(name))? != text {
            differ.push(*name);
        }
    }
    Ok(differ)
}
