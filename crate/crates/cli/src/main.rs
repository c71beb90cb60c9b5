use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contour_hcp_core::oracle::{find_hamiltonian, DEFAULT_BUDGET};
use contour_hcp_core::pipeline::{run, Outcome};
use contour_hcp_core::{fixtures, BasicObject, Graph, GraphError};
use contour_hcp::dot::contour_dot;
use contour_hcp::formats::{self, FormatError};
use contour_hcp::harness::{self, EvalOptions, HarnessError, SweepSpec};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "contour-hcp", version, about = "Contour-based Hamiltonicity test for graphs of maximum degree 3, with an exact oracle for checking it")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Source {
    /// Edge-list file (`p N M` header, `e u v` lines)
    #[arg(long, conflicts_with = "fixture")]
    graph: Option<PathBuf>,
    /// Built-in graph: g25, k4, petersen, prism(k), cycle(n)
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the object pair and write it with health summaries and the step trace
    Construct {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "construct-out")]
        out: PathBuf,
        /// Also write one DOT file per step
        #[arg(long)]
        dot: bool,
    },
    /// Run the whole test and print the verdict as JSON
    Decide {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-check with the exact search
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Compare the test with the oracle over generated graphs
    Sweep {
        /// Node counts: `10`, `4..12` (inclusive) or `14,16`
        #[arg(long, value_parser = parse_ns)]
        n: NodeCounts,
        #[arg(long)]
        exhaustive: bool,
        /// Random graphs per node count
        #[arg(long)]
        random: Option<usize>,
        /// 3-regular graphs only
        #[arg(long)]
        cubic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
        #[arg(long)]
        timing: bool,
        /// Expansion limit per oracle call
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact Hamiltonian cycle search
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// List the built-in graphs, or print one as an edge list
    Fixtures {
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Re-run a stored counterexample and compare every file
    Replay {
        dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Debug)]
struct NodeCounts(Vec<usize>);

fn parse_ns(s: &str) -> Result<NodeCounts, String> {
    let bad = || format!("`{s}` is not a node count, range a..b, or comma list");
    let ns: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    Ok(NodeCounts(ns))
}

#[derive(Debug)]
enum CliError {
    Harness(HarnessError),
    Pipeline(String),
    Failed(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::Harness(e)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Harness(e.into())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Harness(FormatError::Graph(e).into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Harness(e.into())
    }
}

fn load(src: &Source) -> Result<(String, Graph), CliError> {
    match (&src.graph, &src.fixture) {
        (Some(p), _) => {
            let g = formats::parse_graph(&harness::read(p)?)?;
            Ok((p.display().to_string(), g))
        }
        (None, Some(name)) => Ok((name.clone(), fixtures::by_name(name)?)),
        (None, None) => Err(CliError::Harness(HarnessError::Usage(
            "give --graph <file> or --fixture <name>".into(),
        ))),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn health_text(label: &str, o: &BasicObject) -> String {
    let h = o.health();
    let list = |v: &[contour_hcp_core::Edge]| {
        v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
    };
    let nodes = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "{label}");
    let _ = writeln!(s, "  windows: {}", h.window_count);
    let _ = writeln!(s, "  segments: {}", h.segment_count);
    let _ = writeln!(s, "  links: {}", list(&h.links));
    let _ = writeln!(s, "  degenerate-d3: {}", nodes(&h.degenerate_d3));
    let _ = writeln!(s, "  degenerate-d2: {}", nodes(&h.degenerate_d2));
    let _ = writeln!(s, "  free edges: {}", list(&h.free_edges));
    let _ = writeln!(s, "  window-incident edges: {}", list(&h.window_incident));
    s
}

fn construct(src: &Source, seed: u64, out: &Path, dot: bool) -> Result<(), CliError> {
    let (_, g) = load(src)?;
    let result = run(&g, seed);
    let (trace, first, pair, error) = match &result {
        Ok(r) => match &r.outcome {
            Outcome::Decided { pair, .. } => (&r.trace, None, Some(pair), None),
            Outcome::ShortCircuit { .. } => (&r.trace, None, None, None),
        },
        Err(e) => (&e.trace, e.first.as_ref(), e.pair.as_ref(), Some(e)),
    };
    let objects = match (pair, first) {
        (Some(p), _) => formats::write_pair(p),
        (None, Some(f)) => format!("object 1\n{}", formats::write_object(f)),
        (None, None) => "# short circuit: no object pair is needed\n".to_string(),
    };
    let health = match (pair, first) {
        (Some(p), _) => health_text("object 1", &p.first) + &health_text("object 2", &p.second),
        (None, Some(f)) => health_text("object 1", f),
        (None, None) => String::new(),
    };
    harness::write(&out.join("objects.txt"), &objects)?;
    harness::write(&out.join("health.txt"), &health)?;
    harness::write(&out.join("trace.log"), &(trace.join("\n") + "\n"))?;
    let mut steps = 0;
    let dot_dir = out.join("dot");
    if dot_dir.exists() {
        std::fs::remove_dir_all(&dot_dir).map_err(|source| HarnessError::Io {
            path: dot_dir.clone(),
            source,
        })?;
    }
    if dot {
        // the contour lives on the contracted graph
        let reduced = match g.contract_degree2_chains() {
            Ok((r, _)) => r,
            Err(_) => g.clone(),
        };
        for line in trace {
            let (label, tokens) = match line.split_once(" | ") {
                Some((head, tokens)) => (head, tokens),
                None => match line.split_once(' ') {
                    Some((head @ ("initial" | "first" | "preliminary" | "second"), tokens)) => {
                        (head, tokens)
                    }
                    _ => continue,
                },
            };
            if let Some(text) = contour_dot(&reduced, tokens, label) {
                harness::write(&dot_dir.join(format!("step-{steps:04}.dot")), &text)?;
                steps += 1;
            }
        }
    }
    let steps_applied = trace.iter().filter(|l| l.contains(" | ")).count();
    println!(
        "wrote {} ({} steps{})",
        out.display(),
        steps_applied,
        if dot { format!(", {steps} dot files") } else { String::new() }
    );
    match error {
        Some(e) => Err(CliError::Pipeline(format!(
            "{{\"error\":\"{}\",\"message\":{}}}",
            e.code(),
            serde_json::to_string(&e.kind.to_string())?
        ))),
        None => Ok(()),
    }
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Construct {
            source,
            seed,
            out,
            dot,
        } => construct(&source, seed, &out, dot),
        Cmd::Decide {
            source,
            seed,
            oracle,
            timing,
        } => {
            let (name, g) = load(&source)?;
            let ev = harness::evaluate(
                &name,
                &g,
                EvalOptions {
                    seed,
                    oracle,
                    budget: DEFAULT_BUDGET,
                    timing,
                },
            );
            print!("{}", json(&ev.decision)?);
            match ev.decision.error {
                Some(e) => Err(CliError::Pipeline(format!(
                    "{{\"error\":\"{}\",\"message\":{}}}",
                    e.code,
                    serde_json::to_string(&e.message)?
                ))),
                None => Ok(()),
            }
        }
        Cmd::Sweep {
            n,
            exhaustive,
            random,
            cubic,
            seed,
            out,
            timing,
            budget,
        } => {
            let spec = SweepSpec {
                ns: n.0,
                exhaustive,
                random,
                cubic,
                seed,
            };
            let report = harness::sweep(&spec, budget, timing, &out)?;
            let a = &report.aggregate;
            println!(
                "instances={} agreements={} disagreements={} pipeline_failures={} agreement_rate={} report={}",
                a.instances,
                a.agreements,
                a.disagreements,
                a.pipeline_failures,
                a.agreement_rate.map_or("n/a".into(), |r| format!("{r:.4}")),
                out.join(harness::REPORT_FILE).display()
            );
            Ok(())
        }
        Cmd::Oracle { source, budget } => {
            let (_, g) = load(&source)?;
            match find_hamiltonian(&g, budget) {
                Ok(Some(c)) => println!("hamiltonian {c}"),
                Ok(None) => println!("not hamiltonian"),
                Err(e) => return Err(CliError::Failed(e.to_string())),
            }
            Ok(())
        }
        Cmd::Fixtures { fixture } => {
            match fixture {
                Some(name) => print!("{}", formats::write_graph(&fixtures::by_name(&name)?)),
                None => {
                    for name in fixtures::NAMES {
                        println!("{name}");
                    }
                }
            }
            Ok(())
        }
        Cmd::Replay { dir, budget } => {
            let differ = harness::replay(&dir, budget)?;
            if differ.is_empty() {
                println!("replay identical: {}", dir.display());
                Ok(())
            } else {
                Err(CliError::Failed(format!("replay differs in {}", differ.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Harness(HarnessError::Format(e @ FormatError::MalformedLine { .. }))) => {
            eprintln!("MalformedLine: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Pipeline(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
