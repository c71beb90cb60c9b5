use std::path::Path;
use std::process::{Command, Output};

use contour_hcp::harness::{self, SweepReport, SweepSpec};
use contour_hcp_core::oracle::DEFAULT_BUDGET;

fn cli(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contour-hcp"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn malformed_graph_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "p 4 1\ne 1 q\n").unwrap();
    let out = cli(&["construct", "--graph", "bad.txt"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MalformedLine"));
}

#[test]
fn missing_file_and_unknown_fixture_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["decide", "--graph", "nope.txt"], dir.path()).status.code(), Some(1));
    assert_eq!(cli(&["decide", "--fixture", "k5"], dir.path()).status.code(), Some(1));
}

#[test]
fn decide_petersen_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&cli(&["decide", "--fixture", "petersen", "--oracle"], dir.path()));
    assert_eq!(v["oracle_hamiltonian"], false);
    assert_eq!(v["agree"], v["hamiltonian_claimed"] == false);
}

#[test]
fn decide_g25_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["decide", "--fixture", "g25", "--oracle"], dir.path());
    let v = json(&out);
    assert_eq!(v["oracle_hamiltonian"], true);
    assert!(v["agree"].is_boolean() || v["error"].is_object());
}

#[test]
fn decide_on_a_cycle_short_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["decide", "--fixture", "cycle(7)"], dir.path());
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["hamiltonian_claimed"], true);
    assert_eq!(v["short_circuit"], true);
}

#[test]
fn construct_g25_writes_pair_and_bounded_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["construct", "--fixture", "g25", "--out", "o", "--dot"], dir.path());
    let o = dir.path().join("o");
    let trace = std::fs::read_to_string(o.join("trace.log")).unwrap();
    let steps = trace.lines().filter(|l| l.contains(" | ")).count();
    assert!(steps <= 8 * 25 * 25);
    if out.status.success() {
        let pair = std::fs::read_to_string(o.join("objects.txt")).unwrap();
        assert!(pair.contains("object 2"));
        let dots = std::fs::read_dir(o.join("dot")).unwrap().count();
        assert!(dots > steps);
    }
    for entry in std::fs::read_dir(o.join("dot")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        contour_hcp::dot::parse_dot(&text).unwrap();
    }
}

#[test]
fn construct_k4_gives_pair_or_short_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["construct", "--fixture", "k4", "--out", "o"], dir.path());
    assert!(out.status.success());
    let objects = std::fs::read_to_string(dir.path().join("o/objects.txt")).unwrap();
    assert!(objects.contains("object 2") || objects.starts_with("# short circuit"));
}

#[test]
fn fixtures_print_parseable_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["fixtures", "--fixture", "g25"], dir.path());
    let g = contour_hcp::formats::parse_graph(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (25, 37));
    let out = cli(&["oracle", "--fixture", "petersen"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "not hamiltonian\n");
}

#[test]
fn sweep_report_is_consistent_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["sweep", "--n", "4..10", "--exhaustive", "--cubic", "--out", "s"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("s/report.json")).unwrap();
    let report: SweepReport = serde_json::from_str(&text).unwrap();
    let a = &report.aggregate;
    assert_eq!(a.instances, 1 + 2 + 5 + 19);
    assert_eq!(a.agreements + a.disagreements + a.pipeline_failures, a.instances);
    assert!(report.records.windows(2).all(|w| w[0].graph_id < w[1].graph_id));
    // Petersen and the bridged graph on 10 nodes
    let non_hamiltonian = report.records.iter().filter(|r| r.oracle_hamiltonian == Some(false));
    assert_eq!(non_hamiltonian.count(), 2);
    for r in report.records.iter().filter(|r| r.agree == Some(false)) {
        let cx = dir.path().join("s").join(r.counterexample.as_ref().unwrap());
        assert!(harness::replay(&cx, DEFAULT_BUDGET).unwrap().is_empty());
        let out = cli(&["replay", cx.to_str().unwrap()], dir.path());
        assert!(out.status.success());
    }
}

#[test]
fn tampered_counterexample_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SweepSpec {
        ns: vec![10],
        exhaustive: true,
        random: None,
        cubic: true,
        seed: 0,
    };
    let report = harness::sweep(&spec, DEFAULT_BUDGET, false, dir.path()).unwrap();
    let r = report.records.iter().find(|r| r.agree == Some(false)).expect("a disagreement at n=10");
    let cx = dir.path().join(r.counterexample.as_ref().unwrap());
    let trace = cx.join("trace.log");
    let mut text = std::fs::read_to_string(&trace).unwrap();
    text.push_str("extra\n");
    std::fs::write(&trace, text).unwrap();
    assert_eq!(harness::replay(&cx, DEFAULT_BUDGET).unwrap(), vec!["trace.log"]);
    assert_eq!(cli(&["replay", cx.to_str().unwrap()], dir.path()).status.code(), Some(1));
}

#[test]
fn sweep_needs_a_mode() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["sweep", "--n", "6"], dir.path()).status.code(), Some(1));
    assert_eq!(cli(&["sweep", "--n", "5", "--exhaustive", "--cubic"], dir.path()).status.code(), Some(1));
}
