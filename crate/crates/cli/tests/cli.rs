use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn kgtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgtool")).args(args).output().expect("kgtool runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_o2() {
    let out = kgtool(&["analyze", &fixture("o2.kg")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["aperiodicity: HOLDS", "cofinality: HOLDS", "simplicity: HOLDS", "pure infiniteness hypothesis: HOLDS"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
}

#[test]
fn analyze_reports_failures_with_witnesses() {
    let text = stdout(&kgtool(&["analyze", &fixture("two_component.kg")]));
    assert!(text.contains("cofinality: FAILS [exact] u never reaches the path ()@v (b1)^∞"), "{text}");
    assert!(text.contains("simplicity: FAILS"));
    let text = stdout(&kgtool(&["analyze", &fixture("single_loop.kg")]));
    assert!(text.contains("aperiodicity: FAILS"));
    assert!(text.contains("simplicity: UNKNOWN"));
    assert!(text.contains("criterion does not apply"));
}

#[test]
fn analyze_leaves_periodic_pullbacks_undecided() {
    let out = kgtool(&["analyze", &fixture("sum_pullback.kg"), "--period-bound", "1", "--horizon", "3"]);
    let text = stdout(&out);
    assert!(text.contains("aperiodicity: UNKNOWN [period bound 1, horizon 3]"), "{text}");
    assert!(text.contains("shifts (0,1) and (1,0) are never distinguished"), "{text}");
}

#[test]
fn algebra_evaluates_expressions() {
    let out = kgtool(&["algebra", &fixture("t2.kg"), "--eval", "s(a)* s(a)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1 * s() s()^*");
    let out = kgtool(&["algebra", &fixture("o2.kg"), "--eval", "phi(s(e) s(f)* + s(e) s(e.f)*)"]);
    assert_eq!(stdout(&out).trim(), "1 * s(e) s(f)^*");
    let out = kgtool(&["algebra", &fixture("o2.kg"), "--eval", "s(e) +"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn iso_finds_and_refutes() {
    let out = kgtool(&["iso", &fixture("flip.kg"), &fixture("prod.kg"), "--max-degree", "2,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("isomorphism (verified on degrees ≤ (2,2)):"));
    let out = kgtool(&["iso", &fixture("flip.kg"), &fixture("iota.kg"), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("NONE: no isomorphism exists"));
}

#[test]
fn check_counts_and_matrices() {
    let out = kgtool(&["check", &fixture("twisted.kg")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("validation: HOLDS rank 2, 2 vertices, 6 edges, 4 squares"), "{text}");
    assert!(text.contains("factorization: HOLDS"));
    let out = kgtool(&["count", &fixture("flip.kg"), "--vertex", "v", "--degree", "2,1"]);
    assert_eq!(stdout(&out).trim(), "8");
    let out = kgtool(&["matrix", &fixture("two_cycle.kg"), "--degree", "1"]);
    assert_eq!(stdout(&out), "[0 1]\n[1 0]\n");
}

#[test]
fn failed_validation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing.kg");
    std::fs::write(&path, "kgraph 1\nrank 2\nvertex v\nedge 1 e v v\nedge 2 f v v\n").unwrap();
    let out = kgtool(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("validation: FAILS"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.kg");
    std::fs::write(&path, "kgraph 1\nrank 1\nvertex v\nedge 1 e v w\n").unwrap();
    let out = kgtool(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4: unknown name w"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(kgtool(&["analyze"]).status.code(), Some(2));
    assert_eq!(kgtool(&["analyze", "/nonexistent.kg"]).status.code(), Some(2));
    let out = kgtool(&["count", &fixture("flip.kg"), "--vertex", "v", "--degree", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constructions_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("assembled.kg");
    let out = kgtool(&[
        "construct",
        "assemble",
        &fixture("o2.kg"),
        &fixture("o2.kg"),
        "--theta",
        "flip",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = kgtool(&["iso", out_path.to_str().unwrap(), &fixture("prod.kg"), "--max-degree", "2"]);
    assert!(stdout(&out).starts_with("isomorphism"));

    let skew = dir.path().join("skew.kg");
    let out = kgtool(&["construct", "skew", &fixture("o2.kg"), "--cocycle", &fixture("o2_parity.cocycle"), "-o", skew.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&kgtool(&["check", skew.to_str().unwrap()]));
    assert!(text.contains("rank 1, 2 vertices, 4 edges"), "{text}");

    let out = kgtool(&["construct", "quotient", &fixture("two_cycle.kg"), "--action", &fixture("two_cycle_swap.action")]);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex")).count(), 1);
    assert_eq!(text.lines().filter(|l| l.starts_with("edge")).count(), 1);

    let out = kgtool(&["construct", "product", &fixture("flip.kg"), &fixture("flip.kg")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("rank 4"));
}

#[test]
fn windowed_graphs_carry_a_note() {
    let dir = tempfile::tempdir().unwrap();
    let skew = dir.path().join("window.kg");
    let out = kgtool(&["construct", "skew", &fixture("flip.kg"), "--cocycle", &fixture("flip_degree.cocycle"), "-o", skew.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&kgtool(&["check", skew.to_str().unwrap()]));
    assert!(text.contains("note: interior-only"), "{text}");
}

#[test]
fn bratteli_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("o2.dot");
    let out = kgtool(&["bratteli", &fixture("o2.kg"), "--levels", "3", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("level 3: v:8"));
    assert!(text.contains("recursion N(l+1) = N(l) M^p: HOLDS"));
    let graph = std::fs::read_to_string(dot).unwrap();
    assert!(graph.starts_with("digraph"));
    assert!(graph.contains("\"L3_0\" [label=\"v:8\"]"));
    assert!(graph.contains("\"L2_0\" -> \"L3_0\" [label=\"2\"]"));
}

#[test]
fn rep_check_passes_on_the_flip() {
    let out = kgtool(&["rep-check", &fixture("flip.kg"), "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("pass")).count(), 5, "{text}");
}
