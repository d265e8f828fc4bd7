use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinerflow"))
        .args(args)
        .env("STEINERFLOW_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_cyclic_15_writes_a_verified_flow() {
    let dir = TempDir::new().unwrap();
    let stem = dir.path().join("c15");
    let o = run(dir.path(), &["construct", "cyclic", "--v", "15", "--out", path_str(&stem)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("STS(15): 35 blocks; zero-sum flow of width "), "{}", stdout(&o));
    let design = dir.path().join("c15.design.json");
    let flow = dir.path().join("c15.flow.json");
    let o = run(dir.path(), &["verify", "--design", path_str(&design), "--flow", path_str(&flow)]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("valid STS(15); zero-sum flow; width "), "{line}");
    let width: u64 = line.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(width == 3 || width == 4);
}

#[test]
fn no_cyclic_sts9() {
    let dir = TempDir::new().unwrap();
    let o = run(dir.path(), &["construct", "cyclic", "--v", "9", "--out", path_str(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no cyclic STS(9)"), "{}", stderr(&o));
}

#[test]
fn builtin_sqs8_has_the_printed_blocks() {
    let dir = TempDir::new().unwrap();
    let stem = dir.path().join("q8");
    let o = run(dir.path(), &["construct", "sqs-builtin", "--n", "8", "--out", path_str(&stem)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("SQS(8): 14 blocks; zero-sum flow of width 3"));
}

#[test]
fn verify_fixture_tables() {
    let dir = TempDir::new().unwrap();
    let o = run(
        dir.path(),
        &[
            "verify",
            "--design",
            path_str(&fixture("sts15_family1.design.json")),
            "--flow",
            path_str(&fixture("sts15_family1.flow.json")),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid STS(15); zero-sum flow; width 3");

    let o = run(dir.path(), &["verify", "--design", path_str(&fixture("sqs10.design.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid SQS(10)");
}

#[test]
fn tampered_flow_names_points() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("sts15_family1.flow.json")).unwrap();
    let mut flow: serde_json::Value = serde_json::from_str(&text).unwrap();
    flow["values"][0] = serde_json::json!(1);
    let tampered = dir.path().join("bad.flow.json");
    std::fs::write(&tampered, flow.to_string()).unwrap();
    let o = run(
        dir.path(),
        &["verify", "--design", path_str(&fixture("sts15_family1.design.json")), "--flow", path_str(&tampered)],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not zero-sum at points"), "{}", stdout(&o));

    let o = run(
        dir.path(),
        &["verify", "--json", "--design", path_str(&fixture("sts15_family1.design.json")), "--flow", path_str(&tampered)],
    );
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["flow"]["zero_sum"], false);
    assert_eq!(report["flow"]["nonzero_points"].as_array().unwrap().len(), 3);
}

#[test]
fn flow_for_another_design_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = run(
        dir.path(),
        &[
            "verify",
            "--design",
            path_str(&fixture("sts15_family2.design.json")),
            "--flow",
            path_str(&fixture("sts15_family1.flow.json")),
        ],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_reports() {
    let dir = TempDir::new().unwrap();
    let stem = dir.path().join("c7");
    let o = run(dir.path(), &["construct", "cyclic", "--v", "7", "--out", path_str(&stem)]);
    // STS(7) has no flow, so only the design is written
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(dir.path(), &["solve", "--design", path_str(&dir.path().join("c7.design.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("infeasible for all k (nullity 0"), "{}", stdout(&o));

    let o = run(dir.path(), &["solve", "--design", path_str(&fixture("sqs10.design.json")), "--max-k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("min width 2"), "{}", stdout(&o));
}

#[test]
fn solve_budget_exhaustion_exits_3() {
    let dir = TempDir::new().unwrap();
    let stem = dir.path().join("c15");
    run(dir.path(), &["construct", "cyclic", "--v", "15", "--out", path_str(&stem)]);
    let o = run(
        dir.path(),
        &["solve", "--design", path_str(&dir.path().join("c15.design.json")), "--max-k", "3", "--budget", "5"],
    );
    assert_eq!(o.status.code(), Some(3), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn classify_census() {
    let dir = TempDir::new().unwrap();
    let o = run(dir.path(), &["classify", "--design", path_str(&fixture("sts15_family1.design.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "full: Type2×2; short: Type3");

    for (v, expect) in [("27", "Type3×"), ("13", "classification requires v ≡ 3 (mod 6)")] {
        let stem = dir.path().join(format!("c{v}"));
        run(dir.path(), &["construct", "cyclic", "--v", v, "--out", path_str(&stem)]);
        let design = dir.path().join(format!("c{v}.design.json"));
        let o = run(dir.path(), &["classify", "--design", path_str(&design)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(expect), "{}", stdout(&o));
    }

    let o = run(dir.path(), &["classify", "--design", path_str(&fixture("sqs8.design.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn double7_checks_its_hypothesis() {
    let dir = TempDir::new().unwrap();
    let inner = dir.path().join("c15");
    run(dir.path(), &["construct", "cyclic", "--v", "15", "--out", path_str(&inner)]);
    let o = run(
        dir.path(),
        &[
            "construct",
            "double7",
            "--inner",
            path_str(&dir.path().join("c15.design.json")),
            "--inner-flow",
            path_str(&dir.path().join("c15.flow.json")),
            "--out",
            path_str(&dir.path().join("d")),
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Theorem 2.6 requires v ≡ 1 (mod 4), v > 9"), "{}", stderr(&o));
}

#[test]
fn sqs_double_from_builtin() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["construct", "sqs-builtin", "--n", "8", "--out", path_str(&dir.path().join("q8"))]);
    let d = dir.path().join("q8.design.json");
    let f = dir.path().join("q8.flow.json");
    let o = run(
        dir.path(),
        &[
            "construct",
            "sqs-double",
            "--left",
            path_str(&d),
            "--left-flow",
            path_str(&f),
            "--right",
            path_str(&d),
            "--right-flow",
            path_str(&f),
            "--out",
            path_str(&dir.path().join("q16")),
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("SQS(16): 140 blocks; zero-sum flow of width 3"), "{}", stdout(&o));
}

#[test]
fn scan_small_cyclic_family() {
    let dir = TempDir::new().unwrap();
    let manifest = dir.path().join("manifest.txt");
    std::fs::write(&manifest, "cyclic:13\ncyclic:15\n").unwrap();
    let jsonl = dir.path().join("scan.jsonl");
    let o = run(dir.path(), &["scan", "--manifest", path_str(&manifest), "--jsonl", path_str(&jsonl)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(std::fs::read_to_string(&jsonl).unwrap().lines().count(), 2);
}
