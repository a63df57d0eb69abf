use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fluxweight"));
    c.env("RUST_LOG", "error");
    c
}

fn manifest(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../manifests")
        .join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &str = r#"{
  "problem": "franke",
  "method": "nitsche",
  "k": 1,
  "M": 10,
  "dual": null,
  "studies": [
    {"name": "uni", "kind": "uniform", "levels": [2, 4],
     "assertions": [{"metric": "steps", "min": 2}]},
    {"name": "adapt", "kind": "amr", "budget": 250, "dual": {"uniform": 4},
     "assertions": [{"metric": "last:E", "relative_to": "uni", "max": 100}]}
  ]
}"#;

fn run_small(dir: &Path, extra: &[&str]) -> Output {
    let m = dir.join("small.json");
    std::fs::write(&m, SMALL).unwrap();
    bin()
        .arg("run")
        .arg(&m)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn list_problems() {
    let o = bin().arg("list-problems").output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["franke", "varcoef-peak", "lshape-singular"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{text}");
    }
}

#[test]
fn empty_manifest_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = bin()
        .arg("run")
        .arg(manifest("empty.json"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(!out.exists());
}

#[test]
fn missing_or_malformed_manifest_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bin()
        .arg("run")
        .arg(tmp.path().join("absent.json"))
        .output()
        .unwrap();
    assert!(!o.status.success());
    let bad = tmp.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"studies": [{"name": "a", "kind": "amr", "problem": "franke", "zeta": 1}]}"#,
    )
    .unwrap();
    let o = bin().arg("run").arg(&bad).output().unwrap();
    assert!(!o.status.success());
}

#[test]
fn demo_weights_prints_levels_and_writes_meshes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["demo-weights", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,elements");
    assert_eq!(lines[1], "0,32");
    assert_eq!(lines.len(), 10);
    assert!(lines[9].starts_with("boundary level"));
    for i in 0..8 {
        assert!(tmp.path().join(format!("weights_step{i:02}.txt")).exists());
    }
}

#[test]
fn run_writes_records_dumps_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_small(
        tmp.path(),
        &["--dump-mesh", "--dump-indicators", "--dump-pyramid"],
    );
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        2,
        "{text}"
    );
    let out = tmp.path().join("out");
    for f in [
        "summary.json",
        "comparison.svg",
        "uni/record.csv",
        "uni/table.csv",
        "uni/convergence.svg",
        "adapt/record.csv",
        "adapt/mesh_step00.txt",
        "adapt/indicators_step00.csv",
        "adapt/pyramid_step00.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(!out.join("adapt/table.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["records"].as_array().unwrap().len(), 2);
    let table = std::fs::read_to_string(out.join("uni/table.csv")).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "h,N,E1,rate_E1,E2,rate_E2,ratio"
    );
}

#[test]
fn failing_assertion_sets_exit_status() {
    let tmp = tempfile::tempdir().unwrap();
    let m = tmp.path().join("m.json");
    std::fs::write(
        &m,
        r#"{"studies": [{"name": "u", "kind": "uniform", "problem": "franke", "levels": [2],
            "M": 8, "dual": null, "assertions": [{"metric": "steps", "max": 0}]}]}"#,
    )
    .unwrap();
    let o = bin()
        .arg("run")
        .arg(&m)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stdout(&o).starts_with("FAIL u: steps"));
}

#[test]
fn reruns_produce_identical_records() {
    let strip = |p: PathBuf| -> Vec<String> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
            .collect()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_small(a.path(), &[]).status.success());
    assert!(run_small(b.path(), &[]).status.success());
    for study in ["uni", "adapt"] {
        let rel = format!("out/{study}/record.csv");
        assert_eq!(strip(a.path().join(&rel)), strip(b.path().join(&rel)));
    }
}
