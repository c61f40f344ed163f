use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fov() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fov"));
    cmd.env_remove("FOV_CACHE");
    cmd
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_s3(dir: &Path, expected: &str) -> PathBuf {
    let path = dir.join("s3.json");
    let text = format!(
        r#"{{
  "name": "S3",
  "source": "hand-written",
  "degree": 3,
  "generators": [[1, 0, 2], [1, 2, 0]]{expected}
}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn invariants_of_s3() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_s3(dir.path(), "");
    let out = fov().arg("invariants").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "S3 6 h=3 f=3 clQ=3 irrQ=3 rational");
}

#[test]
fn table_and_fields_of_s3() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_s3(dir.path(), "");
    let out = fov().arg("table").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("order=6 exponent=6 classes=3\n"), "{text}");
    assert!(text.contains("X2: 2 | 0 | -1"), "{text}");

    let out = fov().arg("fields").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Q(G) Q"));

    let out = fov()
        .args(["--format", "machine", "table"])
        .arg(&file)
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["table"]["degrees"], serde_json::json!([1, 1, 2]));
}

#[test]
fn expected_block_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let good = r#",
  "expected": { "order": 6, "h": 3, "f": 3, "cl_Q": 3, "irr_Q": 3 }"#;
    let file = write_s3(dir.path(), good);
    assert_eq!(
        fov().arg("invariants").arg(&file).output().unwrap().status.code(),
        Some(0)
    );
    let bad = r#",
  "expected": { "order": 6, "h": 2, "f": 3, "cl_Q": 3, "irr_Q": 3 }"#;
    let file = write_s3(dir.path(), bad);
    let out = fov().arg("invariants").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("h"));
}

#[test]
fn verify_theorem_b_to_64() {
    let out = fov()
        .args(["verify", "--suite", "S-THMB", "--max-order", "64"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("S-THMB")).unwrap();
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields[2], "0", "{line}");
    assert!(text.contains("S3 6 h=3 f=3 clQ=3 irrQ=3 rational"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(
        fov()
            .args(["table", "nosuchfile"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    let out = fov()
        .args(["verify", "--suite", "S-NOPE", "--max-order", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("S-NOPE"));
    assert_eq!(
        fov()
            .args(["--jobs", "0", "verify", "--suite", "all"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fov().arg("frobnicate").output().unwrap().status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        "{\n  \"name\": \"x\",\n  \"degree\": 2,\n  \"generators\": [[0, 0]]\n}\n",
    )
    .unwrap();
    let out = fov().arg("invariants").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("verdicts.jsonl");
    let run = || {
        fov()
            .env("FOV_CACHE", &cache)
            .args([
                "--format",
                "machine",
                "verify",
                "--suite",
                "S-THMA,S-BRAUER",
                "--max-order",
                "12",
            ])
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let stored = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(stored.lines().count(), stdout(&first).lines().count());
    let second = run();
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    // served from the store, nothing appended
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), stored);
}

#[test]
fn machine_output_is_stable() {
    let run = || {
        fov()
            .args([
                "--jobs",
                "2",
                "--format",
                "machine",
                "verify",
                "--suite",
                "all",
                "--max-order",
                "16",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn conjecture_scan_reports_coverage() {
    let out = fov()
        .args(["scan-conjecture", "--max-order", "32"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("counterexamples: 0"), "{text}");
    assert!(text.contains("coverage:"), "{text}");
}
