use std::process::{Command, Output};

fn ringforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_json_has_schema_one() {
    let o = ringforge(&["analyze", "F2<u,v>/(u^2, v^2, u*v)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["order"], 16);
}

#[test]
fn check_expect_sets_the_exit_status() {
    assert_eq!(ringforge(&["check", "F2[S3]", "reversible", "--expect", "false"]).status.code(), Some(0));
    assert_eq!(ringforge(&["check", "F2[S3]", "reversible", "--expect", "true"]).status.code(), Some(1));
    assert_eq!(
        ringforge(&["check", "F2[Q8]", "reversible", "--backend", "linear", "--expect", "true"]).status.code(),
        Some(0)
    );
}

#[test]
fn replay_accepts_witnesses_and_rejects_others() {
    let ring = "F2<u,v>/(u^2, v^2, u*v)";
    assert_eq!(ringforge(&["check", ring, "reversible", "--replay", "u, v"]).status.code(), Some(0));
    assert_eq!(ringforge(&["check", ring, "reversible", "--replay", "v, u"]).status.code(), Some(1));
}

#[test]
fn iso_reports_through_the_exit_status() {
    let pres = "F2<u,v>/(u^4, v^4, u^2+v^2, u^2+u*v+v*u+u*v*u)";
    let ok = ringforge(&["iso", pres, "F2[Q8]", "--images", "1 + x_i, 1 + x_j"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert_eq!(ringforge(&["iso", pres, "F2[Q8]", "--images", "0, 0"]).status.code(), Some(1));
}

#[test]
fn bad_input_exits_with_two() {
    let o = ringforge(&["analyze", "F6[C2]"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('^'), "{err}");
    assert_eq!(ringforge(&["check", "F2[C2]", "noetherian"]).status.code(), Some(2));
    assert_eq!(ringforge(&["search", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn audit_of_a_small_manifest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, r#"{"rings": [{"name": "f2q8", "expr": "F2[Q8]"}, {"name": "f2s3", "expr": "F2[S3]"}]}"#)
        .unwrap();
    let o = ringforge(&["audit", "--corpus", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
