use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_protorus"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn invariant_runs_clean_on_family_fixture() {
    let out = bin()
        .args(["invariant", "--config"])
        .arg(fixture("solenoid.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"scale\": \"Unital\""), "{text}");
    assert!(text.contains("Z + Z[1/2]"));
    // valid JSON that re-parses under the same schema
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["command"], "invariant");
    assert!(doc["config"]["family"].is_object());
    assert!(doc["version"].is_string());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = bin()
            .args(["invariant", "--config"])
            .arg(fixture("solenoid.json"))
            .arg("--out")
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "identical configs must produce identical reports");
    assert!(!bytes_a.is_empty());
}

#[test]
fn undecided_fixture_exits_two() {
    let out = bin()
        .args(["invariant", "--config"])
        .arg(fixture("undecided.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("UnknownAtHorizon"), "{text}");
}

#[test]
fn hard_errors_exit_one() {
    // missing anchor value inside an object form
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"generators": {"theta": {}}, "family": {"kind": "solenoid", "theta": "theta", "N": 2}}"#,
    )
    .unwrap();
    let out = bin().args(["invariant", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generators.theta"), "{err}");
    assert!(err.contains("anchor required"), "{err}");

    // N out of range
    let cfg2 = dir.path().join("bad2.json");
    std::fs::write(
        &cfg2,
        r#"{"generators": {"theta": "0.618/1e-6"}, "family": {"kind": "solenoid", "theta": "theta", "N": 1}}"#,
    )
    .unwrap();
    let out = bin().args(["invariant", "--config"]).arg(&cfg2).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N must be >= 2"));

    // malformed JSON carries line/column diagnostics
    let cfg3 = dir.path().join("bad3.json");
    std::fs::write(&cfg3, "{\n  \"generators\": {,}\n}").unwrap();
    let out = bin().args(["invariant", "--config"]).arg(&cfg3).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn classify_pair_exit_codes() {
    let out = bin()
        .args([
            "classify",
            "--pair",
            "solenoid(theta,2)",
            "solenoid(theta,4)",
            "--theta-anchor",
            "0.618/1e-6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Isomorphic"), "{text}");
    assert!(text.contains("\"unit\": \"1\""), "{text}");
}

#[test]
fn spectrum_csv_is_sorted_and_stable() {
    let run = || {
        let out = bin()
            .args([
                "spectrum",
                "--multiplier",
                "flat-limit",
                "--N",
                "2",
                "--depth",
                "6",
                "--format",
                "csv",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    assert!(a.starts_with("label,eigenvalue\n"));
    assert_eq!(a.lines().count(), 7); // header + 6 witnesses
}

#[test]
fn check_hom_reports_congruence_and_existence() {
    let out = bin()
        .args(["check-hom", "--config"])
        .arg(fixture("checkhom.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["congruence"]["holds"], true);
    assert_eq!(doc["result"]["unital_existence"]["verdict"], "exists");
    assert_eq!(doc["result"]["k0"][1][1], "4");
}

#[test]
fn cutdown_command_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cutdown.json");
    std::fs::write(
        &cfg,
        r#"{"multiplier": {"kind": "weighted-omega", "w": "1", "lambda": "1"}, "radius": "2", "cut": 2}"#,
    )
    .unwrap();
    let out = bin().args(["cutdown", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["count"], 8);
    // omitting the cut reports the unbounded witness
    let out = bin()
        .args(["cutdown", "--no-cut", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["verdict"], "unbounded");
}

#[test]
fn refinement_budget_env_is_honored() {
    // the abstract map's trace constant 1 - theta needs two anchor halvings
    // before its sign interval separates from zero: with the default budget
    // the report is produced (honest horizon partiality, exit 2 with output),
    // while a zero budget aborts with an undecided-sign diagnostic instead
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("system.json");
    std::fs::write(
        &cfg,
        r#"{
          "generators": {"theta": "0.75/0.5"},
          "system": {
            "stages": [
              { "form": { "size": 2, "upper": [[1, 2, "2*theta/(1-theta)"]] } },
              { "form": { "size": 2, "upper": [[1, 2, "theta"]] } }
            ],
            "maps": [
              { "case": "abstract",
                "k0": [["1", "0"], ["-1", "2"]],
                "k1": [["1", "0"], ["0", "2"]],
                "t": "1 - theta" }
            ]
          }
        }"#,
    )
    .unwrap();
    let default_run = bin().args(["invariant", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(
        default_run.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&default_run.stderr)
    );
    let stdout = String::from_utf8_lossy(&default_run.stdout);
    assert!(stdout.contains("UnknownAtHorizon"), "{stdout}");

    let constrained = bin()
        .env("PROTORUS_MAX_REFINE", "0")
        .args(["invariant", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(constrained.status.code(), Some(2));
    assert!(constrained.stdout.is_empty());
    let err = String::from_utf8_lossy(&constrained.stderr);
    assert!(err.contains("undecided"), "{err}");
}
