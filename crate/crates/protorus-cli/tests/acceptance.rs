//! Acceptance criterion 15: CLI determinism and the exit-code contract.

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
fn criterion_15_cli_determinism_and_exit_codes() {
    // identical configs produce byte-identical reports across two runs
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg) in [
        ("invariant", "solenoid.json"),
        ("check-hom", "checkhom.json"),
    ] {
        let a = dir.path().join(format!("{cmd}-a.json"));
        let b = dir.path().join(format!("{cmd}-b.json"));
        for path in [&a, &b] {
            let out = bin()
                .args([cmd, "--config"])
                .arg(fixture(cfg))
                .arg("--out")
                .arg(path)
                .output()
                .unwrap();
            assert!(
                out.status.success(),
                "criterion 15 FAIL: {cmd} errored: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "criterion 15 FAIL: {cmd} reruns differ"
        );
    }

    // exit-code contract: 0 on definite verdicts, 2 on honest partiality,
    // 1 on hard config errors
    let ok = bin()
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
    assert_eq!(ok.status.code(), Some(0), "criterion 15 FAIL: definite verdict exit");

    let partial = bin()
        .args(["invariant", "--config"])
        .arg(fixture("undecided.json"))
        .output()
        .unwrap();
    assert_eq!(
        partial.status.code(),
        Some(2),
        "criterion 15 FAIL: partial verdict exit: {}",
        String::from_utf8_lossy(&partial.stderr)
    );
    assert!(
        String::from_utf8_lossy(&partial.stdout).contains("UnknownAtHorizon"),
        "criterion 15 FAIL: partial verdict report"
    );

    let hard = bin()
        .args(["invariant", "--config"])
        .arg(fixture("missing-file-zzz.json"))
        .output()
        .unwrap();
    assert_eq!(hard.status.code(), Some(1), "criterion 15 FAIL: hard error exit");

    println!("criterion 15 PASS: byte-identical reruns and the 0/1/2 exit-code contract");
}
