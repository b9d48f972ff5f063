//! The command line, run in-process.

mod common;

use common::*;
use ctype_core::SparseVec;

fn s0_path() -> String {
    schedule_path("s0.toml").display().to_string()
}

#[test]
fn exit_codes() {
    let s = s0_path();
    assert_eq!(ctype(&["verify", "roundtrip", "--schedule", &s, "--max-block", "3"]).0, 0);
    let (code, out) = ctype(&["schedule", "validate", &s, "--mode", "not-ufhc", "--p", "2"]);
    assert_eq!(code, 1);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("Δ⁽ᵏ⁾ ≤ η⁽ᵏ⁺¹⁾"));
    assert_eq!(ctype(&["schedule", "validate", &s, "--mode", "structural"]).0, 0);
    assert_eq!(ctype(&["schedule", "validate", "/nonexistent.toml"]).0, 2);
    assert_eq!(ctype(&["apply", "--schedule", &s, "--vector", "{bad"]).0, 2);
    assert_eq!(ctype(&["frobnicate"]).0, 2);
    assert_eq!(ctype(&["orbit", "--schedule", &s, "--vector", "e:4", "--horizon", "8", "--epsilon", "0.3"]).0, 2);
}

#[test]
fn validation_schema() {
    let (_, out) = ctype(&["schedule", "validate", &s0_path(), "--mode", "all"]);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let conds = v["conditions"].as_array().unwrap();
    assert!(conds.len() >= 10);
    for c in conds {
        let status = c["status"].as_str().unwrap();
        assert!(
            ["pass", "fail", "finite-proxy-pass", "horizon-limited", "vacuous"].contains(&status),
            "{status}"
        );
    }
}

#[test]
fn apply_power_zero_is_canonical_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.json");
    // non-canonical mantissa 6@-1 normalizes to 3@0
    std::fs::write(&input, r#"{"entries":[{"i":7,"m":"6","e":-1},{"i":90,"m":"-1","e":2}]}"#).unwrap();
    let x = SparseVec::from_json(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let out = dir.path().join("y.json");
    let args = [
        "apply", "--schedule", &s0_path(), "--vector", input.to_str().unwrap(), "--power", "0", "-o",
        out.to_str().unwrap(),
    ];
    assert_eq!(ctype(&args).0, 0);
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, x.to_json() + "\n");
    assert_eq!(SparseVec::from_json(&written).unwrap(), x);
}

#[test]
fn apply_inverse_desk_value() {
    let (code, out) = ctype(&["apply", "--schedule", &s0_path(), "--vector", "e:21", "--power", "2", "--inverse"]);
    assert_eq!(code, 0);
    let y = SparseVec::from_json(std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(y, scaled(-1, -3, 3).add(&scaled(-2, 0, 83)));
}

#[test]
fn orbit_csv_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("a.csv");
    let csv4 = dir.path().join("b.csv");
    let run = |csv: &std::path::Path, workers: &str| {
        ctype(&[
            "orbit", "--schedule", &s0_path(), "--vector", "e:4", "--horizon", "64", "--epsilon", "1@-1",
            "--workers", workers, "--csv", csv.to_str().unwrap(), "--exact",
        ])
    };
    let (c1, r1) = run(&csv1, "1");
    let (c4, r4) = run(&csv4, "4");
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(r1, r4);
    let a = std::fs::read_to_string(&csv1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&csv4).unwrap());
    assert!(a.starts_with("j,norm,hit,exact\n"));
    assert_eq!(a.lines().count(), 66);

    let plain = dir.path().join("c.csv");
    ctype(&[
        "orbit", "--schedule", &s0_path(), "--vector", "e:4", "--horizon", "4", "--epsilon", "1", "--csv",
        plain.to_str().unwrap(),
    ]);
    assert!(std::fs::read_to_string(&plain).unwrap().starts_with("j,norm,hit\n"));
}

#[test]
fn certificate_command() {
    let args = ["certificate", "--schedule", &s0_path(), "--vector", "e:3", "--epsilon", "1@-1", "--k1", "2", "-A", "2"];
    let (code, out) = ctype(&args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["construction"]["identity"], true);
    assert_eq!(v["agreement"], true);
    let mut strict = args.to_vec();
    strict.push("--require-bounds");
    assert_eq!(ctype(&strict).0, 1);
    let wide = schedule_path("wide.toml").display().to_string();
    let (code, _) = ctype(&[
        "certificate", "--schedule", &wide, "--vector", "e:3", "--epsilon", "1@-1", "--k1", "1", "-A", "2",
        "--require-bounds",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn text_format() {
    let (code, out) = ctype(&["schedule", "validate", &s0_path(), "--mode", "structural", "--format", "text"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("  pass") && l.contains("4δ⁽ᵏ⁾ + 2η⁽ᵏ⁾ < Δ⁽ᵏ⁾")));
}
