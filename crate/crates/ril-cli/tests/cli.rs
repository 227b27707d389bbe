use assert_cmd::Command;
use predicates::prelude::*;
use std::fs;
use tempfile::TempDir;

fn ril() -> Command {
    let mut cmd = Command::cargo_bin("ril").unwrap();
    cmd.env("RIL_THREADS", "2");
    cmd
}

fn write_family(dir: &TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const FAM_2_3: &str = r#"{"version":1,"maps":[
  {"kind":"unicritical","a":"1","c":"0","b":"1","d":2},
  {"kind":"unicritical","a":"1","c":"0","b":"-1","d":3}]}"#;

const FAM_X2P1: &str = r#"{"version":1,"maps":[
  {"kind":"unicritical","a":"1","c":"0","b":"1","d":2}]}"#;

const FAM_FIVE: &str = r#"{"version":1,"maps":[
  {"kind":"unicritical","a":"1","c":"0","b":"0","d":2},
  {"kind":"unicritical","a":"-1","c":"0","b":"0","d":2},
  {"kind":"unicritical","a":"1","c":"0","b":"-1","d":2},
  {"kind":"unicritical","a":"-1","c":"0","b":"1","d":2},
  {"kind":"unicritical","a":"2","c":"0","b":"-1","d":2}]}"#;

const FAM_FF: &str = r#"{"version":1,"cs":[[3,1,-1],[0,-5,1]]}"#;

#[test]
fn constants_reports_b_s() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(&dir, "f.json", FAM_2_3);
    ril()
        .args(["constants", "--family", &fam])
        .assert()
        .success()
        .stdout(predicate::str::contains("0.6931471805599453"));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(&dir, "f.json", FAM_2_3);
    let run = || {
        ril()
            .args([
                "simulate", "--family", &fam, "--point", "3", "--seed", "42", "--trials", "4",
                "--depth", "50",
            ])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
    let other = ril()
        .args([
            "simulate", "--family", &fam, "--point", "3", "--seed", "43", "--trials", "4",
            "--depth", "50",
        ])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_ne!(run(), other);
}

#[test]
fn simulate_requires_seed() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(&dir, "f.json", FAM_2_3);
    ril()
        .args(["simulate", "--family", &fam, "--point", "3"])
        .assert()
        .failure();
}

#[test]
fn unknown_family_fields_are_rejected() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(
        &dir,
        "f.json",
        r#"{"version":1,"maps":[{"kind":"unicritical","a":"1","c":"0","b":"1","d":2}],"extra":true}"#,
    );
    ril()
        .args(["constants", "--family", &fam])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("extra"));
}

#[test]
fn unsupported_schema_version_is_rejected() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(
        &dir,
        "f.json",
        r#"{"version":2,"maps":[{"kind":"unicritical","a":"1","c":"0","b":"1","d":2}]}"#,
    );
    ril()
        .args(["constants", "--family", &fam])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("version"));
}

#[test]
fn escape_cert_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(&dir, "f.json", FAM_X2P1);
    let cert = dir.path().join("cert.json");
    ril()
        .args([
            "escape-cert", "--family", &fam, "--point", "0", "--r-max", "4", "--out",
            cert.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"level\": 3"));
    ril()
        .args([
            "verify", "--cert", cert.to_str().unwrap(), "--family", &fam, "--point", "0",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains("true"));
}

#[test]
fn escape_cert_not_certified_exits_2() {
    let dir = TempDir::new().unwrap();
    // x² fixes 0, so 0 never escapes
    let fam = write_family(
        &dir,
        "f.json",
        r#"{"version":1,"maps":[{"kind":"unicritical","a":"1","c":"0","b":"0","d":2}]}"#,
    );
    ril()
        .args(["escape-cert", "--family", &fam, "--point", "0", "--r-max", "3"])
        .assert()
        .code(2)
        .stdout(predicate::str::contains("not-certified"));
}

#[test]
fn orbit_closure_finite_and_infinite() {
    let dir = TempDir::new().unwrap();
    let five = write_family(&dir, "five.json", FAM_FIVE);
    let consts = "auto,ln:2,auto,ln:2,ln:6";
    let closure = dir.path().join("closure.json");
    ril()
        .args([
            "orbit-closure", "--family", &five, "--point", "0", "--constants", consts, "--out",
            closure.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&closure).unwrap();
    assert!(text.contains("finite"));
    for p in ["[0:1]", "[1:1]", "[1:-1]"] {
        assert!(text.contains(p), "{p} missing from {text}");
    }
    ril()
        .args([
            "verify", "--cert", closure.to_str().unwrap(), "--family", &five, "--point", "0",
            "--constants", consts,
        ])
        .assert()
        .success();

    let quad = write_family(&dir, "quad.json", FAM_X2P1);
    ril()
        .args(["orbit-closure", "--family", &quad, "--point", "0"])
        .assert()
        .success()
        .stdout(predicate::str::contains("infinite-certified").and(predicate::str::contains("[5:1]")));
}

#[test]
fn monoid_count_matches_frozen_value() {
    let out = ril()
        .args(["monoid-count", "--weights", "ln:2,ln:3", "--bound", "ln:100"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["count"], 20);
    assert!(v["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn galois_tower_exit_codes_and_content() {
    let dir = TempDir::new().unwrap();
    let quad = write_family(&dir, "quad.json", FAM_X2P1);
    // depth 2 ends Undetermined → exit 2; the report is still written
    let out = ril()
        .args(["galois", "tower", "--family", &quad, "--prefix", "0,0", "--depth", "2"])
        .assert()
        .code(2)
        .get_output()
        .stdout
        .clone();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["levels"][1]["abs_disc"], "512");
    assert_eq!(v["levels"][1]["maximality"]["status"], "undetermined");

    let out = ril()
        .args([
            "galois", "tower", "--family", &quad, "--prefix", "0,0,0,0", "--depth", "4",
        ])
        .assert()
        .code(2)
        .get_output()
        .stdout
        .clone();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["levels"][2]["maximality"]["witness"]["prime"], "5");
    assert_eq!(v["levels"][3]["maximality"]["witness"]["prime"], "13");
}

#[test]
fn galois_ff_check_passes_example_family() {
    let dir = TempDir::new().unwrap();
    let ff = write_family(&dir, "ff.json", FAM_FF);
    ril()
        .args([
            "galois", "ff-check", "--family", &ff, "--depth", "4", "--seed", "1",
        ])
        .assert()
        .success();
    // c = t² fails the derivative condition
    let bad = write_family(&dir, "bad.json", r#"{"version":1,"cs":[[0,0,1]]}"#);
    ril()
        .args(["galois", "ff-check", "--family", &bad, "--depth", "0"])
        .assert()
        .code(2);
}

#[test]
fn orbit_count_reports_slope() {
    let dir = TempDir::new().unwrap();
    let fam = write_family(&dir, "f.json", FAM_2_3);
    let out = ril()
        .args([
            "orbit-count", "--family", &fam, "--point", "9", "--seed", "7", "--depth", "400",
            "--bound-ln", "100",
        ])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let count = v["count"].as_u64().unwrap() as f64;
    let expected = 100.0 / 6.0f64.sqrt().ln();
    assert!((count - expected).abs() / expected < 0.25, "count={count}");
}
