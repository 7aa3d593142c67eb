use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn lashof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lashof"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_examples() {
    let out = lashof(&["eval", "Q^2 xi1", "--context", "p2-dual"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "xi2 + xi1^3\n");
    assert_eq!(stdout(&lashof(&["eval", "Q^3 1"])), "0\n");
    assert_eq!(stdout(&lashof(&["eval", "b Q^1 tau0", "--context", "p3-dual"])), "2 zeta1\n");
    assert_eq!(
        stdout(&lashof(&["eval", "b Q^1 tau0", "--context", "p3-dual", "--basis", "milnor"])),
        "xi1\n"
    );
    let json: serde_json::Value =
        serde_json::from_slice(&lashof(&["--json", "eval", "Q^2 xi1"]).stdout).unwrap();
    assert_eq!(json["value"], "xi2 + xi1^3");
}

#[test]
fn errors_point_at_the_input() {
    let out = lashof(&["eval", "Q^2 xi1 +"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at position 9"), "{err}");
    assert!(err.lines().last().unwrap().ends_with('^'));
    let out = lashof(&["eval", "Q^3 xi1", "--context", "p2-dual"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no table entry"));
}

#[test]
fn scenarios_and_exit_codes() {
    let out = lashof(&["scenario", "example-fp-p2"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("example-fp-p2 PASS"));
    assert!(!lashof(&["scenario", "no-such-scenario"]).status.success());
    let table = lashof(&["--json", "scenario", "classify-table", "--p", "2", "--n-max", "6"]);
    assert!(table.status.success());
    let reports: serde_json::Value = serde_json::from_slice(&table.stdout).unwrap();
    let row = reports[0]["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["name"] == "p = 2, n = 2: collapse")
        .unwrap();
    assert_eq!(row["actual"], "COLLAPSE");
    assert_eq!(row["label"], "reference");
    let again = lashof(&["--json", "scenario", "classify-table", "--p", "2", "--n-max", "6"]);
    assert_eq!(table.stdout, again.stdout);
    let all = lashof(&["scenario", "--parallel"]);
    assert!(all.status.success(), "{}", stdout(&all));
}

#[test]
fn classify_table() {
    let text = stdout(&lashof(&["classify", "--p", "2", "--n-max", "6"]));
    assert!(text.lines().any(|l| l.starts_with("2  2 ") && l.contains("COLLAPSE")));
    let json: serde_json::Value =
        serde_json::from_slice(&lashof(&["--json", "classify", "--p", "5", "--n-max", "2"]).stdout).unwrap();
    assert_eq!(json[2]["collapse"]["verdict"], "NO_COLLAPSE");
}

#[test]
fn enumerate_and_normalize() {
    let text = stdout(&lashof(&["--p", "3", "enumerate", "--gens", "zeta1@4,taubar1@5", "--bound", "15"]));
    assert!(text.contains("  15  b Q^3 zeta1"), "{text}");
    assert_eq!(stdout(&lashof(&["normalize", "Q^3 Q^1"])), "0\n");
    assert_eq!(stdout(&lashof(&["normalize", "Q^1 Q^3"])), "Q^1 Q^3\n");
}

fn write_config(text: &str) -> NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const QUARTIC: &str = r#"
kind = "presentation"
prime = 2
bound = 3
generators = ["xi1@1"]
relations = ["xi1^4"]
"#;

#[test]
fn presentations_from_files() {
    let twisted = write_config(&format!("{QUARTIC}q_values = [\"(Q^2, xi1) = xi1^3\"]\n"));
    let plain = write_config(&format!("{QUARTIC}q_values = [\"(Q^2, xi1) = 0\"]\n"));
    let (a, b) = (twisted.path().to_str().unwrap(), plain.path().to_str().unwrap());
    assert_eq!(stdout(&lashof(&["iso", a, b])).lines().next(), Some("0 isomorphism(s)"));
    assert_eq!(stdout(&lashof(&["iso", a, b, "--bare"])).lines().next(), Some("1 isomorphism(s)"));
    assert_eq!(stdout(&lashof(&["eval", "Q^2 xi1", "--context", a])), "xi1^3\n");

    let truncated = write_config(
        "kind = \"presentation\"\nprime = 2\nbound = 3\ngenerators = [\"xi1@1\", \"xi2@3\"]\nrelations = [\"xi2^2\", \"xi1 * xi2\"]\n",
    );
    let out = lashof(&["kill", "--context", truncated.path().to_str().unwrap(), "xi1^3 + xi2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("poincare: [1, 1, 1, 1]"));
    let out = lashof(&["kill", "--context", truncated.path().to_str().unwrap(), "xi1^2"]);
    assert!(!out.status.success());
}
