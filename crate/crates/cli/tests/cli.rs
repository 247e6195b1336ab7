use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/models")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn corgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corgal"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("corgal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let fig1 = fixture("fig1.model");
    let t = corgal(&["check", "--model", &fig1, "--formula", "[! ~p] K c ~p"]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(stdout(&t).trim(), "true");

    let fig2 = fixture("fig2.model");
    let split = "<[{a}]> <[{b}]> (K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r))";
    let f = corgal(&["check", "--model", &fig2, "--formula", split]);
    assert_eq!(f.status.code(), Some(1));
    assert_eq!(stdout(&f).trim(), "false");
}

#[test]
fn formula_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_corgal"))
        .args(["check", "--model", &fixture("fig1.model"), "--state", "w"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"~p & ~K c p\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let fig1 = fixture("fig1.model");
    let bad = corgal(&["check", "--model", &fig1, "--formula", "[! p K a p"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: "));

    let undeclared = corgal(&["check", "--model", &fig1, "--formula", "K z p"]);
    assert_eq!(undeclared.status.code(), Some(2));

    let state = corgal(&[
        "check",
        "--model",
        &fig1,
        "--state",
        "nowhere",
        "--formula",
        "p",
    ]);
    assert_eq!(state.status.code(), Some(2));

    let missing = corgal(&["check", "--model", "/nonexistent/model", "--formula", "p"]);
    assert_eq!(missing.status.code(), Some(2));

    let unquantified = corgal(&["witness", "--model", &fig1, "--formula", "K a ~p"]);
    assert_eq!(unquantified.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let out = corgal(&[
        "check",
        "--model",
        &fixture("fig2.model"),
        "--cap",
        "1",
        "--formula",
        "<[{a,b}]> K a q",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn witness_for_joint_ability() {
    let phi = "(K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r))";
    let out = corgal(&[
        "witness",
        "--model",
        &fixture("fig2.model"),
        "--formula",
        &format!("<[{{a,b}}]> {phi}"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("true\nwitness: "), "{text}");
    assert!(text.contains("extension: {pqr, pqnr, npqr}"), "{text}");
}

#[test]
fn witness_may_be_silence() {
    let out = corgal(&[
        "witness",
        "--model",
        &fixture("fig1.model"),
        "--state",
        "w",
        "--formula",
        "<{a,b},top>(~K c ~p & ~K c p)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["choice a: {w, v}", "choice b: {w, v}", "extension: {w, v}"] {
        assert!(text.contains(line), "{text}");
    }
}

#[test]
fn true_universal_has_no_witness() {
    let out = corgal(&[
        "witness",
        "--model",
        &fixture("fig1.model"),
        "--formula",
        "[{c}, top] ~K c p",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\nwitness: none\n");
}

#[test]
fn translate_prints_epistemic_formula() {
    let out = corgal(&["translate", "--formula", "[! p] K a p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "p -> K a (p -> p)");

    let quantified = corgal(&["translate", "--formula", "[<{a}>] p"]);
    assert_eq!(quantified.status.code(), Some(2));
}

#[test]
fn contract_merges_duplicates() {
    let doc = r#"{
  "agents": ["a"],
  "atoms": ["p"],
  "states": ["s", "t", "u"],
  "valuation": {"s": ["p"], "t": ["p"], "u": []},
  "partitions": {"a": [["s", "t", "u"]]},
  "designated": "t"
}"#;
    let model = scratch("dup.model", doc);
    let out_path = model.with_extension("out");
    let out = corgal(&[
        "contract",
        "--model",
        model.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written["states"].as_array().unwrap().len(), 2);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    let target = |s: &str| {
        lines
            .iter()
            .find(|l| l.starts_with(&format!("{s} -> ")))
            .unwrap()
            .clone()
    };
    assert_eq!(target("s")[5..], target("t")[5..]);
    assert_ne!(target("s")[5..], target("u")[5..]);
}

#[test]
fn repro_suite_passes() {
    let out = corgal(&["suite", "repro"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["suite"], "repro");
    assert!(report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn suite_with_options_writes_report() {
    let out_path = scratch("report.json", "");
    let out = corgal(&[
        "suite",
        "theorems",
        "--seed",
        "7",
        "--count",
        "5",
        "--max-states",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["cases"], 5 * 6 * 20);
}

#[test]
fn unknown_suite_is_rejected() {
    assert_eq!(corgal(&["suite", "nonsense"]).status.code(), Some(2));
    let too_big = corgal(&["suite", "axioms", "--max-states", "40"]);
    assert_eq!(too_big.status.code(), Some(2));
}
