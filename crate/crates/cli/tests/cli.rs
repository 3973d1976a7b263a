//! End-to-end checks of the binary: schemas, formats, exit codes, and the
//! subspace JSON round trip.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn fval_rval_bounds() {
    let v = stdout_json(&run(&["fval", "50"]));
    assert_eq!(v["f"], 130);
    let v = stdout_json(&run(&["rval", "10"]));
    assert_eq!(v["r"], 6);
    let v = stdout_json(&run(&["bounds", "5", "--n", "4"]));
    assert_eq!(v["lower"], 18);
    assert_eq!(v["upper"], 20);
    // bounds without --n is a usage error
    let out = run(&["bounds", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // text format
    let out = run(&["fval", "50", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "f(50) = 130\n");
    // csv format
    let out = run(&["fval", "50", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "m,f\n50,130\n");
}

#[test]
fn capable_verdicts() {
    // extra-special p^5: not capable
    let input =
        r#"{"p":3,"n":4,"relators":[[[3,1,1]],[[4,1,1]],[[3,2,1]],[[4,2,1]],[[2,1,1],[4,3,-1]]]}"#;
    let v = stdout_json(&run(&["capable", "--input", input]));
    assert_eq!(v["capable"], false);
    assert_eq!(v["reason"], "not-closed");
    // free two-generator group: capable
    let v = stdout_json(&run(&[
        "capable",
        "--input",
        r#"{"p":3,"n":2,"relators":[]}"#,
    ]));
    assert_eq!(v["capable"], true);
    // cyclic: not capable
    let v = stdout_json(&run(&[
        "capable",
        "--input",
        r#"{"p":3,"n":1,"relators":[]}"#,
    ]));
    assert_eq!(v["capable"], false);
    assert_eq!(v["reason"], "cyclic-nontrivial");
    // p not an odd prime: schema error
    let out = run(&["capable", "--input", r#"{"p":4,"n":2,"relators":[]}"#]);
    assert_eq!(out.status.code(), Some(2));
    // malformed JSON: schema error
    let out = run(&["capable", "--input", r#"{"p":3"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closure_round_trip() {
    let input = r#"{"p":3,"n":4,"generators":[[[3,1,1]],[[4,1,1]],[[3,2,1]],[[4,2,1]],[[2,1,1],[4,3,-1]]]}"#;
    let v = stdout_json(&run(&["closure", "--input", input]));
    assert_eq!(v["closed"], false);
    assert_eq!(v["dim_x"], 5);
    assert_eq!(v["dim_closure"], 6);
    // the emitted closure re-parses to the same subspace (here: all of V(4))
    let closure_json = serde_json::to_string(&v["closure"]).unwrap();
    let v2 = stdout_json(&run(&["closure", "--input", &closure_json]));
    assert_eq!(v2["dim_x"], 6);
    assert_eq!(v2["closed"], true);
    assert_eq!(v2["closure"], v["closure"]);
}

#[test]
fn kerphi_and_classify() {
    let v = stdout_json(&run(&["kerphi", "--n", "4", "--p", "3"]));
    assert_eq!(v["dim"], 4);
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
    assert_eq!(v["basis"][0]["triple"], serde_json::json!([1, 2, 3]));

    let es = r#"{"p":3,"n":4,"generators":[[[3,1,1]],[[4,1,1]],[[3,2,1]],[[4,2,1]],[[2,1,1],[4,3,-1]]]}"#;
    let v = stdout_json(&run(&["classify-n4", "--input", es]));
    assert_eq!(v["closed"], false);
    // wrong n rejected
    let out = run(&["classify-n4", "--input", r#"{"p":3,"n":3,"generators":[]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_csv() {
    let out = run(&["table1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 49); // header + 48 rows
    assert_eq!(lines[0], "m,f,published,match");
    assert_eq!(lines[1], "3,1,1,true");
    assert_eq!(lines[48], "50,130,130,true");
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn verify_suite_and_exit_codes() {
    let out = run(&["verify", "table1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["passed"], true);
    // unknown suite: usage error
    let out = run(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown command: usage error (clap)
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["fval", "10", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["f"], 10);
    assert!(!path.with_extension("tmp").exists());
}

#[test]
fn deterministic_output_for_fixed_seed() {
    let a = run(&["verify", "span-dims", "--seed", "42", "--budget", "100000"]);
    let b = run(&["verify", "span-dims", "--seed", "42", "--budget", "100000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
