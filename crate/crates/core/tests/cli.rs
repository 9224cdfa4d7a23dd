use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quadwalk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().expect("piped").write_all(input.as_bytes()).expect("write");
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_kreweras() {
    let o = run(&["classify", &model("kreweras.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Algebraic (Proved)"), "{}", stdout(&o));

    let o = run(&["--json", "classify", &model("kreweras.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["verdict"]["outcome"], "Algebraic");
    assert_eq!(v["group"]["orderCurve"]["finite"], 3);
    assert_eq!(v["crossChecks"]["feq"]["firstNonzero"], serde_json::Value::Null);
    assert_eq!(v["crossChecks"]["algebraicQ00"]["kind"], "AlgebraicEquation");
    assert!(v["verdict"]["evidence"]
        .as_array()
        .expect("list")
        .iter()
        .all(|e| e["citation"].as_str().is_some_and(|c| !c.is_empty())));
}

#[test]
fn json_reports_are_stable() {
    let a = run(&["--json", "classify", &model("weighted.json")]);
    let b = run(&["--json", "--seed", "99", "classify", &model("weighted.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("json");
    assert_eq!(v["input"]["steps"][0]["weight"], "2/3");
    assert_eq!(v["verdict"]["certainty"], "ConditionalOnInfiniteGroup");
}

#[test]
fn subcommands() {
    let o = run(&["group", &model("simple.json")]);
    assert!(stdout(&o).contains("group order: 4"), "{}", stdout(&o));
    let o = run(&["genus", &model("simple.json")]);
    assert!(stdout(&o).starts_with("genus One"));
    let o = run(&["--json", "basepoints", &model("simple.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v.as_array().expect("list").len(), 4);
    let o = run(&["enumerate", "--terms", "6", &model("kreweras.json")]);
    assert!(stdout(&o).contains("Q(0,0): 1, 0, 0, 2, 0, 0"), "{}", stdout(&o));
    let o = run(&["verify-feq", "--terms", "10", &model("weighted.json")]);
    assert!(stdout(&o).contains("holds mod t^10"));
    let o = run(&["decouple", "--degree", "2", &model("kreweras.json")]);
    assert!(stdout(&o).starts_with("f = -1/x"), "{}", stdout(&o));
    let o = run(&["decouple", "--mode", "laurent", "--degree", "3", &model("simple.json")]);
    assert!(stdout(&o).starts_with("no decoupling"));
    let o = run(&["guess", "--target", "q11", "--kind", "ode", "--terms", "80", &model("simple.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("theta^"), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    let o = run_stdin(&["classify", "-"], r#"{"steps":[{"dx":1,"dy":0,"weight":0.25}]}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("float"));
    let o = run_stdin(&["genus", "-"], r#"{"steps":[{"dx":1,"dy":0},{"dx":-1,"dy":0}]}"#);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify", "no/such/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_stdin(&["classify", "-"], r#"{"steps":[{"dx":1,"dy":1}],"bounds":{"decoupleDegree":40}}"#);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["enumerate", "--terms", "100000", &model("simple.json")]);
    assert_eq!(o.status.code(), Some(3));
}
