use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commclosure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn oracle_lists_closure_words() {
    let o = run(&["oracle", "(ab)*", "--max-len", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(text(&o), "_\nab\nba\n");
}

#[test]
fn decide_exit_codes() {
    assert_eq!(run(&["decide", "a*b"]).status.code(), Some(0));
    assert_eq!(run(&["decide", "(ab)*"]).status.code(), Some(2));
}

#[test]
fn syntax_error_goes_to_stderr() {
    let o = run(&["decide", "a(b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert!(o.stdout.is_empty());
}

#[test]
fn declared_alphabet_is_respected() {
    let o = run(&["build", "a*", "--alphabet", "ab", "--min"]);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o);
    assert!(out.contains("alphabet: ab"), "{out}");
    assert!(run(&["decide", "c", "--alphabet", "ab"]).status.code() == Some(1));
}

#[test]
fn json_report() {
    let o = run(&["build", "b(aa|bb)*", "--min", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text(&o)).unwrap();
    assert_eq!(v["report"]["verdict"], "REGULAR");
    assert_eq!(v["report"]["min_states"], 4);
    assert!(v["automaton"].is_object());
}

#[test]
fn dumps_and_dot() {
    let dot = std::env::temp_dir().join(format!("commclosure-cli-{}.dot", std::process::id()));
    let o = run(&[
        "build",
        "ab(ab)*|a(a|ab)*|b(b|ab)*",
        "--min",
        "--dump-semilinear",
        "--dump-resimple",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    let out = text(&o);
    assert!(out.contains("semilinear: "), "{out}");
    assert!(out.contains("good classes: "), "{out}");
    let graph = std::fs::read_to_string(&dot).unwrap();
    let _ = std::fs::remove_file(&dot);
    assert!(graph.starts_with("digraph"));
}

#[test]
fn verify_reports_pass() {
    let o = run(&["verify", "b(aa|bb)*", "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).starts_with("PASS"));
}
